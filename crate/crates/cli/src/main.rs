mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, ConfigFile, Format};
use error::CliError;
use report::write_artifacts;

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::bad_input(e.to_string().trim_end())),
    };
    let file = match &cli.config {
        Some(path) => Some(ConfigFile::load(path)?),
        None => None,
    };
    if let Some(name) = file.as_ref().and_then(|f| f.command.as_deref()) {
        if name != cli.command.name() {
            return Err(CliError::bad_input(format!(
                "config is for command {name:?}, not {:?}",
                cli.command.name()
            )));
        }
    }
    let file = file.unwrap_or(ConfigFile { command: None, format: None, out: None, params: None });

    let outcome = match cli.command {
        Command::Soliton(a) => commands::soliton::run(a, file.params()?)?,
        Command::Ising(a) => commands::ising::run(a, file.params()?)?,
        Command::Coherent(a) => commands::coherent::run(a, file.params()?)?,
        Command::Selfsim(a) => commands::selfsim::run(a, file.params()?)?,
        Command::Toda(a) => commands::toda::run(a, file.params()?)?,
        Command::Spectrum(a) => commands::spectrum::run(a, file.params()?)?,
    };

    if let Some(dir) = cli.out.or(file.out) {
        write_artifacts(&dir, &outcome)?;
    }
    let stdout = std::io::stdout();
    match cli.format.or(file.format).unwrap_or(Format::Csv) {
        Format::Csv => outcome.tables[outcome.primary].write_csv(stdout.lock())?,
        Format::Json => stdout
            .lock()
            .write_all(outcome.report.to_json()?.as_bytes())
            .map_err(|e| CliError::numeric(format!("writing stdout: {e}")))?,
    }

    let failed = outcome.report.failures();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::tolerance(failed))
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.emit();
            e.exit_code()
        }
    }
}
