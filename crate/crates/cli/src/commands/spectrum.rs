use std::path::PathBuf;

use clap::Args;
use infeld_core::numerics::{fd_eigen, Grid, GridFunction};
use serde::Deserialize;

use super::{pick, positive, require};
use crate::error::CliError;
use crate::report::{Cell, Measurement, Outcome, Param, Report, Table};

#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    /// CSV with a header and columns x,value on a uniform grid
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Number of bound states [default: 5]
    #[arg(long)]
    pub count: Option<usize>,
    /// Largest edge-to-peak ratio accepted for an eigenfunction [default: 1e-8]
    #[arg(long)]
    pub tol_decay: Option<f64>,
}

fn read_samples(path: &PathBuf) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let bad = |m: String| CliError::bad_input(format!("{}: {m}", path.display()));
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| bad(e.to_string()))?;
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("row {}: expected two numeric columns", line + 1)))
        };
        xs.push(field(0)?);
        vs.push(field(1)?);
    }
    Ok((xs, vs))
}

pub fn run(a: SpectrumArgs, c: SpectrumArgs) -> Result<Outcome, CliError> {
    let input = require(a.input, c.input, "input")?;
    let count = pick(a.count, c.count, 5);
    let tol_decay = positive("tol_decay", pick(a.tol_decay, c.tol_decay, 1e-8))?;
    let (xs, vs) = read_samples(&input)?;
    let grid = Grid::from_samples(&xs)?;
    let u = GridFunction::from_real(grid, vs)?;
    let pairs = fd_eigen(&u, count)?;

    let mut report = Report::new("spectrum");
    report.param("input", Param::Text(input.display().to_string()));
    report.param("count", Param::Int(count));
    let mut table = Table::new("spectrum", &["index", "value", "boundary_ratio"]);
    for (k, e) in pairs.iter().enumerate() {
        report.push(Measurement::info(format!("eigenvalue[{k}]"), e.value, "fd_eigen"));
        report.push(Measurement::bound(format!("boundary_ratio[{k}]"), e.boundary_ratio, tol_decay, "fd_eigen"));
        table.row(vec![Cell::Int(k), Cell::Num(e.value), Cell::Num(e.boundary_ratio)]);
    }
    Ok(Outcome { report, tables: vec![table], primary: 0 })
}
