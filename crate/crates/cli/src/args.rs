use std::fmt::Display;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use infeld_core::numerics::Grid;
use infeld_core::Complex64;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer};
use serde_json::value::RawValue;

use crate::commands::{
    coherent::CoherentArgs, ising::IsingArgs, selfsim::SelfsimArgs, soliton::SolitonArgs,
    spectrum::SpectrumArgs, toda::TodaArgs,
};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "infeld", version, about = "Batch runs of the infeld-core numerical pipelines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON parameter file; flags given on the command line take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory receiving report.json and every CSV table
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// What goes to stdout: the primary CSV table or the JSON report
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// n-soliton potential, its spectrum, KdV residual and tau-form cross-check
    Soliton(SolitonArgs),
    /// Ising mapping and brute-force vs thermodynamic magnetization sweep
    Ising(IsingArgs),
    /// Coherent-state profile, norm and defining-equation residual
    Coherent(CoherentArgs),
    /// Self-similar potential, its spectrum and geometric-ratio report
    Selfsim(SelfsimArgs),
    /// Christoffel steps on a measure's recurrence and discrete Toda residuals
    Toda(TodaArgs),
    /// Bound states of a sampled potential read from CSV
    Spectrum(SpectrumArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Soliton(_) => "soliton",
            Command::Ising(_) => "ising",
            Command::Coherent(_) => "coherent",
            Command::Selfsim(_) => "selfsim",
            Command::Toda(_) => "toda",
            Command::Spectrum(_) => "spectrum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub params: Option<Box<RawValue>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::bad_input(format!("reading config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::bad_input(format!("config {}: {e}", path.display())))
    }

    /// The `params` object parsed as the subcommand's parameter set.
    pub fn params<T: DeserializeOwned + Default>(&self) -> Result<T, CliError> {
        match &self.params {
            None => Ok(T::default()),
            Some(raw) => serde_json::from_str(raw.get())
                .map_err(|e| CliError::bad_input(format!("config params: {e}"))),
        }
    }
}

/// A value given as text on the command line and as a string in the config file.
#[derive(Debug, Clone)]
pub struct Parsed<T>(pub T);

impl<T: FromStr> FromStr for Parsed<T>
where
    T::Err: Display,
{
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(Parsed).map_err(|e: T::Err| e.to_string())
    }
}

impl<'de, T: FromStr> Deserialize<'de> for Parsed<T>
where
    T::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(Parsed).map_err(|e: T::Err| D::Error::custom(e))
    }
}

/// `min:max:nodes`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub nodes: usize,
}

impl GridSpec {
    pub const fn new(min: f64, max: f64, nodes: usize) -> Self {
        Self { min, max, nodes }
    }

    pub fn build(self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.min, self.max, self.nodes)?)
    }
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("grid must look like min:max:nodes, got {s:?}");
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            min: parts[0].trim().parse().map_err(|_| bad())?,
            max: parts[1].trim().parse().map_err(|_| bad())?,
            nodes: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Complex number written as `a+bi`, `a-bi`, `a` or `bi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexNum(pub Complex64);

impl FromStr for ComplexNum {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("cannot parse complex number {s:?}");
        let Some(body) = t.strip_suffix(['i', 'j']) else {
            return t.parse().map(|re| ComplexNum(Complex64::new(re, 0.0))).map_err(|_| bad());
        };
        // split at the last sign that is neither leading nor an exponent sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let imag = |v: &str| -> Result<f64, String> {
            match v {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                v => v.parse().map_err(|_| bad()),
            }
        };
        let (re, im) = match split {
            Some(i) => (body[..i].parse().map_err(|_| bad())?, imag(&body[i..])?),
            None => (0.0, imag(body)?),
        };
        Ok(ComplexNum(Complex64::new(re, im)))
    }
}

/// Half-open site range `start:end`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRange(pub Range<usize>);

impl FromStr for SiteRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("site range must look like start:end, got {s:?}");
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        Ok(SiteRange(a.trim().parse().map_err(|_| bad())?..b.trim().parse().map_err(|_| bad())?))
    }
}
