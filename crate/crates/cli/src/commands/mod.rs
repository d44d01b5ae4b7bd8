pub mod coherent;
pub mod ising;
pub mod selfsim;
pub mod soliton;
pub mod spectrum;
pub mod toda;

use crate::error::CliError;

/// Command-line value, else config value, else `default`.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

pub fn require<T>(flag: Option<T>, config: Option<T>, what: &str) -> Result<T, CliError> {
    flag.or(config).ok_or_else(|| CliError::bad_input(format!("missing required parameter {what}")))
}

pub fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::bad_input(format!("{name} must be a positive finite number, got {v}")))
    }
}
