use std::process::ExitCode;

use infeld_core::Error;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    BadInput,
    Tolerance,
    Numeric,
}

impl Kind {
    fn code(self) -> u8 {
        match self {
            Kind::BadInput => 2,
            Kind::Tolerance => 3,
            Kind::Numeric => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Kind::BadInput => "bad_input",
            Kind::Tolerance => "tolerance",
            Kind::Numeric => "numeric",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
    pub failed: Vec<String>,
}

#[derive(Serialize)]
struct Record<'a> {
    error: &'static str,
    code: u8,
    message: &'a str,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    failed: &'a [String],
}

impl CliError {
    pub fn bad_input(message: impl Into<String>) -> Self {
        Self { kind: Kind::BadInput, message: message.into(), failed: Vec::new() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self { kind: Kind::Numeric, message: message.into(), failed: Vec::new() }
    }

    pub fn tolerance(failed: Vec<String>) -> Self {
        Self {
            kind: Kind::Tolerance,
            message: format!("{} metric(s) above tolerance: {}", failed.len(), failed.join(", ")),
            failed,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.kind.code())
    }

    /// One JSON line on stderr.
    pub fn emit(&self) {
        let record = Record {
            error: self.kind.label(),
            code: self.kind.code(),
            message: &self.message,
            failed: &self.failed,
        };
        let line = serde_json::to_string(&record)
            .unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.kind.label()));
        eprintln!("{line}");
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::InvalidArgument(_)
            | Error::GridMismatch(_)
            | Error::DegenerateSeeds
            | Error::Singular { .. }
            | Error::ZeroPivot { .. }
            | Error::DecayViolation { .. }
            | Error::Truncation { .. } => Kind::BadInput,
            Error::Residual { .. } => Kind::Tolerance,
            Error::BlowUp { .. } | Error::Quadrature { .. } | Error::Numeric(_) => Kind::Numeric,
        };
        Self { kind, message: e.to_string(), failed: Vec::new() }
    }
}
