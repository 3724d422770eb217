use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A vector or matrix has the wrong length or shape.
    #[error("shape mismatch: expected {expected}, got {actual} ({what})")]
    Shape {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The operation is not defined for the given input.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two channels from different families were compared.
    #[error("cannot compare channels of different families ({0} vs {1})")]
    UnsupportedComparison(&'static str, &'static str),

    /// A code could not be constructed with the requested parameters.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A configuration or artifact file is missing or malformed.
    #[error("configuration error: {0}")]
    Config(String),

    /// A threshold search was given a bracket that does not straddle the target.
    #[error(
        "target BER {target:e} not bracketed: BER({lo}) = {ber_lo:e}, BER({hi}) = {ber_hi:e}"
    )]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        ber_lo: f64,
        ber_hi: f64,
    },

    /// A text artifact could not be parsed.
    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(what: &'static str, expected: usize, actual: usize) -> Self {
        Error::Shape {
            what,
            expected,
            actual,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Bracket { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
