use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("generator matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("generator matrix column {column} is all zero")]
    ZeroColumn { column: usize },

    #[error("generator polynomial is zero")]
    ZeroPolynomial,

    #[error("generator polynomial of degree {degree} does not divide x^{n} + 1")]
    NotCyclicDivisor { n: usize, degree: usize },

    #[error("code is not cyclic: no generator polynomial attached")]
    NotCyclic,

    #[error("dimension {dim} exceeds limit {max_dim}: enumeration would visit 2^{dim} words")]
    DimensionTooLarge { dim: usize, max_dim: usize },

    #[error("no weight distribution for [{n},{k}]: both k and n-k exceed limit {max_dim}")]
    NoWeightDistribution { n: usize, k: usize, max_dim: usize },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("corrector is not appropriate at h_in = {h_in:.9}: requires h_in >= {h_in_req:.9}")]
    NotAppropriate { h_in: f64, h_in_req: f64 },

    #[error("no usable corrector at h_in = {target:.9}; frontier minimum is {min_req:.9}")]
    NoUsableCorrector { target: f64, min_req: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotAppropriate { .. }
            | Error::NoUsableCorrector { .. }
            | Error::DimensionTooLarge { .. }
            | Error::NoWeightDistribution { .. }
            | Error::NotCyclic
            | Error::Empty(_) => 1,
            Error::OutOfRange(_) | Error::LengthMismatch { .. } => 2,
            _ => 3,
        }
    }
}
