//! Crate-wide error type.

use thiserror::Error;

use crate::states::HorodeckiFamily;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: max |A - A†| entry = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("parameter out of domain: {0}")]
    Parameter(String),

    #[error("invalid subsystem shape: {0}")]
    Shape(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("closed-form entries undefined at c0 = {c0}: {entries}")]
    SingularEntry { c0: f64, entries: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },

    #[error("evaluation failed at (family={family}, alpha={alpha}, c0={c0}, dt={dt}): {source}")]
    SweepPoint {
        family: HorodeckiFamily,
        alpha: f64,
        c0: f64,
        dt: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_)
            | Error::Shape(_)
            | Error::Config(_)
            | Error::CsvParse { .. }
            | Error::Io(_) => 1,
            Error::SweepPoint { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
