use thiserror::Error;

/// Errors raised by state construction, measures and the roof optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("expected {expected} amplitudes, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("state vector is zero")]
    ZeroVector,
    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("matrix is not Hermitian (max deviation {0})")]
    NotHermitian(f64),
    #[error("density matrix trace {0} is not 1")]
    BadTrace(f64),
    #[error("eigenvalue {0} is below the PSD clamp window")]
    NotPositive(f64),
    #[error("subsystem selection must be a nonempty proper subset of {{1,2,3}}")]
    BadSubsystems,
    #[error("party index must be 1, 2 or 3, got {0}")]
    BadParty(usize),
    #[error("expected a square d x d system, got {0} x {1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("ensemble size {members} cannot realize a state of rank {rank} (allowed {rank}..={max})")]
    EnsembleSize { members: usize, rank: usize, max: usize },
    #[error("operation requires local dimension {expected}, got {actual}")]
    WrongDimension { expected: usize, actual: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("refusing to emit a non-finite number in {0}")]
    NonFinite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
