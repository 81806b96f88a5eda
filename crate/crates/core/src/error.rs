use thiserror::Error;

/// Errors raised by the model, the summarizers and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The summary has zero probability under the report distribution.
    #[error("interpretation undefined: summary {0} has zero probability")]
    UndefinedInterpretation(String),

    /// The factorial-ratio series only converges for `c >= b + 2`.
    #[error("series diverges for b = {b}, c = {c} (requires c >= b + 2)")]
    Divergent { b: i64, c: i64 },

    /// Term-by-term summation hit its budget before the tail certificate met `tol`.
    #[error("series did not reach tolerance {tol:e} within {terms} terms")]
    SeriesBudget { tol: f64, terms: u64 },

    /// Exhaustive enumeration would exceed the configured cap.
    #[error("enumerating {needed} sequences exceeds the cap of {cap}; use the Monte Carlo estimator instead")]
    ResourceCap { needed: u128, cap: u128 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// The reader of the output went away.
    #[error("broken pipe")]
    BrokenPipe,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 1 verification failure, 2 bad input, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::ResourceCap { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        match err.kind() {
            std::io::ErrorKind::BrokenPipe => Error::BrokenPipe,
            _ => Error::Io(err.to_string()),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        match err.io_error_kind() {
            Some(std::io::ErrorKind::BrokenPipe) => Error::BrokenPipe,
            Some(_) => Error::Io(err.to_string()),
            None => Error::Config(err.to_string()),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        match err.kind() {
            csv::ErrorKind::Io(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Error::BrokenPipe,
            _ => Error::Io(err.to_string()),
        }
    }
}
