use thiserror::Error;

/// Errors raised anywhere in the simulator.
///
/// The variants fall into two families that the command line maps onto
/// distinct exit codes: configuration/input problems and numerical aborts
/// (positivity loss, truncation overflow).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not anti-Hermitian (max |A + A^dag| = {deviation:.3e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error(
        "truncation overflow: population beyond the Fock cutoff is {tail:.3e} at N = {fock_dim}; \
         need N >= {required}"
    )]
    Truncation {
        fock_dim: usize,
        tail: f64,
        required: usize,
    },

    #[error("positivity lost at t = {time:.6}: minimum eigenvalue {min_eigenvalue:.3e}")]
    Positivity { time: f64, min_eigenvalue: f64 },

    #[error(
        "piston channel is not completely positive: kappa_down = gamma + D = {kappa_down:.3e} < 0"
    )]
    NotCompletelyPositive { kappa_down: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("scenario '{label}': {source}")]
    Scenario { label: String, source: Box<Error> },
}

impl Error {
    /// Short category used in machine-parsable `ERR:<category>:` lines.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Truncation { .. } => "truncation",
            Error::Positivity { .. } => "positivity",
            Error::NotCompletelyPositive { .. } => "channel",
            Error::Scenario { source, .. } => source.category(),
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotHermitian { .. }
            | Error::NotAntiHermitian { .. }
            | Error::InvalidState(_) => "input",
        }
    }

    /// True for aborts caused by the numerics rather than by the request.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Truncation { .. } | Error::Positivity { .. } => true,
            Error::Scenario { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Attach a scenario label.
    pub fn in_scenario(self, label: &str) -> Self {
        match self {
            Error::Scenario { .. } => self,
            other => Error::Scenario {
                label: label.to_string(),
                source: Box::new(other),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
