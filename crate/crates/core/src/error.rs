use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("zero state: every polynomial coefficient vanishes")]
    ZeroState,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge: last estimates {previous} and {last}")]
    NotConverged { previous: f64, last: f64 },

    #[error("undefined triangle: overlap |<psi_{0}|psi_{1}>| vanishes")]
    UndefinedTriangle(usize, usize),

    #[error("coincident stars {0} and {1}")]
    CoincidentStars(usize, usize),

    #[error("polynomial root finding did not converge")]
    RootFinding,

    #[error("not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("iteration cap exceeded after {0} evaluations")]
    IterationCap(usize),

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::RootFinding
                | Error::IterationCap(_)
                | Error::LinearProgram(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
