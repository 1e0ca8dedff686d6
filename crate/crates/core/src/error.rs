use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {0} is not a perfect square")]
    DimensionNotSquare(usize),

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is singular (pivot {pivot:.3e})")]
    Singular { pivot: f64 },

    #[error("matrix is ill-conditioned (condition estimate {estimate:.3e} exceeds {limit:.3e})")]
    IllConditioned { estimate: f64, limit: f64 },

    #[error(
        "padding target ({target_p}, {target_q}) is smaller than current sign counts ({p}, {q})"
    )]
    TargetTooSmall {
        target_p: usize,
        target_q: usize,
        p: usize,
        q: usize,
    },

    #[error("sign pattern does not match metric: {0}")]
    SignPatternMismatch(String),

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Singular { .. }
                | Error::IllConditioned { .. }
                | Error::NumericalBreakdown(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
