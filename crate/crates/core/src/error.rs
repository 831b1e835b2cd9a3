use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid potential: field `{field}`: {reason}")]
    InvalidPotential { field: String, reason: String },

    #[error("invalid interval length {0}: must be positive and finite")]
    InvalidLength(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("potential of type `{0}` is not piecewise constant")]
    NotPiecewiseConstant(&'static str),

    #[error("inverse iteration for eigenvalue {index} did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("sign count certified only {found} eigenvalue(s) below ceiling {ceiling:e}")]
    TooFewEigenvalues { found: usize, ceiling: f64 },

    #[error("oracle bracket failure: {0}")]
    Bracket(String),

    #[error("Prüfer integration step underflow at energy {0:e}")]
    StepUnderflow(f64),

    #[error("ground-state sample {index} is not positive ({value:e})")]
    NonPositiveSample { index: usize, value: f64 },

    #[error("parallel runtime: {0}")]
    Runtime(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPotential { .. }
                | Error::InvalidLength(_)
                | Error::InvalidGrid(_)
                | Error::InvalidArgument(_)
                | Error::NotPiecewiseConstant(_)
                | Error::Json(_)
                | Error::Csv(_)
                | Error::Io(_)
        )
    }
}

pub(crate) fn check_length(length: f64) -> Result<()> {
    if length.is_finite() && length > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLength(length))
    }
}
