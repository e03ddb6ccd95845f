use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("normal matrix is not positive definite (lambda1 = {lambda1}, rho = {rho})")]
    Singular { lambda1: f64, rho: f64 },

    #[error("ADMM produced non-finite values at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("patch at origin ({row}, {col}): {source}")]
    Patch {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical core rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Singular { .. } | Error::Divergence { .. } => true,
            Error::Patch { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
