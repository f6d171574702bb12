use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what} did not converge")]
    NoConvergence { what: &'static str },

    #[error("root of {what} is not bracketed")]
    NotBracketed { what: &'static str },

    #[error("numerical integration failed: {0}")]
    Integration(String),

    #[error("{0} is not supported")]
    Unsupported(&'static str),

    #[error("no minimizer reached the point (best residual {best_residual:e})")]
    NotReached { best_residual: f64 },

    #[error("point {0:?} lies outside the numerically representable range")]
    OutOfRange([f64; 4]),
}

pub type Result<T> = std::result::Result<T, Error>;
