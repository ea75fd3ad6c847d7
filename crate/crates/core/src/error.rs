use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finder did not converge (max residual {residual:.3e})")]
    RootNonConvergence { residual: f64 },

    #[error("quadrature did not converge: estimated relative error {est_error:.3e} after {n_evals} evaluations")]
    QuadratureNonConvergence {
        est_error: f64,
        n_evals: usize,
        partial: crate::logc::LogComplex,
    },

    #[error("contour assembly failed: {0}")]
    Assembly(String),

    #[error("path tracing failed: {0}")]
    Tracing(String),

    #[error("bracket search failed: {0}")]
    Bracket(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
