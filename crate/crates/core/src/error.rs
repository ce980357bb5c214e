use thiserror::Error;

/// Errors raised by the geometry and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative curvature space forms are not supported (delta = {0})")]
    NegativeCurvature(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error(
        "immersion fails at parameters {params:?}: smallest metric eigenvalue {min_eigenvalue:e}"
    )]
    Immersion {
        params: Vec<f64>,
        min_eigenvalue: f64,
    },

    #[error("non-finite {quantity} at sample {index}")]
    NonFinite {
        quantity: &'static str,
        index: usize,
    },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(
        "point at line {line} is not on the sphere of curvature {delta}: |x|^2 * delta = {norm_sq}"
    )]
    Normalization { line: u64, delta: f64, norm_sq: f64 },

    #[error("points are not contained in an open hemisphere (hull distance {0:e})")]
    NotHemisphere(f64),

    #[error("hemisphere condition violated: radius {radius} >= {limit}")]
    HemisphereViolation { radius: f64, limit: f64 },

    #[error("class violation: min H_{k} = {min:e} is not positive")]
    ClassViolation { k: usize, min: f64 },

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Immersion { .. }
                | Error::NonFinite { .. }
                | Error::NoConvergence(_)
                | Error::Degenerate(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
