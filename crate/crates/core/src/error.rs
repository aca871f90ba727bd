use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum NavError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("landmark coincides with the observer")]
    SingularObservation,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("belief collapsed: total weight is zero")]
    DegenerateBelief,
    #[error("cell ({0}, {1}) is outside the grid")]
    OutOfBounds(i64, i64),
    #[error("no path to goal")]
    NoPath,
    #[error("potential field descent stuck in a local minimum at ({x:.3}, {y:.3})")]
    LocalMinimum { x: f64, y: f64 },
    #[error("singular path geometry: 1 - kappa*e = {0:e}")]
    SingularGeometry(f64),
    #[error("unknown demo `{0}`")]
    UnknownDemo(String),
    #[error("nothing to plot")]
    EmptyTrace,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl NavError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        NavError::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, NavError>;
