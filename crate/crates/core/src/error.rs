use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh resolution {0}: need at least one subdivision per side")]
    InvalidResolution(usize),

    #[error("point lies outside element {element}")]
    PointOutsideElement { element: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is singular at pivot stage {stage}")]
    SingularMatrix { stage: usize },

    #[error("linear solve failed at time step {step}: {source}")]
    TimeStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("active-set iteration did not converge in {iterations} iterations (last update {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("non-finite values encountered in iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("time grid mismatch: expected {expected} nodes, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("convergence rate needs positive errors, got {0:e}")]
    NonPositiveError(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::TimeStep {
            step,
            source: Box::new(self),
        }
    }
}
