use thiserror::Error;

/// Errors raised by the distance-geometry toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("eigensolver did not converge for a matrix of order {order} after {sweeps} sweeps")]
    NoConvergence { order: usize, sweeps: usize },

    /// The scalar-product matrix has a negative eigenvalue beyond tolerance,
    /// so the dissimilarities are not squared Euclidean distances.
    #[error("not a squared Euclidean distance: scalar products have eigenvalue {eigenvalue:e} (tolerance {tolerance:e})")]
    NotEuclidean { eigenvalue: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid group labels: {0}")]
    InvalidLabels(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid transform specification at `{token}`: {reason}")]
    TransformSpec { token: String, reason: String },

    /// The derivative of a non-rectifiable transformation diverges at zero.
    #[error("{what} diverges at D = 0 (transformation is not rectifiable)")]
    Divergent { what: &'static str },

    #[error("curvature is undefined for non-rectifiable transformation `{0}`")]
    NotRectifiable(String),

    #[error("angle undefined: transformed side length is zero")]
    UndefinedAngle,

    #[error("singular covariance: deficient directions {directions:?}")]
    SingularCovariance { directions: Vec<Vec<f64>> },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical pipeline as opposed to bad input or IO.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NotEuclidean { .. } | Error::Internal(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
