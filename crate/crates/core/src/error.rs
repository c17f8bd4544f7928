use thiserror::Error;

/// Failures raised by the depth engines and their linear-algebra primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DepthError {
    #[error("matrix is not symmetric (max |a_ij - a_ji| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generators span dimension {rank}, expected {expected}; data not in general position")]
    RankDeficient { rank: usize, expected: usize },

    #[error("point lies inside the unit ball (norm {norm})")]
    InsideBall { norm: f64 },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("computation exceeded its deadline")]
    DeadlineExceeded,
}

impl DepthError {
    /// True for failures caused by the numerical content of the inputs
    /// (non-PD scatter, degenerate geometry) rather than by their shape.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            DepthError::NotSymmetric { .. }
                | DepthError::NotPositiveDefinite { .. }
                | DepthError::RankDeficient { .. }
                | DepthError::InsideBall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, DepthError>;
