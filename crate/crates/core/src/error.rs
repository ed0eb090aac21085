use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch between {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {shape:?}")]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },

    #[error("{op}: input is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { op: &'static str, asymmetry: f64 },

    #[error("matrix is numerically rank deficient at pivot {pivot}")]
    RankDeficient { pivot: usize },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("matrix is not positive semi-definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown preset `{0}` (expected E1..E18)")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
