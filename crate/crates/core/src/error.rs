use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("entry storage holds {got} values, expected {expected}")]
    StorageLength { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{op}: incompatible shapes {lhs:?} and {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("scale must be finite and non-negative, got {0}")]
    InvalidScale(f64),
    #[error("matrix is not positive semi-definite (trace {trace})")]
    NotPositiveSemidefinite { trace: f64 },
    #[error("matrix is rank deficient: singular value ratio {ratio:e}")]
    Singular { ratio: f64 },
    #[error("singular value decomposition did not produce singular vectors")]
    SvdFailed,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid config: `{key}` {reason}")]
    Config { key: String, reason: String },
    #[error("phase 1 needs at least one node (U = 0 is the baseline path)")]
    NoNodes,
    #[error("phase 2 capacity is zero, the UE is unreachable")]
    UnreachableUe,
    #[error("trial {trial}: rank-deficient phase 2 channel after {attempts} draws")]
    Degenerate { trial: u64, attempts: u32 },
    #[error("unknown sweep axis `{0}` (expected R, U, d_bs_ue or p_node)")]
    UnknownAxis(String),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
