use thiserror::Error;

use crate::window::HilbertTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("differentials do not compose to zero ({context})")]
    CompositionNonzero { context: String },

    #[error("map is not compatible with the chosen cycles/boundaries ({context})")]
    NotChainCompatible { context: String },

    #[error("matrix entry ({row}, {col}) is not homogeneous: {reason}")]
    NonHomogeneous { row: usize, col: usize, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("localization did not stabilize within shift bound {bound} at degree {degree}")]
    StabilizationFailure { bound: u32, degree: String },

    #[error("grade undefined: IM = M")]
    GradeUndefined,

    #[error("limit system `{what}` did not stabilize by stage {s_max}")]
    UnstabilizedLimit {
        what: String,
        s_max: usize,
        partial: Box<HilbertTable>,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
