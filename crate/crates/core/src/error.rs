use thiserror::Error;

/// Everything that can go wrong while building groups, elements or operators,
/// or while running a check.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("group not abelian")]
    NotAbelian,
    #[error("group is abelian")]
    Abelian,
    #[error("no cyclic-product structure recorded for this group")]
    NoAbelianStructure,
    #[error("element not supported on the subgroup (coefficient at {0})")]
    SupportViolation(String),
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("zero vector")]
    ZeroVector,
    #[error("dimension {dim} exceeds limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
