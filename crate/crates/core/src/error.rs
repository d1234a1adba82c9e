use thiserror::Error;

use crate::system::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("rank {rank} exceeds the supported maximum of {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("label matrix is not square: row {row} has {len} entries, expected {rank}")]
    NotSquare { row: usize, len: usize, rank: usize },

    #[error("invalid Coxeter matrix: {0}")]
    Invalid(ValidationReport),

    #[error("unknown type name '{0}'")]
    UnknownType(String),

    #[error("vertex index {index} is out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("vertex index {0} is listed more than once")]
    DuplicateIndex(usize),

    #[error("subset indexes a rank-{subset} system but the system has rank {system}")]
    RankMismatch { subset: usize, system: usize },

    #[error("{op} does not support rank {rank} (limit {max})")]
    Unsupported {
        op: &'static str,
        rank: usize,
        max: usize,
    },

    #[error("diagram is not irreducible (it has {components} components)")]
    NotIrreducible { components: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no irreducible affine special subgroup of rank at least 3 exists")]
    NoAffineSubset,

    #[error("signature could not be decided at working precision")]
    Undecided,
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
