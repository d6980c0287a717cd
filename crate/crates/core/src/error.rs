use thiserror::Error;

use crate::graph::ObjectKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph")]
    EmptyGraph,

    #[error("{kind:?} index {index} out of range (count {count})")]
    IndexOutOfRange { kind: ObjectKind, index: u32, count: u32 },

    #[error("object {0} is not in the remaining set")]
    NotInSubset(u32),

    #[error("no edges to peel")]
    NoEdgesToPeel,

    #[error("no alive edges to cut")]
    NoEdgesToCut,

    #[error("relative cost is undefined for empty graph")]
    UndefinedForEmptyGraph,

    #[error("subset has zero potential edges")]
    ZeroPotential,

    #[error("decode error in {record}: {message}")]
    Decode { record: String, message: String },

    #[error("universe has {actual} objects, oracle limit is {limit}")]
    TooManyObjects { actual: usize, limit: usize },

    #[error("insufficient universe: {0}")]
    InsufficientUniverse(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
