//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown Coxeter type `{0}`")]
    UnknownType(String),
    #[error("bond pattern does not match any finite Coxeter type: {0}")]
    InfiniteGroup(String),
    #[error("generator order is not tree-compatible: {0}")]
    InvalidOrder(String),
    #[error("group order {order} exceeds enumeration budget {budget}")]
    BudgetExceeded { order: u64, budget: u64 },
    #[error("no standard k-parabolic subgroup for k = {k}; the arrangement is empty")]
    EmptyArrangement { k: usize },
    #[error("cubical incidence signs are defined only for k = 3 (got k = {0})")]
    NotCubical(usize),
    #[error("graph is not a forest")]
    NotAForest,
    #[error("vertex order is not tree-compatible with the forest")]
    NotTreeCompatible,
    #[error("set composition has a block of size {size}, limit is {max}")]
    BlockTooLarge { size: usize, max: usize },
    #[error("generator {0} is not usable here")]
    InvalidGenerator(usize),
    #[error("dimension mismatch: expected dim {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("boundary condition violated: d.d != 0 at dimension {0}")]
    BoundaryConditionViolated(usize),
    #[error("Euler characteristic alone cannot determine {unknown} unknown ranks")]
    Underdetermined { unknown: usize },
    #[error("arguments out of range: {0}")]
    OutOfRange(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
