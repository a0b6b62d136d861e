use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("polynomial {0:?} is reducible mod {1}")]
    Reducible(Vec<u32>, u32),
    #[error("ring has {0} elements, above the configured cap")]
    SizeCap(u64),
    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Usage(String),
    #[error("unknown ring key {0:?}")]
    UnknownRing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("Teichmüller iteration did not stabilize")]
    NonConvergence,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("determinant is not 1")]
    DeterminantNotOne,
    #[error("no unit pivot in column {0}")]
    NoUnitPivot(usize),
    #[error("budget exceeded: {needed} > {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("closure exceeded cap of {0} elements")]
    ClosureCap(usize),
    #[error("module error: {0}")]
    Module(String),
    #[error("subgroup of order {order} is not p-saturated in a group of order {group_order}")]
    NotSaturated { order: u64, group_order: u64 },
    #[error("1-cochain is not a cocycle (defect at element {element}, generator {generator})")]
    CocycleInconsistent { element: usize, generator: usize },
    #[error("no solution where one must exist: {0}")]
    Unsolvable(String),
    #[error("lift problem target is not square-zero")]
    NotSquareZero,
    #[error("section reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("kernel defect space of dimension {0} is not one of 0, S, M0")]
    UnexpectedDefect(usize),
    #[error("cache format error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
