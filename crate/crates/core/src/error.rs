use thiserror::Error;

/// Errors raised by the algebraic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("carrier is not finite or too large to enumerate: {0}")]
    NotEnumerable(String),

    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),

    #[error("invalid monoid table: {0}")]
    InvalidMonoid(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("map does not preserve joins; witness family {witness:?}")]
    NotResiduated { witness: Vec<usize> },

    #[error("maps do not form an adjoint pair at ({x}, {y})")]
    NotAdjoint { x: usize, y: usize },

    #[error("not a closure operator: {0}")]
    NotClosure(String),

    #[error("subset is not closed under meets; witness {witness:?}")]
    NotMeetClosed { witness: Vec<usize> },

    #[error("kernel has no embedding of its columns into its rows: {0}")]
    NoEmbedding(String),

    #[error("index set out of range: {0}")]
    OutOfRange(String),

    #[error("projection is not surjective; no lift exists: {0}")]
    NoLift(String),

    #[error("invalid fuzzy partition: {0}")]
    InvalidPartition(String),

    #[error("operation needs a translation group (wrap mode)")]
    NeedsGroup,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
