use thiserror::Error;

use crate::sft::EdgeId;

/// Errors raised by the shift, weight, groupoid and trace layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("adjacency matrix is reducible (graph is not strongly connected)")]
    ReducibleMatrix,

    #[error("adjacency matrix is zero")]
    ZeroMatrix,

    #[error("edge word is not a closed path: {0}")]
    NotAClosedPath(String),

    #[error("edge word is not a path: {0}")]
    NotAPath(String),

    #[error("edge {0:?} does not belong to the shift")]
    UnknownEdge(EdgeId),

    #[error("point does not belong to this shift: {0}")]
    MismatchedShift(String),

    #[error("bracket undefined: coordinate 0 differs ({0:?} vs {1:?})")]
    BracketUndefined(EdgeId, EdgeId),

    #[error("P and Q overlap")]
    OverlappingOrbitSets,

    #[error("point is not in the stable class of P")]
    NotInStableClass,

    #[error("point is not in the unstable class of Q")]
    NotInUnstableClass,

    #[error("periodic point excluded: weights are defined on X^s(P) minus P")]
    PeriodicPointExcluded,

    #[error("point lies outside the support of the basic set")]
    OutsideSupport,

    #[error("invalid basic set: {0}")]
    InvalidBasicSet(String),

    #[error("function has empty support")]
    EmptySupport,

    #[error("localization must be diagonal with nonnegative real values")]
    NonDiagonalLocalization,

    #[error("t must be positive, got {0}")]
    NonPositiveT(f64),

    #[error("s must be positive, got {0}")]
    NonPositiveS(f64),

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),

    #[error("truncation insufficient: n_max = {n_max} needs max_core >= {needed}, got {max_core}")]
    TruncationInsufficient {
        n_max: i64,
        needed: usize,
        max_core: usize,
    },

    #[error("insufficient window: {0}")]
    InsufficientWindow(String),

    #[error("uncertified counts: {0}")]
    UncertifiedCounts(String),

    #[error("count overflow at n = {0}")]
    CountOverflow(i64),

    #[error("no exact representation for {0}")]
    Inexact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
