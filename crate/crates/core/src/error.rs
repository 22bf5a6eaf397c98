use thiserror::Error;

/// Errors raised while building or validating a [`FiniteLattice`](crate::FiniteLattice).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice must have at least one element")]
    Empty,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cover `{0} < {1}` listed twice")]
    DuplicateCover(String, String),
    #[error("cover relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("cover `{0} < {1}` is implied by other covers")]
    NotTransitivelyReduced(String, String),
    #[error("`{0}` and `{1}` have no unique join or meet")]
    NotALattice(String, String),
    #[error("({o}, {a_l}, {a_r}, {i}) is not a covering square")]
    NotACoveringSquare {
        o: String,
        a_l: String,
        a_r: String,
        i: String,
    },
}

/// Errors raised by the fork construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForkError {
    #[error("lattice is not slim, planar and semimodular")]
    NotSps,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("more than one lower cover of `{0}` continues the trajectory")]
    AmbiguousPropagation(String),
    #[error("`{0}` is not a fork element")]
    NotAForkElement(String),
}

/// Errors raised by congruence computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("blocks do not partition the carrier: {0}")]
    NotAPartition(String),
    #[error("block containing `{0}` is not an interval")]
    NotIntervalPartition(String),
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("lattice has {size} elements, above the enumeration bound of {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("embedded subset is not a sublattice")]
    NotASublattice,
}

/// Errors raised by the closed-form extension constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("construction does not apply to a congruence of case {0:?}")]
    WrongCase(crate::extension::ExtensionCase),
    #[error("fork element `{0}` lies inside a base class closure")]
    ForkElementInClass(String),
    #[error("fork element `{0}` assigned to two classes")]
    ConflictingAssignment(String),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}
