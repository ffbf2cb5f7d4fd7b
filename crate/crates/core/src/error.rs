//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("candidate name must be nonempty")]
    EmptyCandidateName,
    #[error("duplicate candidate `{0}`")]
    DuplicateCandidate(String),
    #[error("candidate set must contain at least one candidate")]
    EmptyCandidateSet,
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("candidates must differ, got `{0}` twice")]
    EqualCandidates(String),
    #[error("composition parts must be positive")]
    NonPositivePart,
    #[error("composition must have at least one part")]
    EmptyComposition,
    #[error("composition has too many parts ({0})")]
    TooManyParts(usize),
    #[error("composition sums to {sum}, expected {expected} candidates")]
    CompositionMismatch { sum: usize, expected: usize },
    #[error("ballot space size exceeds exact-arithmetic range")]
    SizeOverflow,
    #[error("ballot space size {k} exceeds cap {cap}; raise the cap to at least {k}")]
    SizeCapExceeded { k: u128, cap: u64 },
    #[error("ballot index {index} out of range, space has {k} ballots")]
    IndexOutOfRange { index: u128, k: u128 },
    #[error("ballot rows do not match the composition shape")]
    MalformedBallot,
    #[error("operands belong to different ballot spaces")]
    ContextMismatch,
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("matrix has {rows} rows and {cols} columns, expected {k} x {n}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        k: u128,
        n: usize,
    },
    #[error("permutation images must be a bijection on {0} candidates")]
    NotABijection(usize),
    #[error("orbit size would exceed cap {cap}")]
    OrbitCapExceeded { cap: usize },
    #[error("no nontrivial rotation exists in a space of dimension {k}")]
    RotationUnavailable { k: u128 },
    #[error("rotation plane vectors are not an orthonormal pair orthogonal to the axis")]
    BadRotationPlane,
    #[error("rotation axis does not lie on the line spanned by the requested vector")]
    AxisMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
