use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Operator errors carry enough context to point at the offending block or
/// token; the CLI maps `OperatorUndefined`/`NotAParapolytope` (possibly inside
/// `TokenFailed`) to exit code 2 and oracle mismatches to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("l-matrix has nonzero diagonal entry at block {block}")]
    NonZeroDiagonal { block: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("block index {index} out of range (rank {rank})")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("chains live in different string spaces")]
    SpaceMismatch,
    #[error("chains live on different shifted lattices")]
    ShiftMismatch,
    #[error("refinement {q} does not contain the point's denominators")]
    RefinementMismatch { q: i64 },
    #[error("not a parapolytope: fiber over {base:?} in block {block} is not a full box")]
    NotAParapolytope { block: usize, base: Vec<i64> },
    #[error("box is not degenerate in direction {slot} of the block")]
    NotDegenerate { slot: usize },
    #[error("divided difference undefined: piece has no degenerate direction in block {block}")]
    OperatorUndefined { block: usize },
    #[error("regroup hint does not reproduce the raw pointwise output")]
    InconsistentHint,
    #[error("exponent coset is not stable under reflection {index}")]
    CosetNotStable { index: usize },
    #[error("weight is not dominant")]
    NotDominant,
    #[error("Cartan matrix is not of finite type (root closure exceeded bound)")]
    NotFiniteType,
    #[error("lambda is not non-increasing")]
    NotNonIncreasing,
    #[error("word is empty")]
    EmptyWord,
    #[error("block {block} is too small to degenerate (needs d_i > 1)")]
    BlockTooSmall { block: usize },
    #[error("word multiplicities do not match the degenerated space")]
    MultiplicityMismatch,
    #[error("polytope is unbounded in direction {direction}")]
    Unbounded { direction: usize },
    #[error("mesh export needs ambient dimension 3, got {got} (use a projection)")]
    DimensionUnsupported { got: usize },
    #[error("operator failed at word token {index}")]
    TokenFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True when the error (or its token-wrapped source) means the divided
    /// difference operator was applied outside its domain.
    pub fn is_operator_domain_error(&self) -> bool {
        match self {
            Error::OperatorUndefined { .. } | Error::NotAParapolytope { .. } => true,
            Error::TokenFailed { source, .. } => source.is_operator_domain_error(),
            _ => false,
        }
    }
}
