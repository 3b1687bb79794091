use thiserror::Error;

/// Crate-wide error type. Variants carry enough coordinates to point at the
/// offending part of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("game has an empty state or action set")]
    EmptyGame,
    #[error("transition row sum is not 1 at state {state}, actions ({a}, {b})")]
    RowSum { state: usize, a: usize, b: usize },
    #[error("reward out of [0, 1] at state {state}, actions ({a}, {b})")]
    RewardRange { state: usize, a: usize, b: usize },
    #[error("missing transition or reward entry at state {state}, actions ({a}, {b})")]
    MissingTriple { state: usize, a: usize, b: usize },
    #[error("probability row at index {index} does not sum to 1")]
    DistributionSum { index: usize },
    #[error("negative probability at index {index}")]
    NegativeProbability { index: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("priority function missing or out of range at state {state}")]
    PriorityRange { state: usize },
    #[error("discount factor {index} out of (0, 1]")]
    DiscountRange { index: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("bit size is defined for positive integers only")]
    BitSizeDomain,

    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("discount exponent {bits} bits exceeds the materialization cap {cap}")]
    DiscountExponentTooLarge { bits: u64, cap: u64 },

    #[error("floating-point precision mismatch ({0} vs {1})")]
    PrecisionMismatch(u32, u32),
    #[error("floating-point subtraction would be negative")]
    NegativeResult,
    #[error("division by zero")]
    DivisionByZero,
    #[error("relative distance requires positive inputs")]
    NonPositiveRel,
    #[error("cannot normalize an all-zero weight vector")]
    AllZeroWeights,
    #[error("precision {0} is too small")]
    PrecisionTooSmall(u32),
    #[error("chain is not absorbing: state {state} cannot reach an absorbing state")]
    NonAbsorbing { state: usize },
    #[error("discount factor is zero at state {state}")]
    ZeroDiscount { state: usize },

    #[error("pure-strategy enumeration needs {needed} profiles, cap is {cap}")]
    EnumerationCap { needed: u128, cap: usize },
    #[error("certificate kappa {cert} does not match epsilon kappa {eps}")]
    KappaMismatch { cert: u32, eps: u32 },
    #[error("certificate grid index {j} exceeds 2^(kappa+2)")]
    GridIndexRange { j: u64 },

    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("evaluation point arity {got} does not match {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
