use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit {digit} at index {index} exceeds the alphabet cap N = {cap}")]
    DigitOutOfRange { index: usize, digit: u32, cap: u8 },

    #[error("alphabet parameter N must satisfy 1 <= N <= 254, got {0}")]
    InvalidAlphabet(u32),

    #[error("alphabet mismatch: N = {left} vs N = {right}")]
    AlphabetMismatch { left: u8, right: u8 },

    #[error("translation vector must start with the zero entry")]
    NonZeroFirstEntry,

    #[error("translation vector entries must be strictly increasing (entry {index} is not above entry {})", index - 1)]
    NotIncreasing { index: usize },

    #[error("translation vector has no entries")]
    EmptyVector,

    #[error("word length {len} below the minimum {min}")]
    LengthTooSmall { len: usize, min: usize },

    #[error("word universe (N+1)^{len} with N = {cap} exceeds the 2^28-bit memory guard")]
    UniverseTooLarge { cap: u8, len: usize },

    #[error("search budget of {budget} exceeded (needed {needed})")]
    BudgetExceeded { budget: u64, needed: u64 },

    #[error("beta = {beta} is outside the admissible interval (0, {bound})")]
    BetaOutOfRange { beta: String, bound: String },

    #[error("point is outside [0, 1]")]
    PointOutOfRange,

    #[error("translation vector is not admissible")]
    NotAdmissible,

    #[error("exact arithmetic overflowed its 128-bit lattice; reduce depth or pick a simpler beta")]
    ArithmeticOverflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("admissibility oracles disagree for {vector}: acyclic={acyclic}, nilpotent={nilpotent}, covering={covering}")]
    OracleDisagreement {
        vector: String,
        acyclic: bool,
        nilpotent: bool,
        covering: bool,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
