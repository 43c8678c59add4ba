use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("the periodic part of an ultimately periodic word must be nonempty")]
    EmptyCycle,
    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(u8),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("block {index} has negative length {value}")]
    NegativeBlock { index: usize, value: String },
    #[error("block {index} has non-integral length {value}")]
    NonIntegralBlock { index: usize, value: String },
    #[error("block {index} is too long to materialise")]
    BlockTooLarge { index: usize },
    #[error("explicit sequence has no value at index {0}")]
    SequenceExhausted(usize),

    #[error("letter {0} is not in the alphabet {{0,1}}")]
    BadLetter(u8),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing transition for state {state} on letter {letter}")]
    MissingTransition { state: usize, letter: u8 },
    #[error("invalid transducer: {0}")]
    InvalidFst(String),

    #[error("window needs {needed} values but only {available} are available")]
    ShortWindow { needed: usize, available: usize },
    #[error("window coefficients of a weight must be nonnegative")]
    NegativeCoefficient,
    #[error("a tuple of weights must be nonempty")]
    EmptyTuple,
    #[error("the tuple consumes no input values (sum of window lengths is zero)")]
    ZeroSumLength,
    #[error("scalar must be nonnegative")]
    NegativeScalar,

    #[error("unsupported weights for synthesis: {0}")]
    UnsupportedWeights(String),
    #[error("block {index} of length {length} is not divisible by {divisor}")]
    IndivisibleBlock { index: usize, length: u128, divisor: u128 },

    #[error("polynomial is not a nonnegative polynomial of positive order: {0}")]
    NotInQk(String),
    #[error("weights must be positive and sum to one")]
    BadWeights,
    #[error("power means need positive arguments")]
    NonPositiveArgument,
    #[error("polynomial has order zero")]
    ZeroOrder,
    #[error("coefficient must be positive")]
    NonPositiveCoefficient,
    #[error("no epsilon in the schedule produced a positive weight vector")]
    BudgetExhausted,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
