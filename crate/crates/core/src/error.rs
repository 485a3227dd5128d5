use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("events belong to different vocabularies")]
    VocabularyMismatch,

    #[error("event is not a union of the model's cells")]
    NotDecomposable,

    #[error("conditioning event has probability zero")]
    ZeroAntecedent,

    #[error("invalid probability model: {0}")]
    InvalidModel(String),

    #[error("degenerate conditional: antecedent is identically 0")]
    DegenerateConditional,

    #[error("probability value {0} lies outside [0, 1]")]
    AlphaOutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),

    #[error("grid enumeration of {count} compositions exceeds the limit of {limit}")]
    GuardRail { count: u128, limit: u128 },

    #[error("no grid point satisfies the knowledge base")]
    NoFeasibleSample,

    #[error("unknown law `{0}`")]
    UnknownLaw(String),

    #[error("line {line}: {message}")]
    KbSyntax { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
