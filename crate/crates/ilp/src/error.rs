use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IlpError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("variable index {index} out of range (model has {count} variables)")]
    UnknownVariable { index: usize, count: usize },

    #[error("variable `{name}` has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { name: String, lower: i64, upper: i64 },

    #[error("non-finite coefficient in {0}")]
    NonFinite(String),

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
}
