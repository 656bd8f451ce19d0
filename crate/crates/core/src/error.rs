use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grading violation: {0}")]
    Grading(String),

    #[error("comparison beyond tracked range: requested order {requested}, tracked {tracked}")]
    BeyondTrackedRange { requested: usize, tracked: usize },

    #[error("depth bound violated: computed depth {computed} exceeds bound {bound}")]
    DepthBound { computed: u32, bound: u32 },

    #[error("{0}")]
    Discrepancy(String),

    #[error("denominator vanishes at N = {n}, r = {r}")]
    ZeroDenominator { n: i64, r: i64 },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("malformed serialization: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
