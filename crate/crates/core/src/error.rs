use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{0}")]
    PAdic(#[from] PAdicError),
    #[error("work budget exceeded: need {required} units, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PAdicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision {precision} is invalid for p = {p} (need 1 <= k and p^k < 2^62)")]
    BadPrecision { p: u64, precision: u32 },
    #[error("mismatched rings: Z/{p1}^{k1} vs Z/{p2}^{k2}")]
    Mismatch { p1: u64, k1: u32, p2: u64, k2: u32 },
    #[error("{0} is not a unit")]
    NonUnit(u64),
    #[error("{0} is not congruent to 1 mod p")]
    NotPrincipalUnit(u64),
    #[error("no solution at precision {precision}: {reason}")]
    NoSolution { precision: u32, reason: String },
}
