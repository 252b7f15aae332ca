use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{d} is too large for {what}")]
    FieldTooLarge { p: u64, d: usize, what: &'static str },
    #[error("zero has no multiplicative inverse")]
    DivisionByZero,
    #[error("element {0} does not belong to the field")]
    ForeignElement(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear forms are dependent or of the wrong count: {0}")]
    Dependent(String),
    #[error("circuit does not compute the matrix product: {0}")]
    NotMatrixProduct(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no witness found after {evaluations} evaluations: {what}")]
    NotFound { what: String, evaluations: u64 },
    #[error("certificate check failed in step `{step}`: {detail}")]
    Certificate { step: String, detail: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
