use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity error at byte {position}: `{name}` {reason}")]
    Arity {
        name: String,
        position: usize,
        reason: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty sampling domain for coordinate `{coord}`")]
    EmptyDomain { coord: String },

    #[error("invalid sample plan: {0}")]
    InvalidPlan(String),

    #[error("singular metric (|det g| = {det:e})")]
    SingularMetric { det: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate name clash: `{0}`")]
    NameClash(String),

    #[error("warping function is not positive at {point:?} (value {value})")]
    NonPositiveWarping { point: Vec<f64>, value: f64 },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("hypothesis failed (max residual {residual:e}): {reason}")]
    HypothesisFailed { residual: f64, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("validation error for `{name}`: {reason}")]
    Validation { name: String, reason: String },

    #[error("parse error in {path} at {position}: {message}")]
    Parse {
        path: String,
        position: String,
        message: String,
    },

    #[error("expression error in {context}: {source}")]
    Expr {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn in_context(self, context: impl Into<String>) -> Self {
        Error::Expr {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Strips any `Expr` context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Expr { source, .. } => source.root(),
            e => e,
        }
    }
}
