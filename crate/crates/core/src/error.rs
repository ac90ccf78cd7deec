use thiserror::Error;

/// Crate-wide error type.
///
/// Parse and semantic errors are distinct variants so that frontends can
/// report them under different codes; every shape error carries the path of
/// the offending sub-term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value or ideal does not have the shape its declared type requires.
    #[error("shape mismatch at {path}: {message}")]
    Shape { path: String, message: String },

    /// Two operands were declared against different types.
    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    /// Malformed input text.
    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    /// Well-formed text with an inconsistent meaning (unknown letter,
    /// wrong arity, duplicate transition name, ...).
    #[error("semantic error: {0}")]
    Semantic(String),

    /// A model's lifted step produced an ideal that does not conform to the
    /// model's state type.
    #[error("model integrity violation: {0}")]
    ModelIntegrity(String),

    /// Vector length disagreement in the Petri backward machinery.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A composite transition is undefined at the given ideal.
    #[error("composite is undefined at the given ideal")]
    UndefinedComposite,

    /// A budget field was zero.
    #[error("invalid budget: {0}")]
    Budget(String),
}

impl Error {
    pub fn shape(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Shape {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
