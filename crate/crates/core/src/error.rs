use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated an operation's documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Binarization found no glyph ink.
    #[error("image contains no glyph foreground")]
    EmptyGlyph,

    /// A stroke sequence that must be non-empty was empty.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Strict-mode parse failure at a byte offset.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("image error: {0}")]
    Image(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
