use std::fmt;

use crate::design::Design;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: bad subset, bad scheme parameters, bad flags.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Parameters are well formed but outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A memory or work cap would be exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("construction failed after {} blocks: {reason}", partial.block_count())]
    Construction { reason: String, partial: Box<Design> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

/// Design-file parse failure, always tied to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub token: Option<String>,
    pub reason: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, token: Option<&str>, reason: impl Into<String>) -> Self {
        ParseError {
            line,
            token: token.map(str::to_owned),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)?;
        if let Some(tok) = &self.token {
            write!(f, " (token `{tok}`)")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}
