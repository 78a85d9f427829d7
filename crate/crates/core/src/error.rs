use thiserror::Error;

/// Malformed text input (polynomials, PD codes, polygon files, table rows).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error: {msg}")]
pub struct ParseError {
    msg: String,
}

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self { msg: msg.into() }
    }
}
