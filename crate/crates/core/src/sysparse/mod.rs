//! The `.vf` vector-field description language and canonical rendering.

mod expr;
mod field;
mod render;
mod system;

pub use expr::{parse_poly, parse_ratfunc, MAX_EXPONENT};
pub use field::{FieldError, VectorField};
pub use render::{render_poly, render_ratfunc};
pub use system::{parse_system, SystemSpec};

use thiserror::Error;

/// Syntax or semantic error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}
