use serde::Serialize;
use thiserror::Error;

/// Syntax error with a position in the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub(crate) fn at(text: &str, offset: usize, expected: &str, found: &str) -> Self {
        let offset = offset.min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map(|i| i + 1).unwrap_or(0);
        let column = text[line_start..offset].chars().count() + 1;
        ParseError {
            offset,
            line,
            column,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("predicate {predicate} used with arity {first} and {second}")]
    ArityMismatch {
        predicate: String,
        first: usize,
        second: usize,
        offset: usize,
    },
    #[error("argument {position} of predicate {predicate} has sort {first} and {second}")]
    SortMismatch {
        predicate: String,
        position: usize,
        first: String,
        second: String,
        offset: usize,
    },
}

impl FormulaError {
    pub fn offset(&self) -> usize {
        match self {
            FormulaError::Parse(e) => e.offset,
            FormulaError::ArityMismatch { offset, .. } | FormulaError::SortMismatch { offset, .. } => {
                *offset
            }
        }
    }
}
