//! Command errors and their exit codes.

use std::path::Path;

use thiserror::Error;
use transted::parser::{Span, SyntaxError};
use transted::transform::BudgetError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or flags; exit code 2.
    #[error("{0}")]
    Input(String),
    /// Unreadable or unwritable file; exit code 3.
    #[error("{0}")]
    Io(String),
    /// Invalid search budget; exit code 4.
    #[error("{0}")]
    Budget(#[from] BudgetError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

/// `error` with the offending line of `source` and a caret under `span`.
pub fn diagnostic(name: &str, source: &str, span: Span, error: &dyn std::fmt::Display) -> String {
    let start = span.start.min(source.len());
    let line_start = source[..start].rfind('\n').map_or(0, |i| i + 1);
    let line_end = source[start..].find('\n').map_or(source.len(), |i| start + i);
    let line_no = source[..line_start].matches('\n').count() + 1;
    let col = source[line_start..start].chars().count();
    let end = span.end.clamp(start, line_end);
    let width = source[start..end].chars().count().max(1);
    let gutter = " ".repeat(line_no.to_string().len());
    format!(
        "error: {error}\n{gutter}--> {name}:{line_no}:{}\n{gutter} |\n{line_no} | {}\n{gutter} | {}{}",
        col + 1,
        &source[line_start..line_end],
        " ".repeat(col),
        "^".repeat(width),
    )
}

pub fn syntax(name: &str, source: &str, e: &SyntaxError) -> CliError {
    CliError::Input(diagnostic(name, source, e.span(), e))
}
