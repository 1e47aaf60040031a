//! Command-line front end: record grammar parsing, per-place report
//! assembly, and the batch driver. The binary in `main.rs` is a thin
//! argument layer over this library so the behavior is testable directly.

pub mod input;
pub mod report;
pub mod run;

use thiserror::Error;

/// Everything that can go wrong between reading text and emitting records.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed record text; positions are 1-based and the column counts
    /// characters.
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    /// Structurally valid record with the wrong number of coefficients.
    #[error("line {line}: expected 5 coefficients, found {count}")]
    Arity { line: usize, count: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    /// Propagated failure from the bound pipeline.
    #[error("{0}")]
    Math(#[from] archbound::Error),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
