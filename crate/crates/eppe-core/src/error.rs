//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing, building, or evaluating.
#[derive(Debug, Error)]
pub enum Error {
    /// A term mentioned a variable the assignment does not bind.
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    /// An exponent evaluated to a negative number.
    #[error("negative exponent in `{0}`")]
    NegativeExponent(String),

    /// Surface-syntax error with source position.
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    /// An input did not have the shape a builder requires.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A computation was abandoned because it exceeded its resource budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The radical-expansion engine was left with an odd power of a square
    /// root after multiplying out all sign choices.  This indicates an
    /// internal invariant violation, never a user error.
    #[error("residual radical after sign expansion: {0}")]
    ResidualRadical(String),

    /// A quantifier rebinds a variable already in scope.
    #[error("variable `{0}` bound twice")]
    DuplicateVariable(String),

    /// A substitution map was missing a required key.
    #[error("missing substitution for `{0}`")]
    MissingSubstitution(String),

    /// A builder was handed an empty list where at least one item is needed.
    #[error("empty term list in {0}")]
    EmptyTermList(&'static str),

    /// Catch-all for invalid arguments to builders and oracles.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// I/O passthrough for the command-line tool.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
