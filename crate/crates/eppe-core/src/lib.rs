//! Core library for working with exponential prefixed polynomial equations
//! over the natural numbers.
//!
//! The crate is organised in layers:
//!
//! * [`term`] and [`formula`] define the object language: polynomial terms
//!   with subtraction and exponentiation, and quantifier-prefixed
//!   conjunctions of equations.
//! * [`eval`] and [`check`] evaluate terms under assignments and decide
//!   (within a search bound) whether a sentence holds.
//! * [`gadget`] contains the reusable equation schemas — remainder,
//!   inequality, Pell sequences, binomial coefficients, relation
//!   combination — each of which trades a relation for a conjunction of
//!   equations over fresh unknowns.
//! * [`elim`] implements the quantifier manipulations: collapsing adjacent
//!   bounded universals into one, and eliminating a bounded universal
//!   quantifier in favour of finitely many divisibility conditions on
//!   binomial coefficients.
//! * [`pipeline`] assembles the two headline constructions end to end.
//! * [`oracle`] holds small self-contained brute-force checkers used to
//!   cross-validate everything else, plus the equivalence harness that
//!   compares gadgets against those checkers over exhaustive ranges.

pub mod check;
pub mod elim;
pub mod emit;
pub mod error;
pub mod eval;
pub mod formula;
pub mod gadget;
pub mod ledger;
pub mod oracle;
pub mod parse;
pub mod pipeline;
pub mod term;

pub use error::Error;
pub use formula::Formula;
pub use term::Term;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
