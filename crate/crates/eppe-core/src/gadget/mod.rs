//! Reusable equation schemas.
//!
//! Each gadget trades one relation (a remainder claim, an inequality, a
//! divisibility, membership in a Pell sequence, a binomial-coefficient
//! identity, …) for a finite conjunction of equations `t = 0` over the
//! original terms plus freshly minted unknowns.  A gadget never binds its
//! fresh variables itself: it returns them in a [`VarLedger`] so the caller
//! can place the existential block wherever the surrounding construction
//! needs it.
//!
//! All gadgets here are *faithful*: the conjunction of the returned
//! equations is solvable for the fresh unknowns over the naturals exactly
//! when the encoded relation holds (module-level tests and the oracle
//! harness cross-check this on exhaustive desk-scale ranges).

pub mod basic;
pub mod binomial;
pub mod bounds;
pub mod cantor;
pub mod combine;
pub mod pell;

pub use basic::{g_congruent, g_divides, g_leq, g_less, g_remainder};
pub use binomial::{
    g_binomial_dioph, g_binomial_expdioph, g_div_binomial, g_div_binomial_literal,
};
pub use bounds::{build_b_bound, g_strong_ineq, positivize};
pub use cantor::{cantor_double_term, g_cantor_pin};
pub use combine::{relation_combine, RelationCombineInput};
pub use pell::{g_psi, PellWitness};

use crate::formula::Formula;
use crate::ledger::VarLedger;
use crate::term::Term;

/// Output of a gadget: equations asserting the encoded relation, the fresh
/// unknowns they mention, and free-form notes about any non-obvious choice
/// baked into the shape.
#[derive(Debug, Clone)]
pub struct GadgetResult {
    /// Terms asserted to equal zero, in a fixed documented order.
    pub equations: Vec<Term>,
    /// Fresh variables, in creation order.
    pub ledger: VarLedger,
    /// Remarks worth surfacing to a reader of the generated system.
    pub notes: Vec<String>,
}

impl GadgetResult {
    pub fn new(equations: Vec<Term>, ledger: VarLedger) -> Self {
        GadgetResult {
            equations,
            ledger,
            notes: Vec::new(),
        }
    }

    /// The conjunction as one term: the sum of squares of all equations.
    pub fn conjunction(&self) -> Term {
        Term::sum_of_squares(self.equations.clone())
    }

    /// The gadget as a closed-over formula: existentially quantify every
    /// fresh unknown over the sum-of-squares equation.
    pub fn to_formula(&self) -> Formula {
        let vars: Vec<String> = self
            .ledger
            .entries()
            .iter()
            .map(|e| e.ident.clone())
            .collect();
        Formula::exists(vars, Formula::equation(self.conjunction()))
    }

    /// Identifiers of the fresh unknowns, in creation order.
    pub fn fresh_idents(&self) -> Vec<String> {
        self.ledger
            .entries()
            .iter()
            .map(|e| e.ident.clone())
            .collect()
    }
}

/// Combine a group of equations into one term the way the constructions
/// do: a single equation contributes its square, a group of several
/// contributes the square of their sum of squares, so that the result is
/// zero exactly when every member equation is zero.
pub fn group_term(eqs: &[Term]) -> Term {
    match eqs {
        [] => Term::zero(),
        [e] => e.clone().squared(),
        many => Term::sum_of_squares(many.to_vec()).squared(),
    }
}
