//! Coefficient bounds and the strong inequality on the modulus seed.
//!
//! Eliminating a bounded universal quantifier needs a value `B` that
//! dominates the matrix polynomial over the whole quantified range.
//! [`build_b_bound`] produces one syntactically: substitute a bound for
//! the universal variable (and a cap for the inner existentials), then
//! make every coefficient positive so the result only grows.

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::ledger::VarLedger;
use crate::term::Term;

use super::GadgetResult;

/// Rewrite a term so its value dominates the absolute value of the
/// original at every point: constants become their absolute value and
/// differences become sums.
pub fn positivize(t: &Term) -> Term {
    match t {
        Term::Const(c) => Term::big(c.abs()),
        Term::Var(_) => t.clone(),
        Term::Sum(parts) => Term::sum(parts.iter().map(positivize).collect()),
        Term::Product(parts) => Term::product(parts.iter().map(positivize).collect()),
        Term::Difference(a, b) => positivize(a) + positivize(b),
        Term::Power(b, e) => positivize(b).pow(positivize(e)),
    }
}

/// A bound `B` on `|g|` over the range described by `subs`: substitute,
/// then positivize.  `subs` maps each bounded variable to a term that
/// dominates it (the universal variable to its range bound, each inner
/// existential to the shared witness cap).
pub fn build_b_bound(g: &Term, subs: &BTreeMap<String, Term>) -> Term {
    positivize(&g.subst(subs))
}

/// The strong inequality `q > b + (b+1)^{b+1}·((b+1)^{b+1}·B)^{w^m}`,
/// as a single equation with one fresh slack:
///
/// ```text
/// b + (b+1)^{b+1}·((b+1)^{b+1}·B)^{w^m} + 1 + slack − q = 0
/// ```
pub fn g_strong_ineq(q: &Term, b: &Term, big_b: &Term, w: &Term, m: u64) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let slack = ledger.fresh("sineq", "slack");
    let bp1 = b.clone() + Term::one();
    let tower = bp1.clone().pow(bp1.clone());
    let bound = b.clone() + tower.clone() * (tower * big_b.clone()).pow(w.clone().pow_u(m));
    let eq = Term::sum(vec![bound, Term::one(), Term::var(slack)]) - q.clone();
    GadgetResult::new(vec![eq], ledger)
}
