//! Base-`b` positional structure: leading exponent, digit extraction,
//! and the disjunction glue between their branches.
//!
//! These three gadgets carry the hereditary-representation encodings:
//! `g_hp` pins the exponent of the leading digit, `g_elem` reads the
//! digit at a given position, and `g_disjunction` multiplies two sums of
//! squares so the product vanishes exactly when one side does.

use crate::gadget::GadgetResult;
use crate::ledger::VarLedger;
use crate::term::Term;

/// `l = HP(n, base)`: either `base^l ≤ n < base^{l+1}` (so `l` is the
/// exponent of the leading digit of `n`), or `n = 0 ∧ l = 0`.
///
/// ```text
/// ((n + s₁ + 1 − base^{l+1})² + (base^l + s₂ − n)² + (n² − s₃ − 1)²) · (n² + l²) = 0
/// ```
///
/// One product equation over three fresh slacks.  The left factor is the
/// main branch — `n < base^{l+1}`, `base^l ≤ n`, and `n ≥ 1` — and the
/// right factor covers `n = 0`, where no leading digit exists.
/// Precondition: `base ≥ 2`.
pub fn g_hp(l: &Term, n: &Term, base: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let s1 = Term::var(ledger.fresh("hp", "s1"));
    let s2 = Term::var(ledger.fresh("hp", "s2"));
    let s3 = Term::var(ledger.fresh("hp", "s3"));
    GadgetResult::new(vec![hp_product(l, n, base, [s1, s2, s3])], ledger)
}

/// The single product equation of [`g_hp`] over caller-supplied slack
/// terms, for constructions that manage their own namespaces.
pub(crate) fn hp_product(l: &Term, n: &Term, base: &Term, slacks: [Term; 3]) -> Term {
    let [s1, s2, s3] = slacks;
    let upper = Term::sum(vec![n.clone(), s1, Term::one()])
        - base.clone().pow(l.clone() + Term::one());
    let lower = base.clone().pow(l.clone()) + s2 - n.clone();
    let positive = n.clone().squared() - s3 - Term::one();
    let main = Term::sum_of_squares(vec![upper, lower, positive]);
    let zero_branch = n.clone().squared() + l.clone().squared();
    g_disjunction(&main, &zero_branch)
}

/// `c = Elem(n, base, j)`: the digit of `n` at position `j` in base
/// `base`.
///
/// ```text
/// q_hi·base^{j+1} + c·base^j + q_lo = n
/// c + v + 1 = base
/// q_lo + v′ + 1 = base^j
/// ```
///
/// Four fresh unknowns: the split quotients `q_hi`, `q_lo` and the two
/// strictness slacks.  The bounds `c < base` and `q_lo < base^j` make the
/// split unique, so the system is solvable for exactly one `c` per
/// `(n, base, j)`.  Precondition: `base ≥ 2`.
pub fn g_elem(c: &Term, n: &Term, base: &Term, j: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let hi = Term::var(ledger.fresh("elem", "hi"));
    let lo = Term::var(ledger.fresh("elem", "lo"));
    let digitlt = Term::var(ledger.fresh("elem", "digitlt"));
    let remlt = Term::var(ledger.fresh("elem", "remlt"));

    let base_j = base.clone().pow(j.clone());
    let base_j1 = base.clone().pow(j.clone() + Term::one());
    let equations = vec![
        Term::sum(vec![hi * base_j1, c.clone() * base_j.clone(), lo.clone()]) - n.clone(),
        Term::sum(vec![c.clone(), digitlt, Term::one()]) - base.clone(),
        Term::sum(vec![lo, remlt, Term::one()]) - base_j,
    ];
    GadgetResult::new(equations, ledger)
}

/// Product of two nonnegative terms: `f₁ · f₂ = 0` iff `f₁ = 0` or
/// `f₂ = 0`.
///
/// Precondition: both arguments take only nonnegative values (sums of
/// squares in the intended use), so the product cannot vanish through
/// sign cancellation.
pub fn g_disjunction(f1: &Term, f2: &Term) -> Term {
    f1.clone() * f2.clone()
}
