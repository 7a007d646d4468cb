//! The small schemas everything else leans on: remainder extraction,
//! strict and non-strict order, divisibility, and congruence.

use crate::ledger::VarLedger;
use crate::term::Term;

use super::GadgetResult;

/// If `t` is syntactically `… + 1` (or a positive constant), the same value
/// minus one.  Used so that a bound written against a divisor `d + 1`
/// comes out as `y + v - d` rather than `y + v + 1 - (d + 1)`.
fn syntactic_pred(t: &Term) -> Option<Term> {
    match t {
        Term::Const(c) if c.sign() == num_bigint::Sign::Plus => Some(Term::big(c - 1)),
        Term::Sum(parts) => match parts.last() {
            Some(Term::Const(c)) if *c == 1.into() => {
                Some(Term::sum(parts[..parts.len() - 1].to_vec()))
            }
            _ => None,
        },
        _ => None,
    }
}

/// `y = rem(a, divisor)`, for `divisor >= 1`.
///
/// Two equations over two fresh unknowns (the range slack `v` and the
/// quotient `q`, in that creation order):
///
/// 1. `y + v + 1 - divisor`   (so `y < divisor`)
/// 2. `divisor*q + y - a`     (so `a = divisor*q + y`)
pub fn g_remainder(y: &Term, a: &Term, divisor: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let v = Term::var(ledger.fresh("rem", "lt"));
    let q = Term::var(ledger.fresh("rem", "q"));
    let range = match syntactic_pred(divisor) {
        Some(pred) => Term::sum(vec![y.clone(), v]) - pred,
        None => Term::sum(vec![y.clone(), v, Term::one()]) - divisor.clone(),
    };
    let division = Term::sum(vec![divisor.clone() * q, y.clone()]) - a.clone();
    GadgetResult::new(vec![range, division], ledger)
}

/// `a < b`: one equation `a + v + 1 - b` over one fresh slack `v`.
pub fn g_less(a: &Term, b: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let v = Term::var(ledger.fresh("less", "lt"));
    let eq = Term::sum(vec![a.clone(), v, Term::one()]) - b.clone();
    GadgetResult::new(vec![eq], ledger)
}

/// `a <= b`: one equation `a + v - b` over one fresh slack `v`.
pub fn g_leq(a: &Term, b: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let v = Term::var(ledger.fresh("leq", "le"));
    let eq = Term::sum(vec![a.clone(), v]) - b.clone();
    GadgetResult::new(vec![eq], ledger)
}

/// `b | c`: one equation `c - b*t` over one fresh quotient `t`.
///
/// For `b = 0` the equation degenerates to `c = 0`, matching the
/// convention that zero divides only zero.
pub fn g_divides(b: &Term, c: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let t = Term::var(ledger.fresh("div", "q"));
    let eq = c.clone() - b.clone() * t;
    GadgetResult::new(vec![eq], ledger)
}

/// `x ≡ y (mod r)`, for `r >= 1`, by extracting both residues and equating
/// them.
///
/// Fresh unknowns in creation order: `r1, s1, q1, r2, s2, q2` (residue,
/// range slack and quotient for each side).  Equations in order:
///
/// 1. `r1 + s1 + 1 - r`
/// 2. `r*q1 + r1 - x`
/// 3. `r2 + s2 + 1 - r`
/// 4. `r*q2 + r2 - y`
/// 5. `r1 - r2`
///
/// Callers that square groups should treat (1,2) and (3,4) as the two
/// residue groups and (5) as a singleton.
pub fn g_congruent(x: &Term, y: &Term, r: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let r1 = Term::var(ledger.fresh("cong", "res"));
    let s1 = Term::var(ledger.fresh("cong", "lt"));
    let q1 = Term::var(ledger.fresh("cong", "q"));
    let r2 = Term::var(ledger.fresh("cong", "res"));
    let s2 = Term::var(ledger.fresh("cong", "lt"));
    let q2 = Term::var(ledger.fresh("cong", "q"));
    let eqs = vec![
        Term::sum(vec![r1.clone(), s1, Term::one()]) - r.clone(),
        Term::sum(vec![r.clone() * q1, r1.clone()]) - x.clone(),
        Term::sum(vec![r2.clone(), s2, Term::one()]) - r.clone(),
        Term::sum(vec![r.clone() * q2, r2.clone()]) - y.clone(),
        r1 - r2,
    ];
    GadgetResult::new(eqs, ledger)
}
