//! Combining the three relation kinds — "is a perfect square",
//! "divides", and "is positive" — into one polynomial equation.
//!
//! Given A₁ … A_q, B, C, D and the weight W, the combined polynomial is
//!
//! ```text
//! M_q(n) = ∏ (B²n + C² − B²(2D−1)(C² + W^q ± √A₁ ± √A₂·W ± … ± √A_q·W^{q−1}))
//! ```
//!
//! with the product over all 2^q sign choices.  `M_q(n) = 0` has a solution
//! in `n` exactly when every `A_i` is a perfect square, `B` divides `C`,
//! and `D` is positive.  Multiplying out the sign choices cancels every
//! odd power of every radical, so the result is an honest polynomial; this
//! module performs that expansion symbolically, treating the input terms
//! as opaque atoms, and reports an internal error if any radical survives.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::term::Term;
use crate::Result;

/// Inputs of [`relation_combine`].
#[derive(Debug, Clone)]
pub struct RelationCombineInput {
    /// The values required to be perfect squares (at most six).
    pub a_list: Vec<Term>,
    /// The divisor of the divisibility relation.
    pub b: Term,
    /// The dividend of the divisibility relation.
    pub c: Term,
    /// The value required to be positive.
    pub d: Term,
    /// Name of the fresh root variable `n`.
    pub n: String,
    /// The weight `W`; `None` means the derived default `1 + Σ A_i²`.
    /// Constructions that keep `W` as a pinned unknown override this.
    pub w: Option<Term>,
}

impl RelationCombineInput {
    pub fn new(a_list: Vec<Term>, b: Term, c: Term, d: Term, n: impl Into<String>) -> Self {
        RelationCombineInput {
            a_list,
            b,
            c,
            d,
            n: n.into(),
            w: None,
        }
    }

    /// Use an explicit weight term instead of the derived default.
    pub fn with_w(mut self, w: Term) -> Self {
        self.w = Some(w);
        self
    }

    /// The weight in effect: the override, or `1 + Σ A_i²`.
    pub fn w_term(&self) -> Term {
        match &self.w {
            Some(w) => w.clone(),
            None => Term::sum(
                std::iter::once(Term::one())
                    .chain(self.a_list.iter().map(|a| a.clone().squared()))
                    .collect(),
            ),
        }
    }
}

/// A monomial over atom indices: atom id → exponent.
type Monomial = BTreeMap<usize, u64>;

/// A polynomial with integer coefficients over opaque atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct MultiPoly(BTreeMap<Monomial, BigInt>);

impl MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }

    fn constant(c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::new(), c);
        }
        MultiPoly(m)
    }

    fn atom(id: usize) -> Self {
        let mut mono = Monomial::new();
        mono.insert(id, 1);
        let mut m = BTreeMap::new();
        m.insert(mono, BigInt::one());
        MultiPoly(m)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.0.clone();
        for (mono, c) in &other.0 {
            let e = out.entry(mono.clone()).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                out.remove(mono);
            }
        }
        MultiPoly(out)
    }

    fn neg(&self) -> MultiPoly {
        MultiPoly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut mono = m1.clone();
                for (id, e) in m2 {
                    *mono.entry(*id).or_insert(0) += e;
                }
                let e = out.entry(mono.clone()).or_insert_with(BigInt::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.remove(&mono);
                }
            }
        }
        MultiPoly(out)
    }

    fn pow(&self, k: u64) -> MultiPoly {
        let mut acc = MultiPoly::constant(BigInt::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Render as a term: positive monomials minus negative monomials,
    /// monomials in the (deterministic) map order.
    fn to_term(&self, atoms: &[Term]) -> Term {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (mono, coeff) in &self.0 {
            let mut parts = Vec::new();
            let mag = coeff.abs();
            if !mag.is_one() || mono.is_empty() {
                parts.push(Term::big(mag));
            }
            for (id, e) in mono {
                let base = atoms[*id].clone();
                parts.push(if *e == 1 { base } else { base.pow_u(*e) });
            }
            let t = Term::product(parts);
            if coeff.is_negative() {
                neg.push(t);
            } else {
                pos.push(t);
            }
        }
        match (pos.is_empty(), neg.is_empty()) {
            (true, true) => Term::zero(),
            (false, true) => Term::sum(pos),
            (true, false) => Term::zero() - Term::sum(neg),
            (false, false) => Term::sum(pos) - Term::sum(neg),
        }
    }
}

/// Interns input terms as atoms; constants fold into coefficients instead.
#[derive(Default)]
struct AtomTable {
    atoms: Vec<Term>,
}

impl AtomTable {
    fn lift(&mut self, t: &Term) -> MultiPoly {
        if let Some(c) = t.as_const() {
            return MultiPoly::constant(c.clone());
        }
        let id = match self.atoms.iter().position(|a| a == t) {
            Some(i) => i,
            None => {
                self.atoms.push(t.clone());
                self.atoms.len() - 1
            }
        };
        MultiPoly::atom(id)
    }
}

/// A polynomial extended with square roots of the `A_i`: a map from the
/// parity mask of the radicals present to the rational-part coefficient.
/// Multiplication reduces `√A_i · √A_i` to the polynomial `A_i`.
fn rad_mul(
    lhs: &BTreeMap<u64, MultiPoly>,
    rhs: &BTreeMap<u64, MultiPoly>,
    a_polys: &[MultiPoly],
) -> BTreeMap<u64, MultiPoly> {
    let mut out: BTreeMap<u64, MultiPoly> = BTreeMap::new();
    for (m1, p1) in lhs {
        for (m2, p2) in rhs {
            let mut coeff = p1.mul(p2);
            let common = m1 & m2;
            for (i, a) in a_polys.iter().enumerate() {
                if common & (1 << i) != 0 {
                    coeff = coeff.mul(a);
                }
            }
            let mask = m1 ^ m2;
            let e = out.entry(mask).or_insert_with(MultiPoly::zero);
            *e = e.add(&coeff);
            if e.is_zero() {
                out.remove(&mask);
            }
        }
    }
    out
}

/// Expand the combined polynomial `M_q` for the given inputs.
///
/// Returns a single term in the inputs and the fresh root variable
/// `input.n`.  Errors: an empty `A`-list, more than six `A`s (the
/// expansion has 2^q factors), or — indicating an internal bug, since the
/// sign product always cancels radicals — a residual radical.
pub fn relation_combine(input: &RelationCombineInput) -> Result<Term> {
    let q = input.a_list.len();
    if q == 0 {
        return Err(Error::EmptyTermList("relation_combine A-list"));
    }
    if q > 6 {
        return Err(Error::InvalidArgument(format!(
            "relation_combine expands 2^q factors; q = {q} is past the supported 6"
        )));
    }

    let mut table = AtomTable::default();
    let n = table.lift(&Term::var(input.n.clone()));
    let b = table.lift(&input.b);
    let c = table.lift(&input.c);
    let d = table.lift(&input.d);
    let w = table.lift(&input.w_term());
    let a_polys: Vec<MultiPoly> = input.a_list.iter().map(|a| table.lift(a)).collect();

    let b2 = b.mul(&b);
    let c2 = c.mul(&c);
    let two_d_m1 = MultiPoly::constant(BigInt::from(2))
        .mul(&d)
        .sub(&MultiPoly::constant(BigInt::one()));
    let scale = b2.mul(&two_d_m1);
    // base = B²n + C² − B²(2D−1)(C² + W^q)
    let base = b2
        .mul(&n)
        .add(&c2)
        .sub(&scale.mul(&c2.add(&w.pow(q as u64))));
    // radical coefficients: B²(2D−1)·W^{i−1} on √A_i
    let deltas: Vec<MultiPoly> = (0..q).map(|i| scale.mul(&w.pow(i as u64))).collect();

    let mut acc: BTreeMap<u64, MultiPoly> = BTreeMap::new();
    acc.insert(0, MultiPoly::constant(BigInt::one()));
    for signs in 0..(1u64 << q) {
        let mut factor: BTreeMap<u64, MultiPoly> = BTreeMap::new();
        factor.insert(0, base.clone());
        for (i, delta) in deltas.iter().enumerate() {
            let signed = if signs & (1 << i) != 0 {
                delta.neg()
            } else {
                delta.clone()
            };
            if !signed.is_zero() {
                factor.insert(1 << i, signed);
            }
        }
        acc = rad_mul(&acc, &factor, &a_polys);
    }

    let residual: Vec<u64> = acc
        .iter()
        .filter(|(m, p)| **m != 0 && !p.is_zero())
        .map(|(m, _)| *m)
        .collect();
    if !residual.is_empty() {
        return Err(Error::ResidualRadical(format!(
            "masks {residual:?} survived the sign product"
        )));
    }
    Ok(acc
        .get(&0)
        .cloned()
        .unwrap_or_else(MultiPoly::zero)
        .to_term(&table.atoms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_term, Assignment, Budget};

    fn eval_at_n(t: &Term, n: i64) -> BigInt {
        let mut env = Assignment::new();
        env.insert("n".into(), BigInt::from(n));
        eval_term(t, &env, &Budget::default()).unwrap()
    }

    #[test]
    fn single_square_case_has_the_expected_roots() {
        // A1 = 4 (a square), B = 1, C = 0, D = 1: W = 17 and the product
        // is (n-19)(n-15).
        let input = RelationCombineInput::new(
            vec![Term::nat(4)],
            Term::one(),
            Term::zero(),
            Term::one(),
            "n",
        );
        let m = relation_combine(&input).unwrap();
        assert_eq!(eval_at_n(&m, 15), BigInt::from(0));
        assert_eq!(eval_at_n(&m, 19), BigInt::from(0));
        assert_eq!(eval_at_n(&m, 16), BigInt::from(-3));
        assert_eq!(eval_at_n(&m, 17), BigInt::from(-4));
    }

    #[test]
    fn single_nonsquare_case_has_no_roots() {
        // A1 = 3: W = 10 and the product is (n-10)^2 - 3, never zero.
        let input = RelationCombineInput::new(
            vec![Term::nat(3)],
            Term::one(),
            Term::zero(),
            Term::one(),
            "n",
        );
        let m = relation_combine(&input).unwrap();
        assert_eq!(eval_at_n(&m, 10), BigInt::from(-3));
        for n in 0..2000 {
            assert_ne!(eval_at_n(&m, n), BigInt::from(0), "unexpected root at {n}");
        }
    }

    #[test]
    fn two_radicals_cancel_and_roots_appear_where_computed() {
        // A = [1, 4], B = 1, C = 0, D = 1: W = 1 + 1 + 16 = 18 and the
        // roots are 18² ± 1 ± 2·18 = {287, 289, 359, 361}.
        let input = RelationCombineInput::new(
            vec![Term::one(), Term::nat(4)],
            Term::one(),
            Term::zero(),
            Term::one(),
            "n",
        );
        let m = relation_combine(&input).unwrap();
        for root in [287, 289, 359, 361] {
            assert_eq!(eval_at_n(&m, root), BigInt::from(0), "missing root {root}");
        }
        assert_ne!(eval_at_n(&m, 288), BigInt::from(0));
    }

    #[test]
    fn root_existence_tracks_squareness_on_a_grid() {
        // With B = 1 (divisibility trivial) and D >= 1 (positivity
        // trivial), a natural root exists exactly when A1 is a square.
        for a in 0u64..=12 {
            let input = RelationCombineInput::new(
                vec![Term::nat(a)],
                Term::one(),
                Term::nat(2),
                Term::nat(2),
                "n",
            );
            let m = relation_combine(&input).unwrap();
            let found = (0..=2000).any(|n| eval_at_n(&m, n).is_zero());
            let is_square = {
                let r = BigInt::from(a).sqrt();
                &r * &r == BigInt::from(a)
            };
            assert_eq!(found, is_square, "A1 = {a}");
        }
    }

    #[test]
    fn symbolic_expansion_is_radical_free_up_to_three() {
        for q in 1..=3usize {
            let a_list: Vec<Term> = (1..=q).map(|i| Term::var(format!("a{i}"))).collect();
            let input = RelationCombineInput::new(
                a_list,
                Term::var("b"),
                Term::var("c"),
                Term::var("d"),
                "n",
            )
            .with_w(Term::var("W"));
            let m = relation_combine(&input).unwrap();
            let vars = m.vars();
            assert!(vars.contains("n") && vars.contains("W"), "q = {q}");
        }
    }

    #[test]
    fn empty_and_oversized_lists_are_rejected() {
        let empty = RelationCombineInput::new(
            vec![],
            Term::one(),
            Term::zero(),
            Term::one(),
            "n",
        );
        assert!(matches!(
            relation_combine(&empty),
            Err(Error::EmptyTermList(_))
        ));
        let too_many = RelationCombineInput::new(
            vec![Term::one(); 7],
            Term::one(),
            Term::zero(),
            Term::one(),
            "n",
        );
        assert!(matches!(
            relation_combine(&too_many),
            Err(Error::InvalidArgument(_))
        ));
    }
}
