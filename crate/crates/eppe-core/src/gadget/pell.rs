//! Membership in the Pell-style sequence ψ: nine equations certifying
//! `C = ψ_A(B)` (for `A > 1`, `B > 0`), where ψ is defined by
//! `ψ_0 = 0`, `ψ_1 = 1`, `ψ_{k+1} = 2·A·ψ_k − ψ_{k−1}`, together with a
//! constructor that solves the system exactly for small true instances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::eval::Assignment;
use crate::ledger::VarLedger;
use crate::oracle::{pell_chi, pell_pair, pell_psi};
use crate::term::Term;
use crate::Result;

use super::GadgetResult;

/// `C = ψ_A(B)` as nine equations over eleven fresh unknowns.
///
/// Fresh unknowns in creation order: `D, E, F, G, H, I` (the six chained
/// quantities), `i, j` (the two free indices), `s` (the square root of
/// `D·F·I`), `t` (the quotient of `H − C` by `F`), `u` (the slack of
/// `B ≤ C`).  Equations in order — six defining, three relational:
///
/// 1. `D − ((A²−1)C² + 1)`
/// 2. `E − 2(i+1)DC²`
/// 3. `F − ((A²−1)E² + 1)`
/// 4. `G − (A + F(F−A))`
/// 5. `H − (B + 2jC)`
/// 6. `I − ((G²−1)H² + 1)`
/// 7. `DFI − s²`        (the product is a perfect square)
/// 8. `Ft + C − H`      (`F` divides `H − C`)
/// 9. `B + u − C`       (`B ≤ C`)
pub fn g_psi(a: &Term, b: &Term, c: &Term) -> GadgetResult {
    let mut ledger = VarLedger::new();
    let d = Term::var(ledger.fresh_named("psi", "D", "D"));
    let e = Term::var(ledger.fresh_named("psi", "E", "E"));
    let f = Term::var(ledger.fresh_named("psi", "F", "F"));
    let g = Term::var(ledger.fresh_named("psi", "G", "G"));
    let h = Term::var(ledger.fresh_named("psi", "H", "H"));
    let i_cap = Term::var(ledger.fresh_named("psi", "I", "I"));
    let i = Term::var(ledger.fresh_named("psi", "i", "i"));
    let j = Term::var(ledger.fresh_named("psi", "j", "j"));
    let s = Term::var(ledger.fresh_named("psi", "s", "s"));
    let t = Term::var(ledger.fresh_named("psi", "t", "t"));
    let u = Term::var(ledger.fresh_named("psi", "u", "u"));

    let a2m1 = a.clone().squared() - Term::one();
    let eqs = vec![
        d.clone() - (a2m1.clone() * c.clone().squared() + Term::one()),
        e.clone()
            - Term::product(vec![
                Term::nat(2),
                i + Term::one(),
                d.clone(),
                c.clone().squared(),
            ]),
        f.clone() - (a2m1.clone() * e.squared() + Term::one()),
        g.clone() - (a.clone() + f.clone() * (f.clone() - a.clone())),
        h.clone()
            - (b.clone() + Term::product(vec![Term::nat(2), j, c.clone()])),
        i_cap.clone() - ((g.squared() - Term::one()) * h.clone().squared() + Term::one()),
        Term::product(vec![d, f.clone(), i_cap]) - s.squared(),
        Term::sum(vec![f * t, c.clone()]) - h,
        Term::sum(vec![b.clone(), u]) - c.clone(),
    ];
    GadgetResult::new(eqs, ledger)
}

/// A full solution of the [`g_psi`] system for a true instance
/// `C = ψ_A(B)`, computed exactly.
///
/// The construction: `D = χ_A(B)²` is automatic; `E` is the first ψ-value
/// divisible by `2DC²` (its index is `e_index`), which makes
/// `F = χ_A(e_index)²`; `G ≡ A (mod F)` and `G ≡ 1 (mod 2C)` then force
/// `H = ψ_G(B)` to satisfy both relational conditions with exact integer
/// quotients `i, j, t`.
#[derive(Debug, Clone)]
pub struct PellWitness {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub f: BigInt,
    pub g: BigInt,
    pub h: BigInt,
    pub i_cap: BigInt,
    pub i: BigInt,
    pub j: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub u: BigInt,
    /// ψ-index of `E`.
    pub e_index: u64,
}

impl PellWitness {
    /// Solve the system for `C = ψ_A(B)`.  Errors when `a < 2` or
    /// `b == 0`, or when the divisibility search exceeds its iteration
    /// cap (only reachable for inputs far beyond desk scale).
    pub fn construct(a: u64, b: u64) -> Result<PellWitness> {
        if a < 2 || b == 0 {
            return Err(Error::InvalidArgument(format!(
                "PellWitness needs a >= 2 and b >= 1, got a={a}, b={b}"
            )));
        }
        let a_big = BigInt::from(a);
        let c = pell_psi(&a_big, b);
        let a2m1 = &a_big * &a_big - 1;
        let d = &a2m1 * &c * &c + 1;
        let chi_b = pell_chi(&a_big, b);
        debug_assert_eq!(d, &chi_b * &chi_b);

        // Find the first psi-value divisible by 2*D*C^2 (the rank of
        // apparition of the modulus), iterating the recurrence modulo m.
        let m = BigInt::from(2) * &d * &c * &c;
        let mut prev = BigInt::zero();
        let mut cur: BigInt = BigInt::one() % &m;
        let mut e_index = 1u64;
        let cap = 1_000_000u64;
        while !cur.is_zero() {
            let next = (BigInt::from(2) * &a_big * &cur - &prev).mod_floor(&m);
            prev = cur;
            cur = next;
            e_index += 1;
            if e_index > cap {
                return Err(Error::BudgetExceeded(format!(
                    "no psi-value divisible by {m} within {cap} indices"
                )));
            }
        }

        let (e, chi_e) = pell_pair(&a_big, e_index);
        let f = &a2m1 * &e * &e + 1;
        debug_assert_eq!(f, &chi_e * &chi_e);
        let i = &e / (BigInt::from(2) * &d * &c * &c) - 1;
        let g = &a_big + &f * (&f - &a_big);

        // H = psi_G(B), computed by the recurrence directly (B is small).
        let h = pell_psi(&g, b);
        let chi_h = pell_chi(&g, b);
        let i_cap = (&g * &g - 1) * &h * &h + 1;
        debug_assert_eq!(i_cap, &chi_h * &chi_h);

        let b_big = BigInt::from(b);
        let (j, jr) = (&h - &b_big).div_rem(&(BigInt::from(2) * &c));
        debug_assert!(jr.is_zero() && !j.is_negative());
        let (t, tr) = (&h - &c).div_rem(&f);
        debug_assert!(tr.is_zero() && !t.is_negative());
        let s = chi_b * chi_e * chi_h;
        let u = &c - &b_big;
        debug_assert!(!u.is_negative());

        Ok(PellWitness {
            a: a_big,
            b: b_big,
            c,
            d,
            e,
            f,
            g,
            h,
            i_cap,
            i,
            j,
            s,
            t,
            u,
            e_index,
        })
    }

    /// Bind the witness values to the fresh unknowns of a [`g_psi`]
    /// result built over variables `a_name`, `b_name`, `c_name`.
    pub fn assignment(
        &self,
        gadget: &GadgetResult,
        a_name: &str,
        b_name: &str,
        c_name: &str,
    ) -> Assignment {
        let vals = [
            &self.d, &self.e, &self.f, &self.g, &self.h, &self.i_cap, &self.i, &self.j,
            &self.s, &self.t, &self.u,
        ];
        let mut env = Assignment::new();
        env.insert(a_name.to_string(), self.a.clone());
        env.insert(b_name.to_string(), self.b.clone());
        env.insert(c_name.to_string(), self.c.clone());
        for (entry, val) in gadget.ledger.entries().iter().zip(vals) {
            env.insert(entry.ident.clone(), (*val).clone());
        }
        env
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_term, Budget};

    #[test]
    fn system_has_nine_equations_and_eleven_unknowns() {
        let g = g_psi(&Term::var("A"), &Term::var("B"), &Term::var("C"));
        assert_eq!(g.equations.len(), 9);
        assert_eq!(g.ledger.len(), 11);
    }

    #[test]
    fn frozen_psi_values() {
        let two = BigInt::from(2);
        assert_eq!(pell_psi(&two, 2), BigInt::from(4));
        assert_eq!(pell_psi(&two, 3), BigInt::from(15));
        assert_eq!(pell_chi(&two, 3), BigInt::from(26));
        // D at (A, C) = (2, 4): 3*16 + 1
        assert_eq!(BigInt::from(3) * 16 + 1, BigInt::from(49));
    }

    #[test]
    fn constructed_witness_zeroes_every_equation() {
        let gadget = g_psi(&Term::var("A"), &Term::var("B"), &Term::var("C"));
        // Generous budget: witness components reach a few thousand bits.
        let budget = Budget::with_bits(1 << 22);
        for (a, b) in [(2u64, 1u64), (3, 1), (2, 2)] {
            let w = PellWitness::construct(a, b).unwrap();
            assert_eq!(w.c, pell_psi(&BigInt::from(a), b));
            let env = w.assignment(&gadget, "A", "B", "C");
            for (k, eq) in gadget.equations.iter().enumerate() {
                let v = eval_term(eq, &env, &budget).unwrap();
                assert!(v.is_zero(), "equation {k} nonzero for a={a} b={b}: {v}");
            }
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(PellWitness::construct(1, 1).is_err());
        assert!(PellWitness::construct(2, 0).is_err());
    }
}
