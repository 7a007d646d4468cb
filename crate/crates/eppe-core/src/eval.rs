//! Term evaluation over arbitrary-precision integers, guarded by a size
//! budget so that runaway exponentials fail loudly instead of hanging.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::term::Term;
use crate::Result;

/// A (partial) assignment of natural-number values to variables.
pub type Assignment = BTreeMap<String, BigInt>;

/// Resource budget for evaluation: the maximum bit length any intermediate
/// value may reach.  The default (2^20 bits) comfortably covers every
/// desk-scale construction in this crate while stopping astronomically
/// large powers after a few milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_bits: 1 << 20 }
    }
}

impl Budget {
    pub fn with_bits(max_bits: u64) -> Self {
        Budget { max_bits }
    }

    fn check(&self, bits: u64, what: &str) -> Result<()> {
        if bits > self.max_bits {
            Err(Error::BudgetExceeded(format!(
                "{what} would reach about {bits} bits (budget {})",
                self.max_bits
            )))
        } else {
            Ok(())
        }
    }
}

/// Evaluate a term under an assignment.  Every variable occurring in the
/// term must be bound.  The result may be negative (differences are exact).
pub fn eval_term(t: &Term, env: &Assignment, budget: &Budget) -> Result<BigInt> {
    match t {
        Term::Const(c) => Ok(c.clone()),
        Term::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| Error::UnboundVariable(v.clone())),
        Term::Sum(ts) => {
            let mut acc = BigInt::zero();
            for t in ts {
                acc += eval_term(t, env, budget)?;
            }
            Ok(acc)
        }
        Term::Product(ts) => {
            let mut acc = BigInt::one();
            for t in ts {
                let v = eval_term(t, env, budget)?;
                budget.check(acc.bits() + v.bits(), "product")?;
                acc *= v;
                if acc.is_zero() {
                    // Still evaluate the rest for error hygiene?  No: a
                    // zero factor annihilates; remaining factors cannot
                    // change the value and skipping them is what keeps
                    // guarded products (factor * huge-term) affordable.
                    return Ok(acc);
                }
            }
            Ok(acc)
        }
        Term::Difference(a, b) => Ok(eval_term(a, env, budget)? - eval_term(b, env, budget)?),
        Term::Power(base, exp) => {
            let e = eval_term(exp, env, budget)?;
            if e.is_negative() {
                return Err(Error::NegativeExponent(t.to_string()));
            }
            let b = eval_term(base, env, budget)?;
            let e: BigUint = e.to_biguint().expect("checked non-negative");
            pow_budgeted(&b, &e, budget)
        }
    }
}

/// `base ^ exp` by binary exponentiation, with an up-front estimate of the
/// result size checked against the budget.
pub fn pow_budgeted(base: &BigInt, exp: &BigUint, budget: &Budget) -> Result<BigInt> {
    if exp.is_zero() {
        return Ok(BigInt::one()); // 0^0 = 1 by convention
    }
    if base.is_zero() || base.magnitude().is_one() {
        return Ok(if base.is_negative() && exp.bit(0) {
            -BigInt::one()
        } else {
            base.clone().abs().max(base.clone())
        });
    }
    let est = base
        .bits()
        .checked_mul(u64::try_from(exp.clone()).unwrap_or(u64::MAX))
        .unwrap_or(u64::MAX);
    budget.check(est, "power")?;
    let mut acc = BigInt::one();
    let mut sq = base.clone();
    let nbits = exp.bits();
    for i in 0..nbits {
        if exp.bit(i) {
            acc *= &sq;
        }
        if i + 1 < nbits {
            sq = &sq * &sq;
        }
    }
    Ok(acc)
}
