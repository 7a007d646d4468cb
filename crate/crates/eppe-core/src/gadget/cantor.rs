//! The pairing polynomial J(x, y) = ((x+y)² + 3x + y) / 2, kept doubled so
//! no division appears in any equation.

use crate::term::Term;

/// `2·J(x, y)` as a term: `(x+y)^2 + 3x + y`.
pub fn cantor_double_term(x: &Term, y: &Term) -> Term {
    Term::sum(vec![
        (x.clone() + y.clone()).squared(),
        Term::nat(3) * x.clone(),
        y.clone(),
    ])
}

/// The pin `2z = (x+y)^2 + 3x + y`, i.e. `z = J(x, y)`, as one equation.
pub fn g_cantor_pin(z: &Term, x: &Term, y: &Term) -> Term {
    Term::nat(2) * z.clone() - cantor_double_term(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_term, Assignment, Budget};
    use crate::oracle::cantor_j;
    use num_bigint::{BigInt, BigUint};

    fn eval2(t: &Term, x: u64, y: u64) -> BigInt {
        let mut env = Assignment::new();
        env.insert("x".into(), BigInt::from(x));
        env.insert("y".into(), BigInt::from(y));
        eval_term(t, &env, &Budget::default()).unwrap()
    }

    #[test]
    fn doubled_term_matches_the_pairing_function() {
        let t = cantor_double_term(&Term::var("x"), &Term::var("y"));
        for x in 0..12u64 {
            for y in 0..12u64 {
                let j = cantor_j(&BigUint::from(x), &BigUint::from(y));
                assert_eq!(eval2(&t, x, y), BigInt::from(2u32) * BigInt::from(j));
            }
        }
    }

    #[test]
    fn pin_vanishes_exactly_at_the_pair_code() {
        let pin = g_cantor_pin(&Term::var("z"), &Term::var("x"), &Term::var("y"));
        let j = cantor_j(&BigUint::from(1u32), &BigUint::from(2u32));
        assert_eq!(j, BigUint::from(7u32)); // frozen: J(1,2) = 7
        let mut env = Assignment::new();
        env.insert("x".into(), BigInt::from(1));
        env.insert("y".into(), BigInt::from(2));
        env.insert("z".into(), BigInt::from(7));
        assert_eq!(
            eval_term(&pin, &env, &Budget::default()).unwrap(),
            BigInt::from(0)
        );
        env.insert("z".into(), BigInt::from(8));
        assert_ne!(
            eval_term(&pin, &env, &Budget::default()).unwrap(),
            BigInt::from(0)
        );
    }
}
