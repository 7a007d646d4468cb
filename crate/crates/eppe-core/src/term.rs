//! Terms of the object language: polynomials over the naturals extended
//! with truncation-free subtraction and exponentiation.
//!
//! Subtraction is kept as a first-class node rather than being normalised
//! away, because the constructions downstream care about the literal shape
//! of a term (a difference of two purely positive parts) and not only its
//! value.  No constant folding happens in the builders; what you write is
//! what gets emitted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A term over natural-number variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Integer constant.  Builders only ever produce non-negative
    /// constants; negative values can still arise transiently inside
    /// evaluation and are handled everywhere.
    Const(BigInt),
    /// Named variable ranging over the naturals.
    Var(String),
    /// n-ary sum.
    Sum(Vec<Term>),
    /// n-ary product.
    Product(Vec<Term>),
    /// Exact difference `a - b` (the value may be negative; equations
    /// assert it is zero, inequalities control its sign).
    Difference(Box<Term>, Box<Term>),
    /// Exponentiation `base ^ exponent`.
    Power(Box<Term>, Box<Term>),
}

impl Term {
    /// A non-negative integer constant.
    pub fn nat(n: u64) -> Term {
        Term::Const(BigInt::from(n))
    }

    /// A constant from an arbitrary big integer.
    pub fn big(n: BigInt) -> Term {
        Term::Const(n)
    }

    /// A variable.
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn zero() -> Term {
        Term::Const(BigInt::zero())
    }

    pub fn one() -> Term {
        Term::Const(BigInt::one())
    }

    /// `self ^ e`.
    pub fn pow(self, e: Term) -> Term {
        Term::Power(Box::new(self), Box::new(e))
    }

    /// `self ^ e` for a literal exponent.
    pub fn pow_u(self, e: u64) -> Term {
        self.pow(Term::nat(e))
    }

    /// `self ^ 2`.
    pub fn squared(self) -> Term {
        self.pow_u(2)
    }

    /// Flattening n-ary sum; the empty sum is `0`.
    pub fn sum(mut parts: Vec<Term>) -> Term {
        match parts.len() {
            0 => Term::zero(),
            1 => parts.pop().unwrap(),
            _ => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p {
                        Term::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Term::Sum(flat)
            }
        }
    }

    /// Flattening n-ary product; the empty product is `1`.
    pub fn product(mut parts: Vec<Term>) -> Term {
        match parts.len() {
            0 => Term::one(),
            1 => parts.pop().unwrap(),
            _ => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p {
                        Term::Product(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Term::Product(flat)
            }
        }
    }

    /// Sum of the squares of the given terms.
    pub fn sum_of_squares(parts: Vec<Term>) -> Term {
        Term::sum(parts.into_iter().map(|t| t.squared()).collect())
    }

    /// The constant value, if this node is a literal constant.
    pub fn as_const(&self) -> Option<&BigInt> {
        match self {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    /// All variables occurring anywhere in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Sum(ts) | Term::Product(ts) => {
                for t in ts {
                    t.collect_vars(out);
                }
            }
            Term::Difference(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Power(b, e) => {
                b.collect_vars(out);
                e.collect_vars(out);
            }
        }
    }

    /// Capture-free simultaneous substitution of variables by terms.
    /// Variables not in the map are left alone.
    pub fn subst(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Const(_) => self.clone(),
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Sum(ts) => Term::Sum(ts.iter().map(|t| t.subst(map)).collect()),
            Term::Product(ts) => Term::Product(ts.iter().map(|t| t.subst(map)).collect()),
            Term::Difference(a, b) => {
                Term::Difference(Box::new(a.subst(map)), Box::new(b.subst(map)))
            }
            Term::Power(b, e) => Term::Power(Box::new(b.subst(map)), Box::new(e.subst(map))),
        }
    }

    /// Substitute a single variable.
    pub fn subst_one(&self, var: &str, replacement: &Term) -> Term {
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), replacement.clone());
        self.subst(&map)
    }

    /// Polynomial degree of `var` in this term, or `None` when the term is
    /// not polynomial in `var` (the variable occurs in an exponent, or in
    /// the base of a power whose exponent is not a literal constant).
    pub fn degree_in(&self, var: &str) -> Option<u64> {
        match self {
            Term::Const(_) => Some(0),
            Term::Var(v) => Some(if v == var { 1 } else { 0 }),
            Term::Sum(ts) | Term::Product(ts) => {
                let mut acc = 0u64;
                for t in ts {
                    let d = t.degree_in(var)?;
                    if matches!(self, Term::Sum(_)) {
                        acc = acc.max(d);
                    } else {
                        acc = acc.checked_add(d)?;
                    }
                }
                Some(acc)
            }
            Term::Difference(a, b) => Some(a.degree_in(var)?.max(b.degree_in(var)?)),
            Term::Power(b, e) => {
                if e.vars().contains(var) {
                    return None;
                }
                let db = b.degree_in(var)?;
                if db == 0 {
                    return Some(0);
                }
                match e.as_const() {
                    Some(k) => {
                        let k = u64::try_from(k.clone()).ok()?;
                        db.checked_mul(k)
                    }
                    None => None,
                }
            }
        }
    }

    /// Deepest chain of nested `Power` nodes (a tower `2^2^x` has depth 2,
    /// a polynomial has depth at most 1).
    pub fn max_power_depth(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 0,
            Term::Sum(ts) | Term::Product(ts) => {
                ts.iter().map(Term::max_power_depth).max().unwrap_or(0)
            }
            Term::Difference(a, b) => a.max_power_depth().max(b.max_power_depth()),
            Term::Power(b, e) => 1 + b.max_power_depth().max(e.max_power_depth()),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn node_count(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) => 1,
            Term::Sum(ts) | Term::Product(ts) => {
                1 + ts.iter().map(Term::node_count).sum::<usize>()
            }
            Term::Difference(a, b) => 1 + a.node_count() + b.node_count(),
            Term::Power(b, e) => 1 + b.node_count() + e.node_count(),
        }
    }

    /// Write the term in s-expression syntax (the crate's surface syntax).
    pub fn write_sexpr(&self, out: &mut String) {
        match self {
            Term::Const(c) => {
                if c.sign() == num_bigint::Sign::Minus {
                    // The grammar has no negative literals; spell the value
                    // as a difference from zero so output stays parseable.
                    out.push_str("(- 0 ");
                    out.push_str(&(-c).to_string());
                    out.push(')');
                } else {
                    out.push_str(&c.to_string());
                }
            }
            Term::Var(v) => out.push_str(v),
            Term::Sum(ts) => {
                out.push_str("(+");
                for t in ts {
                    out.push(' ');
                    t.write_sexpr(out);
                }
                out.push(')');
            }
            Term::Product(ts) => {
                out.push_str("(*");
                for t in ts {
                    out.push(' ');
                    t.write_sexpr(out);
                }
                out.push(')');
            }
            Term::Difference(a, b) => {
                out.push_str("(- ");
                a.write_sexpr(out);
                out.push(' ');
                b.write_sexpr(out);
                out.push(')');
            }
            Term::Power(b, e) => {
                out.push_str("(^ ");
                b.write_sexpr(out);
                out.push(' ');
                e.write_sexpr(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        f.write_str(&s)
    }
}

impl Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        Term::sum(vec![self, rhs])
    }
}

impl Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        Term::Difference(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Term {
    type Output = Term;
    fn mul(self, rhs: Term) -> Term {
        Term::product(vec![self, rhs])
    }
}

impl From<u64> for Term {
    fn from(n: u64) -> Term {
        Term::nat(n)
    }
}
