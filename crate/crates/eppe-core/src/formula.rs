//! Quantifier-prefixed formulas: conjunctions of equations `t = 0` under
//! alternating blocks of existential and bounded-universal quantifiers.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::term::Term;
use crate::Result;

/// A formula of the object language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    /// `t = 0`.
    Equation(Term),
    /// Finite conjunction.
    And(Vec<Formula>),
    /// Existential block `∃ v1 … vk . body` over the naturals.
    Exists(Vec<String>, Box<Formula>),
    /// Bounded universal `∀ v < bound . body` (or `v ≤ bound` when
    /// `strict` is false).  The bound may mention outer variables.
    ForallBounded {
        var: String,
        bound: Term,
        strict: bool,
        body: Box<Formula>,
    },
}

/// One block of the quantifier prefix, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixBlock {
    Exists(usize),
    Forall,
}

/// Structural statistics for a formula.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormulaStats {
    /// Quantifier blocks in prefix order, adjacent existential blocks merged.
    pub prefix: Vec<PrefixBlock>,
    /// Total number of existentially quantified variables.
    pub exists_vars: usize,
    /// Total number of bounded universal quantifiers.
    pub forall_vars: usize,
    /// Number of equations in the matrix.
    pub equations: usize,
    /// Total syntax-tree nodes over all equation terms.
    pub term_nodes: usize,
    /// Free variables (the parameters of the formula).
    pub parameters: BTreeSet<String>,
    /// Deepest `Power` nesting over all equation terms and bounds.
    pub max_power_depth: usize,
}

impl Formula {
    pub fn equation(t: Term) -> Formula {
        Formula::Equation(t)
    }

    /// `∃ vars . body`; an empty variable list is just `body`.
    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    /// `∀ var < bound . body`.
    pub fn forall_lt(var: impl Into<String>, bound: Term, body: Formula) -> Formula {
        Formula::ForallBounded {
            var: var.into(),
            bound,
            strict: true,
            body: Box::new(body),
        }
    }

    /// `∀ var ≤ bound . body`.
    pub fn forall_le(var: impl Into<String>, bound: Term, body: Formula) -> Formula {
        Formula::ForallBounded {
            var: var.into(),
            bound,
            strict: false,
            body: Box::new(body),
        }
    }

    /// Conjunction; a single conjunct stays bare.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Variables that occur free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut bound = BTreeSet::new();
        let mut free = BTreeSet::new();
        self.walk_free(&mut bound, &mut free);
        free
    }

    fn walk_free(&self, bound: &mut BTreeSet<String>, free: &mut BTreeSet<String>) {
        match self {
            Formula::Equation(t) => {
                for v in t.vars() {
                    if !bound.contains(&v) {
                        free.insert(v);
                    }
                }
            }
            Formula::And(fs) => {
                for f in fs {
                    f.walk_free(bound, free);
                }
            }
            Formula::Exists(vs, body) => {
                let added: Vec<_> = vs.iter().filter(|v| bound.insert((*v).clone())).collect();
                body.walk_free(bound, free);
                for v in added {
                    bound.remove(v);
                }
            }
            Formula::ForallBounded {
                var, bound: b, body, ..
            } => {
                for v in b.vars() {
                    if !bound.contains(&v) {
                        free.insert(v);
                    }
                }
                let added = bound.insert(var.clone());
                body.walk_free(bound, free);
                if added {
                    bound.remove(var);
                }
            }
        }
    }

    /// Check that no quantifier rebinds a variable already in scope
    /// (including the given ambient parameters).
    pub fn validate_no_rebind(&self, params: &BTreeSet<String>) -> Result<()> {
        fn go(f: &Formula, scope: &mut BTreeSet<String>) -> Result<()> {
            match f {
                Formula::Equation(_) => Ok(()),
                Formula::And(fs) => fs.iter().try_for_each(|f| go(f, scope)),
                Formula::Exists(vs, body) => {
                    for v in vs {
                        if !scope.insert(v.clone()) {
                            return Err(Error::DuplicateVariable(v.clone()));
                        }
                    }
                    go(body, scope)?;
                    for v in vs {
                        scope.remove(v);
                    }
                    Ok(())
                }
                Formula::ForallBounded { var, body, .. } => {
                    if !scope.insert(var.clone()) {
                        return Err(Error::DuplicateVariable(var.clone()));
                    }
                    go(body, scope)?;
                    scope.remove(var);
                    Ok(())
                }
            }
        }
        let mut scope = params.clone();
        go(self, &mut scope)
    }

    /// Structural statistics: prefix shape and matrix size.
    pub fn stats(&self) -> FormulaStats {
        let mut s = FormulaStats::default();
        self.collect_stats(&mut s, true);
        s.parameters = self.free_vars();
        s
    }

    fn collect_stats(&self, s: &mut FormulaStats, in_prefix: bool) {
        match self {
            Formula::Equation(t) => {
                s.equations += 1;
                s.term_nodes += t.node_count();
                s.max_power_depth = s.max_power_depth.max(t.max_power_depth());
            }
            Formula::And(fs) => {
                for f in fs {
                    f.collect_stats(s, false);
                }
            }
            Formula::Exists(vs, body) => {
                s.exists_vars += vs.len();
                if in_prefix {
                    if let Some(PrefixBlock::Exists(n)) = s.prefix.last_mut() {
                        *n += vs.len();
                    } else {
                        s.prefix.push(PrefixBlock::Exists(vs.len()));
                    }
                }
                body.collect_stats(s, in_prefix);
            }
            Formula::ForallBounded { bound, body, .. } => {
                s.forall_vars += 1;
                s.max_power_depth = s.max_power_depth.max(bound.max_power_depth());
                if in_prefix {
                    s.prefix.push(PrefixBlock::Forall);
                }
                body.collect_stats(s, in_prefix);
            }
        }
    }

    /// All equation terms of the matrix, in syntactic order, provided the
    /// formula is a (possibly quantified) conjunction of equations.
    pub fn matrix_equations(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Term>) {
            match f {
                Formula::Equation(t) => out.push(t),
                Formula::And(fs) => fs.iter().for_each(|f| go(f, out)),
                Formula::Exists(_, body) => go(body, out),
                Formula::ForallBounded { body, .. } => go(body, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Write in surface syntax.
    pub fn write_sexpr(&self, out: &mut String) {
        match self {
            Formula::Equation(t) => {
                out.push_str("(= ");
                t.write_sexpr(out);
                out.push_str(" 0)");
            }
            Formula::And(fs) => {
                out.push_str("(and");
                for f in fs {
                    out.push(' ');
                    f.write_sexpr(out);
                }
                out.push(')');
            }
            Formula::Exists(vs, body) => {
                out.push_str("(exists (");
                out.push_str(&vs.join(" "));
                out.push_str(") ");
                body.write_sexpr(out);
                out.push(')');
            }
            Formula::ForallBounded {
                var,
                bound,
                strict,
                body,
            } => {
                out.push_str("(forall (");
                out.push_str(var);
                out.push_str(if *strict { " < " } else { " <= " });
                bound.write_sexpr(out);
                out.push_str(") ");
                body.write_sexpr(out);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        f.write_str(&s)
    }
}
