//! Bounded three-valued checking of sentences.
//!
//! `Holds` and `Fails` are definite; `Unknown` means the bounded search was
//! inconclusive.  The verdict is compositional:
//!
//! * an equation is decided by evaluation;
//! * an existential block either finds and verifies a witness (`Holds`) or
//!   reports `Unknown` — it never claims `Fails`, because the witness
//!   search is bounded;
//! * a bounded universal fails as soon as one instance definitely fails,
//!   holds when every instance holds, and is otherwise `Unknown`.
//!
//! The witness search is not a blind grid scan.  Goals are decomposed
//! structurally (a sum of provably non-negative parts forces every part to
//! zero, a power forces its base to zero, a product branches over its
//! factors), and equations that become linear in a single unknown are
//! solved exactly — which is how witnesses far beyond the nominal search
//! bound are still found when the equations pin them down.  Only the
//! variables that propagation cannot determine are enumerated, in
//! declaration order, from `0` to `search_bound`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::eval::{eval_term, Assignment, Budget};
use crate::formula::Formula;
use crate::term::Term;
use crate::Result;

/// Outcome of a bounded check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Knobs for the bounded search.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Inclusive upper bound for enumerated existential variables.
    /// Variables determined by linear propagation may exceed it.
    pub search_bound: u64,
    /// Evaluation budget; blowups yield `Unknown`, not a hang.
    pub budget: Budget,
    /// Cap on branch nodes explored per sentence; exhaustion yields
    /// `Unknown`.
    pub max_nodes: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            search_bound: 10,
            budget: Budget::default(),
            max_nodes: 1 << 22,
        }
    }
}

/// Check a sentence (a formula whose free variables are all bound by
/// `env`).  Deterministic for fixed inputs and configuration.
pub fn check_sentence(f: &Formula, env: &Assignment, cfg: &CheckConfig) -> Result<Verdict> {
    let params = env.keys().cloned().collect();
    f.validate_no_rebind(&params)?;
    let mut nodes = cfg.max_nodes;
    check_inner(f, env, cfg, &mut nodes)
}

/// Search for a witness of an outermost existential block.  Returns the
/// extended assignment on success.  Variables the equations do not
/// constrain are set to zero.  `None` means no witness was found with all
/// enumerated variables at most `search_bound` (propagated variables may
/// exceed the bound; that is reported as found, not clamped).
pub fn find_exists_witness(
    f: &Formula,
    env: &Assignment,
    cfg: &CheckConfig,
) -> Result<Option<Assignment>> {
    let (vars, body) = match f {
        Formula::Exists(vs, body) => (vs.clone(), body.as_ref()),
        _ => {
            return Err(Error::ShapeMismatch(
                "find_exists_witness expects an outermost existential block".into(),
            ))
        }
    };
    let mut nodes = cfg.max_nodes;
    solve_exists(&vars, body, env, cfg, &mut nodes)
}

fn check_inner(
    f: &Formula,
    env: &Assignment,
    cfg: &CheckConfig,
    nodes: &mut u64,
) -> Result<Verdict> {
    match f {
        Formula::Equation(t) => match eval_term(t, env, &cfg.budget) {
            Ok(v) => Ok(if v.is_zero() {
                Verdict::Holds
            } else {
                Verdict::Fails
            }),
            Err(Error::BudgetExceeded(_)) => Ok(Verdict::Unknown),
            Err(e) => Err(e),
        },
        Formula::And(fs) => {
            let mut out = Verdict::Holds;
            for f in fs {
                match check_inner(f, env, cfg, nodes)? {
                    Verdict::Fails => return Ok(Verdict::Fails),
                    Verdict::Unknown => out = Verdict::Unknown,
                    Verdict::Holds => {}
                }
            }
            Ok(out)
        }
        Formula::Exists(vs, body) => match solve_exists(vs, body, env, cfg, nodes) {
            Ok(Some(_)) => Ok(Verdict::Holds),
            Ok(None) => Ok(Verdict::Unknown),
            Err(Error::BudgetExceeded(_)) => Ok(Verdict::Unknown),
            Err(e) => Err(e),
        },
        Formula::ForallBounded {
            var,
            bound,
            strict,
            body,
        } => {
            let b = match eval_term(bound, env, &cfg.budget) {
                Ok(v) => v,
                Err(Error::BudgetExceeded(_)) => return Ok(Verdict::Unknown),
                Err(e) => return Err(e),
            };
            let last = if *strict { b - 1 } else { b };
            let mut out = Verdict::Holds;
            let mut v = BigInt::zero();
            while v <= last {
                if *nodes == 0 {
                    return Ok(Verdict::Unknown);
                }
                *nodes -= 1;
                let mut env2 = env.clone();
                env2.insert(var.clone(), v.clone());
                match check_inner(body, &env2, cfg, nodes)? {
                    Verdict::Fails => return Ok(Verdict::Fails),
                    Verdict::Unknown => out = Verdict::Unknown,
                    Verdict::Holds => {}
                }
                v += 1;
            }
            Ok(out)
        }
    }
}

/// A goal of the witness search.
#[derive(Debug, Clone)]
enum Goal {
    /// Equation `t = 0`, kept atomic.
    Eq(Term),
    /// `f1 * … * fk = 0`: at least one factor must vanish.
    AnyZero(Vec<Term>),
    /// A quantified subformula that must hold.
    Sub(Formula),
}

/// Split `t = 0` into as many independent goals as its shape supports.
fn decompose(t: &Term, out: &mut Vec<Goal>) {
    match t {
        Term::Sum(parts) if parts.iter().all(syntactically_nonneg) => {
            for p in parts {
                decompose(p, out);
            }
        }
        Term::Power(base, exp) => {
            // base^e = 0 with a literal e >= 1 forces base = 0
            if matches!(exp.as_const(), Some(k) if k.is_positive()) {
                decompose(base, out);
            } else {
                out.push(Goal::Eq(t.clone()));
            }
        }
        Term::Product(parts) => out.push(Goal::AnyZero(parts.clone())),
        _ => out.push(Goal::Eq(t.clone())),
    }
}

/// Conservative check that a term cannot evaluate to a negative number
/// under any assignment of naturals.
fn syntactically_nonneg(t: &Term) -> bool {
    match t {
        Term::Const(c) => !c.is_negative(),
        Term::Var(_) => true,
        Term::Sum(ts) | Term::Product(ts) => ts.iter().all(syntactically_nonneg),
        Term::Difference(_, _) => false,
        Term::Power(base, exp) => {
            matches!(exp.as_const(), Some(k) if k.is_even() && !k.is_negative())
                || syntactically_nonneg(base)
        }
    }
}

fn flatten_goals(f: &Formula, goals: &mut Vec<Goal>, vars: &mut Vec<String>) {
    match f {
        Formula::Equation(t) => decompose(t, goals),
        Formula::And(fs) => {
            for f in fs {
                flatten_goals(f, goals, vars);
            }
        }
        Formula::Exists(vs, body) => {
            vars.extend(vs.iter().cloned());
            flatten_goals(body, goals, vars);
        }
        Formula::ForallBounded { .. } => goals.push(Goal::Sub(f.clone())),
    }
}

fn solve_exists(
    vars: &[String],
    body: &Formula,
    env: &Assignment,
    cfg: &CheckConfig,
    nodes: &mut u64,
) -> Result<Option<Assignment>> {
    let mut goals = Vec::new();
    let mut all_vars = vars.to_vec();
    flatten_goals(body, &mut goals, &mut all_vars);
    let mut env = env.clone();
    match search(&mut goals, &all_vars, &mut env, cfg, nodes)? {
        true => {
            // Unconstrained declared variables default to zero.
            for v in &all_vars {
                env.entry(v.clone()).or_insert_with(BigInt::zero);
            }
            Ok(Some(env))
        }
        false => Ok(None),
    }
}

/// Depth-first search with propagation.  Returns whether a witness was
/// completed; `env` holds it on success.
fn search(
    goals: &mut Vec<Goal>,
    order: &[String],
    env: &mut Assignment,
    cfg: &CheckConfig,
    nodes: &mut u64,
) -> Result<bool> {
    if *nodes == 0 {
        return Err(Error::BudgetExceeded("witness search node limit".into()));
    }
    *nodes -= 1;

    let mut goals = match propagate(goals, env, cfg, nodes)? {
        Some(g) => g,
        None => return Ok(false), // contradiction on this branch
    };
    if goals.is_empty() {
        return Ok(true);
    }

    // Disjunctive branching on the first product goal.
    if let Some(i) = goals.iter().position(|g| matches!(g, Goal::AnyZero(_))) {
        let factors = match goals.remove(i) {
            Goal::AnyZero(fs) => fs,
            _ => unreachable!(),
        };
        for factor in &factors {
            let mut sub = goals.clone();
            let mut fg = Vec::new();
            decompose(factor, &mut fg);
            sub.extend(fg);
            let mut env2 = env.clone();
            if search(&mut sub, order, &mut env2, cfg, nodes)? {
                *env = env2;
                return Ok(true);
            }
        }
        return Ok(false);
    }

    // Enumerate the first undetermined declared variable that matters.
    let needed: std::collections::BTreeSet<String> = goals
        .iter()
        .flat_map(|g| match g {
            Goal::Eq(t) => t.vars(),
            Goal::AnyZero(ts) => ts.iter().flat_map(Term::vars).collect(),
            Goal::Sub(f) => f.free_vars(),
        })
        .collect();
    let pick = order
        .iter()
        .find(|v| !env.contains_key(*v) && needed.contains(*v));
    let var = match pick {
        Some(v) => v.clone(),
        // Goals remain but mention no enumerable variable: they were
        // ground or sub-formula goals propagation could not discharge.
        None => return Ok(false),
    };
    for val in 0..=cfg.search_bound {
        let mut env2 = env.clone();
        env2.insert(var.clone(), BigInt::from(val));
        let mut sub = goals.clone();
        if search(&mut sub, order, &mut env2, cfg, nodes)? {
            *env = env2;
            return Ok(true);
        }
    }
    Ok(false)
}

/// Run propagation to a fixpoint.  Returns the remaining goals, or `None`
/// when a goal is definitely violated.
fn propagate(
    goals: &mut Vec<Goal>,
    env: &mut Assignment,
    cfg: &CheckConfig,
    nodes: &mut u64,
) -> Result<Option<Vec<Goal>>> {
    let mut work: Vec<Goal> = goals.drain(..).collect();
    loop {
        let mut changed = false;
        let mut keep: Vec<Goal> = Vec::with_capacity(work.len());
        for goal in work.drain(..) {
            match goal {
                Goal::Eq(t) => {
                    let unassigned: Vec<String> = t
                        .vars()
                        .into_iter()
                        .filter(|v| !env.contains_key(v))
                        .collect();
                    match unassigned.len() {
                        0 => match eval_term(&t, env, &cfg.budget) {
                            Ok(v) if v.is_zero() => changed = true,
                            Ok(_) => return Ok(None),
                            Err(Error::BudgetExceeded(_)) => return Ok(None),
                            Err(e) => return Err(e),
                        },
                        1 if t.degree_in(&unassigned[0]) == Some(1) => {
                            let v = &unassigned[0];
                            match solve_linear(&t, v, env, &cfg.budget)? {
                                LinearOutcome::Assign(val) => {
                                    env.insert(v.clone(), val);
                                    changed = true;
                                }
                                LinearOutcome::NoSolution => return Ok(None),
                                LinearOutcome::Tautology => changed = true,
                                LinearOutcome::Undetermined => keep.push(Goal::Eq(t)),
                            }
                        }
                        _ => keep.push(Goal::Eq(t)),
                    }
                }
                Goal::AnyZero(factors) => {
                    let mut ground_and_nonzero = 0usize;
                    let mut satisfied = false;
                    for f in &factors {
                        if f.vars().iter().all(|v| env.contains_key(v)) {
                            match eval_term(f, env, &cfg.budget) {
                                Ok(v) if v.is_zero() => {
                                    satisfied = true;
                                    break;
                                }
                                Ok(_) => ground_and_nonzero += 1,
                                Err(Error::BudgetExceeded(_)) => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                    if satisfied {
                        changed = true;
                    } else if ground_and_nonzero == factors.len() {
                        return Ok(None);
                    } else {
                        keep.push(Goal::AnyZero(factors));
                    }
                }
                Goal::Sub(f) => {
                    if f.free_vars().iter().all(|v| env.contains_key(v)) {
                        match check_inner(&f, env, cfg, nodes)? {
                            Verdict::Holds => changed = true,
                            // An instance we cannot verify cannot serve as
                            // part of a witness.
                            Verdict::Fails | Verdict::Unknown => return Ok(None),
                        }
                    } else {
                        keep.push(Goal::Sub(f));
                    }
                }
            }
        }
        if !changed {
            return Ok(Some(keep));
        }
        work = keep;
    }
}

enum LinearOutcome {
    Assign(BigInt),
    NoSolution,
    Tautology,
    Undetermined,
}

/// Solve `t = 0` for `v` when `t` is linear in `v` and every other
/// variable is assigned: write `t = a*v + c` by evaluating at `v = 0` and
/// `v = 1`, then require an exact natural solution.
fn solve_linear(
    t: &Term,
    v: &str,
    env: &Assignment,
    budget: &Budget,
) -> Result<LinearOutcome> {
    let mut env0 = env.clone();
    env0.insert(v.to_string(), BigInt::zero());
    let c = match eval_term(t, &env0, budget) {
        Ok(x) => x,
        Err(Error::BudgetExceeded(_)) => return Ok(LinearOutcome::Undetermined),
        Err(e) => return Err(e),
    };
    env0.insert(v.to_string(), BigInt::from(1u32));
    let a = match eval_term(t, &env0, budget) {
        Ok(x) => x - &c,
        Err(Error::BudgetExceeded(_)) => return Ok(LinearOutcome::Undetermined),
        Err(e) => return Err(e),
    };
    if a.is_zero() {
        return Ok(if c.is_zero() {
            LinearOutcome::Tautology
        } else {
            LinearOutcome::NoSolution
        });
    }
    let (q, r) = (-c).div_rem(&a);
    if !r.is_zero() || q.is_negative() {
        Ok(LinearOutcome::NoSolution)
    } else {
        Ok(LinearOutcome::Assign(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn ground_equations_decide() {
        let holds = Formula::equation(Term::nat(2) - Term::nat(2));
        let fails = Formula::equation(Term::nat(2) - Term::nat(3));
        assert_eq!(
            check_sentence(&holds, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            check_sentence(&fails, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Fails
        );
    }

    #[test]
    fn exists_finds_linear_witness_beyond_bound() {
        // x - 1000 = 0 has its witness determined by propagation even
        // though 1000 far exceeds the search bound.
        let f = Formula::exists(
            vec!["x".into()],
            Formula::equation(Term::var("x") - Term::nat(1000)),
        );
        let w = find_exists_witness(&f, &Assignment::new(), &cfg())
            .unwrap()
            .unwrap();
        assert_eq!(w["x"], BigInt::from(1000u32));
    }

    #[test]
    fn exists_never_fails() {
        // unsatisfiable over naturals, but the verdict is Unknown
        let f = Formula::exists(
            vec!["x".into()],
            Formula::equation(Term::var("x") + Term::nat(1)),
        );
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn sum_of_squares_decomposes() {
        // (x-3)^2 + (y-x-1)^2 = 0 pins x=3, y=4
        let m = (Term::var("x") - Term::nat(3)).squared()
            + (Term::var("y") - Term::var("x") - Term::nat(1)).squared();
        let f = Formula::exists(vec!["x".into(), "y".into()], Formula::equation(m));
        let w = find_exists_witness(&f, &Assignment::new(), &cfg())
            .unwrap()
            .unwrap();
        assert_eq!(w["x"], BigInt::from(3u32));
        assert_eq!(w["y"], BigInt::from(4u32));
    }

    #[test]
    fn product_goal_branches() {
        // (x-5)(x-2) = 0 and x+y=7 -> first factor tried first, x=5, y=2
        let m = ((Term::var("x") - Term::nat(5)) * (Term::var("x") - Term::nat(2))).squared()
            + (Term::var("x") + Term::var("y") - Term::nat(7)).squared();
        let f = Formula::exists(vec!["x".into(), "y".into()], Formula::equation(m));
        let w = find_exists_witness(&f, &Assignment::new(), &cfg())
            .unwrap()
            .unwrap();
        assert_eq!(w["x"], BigInt::from(5u32));
        assert_eq!(w["y"], BigInt::from(2u32));
    }

    #[test]
    fn forall_fails_on_definite_counterexample() {
        // forall y < 3 . (y - 2) = 0 fails at y = 0
        let f = Formula::forall_lt("y", Term::nat(3), Formula::equation(Term::var("y") - Term::nat(2)));
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Fails
        );
    }

    #[test]
    fn forall_with_empty_range_holds_vacuously() {
        let f = Formula::forall_lt("y", Term::zero(), Formula::equation(Term::nat(1)));
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn alternating_prefix_resolves() {
        // exists b . forall y < b+1 . exists x . x - y^2 = 0, witness b = 0..bound all fine
        let body = Formula::forall_lt(
            "y",
            Term::var("b") + Term::one(),
            Formula::exists(
                vec!["x".into()],
                Formula::equation(Term::var("x") - Term::var("y").squared()),
            ),
        );
        let f = Formula::exists(vec!["b".into()], body);
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &cfg()).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn verdicts_are_monotone_in_bound() {
        // x^2 = 49 cannot be solved by linear propagation, so the witness
        // only appears once the enumeration reaches 7.
        let f = Formula::exists(
            vec!["x".into(), "y".into()],
            Formula::equation(
                (Term::var("x").squared() - Term::nat(49)).squared()
                    + (Term::var("y") - Term::var("x")).squared(),
            ),
        );
        let mut small = cfg();
        small.search_bound = 3;
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &small).unwrap(),
            Verdict::Unknown
        );
        let mut big = cfg();
        big.search_bound = 7;
        assert_eq!(
            check_sentence(&f, &Assignment::new(), &big).unwrap(),
            Verdict::Holds
        );
    }
}
