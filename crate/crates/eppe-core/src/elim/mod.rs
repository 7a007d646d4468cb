//! Quantifier manipulations.
//!
//! Two transformations, usable separately or chained:
//!
//! * [`collapse_pair_quantifiers`] merges two adjacent bounded universal
//!   quantifiers into one by pairing the two counters into a single code.
//! * [`eliminate_buq`] removes a bounded universal quantifier entirely:
//!   `∀y<b ∃x₁…x_m [G = 0]` becomes `m + 3` arithmetic conditions over
//!   fresh unknowns `q, w, z₀…z_m`, where a single `z_l`, read modulo the
//!   pairwise-coprime factors of `C(q, b)`, carries the witness `x_l` for
//!   every instance of `y` at once.
//!
//! [`flatten`] then rewrites those conditions as one prefixed polynomial
//! equation, and [`construct_dpr_witness`] builds (and self-validates) a
//! numeric solution of the conditions from explicit per-instance
//! witnesses, which is how the whole elimination is tested.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::eval::{eval_term, Assignment, Budget};
use crate::gadget::binomial::{push_binomial_expdioph, push_div_binomial};
use crate::gadget::bounds::build_b_bound;
use crate::gadget::cantor::g_cantor_pin;
use crate::gadget::group_term;
use crate::ledger::VarLedger;
use crate::oracle;
use crate::term::Term;
use crate::{Formula, Result};

/// Largest value accepted where a variable has to become a machine-sized
/// count (a binomial depth or an exponent during witness derivation).
const COUNT_CAP: u64 = 1 << 20;

fn lookup<'a>(env: &'a Assignment, name: &str) -> Result<&'a BigInt> {
    env.get(name)
        .ok_or_else(|| Error::UnboundVariable(name.to_string()))
}

fn small_count(value: &BigInt, what: &str) -> Result<u64> {
    match value.to_u64() {
        Some(v) if v <= COUNT_CAP => Ok(v),
        _ => Err(Error::BudgetExceeded(format!(
            "{what} = {value} exceeds the evaluable range"
        ))),
    }
}

/// A formula of the shape `∃ā ∀y<b ∃x₁…x_m [G = 0]` (the outer block and
/// the inner block may each be empty, and the bound may be inclusive),
/// decomposed into its parts.
#[derive(Debug, Clone)]
pub struct BuqInstance {
    /// Outermost existentials; they are re-bound around the eliminated
    /// system.
    pub carried: Vec<String>,
    /// The bounded universal variable.
    pub bound_var: String,
    /// Its bound, as written.
    pub bound: Term,
    /// Whether the bound is strict (`y < b`) or inclusive (`y ≤ b`).
    pub strict: bool,
    /// The inner existentials, in order.
    pub inner: Vec<String>,
    /// The matrix equation's left-hand side.
    pub matrix: Term,
    /// Variables left free by the formula.
    pub params: Vec<String>,
}

impl BuqInstance {
    pub fn from_formula(f: &Formula) -> Result<BuqInstance> {
        let params: Vec<String> = f.free_vars().into_iter().collect();
        let (carried, rest) = match f {
            Formula::Exists(vs, body) => (vs.clone(), body.as_ref()),
            other => (Vec::new(), other),
        };
        let Formula::ForallBounded {
            var,
            bound,
            strict,
            body,
        } = rest
        else {
            return Err(Error::ShapeMismatch(
                "expected a bounded universal quantifier after the outer existentials".into(),
            ));
        };
        let (inner, goal) = match body.as_ref() {
            Formula::Exists(vs, b) => (vs.clone(), b.as_ref()),
            other => (Vec::new(), other),
        };
        let Formula::Equation(matrix) = goal else {
            return Err(Error::ShapeMismatch(
                "expected a single equation under the inner existentials".into(),
            ));
        };
        Ok(BuqInstance {
            carried,
            bound_var: var.clone(),
            bound: bound.clone(),
            strict: *strict,
            inner,
            matrix: matrix.clone(),
            params,
        })
    }

    /// How many instances the universal ranges over, as a term: `b` for a
    /// strict bound, `b + 1` for an inclusive one.
    pub fn range_size(&self) -> Term {
        if self.strict {
            self.bound.clone()
        } else {
            self.bound.clone() + Term::one()
        }
    }

    /// A term dominating every value the universal variable takes.
    pub fn var_dominator(&self) -> Term {
        self.bound.clone()
    }
}

/// Merge `∃ā ∀x≤b₁ ∀y≤b₂ ∃x̄ [E = 0]` into a single bounded universal:
///
/// ```text
/// ∃ā,z ∀t<z+1 ∃x,y,x̄,g₁,g₂
///   [(2z − D(b₁,b₂))² + (2t − D(x,y))² + ((b₁+1+g₁−x)(b₂+1+g₂−y)·E)² = 0]
/// ```
///
/// where `D(x, y) = (x+y)² + 3x + y` is twice the pairing code.  The
/// first pin fixes `z` to the code of the corner `(b₁, b₂)`; the second
/// recovers the unique pair coded by `t`; pairs outside the original box
/// are discharged by zeroing a guard factor, which is possible exactly
/// when `x > b₁` (resp. `y > b₂`).  The inner bound must not mention the
/// outer universal variable, and the transformation presumes both ranges
/// are nonempty (the pairing pin has no solution over an empty box).
pub fn collapse_pair_quantifiers(f: &Formula) -> Result<(Formula, VarLedger)> {
    let (carried, rest) = match f {
        Formula::Exists(vs, body) => (vs.clone(), body.as_ref()),
        other => (Vec::new(), other),
    };
    let Formula::ForallBounded {
        var: x,
        bound: b1,
        strict: s1,
        body,
    } = rest
    else {
        return Err(Error::ShapeMismatch(
            "expected two adjacent bounded universal quantifiers".into(),
        ));
    };
    let Formula::ForallBounded {
        var: y,
        bound: b2,
        strict: s2,
        body: inner_body,
    } = body.as_ref()
    else {
        return Err(Error::ShapeMismatch(
            "expected a second bounded universal quantifier".into(),
        ));
    };
    if b2.vars().contains(x) {
        return Err(Error::ShapeMismatch(
            "the inner bound may not mention the outer universal variable".into(),
        ));
    }
    let (inner, goal) = match inner_body.as_ref() {
        Formula::Exists(vs, b) => (vs.clone(), b.as_ref()),
        other => (Vec::new(), other),
    };
    let Formula::Equation(matrix) = goal else {
        return Err(Error::ShapeMismatch(
            "expected a single equation under the paired universals".into(),
        ));
    };

    let max1 = if *s1 { b1.clone() - Term::one() } else { b1.clone() };
    let max2 = if *s2 { b2.clone() - Term::one() } else { b2.clone() };

    let mut ledger = VarLedger::new();
    let z = ledger.fresh_named("pair", "z", "z");
    let t = ledger.fresh_named("pair", "t", "t");
    let gx = ledger.fresh("pair", "gx");
    let gy = ledger.fresh("pair", "gy");

    let pin_corner = g_cantor_pin(&Term::var(z.clone()), &max1, &max2);
    let pin_instance = g_cantor_pin(&Term::var(t.clone()), &Term::var(x), &Term::var(y));
    let guard_x =
        Term::sum(vec![max1, Term::one(), Term::var(gx.clone())]) - Term::var(x.clone());
    let guard_y =
        Term::sum(vec![max2, Term::one(), Term::var(gy.clone())]) - Term::var(y.clone());
    let total = pin_corner.squared()
        + pin_instance.squared()
        + Term::product(vec![guard_x, guard_y, matrix.clone()]).squared();

    let mut exist_vars = vec![x.clone(), y.clone()];
    exist_vars.extend(inner);
    exist_vars.push(gx);
    exist_vars.push(gy);
    let body = Formula::exists(exist_vars, Formula::equation(total));
    let one_forall = Formula::forall_lt(&t, Term::var(z.clone()) + Term::one(), body);
    let mut outer = carried;
    outer.push(z);
    Ok((Formula::exists(outer, one_forall), ledger))
}

/// One condition of an eliminated system.
#[derive(Debug, Clone)]
pub enum Condition {
    /// `C(q, count)` divides the matrix, with the universal variable read
    /// as `z₀` and each inner existential as its `z_l`.
    CongruenceModBinomial {
        q: String,
        count: Term,
        matrix: Term,
    },
    /// `var = equals`.
    Identity { var: String, equals: String },
    /// `q` exceeds the bound that makes the coprime factors of
    /// `C(q, count)` large enough to carry the witnesses.
    StrongInequality { q: String, bound: Term },
    /// `C(q, count)` divides `C(z, w)`.
    DividesBinomial {
        q: String,
        count: Term,
        z: String,
        w: String,
    },
}

impl Condition {
    fn binom_of(env: &Assignment, budget: &Budget, q: &str, count: &Term) -> Result<BigInt> {
        let qv = lookup(env, q)?;
        let cv = eval_term(count, env, budget)?;
        Ok(oracle::binomial(qv, small_count(&cv, "binomial depth")?))
    }

    /// Evaluate the condition at a full assignment.
    pub fn evaluate(&self, env: &Assignment, budget: &Budget) -> Result<bool> {
        match self {
            Condition::CongruenceModBinomial { q, count, matrix } => {
                let modulus = Self::binom_of(env, budget, q, count)?;
                let value = eval_term(matrix, env, budget)?;
                if modulus.is_zero() {
                    return Ok(value.is_zero());
                }
                Ok(value.mod_floor(&modulus).is_zero())
            }
            Condition::Identity { var, equals } => Ok(lookup(env, var)? == lookup(env, equals)?),
            Condition::StrongInequality { q, bound } => {
                Ok(*lookup(env, q)? > eval_term(bound, env, budget)?)
            }
            Condition::DividesBinomial { q, count, z, w } => {
                let modulus = Self::binom_of(env, budget, q, count)?;
                let zv = lookup(env, z)?;
                let wv = small_count(lookup(env, w)?, "binomial depth")?;
                let value = oracle::binomial(zv, wv);
                if modulus.is_zero() {
                    return Ok(value.is_zero());
                }
                Ok(value.mod_floor(&modulus).is_zero())
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::CongruenceModBinomial { q, count, matrix } => {
                write!(f, "(divides (binom {q} {count}) {matrix})")
            }
            Condition::Identity { var, equals } => write!(f, "(= {var} {equals})"),
            Condition::StrongInequality { q, bound } => write!(f, "(> {q} {bound})"),
            Condition::DividesBinomial { q, count, z, w } => {
                write!(f, "(divides (binom {q} {count}) (binom {z} {w}))")
            }
        }
    }
}

/// The `m + 3` conditions equivalent to a [`BuqInstance`], plus the data
/// needed to flatten them or to build witnesses for them.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    /// Congruence, identity, strong inequality, then one divisibility
    /// per inner existential.
    pub conditions: Vec<Condition>,
    /// Carried variables, then `q`, `w`, `z₀…z_m`.
    pub ledger: VarLedger,
    pub instance: BuqInstance,
    pub q: String,
    pub w: String,
    /// `z[0]` mirrors `q`; `z[l]` carries inner witness `l`.
    pub z: Vec<String>,
    /// Range size of the eliminated universal.
    pub count: Term,
    /// Dominating bound on the matrix over the range (mentions `w`).
    pub b_bound: Term,
    /// Right-hand side of the strong inequality on `q`.
    pub strong_bound: Term,
    /// The matrix with universal and inner variables replaced by the
    /// shared unknowns.
    pub matrix_z: Term,
}

impl EquationSystem {
    /// Evaluate every condition at a full assignment.
    pub fn evaluate(&self, env: &Assignment, budget: &Budget) -> Result<Vec<bool>> {
        self.conditions
            .iter()
            .map(|c| c.evaluate(env, budget))
            .collect()
    }

    pub fn holds(&self, env: &Assignment, budget: &Budget) -> Result<bool> {
        Ok(self.evaluate(env, budget)?.into_iter().all(|b| b))
    }
}

/// Eliminate the bounded universal quantifier of a [`BuqInstance`]-shaped
/// formula.  The resulting conditions assert, over fresh `q, w, z₀…z_m`:
///
/// 1. `C(q, b)` divides `G(z₀, z₁, …, z_m)`;
/// 2. `z₀ = q`;
/// 3. `q > b + (b+1)^{b+1}·((b+1)^{b+1}·B)^{w^m}`, with `B` a bound
///    dominating the matrix over the range;
/// 4. `C(q, b)` divides `C(z_l, w)` for each `l`.
///
/// `C(q, b)` factors as `∏_{j=1}^{b} (q+1−j)/j`; once `q ≡ −1` modulo a
/// deep enough factorial power, the factors are pairwise coprime and
/// `q ≡ j − 1` modulo the `j`-th one, so conditions (1), (2) and (4)
/// read: for each instance `j − 1` of the universal variable, the
/// residues of the `z_l` are small witnesses solving the matrix.  The
/// strong inequality makes the factors large enough that nothing else
/// fits.
pub fn eliminate_buq(f: &Formula) -> Result<EquationSystem> {
    let instance = BuqInstance::from_formula(f)?;
    let m = instance.inner.len();

    let mut ledger = VarLedger::new();
    for v in &instance.carried {
        ledger.note_existing(v, "carried", Some(v));
    }
    let q = ledger.fresh_named("buq", "q", "q");
    let w = ledger.fresh_named("buq", "w", "w");
    let z: Vec<String> = (0..=m)
        .map(|l| ledger.fresh_named("buq", "z", &format!("z{l}")))
        .collect();

    let count = instance.range_size();

    let mut to_z = BTreeMap::new();
    to_z.insert(instance.bound_var.clone(), Term::var(z[0].clone()));
    for (l, v) in instance.inner.iter().enumerate() {
        to_z.insert(v.clone(), Term::var(z[l + 1].clone()));
    }
    let matrix_z = instance.matrix.subst(&to_z);

    let mut dominators = BTreeMap::new();
    dominators.insert(instance.bound_var.clone(), instance.var_dominator());
    for v in &instance.inner {
        dominators.insert(v.clone(), Term::var(w.clone()));
    }
    let b_bound = build_b_bound(&instance.matrix, &dominators);

    let size_p1 = count.clone() + Term::one();
    let tower = size_p1.clone().pow(size_p1);
    let strong_bound = count.clone()
        + tower.clone()
            * (tower * b_bound.clone()).pow(Term::var(w.clone()).pow_u(m as u64));

    let mut conditions = vec![
        Condition::CongruenceModBinomial {
            q: q.clone(),
            count: count.clone(),
            matrix: matrix_z.clone(),
        },
        Condition::Identity {
            var: z[0].clone(),
            equals: q.clone(),
        },
        Condition::StrongInequality {
            q: q.clone(),
            bound: strong_bound.clone(),
        },
    ];
    for zl in z.iter().skip(1) {
        conditions.push(Condition::DividesBinomial {
            q: q.clone(),
            count: count.clone(),
            z: zl.clone(),
            w: w.clone(),
        });
    }

    Ok(EquationSystem {
        conditions,
        ledger,
        instance,
        q,
        w,
        z,
        count,
        b_bound,
        strong_bound,
        matrix_z,
    })
}

/// Idents of the unknowns a [`flatten`] run introduces, by role.
#[derive(Debug, Clone)]
pub struct FlattenNames {
    pub carried: Vec<String>,
    pub q: String,
    pub w: String,
    pub z: Vec<String>,
    /// `C(q, count)`, pinned by digit extraction.
    pub y1: String,
    /// Slack of the strong inequality.
    pub y2: String,
    /// Remainder split of the congruence: remainder, remainder bound
    /// slack, quotient.
    pub j: [String; 3],
    /// One divisibility block per `z_l`.
    pub blocks: Vec<DivBlock>,
    /// Digit-extraction unknowns pinning `y1`.
    pub h: [String; 5],
}

/// The four unknowns of one `C(q,b) | C(z_l, w)` block.
#[derive(Debug, Clone)]
pub struct DivBlock {
    pub p: String,
    pub r: String,
    pub m: String,
    pub s: String,
}

/// An eliminated system rewritten as a single prefixed equation.
#[derive(Debug, Clone)]
pub struct FlattenResult {
    /// `∃(all unknowns) [total = 0]`, parameters free.
    pub formula: Formula,
    /// Every bound unknown, in quantifier order.
    pub ledger: VarLedger,
    pub names: FlattenNames,
    /// The congruence target actually used: the substituted matrix, or
    /// its square if the matrix is not syntactically nonnegative.
    pub congruence_target: Term,
    pub notes: Vec<String>,
}

impl FlattenResult {
    pub fn unknown_count(&self) -> usize {
        self.ledger.len()
    }

    /// A representative copy of the per-index divisibility block with
    /// placeholder names (`z_l`, `f_l`, `g_l`, `m_l`, `s_l`), for
    /// emitters that print the tail of the equation as a summation
    /// rather than one copy per index.  Rendering-only.
    pub fn generic_block(&self) -> Vec<Term> {
        let y1 = Term::var("y1");
        let w = Term::var("w");
        let z = Term::var("z_l");
        let (p, r, m, s) = (
            Term::var("f_l"),
            Term::var("g_l"),
            Term::var("m_l"),
            Term::var("s_l"),
        );
        let u = y1.clone() * Term::nat(2).pow(z.clone());
        let u_w = u.clone().pow(w);
        vec![
            p.clone() * u_w.clone() + r.clone() - (u + Term::one()).pow(z),
            Term::sum(vec![r, m, Term::one()]) - u_w,
            y1 * s - p,
        ]
    }
}

/// Conservative syntactic positivity: no differences anywhere.
fn syntactically_nonneg(t: &Term) -> bool {
    match t {
        Term::Const(c) => !c.is_negative(),
        Term::Var(_) => true,
        Term::Sum(parts) | Term::Product(parts) => parts.iter().all(syntactically_nonneg),
        Term::Difference(_, _) => false,
        Term::Power(b, e) => syntactically_nonneg(b) && syntactically_nonneg(e),
    }
}

/// Rewrite the conditions of an [`EquationSystem`] as one equation
/// `∃(unknowns) [Σ groups = 0]` with the parameters left free.
///
/// Groups, in summand order: the digit extraction pinning
/// `y₁ = C(q, count)` (four equations), the remainder split forcing
/// `y₁ | P` (three), the pin `z₀ = q`, the strong-inequality slack, then
/// one three-equation divisibility block per `z_l`.  A group of one
/// equation contributes its square; a group of several contributes the
/// squared sum of squares, which keeps intra-group cross terms from
/// cancelling across groups.
pub fn flatten(sys: &EquationSystem) -> Result<FlattenResult> {
    let m = sys.instance.inner.len();
    let mut ledger = VarLedger::new();
    ledger.absorb(&sys.ledger);
    let mut notes = Vec::new();

    let congruence_target = if syntactically_nonneg(&sys.matrix_z) {
        sys.matrix_z.clone()
    } else {
        notes.push(
            "congruence target squared to keep the remainder split in the naturals".into(),
        );
        sys.matrix_z.clone().squared()
    };

    let y1 = ledger.fresh_named("flat", "y1", "y1");
    let y2 = ledger.fresh_named("flat", "y2", "y2");
    let j1 = ledger.fresh_named("flat", "j1", "j1");
    let j2 = ledger.fresh_named("flat", "j2", "j2");
    let j3 = ledger.fresh_named("flat", "j3", "j3");

    let y1v = Term::var(y1.clone());
    let qv = Term::var(sys.q.clone());
    let wv = Term::var(sys.w.clone());

    let mut blocks = Vec::with_capacity(m);
    let mut l_groups = Vec::with_capacity(m);
    for l in 1..=m {
        let zv = Term::var(sys.z[l].clone());
        let base = y1v.clone() * Term::nat(2).pow(zv.clone());
        let (ids, eqs) = push_div_binomial(&mut ledger, &y1v, &zv, &wv, base);
        ledger.set_display(&ids[0], &format!("f{l}"));
        ledger.set_display(&ids[1], &format!("g{l}"));
        ledger.set_display(&ids[2], &format!("m{l}"));
        ledger.set_display(&ids[3], &format!("s{l}"));
        let [p, r, mm, s] = ids;
        blocks.push(DivBlock { p, r, m: mm, s });
        l_groups.push(eqs.to_vec());
    }

    let h1 = ledger.fresh_named("flat", "h1", "h1");
    let (exp_ids, exp_eqs) =
        push_binomial_expdioph(&mut ledger, &y1v, &qv, &Term::var(h1.clone()));
    // Numbered by first appearance in the group: quotient and remainder
    // in the main split, then the digit bound's slack, then the
    // remainder bound's.
    ledger.set_display(&exp_ids[0], "h2");
    ledger.set_display(&exp_ids[1], "h3");
    ledger.set_display(&exp_ids[3], "h4");
    ledger.set_display(&exp_ids[2], "h5");

    let h_group = vec![
        sys.count.clone() - Term::var(h1.clone()),
        exp_eqs[0].clone(),
        exp_eqs[2].clone(),
        exp_eqs[1].clone(),
    ];
    let j_group = vec![
        Term::sum(vec![
            Term::var(j1.clone()),
            Term::var(j2.clone()),
            Term::one(),
        ]) - y1v.clone(),
        y1v * Term::var(j3.clone()) - congruence_target.clone() + Term::var(j1.clone()),
        Term::var(j1.clone()),
    ];
    let z0_group = vec![Term::var(sys.z[0].clone()) - qv.clone()];
    let y2_group = vec![
        Term::sum(vec![
            sys.strong_bound.clone(),
            Term::one(),
            Term::var(y2.clone()),
        ]) - qv,
    ];

    let mut summands = vec![
        group_term(&h_group),
        group_term(&j_group),
        group_term(&z0_group),
        group_term(&y2_group),
    ];
    summands.extend(l_groups.iter().map(|g| group_term(g)));
    let total = Term::sum(summands);

    let unknowns: Vec<String> = ledger.entries().iter().map(|e| e.ident.clone()).collect();
    let formula = Formula::exists(unknowns, Formula::equation(total));

    let names = FlattenNames {
        carried: sys.instance.carried.clone(),
        q: sys.q.clone(),
        w: sys.w.clone(),
        z: sys.z.clone(),
        y1,
        y2,
        j: [j1, j2, j3],
        blocks,
        h: [
            h1,
            exp_ids[0].clone(),
            exp_ids[1].clone(),
            exp_ids[3].clone(),
            exp_ids[2].clone(),
        ],
    };

    Ok(FlattenResult {
        formula,
        ledger,
        names,
        congruence_target,
        notes,
    })
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Minimal natural solving the simultaneous congruences; the moduli must
/// be pairwise coprime.
fn crt(pairs: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut residue = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r2, m2) in pairs {
        let eg = modulus.extended_gcd(m2);
        if !eg.gcd.is_one() {
            return Err(Error::InvalidArgument(
                "chinese remainder moduli are not coprime".into(),
            ));
        }
        let inv = eg.x.mod_floor(m2);
        let step = ((r2 - &residue) * inv).mod_floor(m2);
        residue += &modulus * step;
        modulus *= m2;
        residue = residue.mod_floor(&modulus);
    }
    Ok(residue)
}

/// Build a numeric solution of an eliminated system from explicit
/// per-instance witnesses: `witnesses[y]` lists values for the inner
/// existentials at universal value `y`.  Parameters and carried
/// variables must already be fixed in `param_env`.
///
/// Chooses `w` past the range and every witness, `q` as the least value
/// `≡ −1 (mod (w!)²)` above the strong bound, and each `z_l` by chinese
/// remainder over the coprime factors `(q+1−j)/j` of `C(q, count)`.  The
/// assignment is checked against every condition before being returned.
pub fn construct_dpr_witness(
    sys: &EquationSystem,
    param_env: &Assignment,
    witnesses: &[Vec<BigInt>],
) -> Result<Assignment> {
    let budget = Budget::with_bits(1 << 22);
    let m = sys.instance.inner.len();
    let count_val = eval_term(&sys.count, param_env, &budget)?;
    let b = small_count(&count_val, "universal range")?;
    if witnesses.len() != b as usize {
        return Err(Error::InvalidArgument(format!(
            "expected {b} witness rows, got {}",
            witnesses.len()
        )));
    }
    for (y, row) in witnesses.iter().enumerate() {
        if row.len() != m {
            return Err(Error::InvalidArgument(format!(
                "witness row {y} has {} entries, expected {m}",
                row.len()
            )));
        }
        if row.iter().any(|x| x.is_negative()) {
            return Err(Error::InvalidArgument(format!(
                "witness row {y} contains a negative value"
            )));
        }
        let mut env = param_env.clone();
        env.insert(sys.instance.bound_var.clone(), BigInt::from(y));
        for (v, val) in sys.instance.inner.iter().zip(row) {
            env.insert(v.clone(), val.clone());
        }
        let g = eval_term(&sys.instance.matrix, &env, &budget)?;
        if !g.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "witness row {y} does not solve the matrix (value {g})"
            )));
        }
    }

    let mut w_val = BigInt::from(b);
    for row in witnesses {
        for x in row {
            let needed = x + 1u32;
            if needed > w_val {
                w_val = needed;
            }
        }
    }
    let w_u64 = small_count(&w_val, "witness cap")?;

    let mut env = param_env.clone();
    env.insert(sys.w.clone(), w_val);
    let bound = eval_term(&sys.strong_bound, &env, &budget)?;
    let fact = factorial(w_u64);
    let modulus = &fact * &fact;
    // least q with q + 1 a positive multiple of modulus and q > bound
    let k = (&bound + 2u32 + &modulus - 1u32).div_floor(&modulus);
    let q_val = &modulus * k - 1u32;

    let mut factors = Vec::with_capacity(b as usize);
    let mut product = BigInt::one();
    for j in 1..=b {
        let (val, rem) = (&q_val + 1u32 - j).div_rem(&BigInt::from(j));
        if !rem.is_zero() {
            return Err(Error::InvalidArgument(
                "modulus seed is not aligned with the factorial".into(),
            ));
        }
        for prev in &factors {
            if val.gcd(prev) != BigInt::one() {
                return Err(Error::InvalidArgument(
                    "binomial factors are not pairwise coprime".into(),
                ));
            }
        }
        product *= &val;
        factors.push(val);
    }
    if product != oracle::binomial(&q_val, b) {
        return Err(Error::InvalidArgument(
            "factor product disagrees with the binomial coefficient".into(),
        ));
    }

    env.insert(sys.q.clone(), q_val.clone());
    env.insert(sys.z[0].clone(), q_val);
    for l in 1..=m {
        let pairs: Vec<(BigInt, BigInt)> = factors
            .iter()
            .enumerate()
            .map(|(idx, u)| (witnesses[idx][l - 1].mod_floor(u), u.clone()))
            .collect();
        env.insert(sys.z[l].clone(), crt(&pairs)?);
    }

    for (idx, c) in sys.conditions.iter().enumerate() {
        if !c.evaluate(&env, &budget)? {
            return Err(Error::InvalidArgument(format!(
                "constructed assignment fails condition {idx}: {c}"
            )));
        }
    }
    Ok(env)
}

/// Extend a satisfying assignment of the conditions to the unknowns of
/// the flattened equation.  Only feasible when `q` and the `z_l` are
/// small enough to take as machine exponents, so this is a testing aid
/// for toy systems, not part of the construction itself.
pub fn derive_flatten_witness(
    sys: &EquationSystem,
    flat: &FlattenResult,
    env: &Assignment,
) -> Result<Assignment> {
    let budget = Budget::with_bits(1 << 22);
    let mut out = env.clone();
    let q = lookup(env, &sys.q)?.clone();
    let w = small_count(lookup(env, &sys.w)?, "witness cap")?;
    let count_val = eval_term(&sys.count, env, &budget)?;
    let b = small_count(&count_val, "universal range")?;
    let q_small = small_count(&q, "modulus seed")? as u32;

    let y1 = oracle::binomial(&q, b);
    out.insert(flat.names.y1.clone(), y1.clone());

    let bound = eval_term(&sys.strong_bound, env, &budget)?;
    let y2 = &q - &bound - 1u32;
    if y2.is_negative() {
        return Err(Error::InvalidArgument(
            "assignment violates the strong inequality".into(),
        ));
    }
    out.insert(flat.names.y2.clone(), y2);

    let p_val = eval_term(&flat.congruence_target, env, &budget)?;
    let (j3, j1) = p_val.div_rem(&y1);
    let j2 = &y1 - 1u32 - &j1;
    if j2.is_negative() {
        return Err(Error::InvalidArgument("remainder exceeds the modulus".into()));
    }
    out.insert(flat.names.j[0].clone(), j1);
    out.insert(flat.names.j[1].clone(), j2);
    out.insert(flat.names.j[2].clone(), j3);

    // Digit extraction: h1 = count, then split (2^q + 2)^q around the
    // digit y1 at position h1 of base 2^q + 1.
    out.insert(flat.names.h[0].clone(), BigInt::from(b));
    let base: BigInt = (BigInt::one() << q_small) + 1u32;
    let value = (&base + 1u32).pow(q_small);
    let u_s = base.pow(b as u32);
    let u_s1 = base.pow(b as u32 + 1);
    let after = &value - &y1 * &u_s;
    if after.is_negative() {
        return Err(Error::InvalidArgument("digit split went negative".into()));
    }
    let (h2, h3) = after.div_rem(&u_s1);
    out.insert(flat.names.h[1].clone(), h2);
    out.insert(flat.names.h[4].clone(), &u_s - 1u32 - &h3);
    out.insert(flat.names.h[3].clone(), (BigInt::one() << q_small) - &y1);
    out.insert(flat.names.h[2].clone(), h3);

    for (l, block) in flat.names.blocks.iter().enumerate() {
        let z_val = lookup(env, &sys.z[l + 1])?;
        let z_small = small_count(z_val, "carried witness")? as u32;
        let u = &y1 * (BigInt::one() << z_small);
        let u_w = u.pow(w as u32);
        let total = (&u + 1u32).pow(z_small);
        let (p, r) = total.div_rem(&u_w);
        let (s, rem) = p.div_rem(&y1);
        if !rem.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "block {l} quotient is not divisible by the binomial"
            )));
        }
        out.insert(block.m.clone(), &u_w - 1u32 - &r);
        out.insert(block.p.clone(), p);
        out.insert(block.r.clone(), r);
        out.insert(block.s.clone(), s);
    }
    Ok(out)
}
