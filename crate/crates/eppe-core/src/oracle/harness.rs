//! Gadget-versus-oracle equivalence sweeps.
//!
//! Every registered gadget is checked against an independent brute-force
//! oracle over an exhaustive desk-scale parameter box.  For each admitted
//! tuple the harness decides gadget solvability — by determined-variable
//! computation where the equations fix their unknowns, otherwise by
//! bounded search with the configured bound — then compares that verdict
//! with the oracle's.  Whenever the decider claims solvability it builds
//! the full witness assignment and re-evaluates every equation, so a
//! "solvable" verdict is always backed by a checked witness.
//!
//! Tuples may be evaluated in parallel; results are merged in tuple order,
//! so reports are deterministic regardless of worker count.  Reports
//! render to a line-oriented summary (counterexamples with their full
//! assignments) and to a structured record-per-tuple format.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::eval::{eval_term, Assignment, Budget};
use crate::gadget::{
    build_b_bound, g_binomial_dioph, g_binomial_expdioph, g_cantor_pin, g_congruent,
    g_div_binomial, g_div_binomial_literal, g_divides, g_less, g_psi, g_remainder,
    g_strong_ineq, relation_combine, RelationCombineInput,
};
use crate::term::Term;
use crate::Result;

use super::{cantor_j, partial_binomial_sum, pascal_row, pell_psi, ph2_check, ph2_check_alt};

/// Inclusive range for one named parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamRange {
    pub name: String,
    pub lo: u64,
    pub hi: u64,
}

impl ParamRange {
    pub fn new(name: &str, lo: u64, hi: u64) -> Self {
        ParamRange {
            name: name.to_string(),
            lo,
            hi,
        }
    }

    /// Parse `name=lo..hi` (also accepted: `name=lo..=hi`); both ends
    /// inclusive.
    pub fn parse(spec: &str) -> Result<ParamRange> {
        let err = || {
            Error::InvalidArgument(format!(
                "range {spec:?} is not of the form name=lo..hi (both ends inclusive)"
            ))
        };
        let (name, rest) = spec.split_once('=').ok_or_else(err)?;
        let (lo, hi) = rest.split_once("..").ok_or_else(err)?;
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let name = name.trim();
        if name.is_empty() {
            return Err(err());
        }
        let lo: u64 = lo.trim().parse().map_err(|_| err())?;
        let hi: u64 = hi.trim().parse().map_err(|_| err())?;
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "range {spec:?} is empty: {lo} > {hi}"
            )));
        }
        Ok(ParamRange::new(name, lo, hi))
    }
}

/// Knobs for the sweep.  Both bounds are recorded in every report.
#[derive(Debug, Clone)]
pub struct HarnessConfig {
    /// Inclusive cap for searched (non-determined) unknowns, e.g. the two
    /// free indices of the Pell system.
    pub search_bound: u64,
    /// Inclusive cap for single-variable root scans (combined relations).
    pub root_scan: u64,
    /// Colouring budget for the pair-colouring oracle pair.
    pub coloring_limit: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            search_bound: 8,
            root_scan: 2000,
            coloring_limit: 1 << 22,
        }
    }
}

/// Verdict pair for one parameter tuple.
#[derive(Debug, Clone, Serialize)]
pub struct TupleRecord {
    /// Parameter values, in range order.
    pub params: Vec<u64>,
    /// Gadget-side verdict (witness found / refuted / search exhausted).
    pub gadget: String,
    /// Oracle-side verdict.
    pub oracle: String,
    pub agree: bool,
    /// Optional classification (e.g. `r <= 2`) tallied separately.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

/// A disagreement, carrying enough to re-verify on replay.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub params: Vec<(String, u64)>,
    pub gadget: String,
    pub oracle: String,
    /// Full satisfying assignment when the gadget side produced one
    /// (decimal strings, in variable order).
    pub witness: Vec<(String, String)>,
}

/// Outcome of one sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub gadget: String,
    /// The relation the gadget encodes, as a display string.
    pub relation: String,
    pub ranges: Vec<ParamRange>,
    /// Domain restriction applied inside the range box, if any.
    pub admitted_when: String,
    pub search_bound: u64,
    pub root_scan: u64,
    /// Tuples admitted and tested.
    pub tuples: usize,
    /// Tuples in the box skipped by the domain restriction.
    pub skipped: usize,
    pub agreements: usize,
    pub records: Vec<TupleRecord>,
    pub counterexamples: Vec<Counterexample>,
    /// Whether this gadget is a documented defect kept for contrast, so
    /// counterexamples are the expected result.
    pub expects_counterexamples: bool,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl EquivalenceReport {
    /// Line-oriented rendering: summary first, then each counterexample
    /// with its parameters, verdicts, and witness.  Wall time is omitted
    /// so identical runs emit identical bytes.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gadget: {}", self.gadget);
        let _ = writeln!(out, "relation: {}", self.relation);
        for r in &self.ranges {
            let _ = writeln!(out, "range: {} in {}..={}", r.name, r.lo, r.hi);
        }
        if !self.admitted_when.is_empty() {
            let _ = writeln!(out, "admitted when: {}", self.admitted_when);
        }
        let _ = writeln!(out, "search bound: {}", self.search_bound);
        let _ = writeln!(out, "root scan: {}", self.root_scan);
        let _ = writeln!(out, "tuples: {}", self.tuples);
        if self.skipped > 0 {
            let _ = writeln!(out, "skipped (outside domain): {}", self.skipped);
        }
        let _ = writeln!(out, "agreements: {}", self.agreements);
        let _ = writeln!(out, "counterexamples: {}", self.counterexamples.len());
        let mut flagged: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for rec in &self.records {
            if let Some(f) = &rec.flag {
                let e = flagged.entry(f).or_insert((0, 0));
                e.0 += 1;
                if rec.agree {
                    e.1 += 1;
                }
            }
        }
        for (f, (total, agreeing)) in flagged {
            let _ = writeln!(out, "flagged {f}: {total} tuples, {agreeing} agreements");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        for (idx, ce) in self.counterexamples.iter().enumerate() {
            let ps: Vec<String> = ce
                .params
                .iter()
                .map(|(k, v)| format!("{k} = {v}"))
                .collect();
            let _ = writeln!(out, "counterexample {}: {}", idx + 1, ps.join(", "));
            let _ = writeln!(out, "  gadget: {}", ce.gadget);
            let _ = writeln!(out, "  oracle: {}", ce.oracle);
            if !ce.witness.is_empty() {
                let ws: Vec<String> = ce
                    .witness
                    .iter()
                    .map(|(k, v)| format!("{k} = {v}"))
                    .collect();
                let _ = writeln!(out, "  witness: {}", ws.join(", "));
            }
        }
        out
    }

    /// Structured rendering: one JSON object per line per tested tuple,
    /// carrying the parameters, both verdicts, and the agreement flag.
    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            let params: Vec<serde_json::Value> = self
                .ranges
                .iter()
                .zip(&rec.params)
                .map(|(r, v)| serde_json::json!([r.name, v]))
                .collect();
            let mut obj = serde_json::json!({
                "gadget": self.gadget,
                "params": params,
                "verdicts": { "gadget": rec.gadget, "oracle": rec.oracle },
                "agree": rec.agree,
            });
            if let Some(f) = &rec.flag {
                obj["flag"] = serde_json::json!(f);
            }
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        out
    }
}

/// What one runner reports for one tuple.
struct TupleOutcome {
    gadget: String,
    oracle: String,
    agree: bool,
    flag: Option<String>,
    witness: Vec<(String, String)>,
}

type Runner = fn(&[u64], &HarnessConfig) -> Result<TupleOutcome>;

struct GadgetDef {
    name: &'static str,
    relation: &'static str,
    params: &'static [&'static str],
    defaults: &'static [(u64, u64)],
    admits: fn(&[u64]) -> bool,
    admits_desc: &'static str,
    run: Runner,
    expects_counterexamples: bool,
    notes: &'static [&'static str],
}

fn admit_all(_: &[u64]) -> bool {
    true
}

// (n, s): the digit position must exist
fn admit_s_le_n(p: &[u64]) -> bool {
    p[1] <= p[0]
}

// (n, s): an interior column, 1 <= s <= n
fn admit_interior_column(p: &[u64]) -> bool {
    p[1] >= 1 && p[1] <= p[0]
}

// (y1, z, w): digit position within the expansion
fn admit_w_le_z(p: &[u64]) -> bool {
    p[2] <= p[1]
}

// (a, b, c): domain of the sequence-membership system
fn admit_pell_domain(p: &[u64]) -> bool {
    p[0] >= 2 && p[1] >= 1
}

fn defs() -> &'static [GadgetDef] {
    static DEFS: &[GadgetDef] = &[
        GadgetDef {
            name: "remainder",
            relation: "y = rem(a, d)",
            params: &["y", "a", "d"],
            defaults: &[(0, 6), (0, 20), (1, 8)],
            admits: admit_all,
            admits_desc: "",
            run: run_remainder,
            expects_counterexamples: false,
            notes: &["both unknowns are determined by the equations; every \
                      solvable verdict re-evaluates them at the witness"],
        },
        GadgetDef {
            name: "less",
            relation: "a < b",
            params: &["a", "b"],
            defaults: &[(0, 24), (0, 24)],
            admits: admit_all,
            admits_desc: "",
            run: run_less,
            expects_counterexamples: false,
            notes: &["the slack is determined: v = b - a - 1"],
        },
        GadgetDef {
            name: "divides",
            relation: "b | c",
            params: &["b", "c"],
            defaults: &[(0, 12), (0, 24)],
            admits: admit_all,
            admits_desc: "",
            run: run_divides,
            expects_counterexamples: false,
            notes: &["b = 0 degenerates to c = 0: zero divides only zero; \
                      the oracle scans quotients directly"],
        },
        GadgetDef {
            name: "congruent",
            relation: "x = y (mod r)",
            params: &["x", "y", "r"],
            defaults: &[(0, 20), (0, 20), (1, 8)],
            admits: admit_all,
            admits_desc: "",
            run: run_congruent,
            expects_counterexamples: false,
            notes: &["residues and quotients are determined; the oracle \
                      checks r | x - y instead of comparing residues"],
        },
        GadgetDef {
            name: "cantor",
            relation: "2z = (x+y)^2 + 3x + y",
            params: &["z", "x", "y"],
            defaults: &[(0, 40), (0, 6), (0, 6)],
            admits: admit_all,
            admits_desc: "",
            run: run_cantor,
            expects_counterexamples: false,
            notes: &["the pin has no fresh unknowns; solvability is a \
                      single evaluation"],
        },
        GadgetDef {
            name: "psi-system",
            relation: "c = psi_a(b) (second Pell coordinate at index b)",
            params: &["a", "b", "c"],
            defaults: &[(2, 5), (1, 3), (0, 50)],
            admits: admit_pell_domain,
            admits_desc: "a >= 2 and b >= 1",
            run: run_psi_system,
            expects_counterexamples: false,
            notes: &[
                "one-sided sweep: the chained quantities are determined from \
                 the two free indices, which are searched up to the bound; a \
                 bounded search can only miss true instances, never accept a \
                 false one, so agreement means no false positives",
                "the positive direction is exercised by the exact witness \
                 constructor, whose solutions are far beyond any search bound",
            ],
        },
        GadgetDef {
            name: "relation-combine",
            relation: "a1 is a square, b | c, d > 0 (as one equation in n)",
            params: &["a1", "b", "c", "d"],
            defaults: &[(0, 9), (1, 3), (0, 2), (0, 2)],
            admits: admit_all,
            admits_desc: "",
            run: run_relation_combine,
            expects_counterexamples: false,
            notes: &["solvability is decided by scanning n up to the root \
                      scan bound; in-range roots stay far below it"],
        },
        GadgetDef {
            name: "binom-exp",
            relation: "the unique satisfying digit y equals C(n, s)",
            params: &["n", "s"],
            defaults: &[(1, 12), (0, 12)],
            admits: admit_s_le_n,
            admits_desc: "s <= n",
            run: run_binom_exp,
            expects_counterexamples: false,
            notes: &["every candidate digit is tried; quotient and remainder \
                      are determined, so the satisfying set is exact"],
        },
        GadgetDef {
            name: "binom-dioph",
            relation: "the trailing digit of the pinned partial sum is C(n, s)",
            params: &["n", "s"],
            defaults: &[(1, 8), (1, 8)],
            admits: admit_interior_column,
            admits_desc: "1 <= s <= n",
            run: run_binom_dioph,
            expects_counterexamples: false,
            notes: &[
                "the ten defining equations are checked at a fully determined \
                 instance over the least admissible base",
                "the combined square/divisibility/positivity polynomial needs \
                 genuine Pell witnesses; its machinery is covered by the \
                 psi-system and relation-combine sweeps",
            ],
        },
        GadgetDef {
            name: "div-binom",
            relation: "y1 | C(z, w), base u = y1*2^z",
            params: &["y1", "z", "w"],
            defaults: &[(1, 10), (1, 8), (0, 8)],
            admits: admit_w_le_z,
            admits_desc: "w <= z",
            run: run_div_binom,
            expects_counterexamples: false,
            notes: &["the digit block p is determined by division; the oracle \
                      reduces the Pascal-rule coefficient instead"],
        },
        GadgetDef {
            name: "div-binom-literal",
            relation: "y1 | C(z, w), base u = (y1+1)*2^z (kept for contrast)",
            params: &["y1", "z", "w"],
            defaults: &[(1, 10), (1, 8), (0, 8)],
            admits: admit_w_le_z,
            admits_desc: "w <= z",
            run: run_div_binom_literal,
            expects_counterexamples: true,
            notes: &["the base omits the divisor factor, so divisibility of \
                      the digit block no longer tracks the coefficient; \
                      counterexamples are the expected outcome"],
        },
        GadgetDef {
            name: "strong-ineq",
            relation: "q > b + (b+1)^(b+1) * ((b+1)^(b+1) * B)^(w^m)",
            params: &["q", "b", "B", "w", "m"],
            defaults: &[(0, 40), (0, 1), (1, 2), (1, 2), (1, 2)],
            admits: admit_all,
            admits_desc: "",
            run: run_strong_ineq,
            expects_counterexamples: false,
            notes: &["the slack is determined by evaluating the equation at \
                      slack 0; the oracle recomputes the threshold with plain \
                      repeated multiplication"],
        },
        GadgetDef {
            name: "b-bound",
            relation: "the positivized substituted bound dominates |g| on the box",
            params: &["xmax", "ymax"],
            defaults: &[(0, 6), (0, 6)],
            admits: admit_all,
            admits_desc: "",
            run: run_b_bound,
            expects_counterexamples: false,
            notes: &["fixed probe polynomial g = (x-3)^2 (y-7) - 5; the \
                      oracle maximizes |g| over the box directly"],
        },
        GadgetDef {
            name: "ph2-oracle",
            relation: "every r-colouring of pairs from {0..M} has a homogeneous \
                       Y with |Y| >= min(Y) + k - 1",
            params: &["k", "r", "M"],
            defaults: &[(0, 4), (1, 3), (0, 3)],
            admits: admit_all,
            admits_desc: "",
            run: run_ph2_oracle,
            expects_counterexamples: false,
            notes: &["dual-implementation check: subset-mask enumeration \
                      against recursive homogeneous growth; r <= 2 tuples are \
                      flagged separately because the headline representation \
                      targets r > 2"],
        },
    ];
    DEFS
}

/// Names of every registered gadget, in registry order.
pub fn gadget_names() -> Vec<&'static str> {
    defs().iter().map(|d| d.name).collect()
}

/// The documented default ranges for a registered gadget.
pub fn default_ranges(gadget: &str) -> Option<Vec<ParamRange>> {
    defs().iter().find(|d| d.name == gadget).map(|d| {
        d.params
            .iter()
            .zip(d.defaults)
            .map(|(name, (lo, hi))| ParamRange::new(name, *lo, *hi))
            .collect()
    })
}

/// Sweep one gadget against its oracle.  Empty `ranges` means the
/// documented defaults; otherwise the ranges must name the gadget's
/// parameters in order.
pub fn equivalence_harness(
    gadget: &str,
    ranges: &[ParamRange],
    cfg: &HarnessConfig,
) -> Result<EquivalenceReport> {
    let def = defs().iter().find(|d| d.name == gadget).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown gadget {gadget:?}; registered: {}",
            gadget_names().join(", ")
        ))
    })?;

    let ranges: Vec<ParamRange> = if ranges.is_empty() {
        default_ranges(gadget).unwrap()
    } else {
        if ranges.len() != def.params.len() {
            return Err(Error::InvalidArgument(format!(
                "{gadget} takes {} ranges ({}), got {}",
                def.params.len(),
                def.params.join(", "),
                ranges.len()
            )));
        }
        for (r, want) in ranges.iter().zip(def.params) {
            if r.name != *want {
                return Err(Error::InvalidArgument(format!(
                    "{gadget} expects parameter {want:?} here, got {:?}",
                    r.name
                )));
            }
            if r.lo > r.hi {
                return Err(Error::InvalidArgument(format!(
                    "range {} is empty: {} > {}",
                    r.name, r.lo, r.hi
                )));
            }
        }
        ranges.to_vec()
    };

    let mut box_size: u128 = 1;
    for r in &ranges {
        box_size = box_size.saturating_mul((r.hi - r.lo + 1) as u128);
    }
    if box_size > 5_000_000 {
        return Err(Error::BudgetExceeded(format!(
            "{box_size} parameter tuples exceed the sweep budget of 5000000"
        )));
    }

    let start = Instant::now();
    let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
    for r in &ranges {
        let mut next = Vec::with_capacity(tuples.len() * (r.hi - r.lo + 1) as usize);
        for t in &tuples {
            for v in r.lo..=r.hi {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let total_in_box = tuples.len();
    let admitted: Vec<Vec<u64>> = tuples.into_iter().filter(|t| (def.admits)(t)).collect();
    let skipped = total_in_box - admitted.len();

    let outcomes: Result<Vec<TupleOutcome>> = admitted
        .par_iter()
        .map(|t| (def.run)(t, cfg))
        .collect();
    let outcomes = outcomes?;

    let mut records = Vec::with_capacity(outcomes.len());
    let mut counterexamples = Vec::new();
    let mut agreements = 0usize;
    for (params, out) in admitted.iter().zip(outcomes) {
        if out.agree {
            agreements += 1;
        } else {
            counterexamples.push(Counterexample {
                params: def
                    .params
                    .iter()
                    .zip(params)
                    .map(|(n, v)| (n.to_string(), *v))
                    .collect(),
                gadget: out.gadget.clone(),
                oracle: out.oracle.clone(),
                witness: out.witness,
            });
        }
        records.push(TupleRecord {
            params: params.clone(),
            gadget: out.gadget,
            oracle: out.oracle,
            agree: out.agree,
            flag: out.flag,
        });
    }

    Ok(EquivalenceReport {
        gadget: def.name.to_string(),
        relation: def.relation.to_string(),
        ranges,
        admitted_when: def.admits_desc.to_string(),
        search_bound: cfg.search_bound,
        root_scan: cfg.root_scan,
        tuples: records.len(),
        skipped,
        agreements,
        records,
        counterexamples,
        expects_counterexamples: def.expects_counterexamples,
        notes: def.notes.iter().map(|n| n.to_string()).collect(),
        wall_time: start.elapsed(),
    })
}

/// Re-run every counterexample of a report through the same decider and
/// oracle; `true` means each one reproduces its recorded verdicts and
/// still disagrees.
pub fn replay_counterexamples(report: &EquivalenceReport, cfg: &HarnessConfig) -> Result<bool> {
    let def = defs()
        .iter()
        .find(|d| d.name == report.gadget)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("unknown gadget {:?}", report.gadget))
        })?;
    for ce in &report.counterexamples {
        let params: Vec<u64> = ce.params.iter().map(|(_, v)| *v).collect();
        let out = (def.run)(&params, cfg)?;
        if out.agree || out.gadget != ce.gadget || out.oracle != ce.oracle {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------
// Shared helpers for the runners.

fn solv(flag: bool) -> String {
    if flag { "solvable" } else { "unsolvable" }.to_string()
}

fn holds(flag: bool) -> String {
    if flag { "holds" } else { "fails" }.to_string()
}

fn pairs_of(env: &Assignment) -> Vec<(String, String)> {
    env.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

/// Every equation must evaluate to zero at the computed witness; a
/// nonzero value means the decider itself is broken, which is reported
/// as an error rather than a counterexample.
fn verify_zero(name: &str, eqs: &[Term], env: &Assignment, budget: &Budget) -> Result<()> {
    for (k, eq) in eqs.iter().enumerate() {
        let v = eval_term(eq, env, budget)?;
        if !v.is_zero() {
            return Err(Error::ShapeMismatch(format!(
                "{name}: computed witness leaves equation {k} at {v}"
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Runners, one per registered gadget.

fn run_remainder(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (y, a, d) = (p[0], p[1], p[2]);
    let g = g_remainder(&Term::var("y"), &Term::var("a"), &Term::nat(d));
    let solvable = d >= 1 && y < d && a >= y && (a - y) % d == 0;
    let mut witness = Vec::new();
    if solvable {
        let ids = g.fresh_idents();
        let env: Assignment = [
            ("y".to_string(), BigInt::from(y)),
            ("a".to_string(), BigInt::from(a)),
            (ids[0].clone(), BigInt::from(d - 1 - y)),
            (ids[1].clone(), BigInt::from((a - y) / d)),
        ]
        .into_iter()
        .collect();
        verify_zero("remainder", &g.equations, &env, &Budget::default())?;
        witness = pairs_of(&env);
    }
    let oracle_holds = d >= 1 && a % d == y;
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_less(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (a, b) = (p[0], p[1]);
    let g = g_less(&Term::var("a"), &Term::var("b"));
    let solvable = b > a;
    let mut witness = Vec::new();
    if solvable {
        let ids = g.fresh_idents();
        let env: Assignment = [
            ("a".to_string(), BigInt::from(a)),
            ("b".to_string(), BigInt::from(b)),
            (ids[0].clone(), BigInt::from(b - a - 1)),
        ]
        .into_iter()
        .collect();
        verify_zero("less", &g.equations, &env, &Budget::default())?;
        witness = pairs_of(&env);
    }
    let oracle_holds = a < b;
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_divides(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (b, c) = (p[0], p[1]);
    let g = g_divides(&Term::var("b"), &Term::var("c"));
    let (solvable, t) = if b == 0 {
        (c == 0, 0)
    } else {
        (c % b == 0, c / b)
    };
    let mut witness = Vec::new();
    if solvable {
        let ids = g.fresh_idents();
        let env: Assignment = [
            ("b".to_string(), BigInt::from(b)),
            ("c".to_string(), BigInt::from(c)),
            (ids[0].clone(), BigInt::from(t)),
        ]
        .into_iter()
        .collect();
        verify_zero("divides", &g.equations, &env, &Budget::default())?;
        witness = pairs_of(&env);
    }
    // independent decision: scan quotients outright
    let oracle_holds = (0..=c).any(|t| (b as u128) * (t as u128) == c as u128);
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_congruent(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (x, y, r) = (p[0], p[1], p[2]);
    let g = g_congruent(&Term::var("x"), &Term::var("y"), &Term::var("r"));
    let solvable = r >= 1 && x % r == y % r;
    let mut witness = Vec::new();
    if solvable {
        let ids = g.fresh_idents(); // r1, s1, q1, r2, s2, q2
        let (r1, r2) = (x % r, y % r);
        let env: Assignment = [
            ("x".to_string(), BigInt::from(x)),
            ("y".to_string(), BigInt::from(y)),
            ("r".to_string(), BigInt::from(r)),
            (ids[0].clone(), BigInt::from(r1)),
            (ids[1].clone(), BigInt::from(r - 1 - r1)),
            (ids[2].clone(), BigInt::from(x / r)),
            (ids[3].clone(), BigInt::from(r2)),
            (ids[4].clone(), BigInt::from(r - 1 - r2)),
            (ids[5].clone(), BigInt::from(y / r)),
        ]
        .into_iter()
        .collect();
        verify_zero("congruent", &g.equations, &env, &Budget::default())?;
        witness = pairs_of(&env);
    }
    // independent: difference divisibility instead of residue comparison
    let oracle_holds = r >= 1 && (x as i128 - y as i128).rem_euclid(r as i128) == 0;
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_cantor(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (z, x, y) = (p[0], p[1], p[2]);
    let pin = g_cantor_pin(&Term::var("z"), &Term::var("x"), &Term::var("y"));
    let env: Assignment = [
        ("z".to_string(), BigInt::from(z)),
        ("x".to_string(), BigInt::from(x)),
        ("y".to_string(), BigInt::from(y)),
    ]
    .into_iter()
    .collect();
    let solvable = eval_term(&pin, &env, &Budget::default())?.is_zero();
    let oracle_holds = cantor_j(&BigUint::from(x), &BigUint::from(y)) == BigUint::from(z);
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness: if solvable { pairs_of(&env) } else { Vec::new() },
    })
}

fn run_psi_system(p: &[u64], cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (a, b, c) = (p[0], p[1], p[2]);
    let bound = cfg.search_bound;
    let g = g_psi(&Term::var("A"), &Term::var("B"), &Term::var("C"));
    let (ab, bb, cb) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let mut found: Option<Assignment> = None;
    if b <= c {
        let a2m1 = &ab * &ab - 1;
        let d: BigInt = &a2m1 * &cb * &cb + 1;
        'search: for i in 0..=bound {
            let e = BigInt::from(2 * (i + 1)) * &d * &cb * &cb;
            let f = &a2m1 * &e * &e + 1;
            let gv = &ab + &f * (&f - &ab);
            for j in 0..=bound {
                let h = &bb + BigInt::from(2 * j) * &cb;
                if h < cb {
                    continue;
                }
                let (t, rem) = (&h - &cb).div_rem(&f);
                if !rem.is_zero() {
                    continue;
                }
                let icap: BigInt = (&gv * &gv - 1) * &h * &h + 1;
                let dfi: BigInt = &d * &f * &icap;
                let s = dfi.sqrt();
                if &s * &s != dfi {
                    continue;
                }
                let ids = g.fresh_idents(); // D, E, F, G, H, I, i, j, s, t, u
                let env: Assignment = [
                    ("A".to_string(), ab.clone()),
                    ("B".to_string(), bb.clone()),
                    ("C".to_string(), cb.clone()),
                    (ids[0].clone(), d.clone()),
                    (ids[1].clone(), e.clone()),
                    (ids[2].clone(), f.clone()),
                    (ids[3].clone(), gv.clone()),
                    (ids[4].clone(), h.clone()),
                    (ids[5].clone(), icap),
                    (ids[6].clone(), BigInt::from(i)),
                    (ids[7].clone(), BigInt::from(j)),
                    (ids[8].clone(), s),
                    (ids[9].clone(), t),
                    (ids[10].clone(), &cb - &bb),
                ]
                .into_iter()
                .collect();
                verify_zero("psi-system", &g.equations, &env, &Budget::default())?;
                found = Some(env);
                break 'search;
            }
        }
    }
    let oracle_holds = pell_psi(&ab, b) == cb;
    let solvable = found.is_some();
    Ok(TupleOutcome {
        gadget: if solvable {
            solv(true)
        } else {
            format!("no witness with i, j <= {bound}")
        },
        oracle: holds(oracle_holds),
        // one-sided: only a false positive counts as disagreement
        agree: !(solvable && !oracle_holds),
        flag: None,
        witness: found.map(|env| pairs_of(&env)).unwrap_or_default(),
    })
}

fn run_relation_combine(p: &[u64], cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (a1, b, c, d) = (p[0], p[1], p[2], p[3]);
    let input = RelationCombineInput::new(
        vec![Term::nat(a1)],
        Term::nat(b),
        Term::nat(c),
        Term::nat(d),
        "n",
    );
    let m_term = relation_combine(&input)?;
    let budget = Budget::default();
    let mut root = None;
    for n in 0..=cfg.root_scan {
        let env: Assignment = [("n".to_string(), BigInt::from(n))].into_iter().collect();
        if eval_term(&m_term, &env, &budget)?.is_zero() {
            root = Some(n);
            break;
        }
    }
    let square = (0..=a1).any(|t| t * t == a1);
    let divides = if b == 0 { c == 0 } else { c % b == 0 };
    let oracle_holds = square && divides && d > 0;
    let solvable = root.is_some();
    Ok(TupleOutcome {
        gadget: match root {
            Some(n) => format!("root at n = {n}"),
            None => format!("no root with n <= {}", cfg.root_scan),
        },
        oracle: holds(oracle_holds),
        agree: solvable == oracle_holds,
        flag: None,
        witness: root
            .map(|n| vec![("n".to_string(), n.to_string())])
            .unwrap_or_default(),
    })
}

fn run_binom_exp(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (n, s) = (p[0], p[1]);
    if n > 20 {
        return Err(Error::BudgetExceeded(format!(
            "digit scan needs 2^{n} candidates"
        )));
    }
    let g = g_binomial_expdioph(&Term::var("y"), &Term::nat(n), &Term::nat(s))?;
    let ids = g.fresh_idents(); // quot, rem, remlt, digitlt
    let two_n = BigInt::from(2).pow(n as u32);
    let u: BigInt = &two_n + 1;
    let u_s = u.pow(s as u32);
    let u_s1 = u.pow(s as u32 + 1);
    let base: BigInt = &two_n + 2;
    let value = base.pow(n as u32);
    let mut sols: Vec<u64> = Vec::new();
    let mut witness = Vec::new();
    for y in 0..=(1u64 << n) {
        let after = &value - BigInt::from(y) * &u_s;
        if after.is_negative() {
            break;
        }
        let (quot, rem) = after.div_rem(&u_s1);
        if rem >= u_s {
            continue;
        }
        let env: Assignment = [
            ("y".to_string(), BigInt::from(y)),
            (ids[0].clone(), quot),
            (ids[1].clone(), rem.clone()),
            (ids[2].clone(), &u_s - 1 - &rem),
            (ids[3].clone(), &two_n - y),
        ]
        .into_iter()
        .collect();
        verify_zero("binom-exp", &g.equations, &env, &Budget::with_bits(1 << 22))?;
        if sols.is_empty() {
            witness = pairs_of(&env);
        }
        sols.push(y);
    }
    let want = pascal_row(n)[s as usize].clone();
    let agree = sols.len() == 1 && BigUint::from(sols[0]) == want;
    Ok(TupleOutcome {
        gadget: format!("satisfying digits: {sols:?}"),
        oracle: format!("C({n}, {s}) = {want}"),
        agree,
        flag: None,
        witness,
    })
}

fn run_binom_dioph(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (n, s) = (p[0], p[1]);
    let g = g_binomial_dioph(&Term::var("y"), &Term::nat(n), &Term::nat(s))?;
    let at = |role: &str| format!("binom.{role}@0");

    // Fully determined instance over the least admissible base.
    let four_ns = BigInt::from(4) * BigInt::from(n).pow(s as u32);
    let x = &four_ns + 1;
    let total = partial_binomial_sum(&x, n, s); // = w + 1
    let w = &total - 1;
    let (v2, y) = total.div_rem(&x);
    let v1 = &x - 1 - &y;
    // free small unknowns: k = l = i = j = 0; m chosen so the composed
    // modulus C = m + n + 1 equals K*L*(w+1), making J a natural number
    let kcap = BigInt::from(n - s + 1);
    let lcap = BigInt::from(s + 1);
    let ccap = &kcap * &lcap * &total;
    let m = &ccap - n - 1;
    let mcap = BigInt::from(8) * n * (&x + &w + 1) + 2;
    let acap = &mcap * (&x + 1);
    let a2m1 = &acap * &acap - 1;
    let dcap = &a2m1 * &ccap * &ccap + 1;
    let fcap = BigInt::from(4) * &a2m1 * &dcap * &dcap * ccap.pow(4) + 1;
    let gseed = &acap + &fcap * (&fcap - &acap);
    let h = BigInt::from(n + 1);
    let icap = (&gseed * &gseed - 1) * &h * &h + 1;
    let sq1 = &dcap * &fcap * &icap;
    let sq2 = (&mcap * &mcap - 1) * &kcap * &kcap + 1;
    let sq3 = (&mcap * &mcap * &x * &x - 1) * &lcap * &lcap + 1;
    let wcap = BigInt::one() + &sq1 * &sq1 + &sq2 * &sq2 + &sq3 * &sq3;
    let jcap = (&x - &four_ns)
        * (&kcap * &kcap * &lcap * &lcap
            - BigInt::from(4) * (&ccap - &kcap * &lcap * &total).pow(2));

    let env: Assignment = [
        ("y".to_string(), y.clone()),
        (at("x"), x),
        (at("w"), w),
        (at("k"), BigInt::zero()),
        (at("l"), BigInt::zero()),
        (at("m"), m),
        (at("i"), BigInt::zero()),
        (at("j"), BigInt::zero()),
        (at("v1"), v1),
        (at("v2"), v2),
        (at("v3"), BigInt::zero()),
        (at("D"), dcap),
        (at("F"), fcap),
        (at("I"), icap),
        (at("J"), jcap),
        (at("K"), kcap),
        (at("L"), lcap),
        (at("M"), mcap),
        (at("W"), wcap),
    ]
    .into_iter()
    .collect();
    verify_zero(
        "binom-dioph",
        &g.equations[..10],
        &env,
        &Budget::with_bits(1 << 22),
    )?;

    let want = pascal_row(n)[s as usize].clone();
    let agree = y.to_biguint() == Some(want.clone());
    Ok(TupleOutcome {
        gadget: format!("trailing digit {y}; ten defining equations vanish"),
        oracle: format!("C({n}, {s}) = {want}"),
        agree,
        flag: None,
        witness: pairs_of(&env),
    })
}

fn div_binom_impl(p: &[u64], literal: bool) -> Result<TupleOutcome> {
    let (y1, z, w) = (p[0], p[1], p[2]);
    if y1 == 0 {
        return Err(Error::InvalidArgument("divisor y1 must be >= 1".into()));
    }
    let g = if literal {
        g_div_binomial_literal(&Term::var("y1"), &Term::nat(z), &Term::nat(w))
    } else {
        g_div_binomial(&Term::var("y1"), &Term::nat(z), &Term::nat(w))
    };
    let base = if literal { y1 + 1 } else { y1 };
    let u = BigInt::from(base) * BigInt::from(2).pow(z as u32);
    let u_w = u.pow(w as u32);
    let up1: BigInt = &u + 1;
    let value = up1.pow(z as u32);
    let (pq, r) = value.div_rem(&u_w);
    let (sv, srem) = pq.div_rem(&BigInt::from(y1));
    let solvable = srem.is_zero();
    let mut witness = Vec::new();
    if solvable {
        let ids = g.fresh_idents(); // p, r, m, s
        let env: Assignment = [
            ("y1".to_string(), BigInt::from(y1)),
            (ids[0].clone(), pq.clone()),
            (ids[1].clone(), r.clone()),
            (ids[2].clone(), &u_w - 1 - &r),
            (ids[3].clone(), sv),
        ]
        .into_iter()
        .collect();
        verify_zero("div-binom", &g.equations, &env, &Budget::with_bits(1 << 22))?;
        witness = pairs_of(&env);
    }
    let coeff = &pascal_row(z)[w as usize];
    let oracle_holds = (coeff % &BigUint::from(y1)).is_zero();
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: if oracle_holds {
            format!("{y1} divides C({z}, {w}) = {coeff}")
        } else {
            format!("{y1} does not divide C({z}, {w}) = {coeff}")
        },
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_div_binom(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    div_binom_impl(p, false)
}

fn run_div_binom_literal(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    div_binom_impl(p, true)
}

fn run_strong_ineq(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (q, b, bigb, w, m) = (p[0], p[1], p[2], p[3], p[4]);
    let g = g_strong_ineq(
        &Term::var("q"),
        &Term::nat(b),
        &Term::nat(bigb),
        &Term::nat(w),
        m,
    );
    let ids = g.fresh_idents();
    // determine the slack by evaluating the equation at slack = 0:
    // the value is bound + 1 - q, so the slack must be its negation
    let mut env: Assignment = [
        ("q".to_string(), BigInt::from(q)),
        (ids[0].clone(), BigInt::zero()),
    ]
    .into_iter()
    .collect();
    let at_zero = eval_term(&g.equations[0], &env, &Budget::default())?;
    let solvable = !at_zero.is_positive();
    let mut witness = Vec::new();
    if solvable {
        env.insert(ids[0].clone(), -at_zero);
        verify_zero("strong-ineq", &g.equations, &env, &Budget::default())?;
        witness = pairs_of(&env);
    }
    // independent threshold: plain repeated multiplication
    let bp1 = b + 1;
    let mut tower = BigUint::one();
    for _ in 0..bp1 {
        tower *= bp1;
    }
    let mut expo = 1u64;
    for _ in 0..m {
        expo = expo.saturating_mul(w);
    }
    let base = &tower * bigb;
    let mut power = BigUint::one();
    for _ in 0..expo {
        power *= &base;
    }
    let threshold = &tower * &power + b;
    let oracle_holds = BigUint::from(q) > threshold;
    Ok(TupleOutcome {
        gadget: solv(solvable),
        oracle: if oracle_holds {
            format!("q = {q} exceeds the threshold {threshold}")
        } else {
            format!("q = {q} is at most the threshold {threshold}")
        },
        agree: solvable == oracle_holds,
        flag: None,
        witness,
    })
}

fn run_b_bound(p: &[u64], _cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (xm, ym) = (p[0], p[1]);
    let probe = (Term::var("x") - Term::nat(3)).pow_u(2) * (Term::var("y") - Term::nat(7))
        - Term::nat(5);
    let mut subs = BTreeMap::new();
    subs.insert("x".to_string(), Term::nat(xm));
    subs.insert("y".to_string(), Term::nat(ym));
    let bound_term = build_b_bound(&probe, &subs);
    let bound = eval_term(&bound_term, &Assignment::new(), &Budget::default())?;
    // independent maximum of |g| over the box, in machine arithmetic
    let mut best = (0i64, 0u64, 0u64);
    for x in 0..=xm {
        for y in 0..=ym {
            let v = ((x as i64 - 3).pow(2) * (y as i64 - 7) - 5).abs();
            if v > best.0 {
                best = (v, x, y);
            }
        }
    }
    let agree = bound >= BigInt::from(best.0);
    Ok(TupleOutcome {
        gadget: format!("bound {bound}"),
        oracle: format!("max |g| = {} at (x, y) = ({}, {})", best.0, best.1, best.2),
        agree,
        flag: None,
        witness: vec![
            ("bound".to_string(), bound.to_string()),
            ("x".to_string(), best.1.to_string()),
            ("y".to_string(), best.2.to_string()),
        ],
    })
}

fn run_ph2_oracle(p: &[u64], cfg: &HarnessConfig) -> Result<TupleOutcome> {
    let (k, r, m) = (p[0], p[1], p[2]);
    let primary = ph2_check(k, r, m, cfg.coloring_limit)?;
    let alt = ph2_check_alt(k, r, m, cfg.coloring_limit)?;
    Ok(TupleOutcome {
        gadget: format!("subset-mask search: {primary}"),
        oracle: format!("recursive growth: {alt}"),
        agree: primary == alt,
        flag: (r <= 2).then(|| "r <= 2".to_string()),
        witness: Vec::new(),
    })
}
