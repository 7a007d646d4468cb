//! A two-universal monochromatic-window sentence taken all the way to a
//! single prefixed polynomial equation in 138 unknowns.
//!
//! The source sentence, over parameters `k, M, a, b, r`, asserts the
//! existence of codes `c, d` whose remainder sequence is strictly
//! increasing and bounded by `M` on a window of indices determined by
//! `A = rem(c, d+1)` and `k`, together with a table code `a, b` whose
//! entries at the packed positions `B + C²` all share one residue class
//! `X (mod r)`.  The stages are:
//!
//! 1. conjunction of relations (`e3`) → one collected matrix (`e4`);
//! 2. the two bounded universals collapse into one over the pair index
//!    (`e6`), guarded so out-of-window pairs are discharged trivially;
//! 3. the remaining bounded universal is eliminated into 27 conditions
//!    over `q, w, z₀…z₂₄` (`system`), with collapsed matrix `p` and
//!    dominating bound `b`;
//! 4. the conditions flatten into one equation under a 138-unknown
//!    existential block (`final_form`).
//!
//! Only the five parameters stay free through every stage.

use crate::elim::{collapse_pair_quantifiers, eliminate_buq, flatten, EquationSystem};
use crate::formula::Formula;
use crate::gadget::group_term;
use crate::ledger::VarLedger;
use crate::term::Term;
use crate::Result;

/// Every stage of the construction, from the source sentence to the
/// final five-parameter equation.
#[derive(Debug, Clone)]
pub struct Ph2Artifacts {
    /// The sentence as a conjunction of relations, one nested
    /// existential block per condition.
    pub e3: Formula,
    /// The same sentence with all conditions collected into a single
    /// matrix equation.
    pub e4: Formula,
    /// One bounded universal over the pair index instead of two.
    pub e6: Formula,
    /// The collapsed matrix read over the shared unknowns `z₀…z₂₄`.
    pub p: Term,
    /// The bound dominating `p` over the universal range; mentions `w`.
    pub b: Term,
    /// The eliminated system: 27 conditions over `q, w, z₀…z₂₄`.
    pub system: EquationSystem,
    /// One equation under a 138-unknown existential block, parameters
    /// `k, M, a, b, r` free.
    pub final_form: Formula,
    /// The final block's unknowns, in quantifier order.
    pub ledger: VarLedger,
    /// Construction caveats worth surfacing alongside the artifacts.
    pub notes: Vec<String>,
}

/// The five free parameters, in display order.
pub const PH2_PARAMS: [&str; 5] = ["k", "M", "a", "b", "r"];

fn v(name: &str) -> Term {
    Term::var(name)
}

/// `value = rem(source, pred + 1)` as two equations over the slacks
/// `lt` and `quot`: `value + lt = pred` and `(pred+1)·quot + value =
/// source`.
fn rem_pair(value: &Term, pred: &Term, source: &Term, lt: &str, quot: &str) -> Vec<Term> {
    vec![
        Term::sum(vec![value.clone(), v(lt)]) - pred.clone(),
        Term::sum(vec![(pred.clone() + Term::one()) * v(quot), value.clone()]) - source.clone(),
    ]
}

/// `res ≡ source (mod r)` with `res < r`, over the slacks `lt` and
/// `quot`: `res + lt + 1 = r` and `r·quot + res = source`.
fn residue_pair(res: &Term, r: &Term, source: &Term, lt: &str, quot: &str) -> Vec<Term> {
    vec![
        Term::sum(vec![res.clone(), v(lt), Term::one()]) - r.clone(),
        Term::sum(vec![r.clone() * v(quot), res.clone()]) - source.clone(),
    ]
}

/// The ten relation groups of the matrix, in display order, as equation
/// lists.  Group 1 orients the pair, groups 2–4 read the sequence
/// entries `A, B, C`, groups 5–6 order and bound them, group 7 reads
/// the table entry `F`, and groups 8–10 force `F ≡ X (mod r)`.
fn matrix_groups() -> Vec<Vec<Term>> {
    let (x, y) = (v("x"), v("y"));
    let (c, d, a_var, x_cap) = (v("c"), v("d"), v("A"), v("X"));
    let (b_seq, c_seq, f_tab) = (v("B"), v("C"), v("F"));
    let (k_p, m_p, a_p, b_p, r_p) = (v("k"), v("M"), v("a"), v("b"), v("r"));
    let _ = k_p; // the window parameter appears only in the bounds

    let table_pred = b_p * (b_seq.clone() + c_seq.clone().squared());
    vec![
        vec![Term::sum(vec![x.clone(), v("v1"), Term::one()]) - y.clone()],
        rem_pair(&a_var, &d, &c, "v2", "v3"),
        rem_pair(&b_seq, &(d.clone() * (x + Term::one())), &c, "v4", "v5"),
        rem_pair(&c_seq, &(d.clone() * (y + Term::one())), &c, "v6", "v7"),
        vec![Term::sum(vec![b_seq.clone(), v("v8"), Term::one()]) - c_seq.clone()],
        vec![Term::sum(vec![c_seq, v("v9")]) - m_p],
        rem_pair(&f_tab, &table_pred, &a_p, "v10", "v11"),
        residue_pair(&v("v12"), &r_p, &f_tab, "v14", "v15"),
        residue_pair(&v("v13"), &r_p, &x_cap, "v16", "v17"),
        vec![v("v12") - v("v13")],
    ]
}

fn outer_vars() -> Vec<String> {
    ["c", "d", "A", "X"].map(String::from).to_vec()
}

fn inner_vars() -> Vec<String> {
    let mut vars: Vec<String> = ["B", "C", "F"].map(String::from).to_vec();
    vars.extend((1..=17).map(|i| format!("v{i}")));
    vars
}

fn window_bounds() -> (Term, Term) {
    let base = Term::sum(vec![v("A"), v("k")]);
    (base.clone() - Term::nat(3), base - Term::nat(2))
}

fn wrap_prefix(body: Formula) -> Formula {
    let (bx, by) = window_bounds();
    Formula::exists(
        outer_vars(),
        Formula::forall_le("x", bx, Formula::forall_le("y", by, body)),
    )
}

/// The sentence as a conjunction: each relation sits under its own
/// existential block of slacks.  The last three matrix groups share the
/// residues `v12, v13`, so as relations they form one conjunct,
/// `F ≡ X (mod r)`.
fn build_e3() -> Formula {
    let mut groups = matrix_groups();
    let congruence: Vec<Term> = groups.split_off(7).into_iter().flatten().collect();
    groups.push(congruence);
    let slack_names: [&[&str]; 8] = [
        &["v1"],
        &["v2", "v3"],
        &["v4", "v5"],
        &["v6", "v7"],
        &["v8"],
        &["v9"],
        &["v10", "v11"],
        &["v12", "v13", "v14", "v15", "v16", "v17"],
    ];
    let conjuncts: Vec<Formula> = groups
        .into_iter()
        .zip(slack_names)
        .map(|(eqs, slacks)| {
            Formula::exists(
                slacks.iter().map(|s| s.to_string()).collect(),
                Formula::and(eqs.into_iter().map(Formula::equation).collect()),
            )
        })
        .collect();
    wrap_prefix(Formula::exists(
        ["B", "C", "F"].map(String::from).to_vec(),
        Formula::and(conjuncts),
    ))
}

/// The sentence with the groups collected into one matrix equation:
/// singleton groups contribute their square, larger groups the squared
/// sum of squares.
fn build_e4() -> Formula {
    let matrix = Term::sum(matrix_groups().iter().map(|g| group_term(g)).collect());
    wrap_prefix(Formula::exists(inner_vars(), Formula::equation(matrix)))
}

/// Run every stage.  Symbolic throughout — nothing here evaluates the
/// astronomically large objects the final equation describes.
pub fn build_ph2() -> Result<Ph2Artifacts> {
    let e3 = build_e3();
    let e4 = build_e4();

    let (e6, mut pair_ledger) = collapse_pair_quantifiers(&e4)?;
    pair_ledger.set_display("pair.gx@0", "v18");
    pair_ledger.set_display("pair.gy@0", "v19");

    let mut system = eliminate_buq(&e6)?;
    system.ledger.set_display("pair.z@0", "z");

    let mut flat = flatten(&system)?;
    flat.ledger.set_display("pair.z@0", "z");

    let notes = vec![
        "the collapsed form and everything after it assume the window is nonempty: for k ≤ 2 \
         the source sentence holds vacuously while the corner pin of the collapse has no \
         solution"
            .into(),
        "every window with k ≥ 3 contains the pair (0, 0), which violates the orientation \
         x < y, so the source sentence can only hold through an empty window"
            .into(),
    ];

    let artifacts = Ph2Artifacts {
        p: system.matrix_z.clone(),
        b: system.b_bound.clone(),
        final_form: flat.formula.clone(),
        ledger: flat.ledger.clone(),
        e3,
        e4,
        e6,
        system,
        notes,
    };
    debug_assert_eq!(artifacts.system.conditions.len(), 27);
    debug_assert_eq!(artifacts.ledger.len(), 138);
    Ok(artifacts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_sentence, CheckConfig, Verdict};
    use crate::elim::Condition;
    use crate::eval::{eval_term, Assignment, Budget};
    use crate::formula::PrefixBlock;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn assign(pairs: &[(&str, i64)]) -> Assignment {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), BigInt::from(*v)))
            .collect()
    }

    #[test]
    fn stage_counts() {
        let art = build_ph2().unwrap();
        assert_eq!(art.system.conditions.len(), 27);
        assert_eq!(art.system.instance.inner.len(), 24);
        assert_eq!(art.system.z.len(), 25);
        assert_eq!(art.ledger.len(), 138);
        assert!(matches!(
            art.system.conditions[0],
            Condition::CongruenceModBinomial { .. }
        ));
        assert!(matches!(art.system.conditions[1], Condition::Identity { .. }));
        assert!(matches!(
            art.system.conditions[2],
            Condition::StrongInequality { .. }
        ));
        assert_eq!(
            art.system.conditions[3..]
                .iter()
                .filter(|c| matches!(c, Condition::DividesBinomial { .. }))
                .count(),
            24
        );
    }

    #[test]
    fn only_the_five_parameters_stay_free() {
        let art = build_ph2().unwrap();
        let expect: std::collections::BTreeSet<String> =
            PH2_PARAMS.iter().map(|s| s.to_string()).collect();
        assert_eq!(art.e3.free_vars(), expect);
        assert_eq!(art.e4.free_vars(), expect);
        assert_eq!(art.e6.free_vars(), expect);
        assert_eq!(art.final_form.free_vars(), expect);
    }

    #[test]
    fn prefix_shapes_match_the_stages() {
        let art = build_ph2().unwrap();
        assert_eq!(
            art.e4.stats().prefix,
            vec![
                PrefixBlock::Exists(4),
                PrefixBlock::Forall,
                PrefixBlock::Forall,
                PrefixBlock::Exists(20)
            ]
        );
        assert_eq!(
            art.e6.stats().prefix,
            vec![
                PrefixBlock::Exists(5),
                PrefixBlock::Forall,
                PrefixBlock::Exists(24)
            ]
        );
        assert_eq!(
            art.final_form.stats().prefix,
            vec![PrefixBlock::Exists(138)]
        );
    }

    #[test]
    fn matrix_vanishes_on_a_hand_built_window_instance() {
        // Window instance x = 0, y = 1 under c = 5, d = 1: the remainder
        // sequence reads A = rem(5, 2) = 1, B = rem(5, 2) = 1,
        // C = rem(5, 3) = 2, the table code a = 3, b = 1 gives
        // F = rem(3, 6) = 3, and F ≡ X ≡ 1 (mod 2).
        let art = build_ph2().unwrap();
        let matrix = art.e4.matrix_equations()[0];
        let mut env = assign(&[
            ("k", 3),
            ("M", 2),
            ("a", 3),
            ("b", 1),
            ("r", 2),
            ("c", 5),
            ("d", 1),
            ("A", 1),
            ("X", 1),
            ("x", 0),
            ("y", 1),
            ("B", 1),
            ("C", 2),
            ("F", 3),
        ]);
        for (i, val) in [0, 0, 2, 0, 2, 0, 1, 0, 0, 2, 0, 1, 1, 0, 1, 0, 0]
            .iter()
            .enumerate()
        {
            env.insert(format!("v{}", i + 1), BigInt::from(*val));
        }
        let value = eval_term(matrix, &env, &Budget::default()).unwrap();
        assert!(value.is_zero(), "matrix evaluates to {value}");
    }

    #[test]
    fn ledger_displays_follow_the_reference_layout() {
        let art = build_ph2().unwrap();
        let l = &art.ledger;
        assert_eq!(l.display_of("c"), Some("c"));
        assert_eq!(l.display_of("pair.z@0"), Some("z"));
        assert_eq!(l.display_of("buq.q@0"), Some("q"));
        assert_eq!(l.display_of("buq.z@0"), Some("z0"));
        assert_eq!(l.display_of("buq.z@24"), Some("z24"));
        assert_eq!(l.display_of("flat.y1@0"), Some("y1"));
        assert_eq!(l.display_of("divb.p@0"), Some("f1"));
        assert_eq!(l.display_of("divb.s@23"), Some("s24"));
        assert_eq!(l.display_of("binexp.remlt@0"), Some("h5"));
        // Quantifier order: carried block first, digit extraction last.
        let idents: Vec<&str> = l.entries().iter().map(|e| e.ident.as_str()).collect();
        assert_eq!(&idents[..5], &["c", "d", "A", "X", "pair.z@0"]);
        assert_eq!(idents[5], "buq.q@0");
        assert_eq!(idents[133], "flat.h1@0");
    }

    #[test]
    fn empty_window_holds_and_oriented_pairs_block_k3() {
        let art = build_ph2().unwrap();
        let cfg = CheckConfig {
            search_bound: 3,
            ..CheckConfig::default()
        };
        // k = 2: picking A = 0 empties both universal ranges.
        let vacuous = assign(&[("k", 2), ("M", 2), ("a", 3), ("b", 1), ("r", 2)]);
        assert_eq!(check_sentence(&art.e3, &vacuous, &cfg).unwrap(), Verdict::Holds);
        assert_eq!(check_sentence(&art.e4, &vacuous, &cfg).unwrap(), Verdict::Holds);
        // k = 3: every window contains (0, 0), which breaks x < y, and a
        // bounded search cannot refute the outer existential.
        let blocked = assign(&[("k", 3), ("M", 2), ("a", 3), ("b", 1), ("r", 2)]);
        assert_eq!(
            check_sentence(&art.e4, &blocked, &cfg).unwrap(),
            Verdict::Unknown
        );
    }

    #[test]
    fn collapsed_matrix_mentions_exactly_the_shared_unknowns() {
        let art = build_ph2().unwrap();
        let vars = art.p.vars();
        for p in PH2_PARAMS {
            assert!(vars.contains(p), "parameter {p} missing from the matrix");
        }
        for z in &art.system.z {
            assert!(vars.contains(z), "shared unknown {z} missing");
        }
        assert!(vars.contains("pair.z@0"));
        assert!(!vars.contains("x") && !vars.contains("B"));
        // The dominating bound mentions w but no window variables.
        let bvars = art.b.vars();
        assert!(bvars.contains("buq.w@0"));
        assert!(!bvars.contains("x") && !bvars.contains("y"));
    }
}
