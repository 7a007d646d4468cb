//! Property-based invariants: printing/parsing round-trips, oracle
//! algebra (Pell, Pascal, pairing, hereditary bases), bound domination,
//! and verdict preservation under quantifier collapsing.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use eppe_core::check::{check_sentence, CheckConfig, Verdict};
use eppe_core::elim::collapse_pair_quantifiers;
use eppe_core::emit::{emit_formula, EmitFormat};
use eppe_core::eval::{eval_term, Assignment, Budget};
use eppe_core::gadget::basic::g_remainder;
use eppe_core::gadget::bounds::build_b_bound;
use eppe_core::gadget::group_term;
use eppe_core::oracle::{self, HereditaryTree};
use eppe_core::parse::{parse_input, parse_term_str};
use eppe_core::pipeline::{build_goodstein, build_ph2};
use eppe_core::{Formula, Term};

/// Polynomial terms over `x` and `y` with literal exponents only, so they
/// can be both printed and bounded.
fn arb_poly_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0u64..6).prop_map(Term::nat),
        Just(Term::var("x")),
        Just(Term::var("y")),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Term::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Term::product),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner, 1u64..3u64).prop_map(|(b, e)| b.pow_u(e)),
        ]
    })
}

/// Terms as above, plus variable exponents, for syntax-only round-trips.
fn arb_syntax_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        arb_poly_term(),
        (
            arb_poly_term(),
            prop_oneof![Just(Term::var("x")), Just(Term::var("y"))],
        )
            .prop_map(|(b, e)| b.pow(e)),
    ]
}

/// Formulas exercising every constructor: a conjunction of two equations
/// under optional inner existentials, an optional bounded universal
/// (strict or inclusive), and an outer existential block.
fn arb_formula() -> impl Strategy<Value = Formula> {
    (
        arb_syntax_term(),
        arb_syntax_term(),
        any::<bool>(),
        any::<bool>(),
        any::<bool>(),
        0u64..4,
    )
        .prop_map(|(t1, t2, inner_block, with_forall, strict, b)| {
            let mut f = Formula::and(vec![Formula::equation(t1), Formula::equation(t2)]);
            if inner_block {
                f = Formula::exists(vec!["w".into()], f);
            }
            if with_forall {
                f = if strict {
                    Formula::forall_lt("u", Term::var("x") + Term::nat(b), f)
                } else {
                    Formula::forall_le("u", Term::nat(b), f)
                };
            }
            Formula::exists(vec!["ea".into(), "eb".into()], f)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn term_printing_round_trips(t in arb_syntax_term()) {
        let back = parse_term_str(&t.to_string()).expect("reparse");
        prop_assert_eq!(back, t);
    }

    #[test]
    fn formula_printing_round_trips(f in arb_formula()) {
        let (params, back) = parse_input(&f.to_string()).expect("reparse");
        prop_assert!(params.is_empty());
        prop_assert_eq!(&back, &f);
        // the s-expression emitter agrees with Display, and the other
        // renderers at least never panic on the same shapes
        prop_assert_eq!(emit_formula(&f, EmitFormat::Sexpr, None), f.to_string());
        let _ = emit_formula(&f, EmitFormat::Plain, None);
        let _ = emit_formula(&f, EmitFormat::Latex, None);
    }

    #[test]
    fn grouped_systems_vanish_exactly_when_every_equation_does(
        cs in prop::collection::vec((0u64..4, 0u64..4), 1..5),
        x0 in 0u64..4,
        y0 in 0u64..4,
    ) {
        let eqs: Vec<Term> = cs
            .iter()
            .map(|&(cx, cy)| {
                Term::var("x") - Term::nat(cx) + (Term::var("y") - Term::nat(cy))
            })
            .collect();
        let g = group_term(&eqs);
        let mut env = Assignment::new();
        env.insert("x".into(), BigInt::from(x0));
        env.insert("y".into(), BigInt::from(y0));
        let v = eval_term(&g, &env, &Budget::default()).expect("eval");
        let all_zero = cs.iter().all(|&(cx, cy)| x0 + y0 == cx + cy);
        prop_assert_eq!(v.is_zero(), all_zero);
        prop_assert!(!v.is_negative());
    }

    #[test]
    fn box_bounds_dominate_every_sampled_point(
        g in arb_poly_term(),
        xm in 0u64..5,
        ym in 0u64..5,
        px in 0u64..5,
        py in 0u64..5,
    ) {
        let px = px.min(xm);
        let py = py.min(ym);
        let mut corner = BTreeMap::new();
        corner.insert("x".to_string(), Term::nat(xm));
        corner.insert("y".to_string(), Term::nat(ym));
        let bound = build_b_bound(&g, &corner);
        let budget = Budget::default();
        let b = eval_term(&bound, &Assignment::new(), &budget).expect("closed bound");
        let mut env = Assignment::new();
        env.insert("x".into(), BigInt::from(px));
        env.insert("y".into(), BigInt::from(py));
        let v = eval_term(&g, &env, &budget).expect("sample");
        prop_assert!(
            v.abs() <= b,
            "g = {}, box = ({}, {}), point = ({}, {}), value {}, bound {}",
            g, xm, ym, px, py, v, b
        );
    }

    #[test]
    fn remainder_equations_check_out_at_scale(
        a in 0u64..=u64::MAX / 4,
        d in 1u64..=1_000_000,
    ) {
        let g = g_remainder(&Term::var("y"), &Term::nat(a), &Term::nat(d));
        let ids = g.fresh_idents(); // range slack first, quotient second
        let budget = Budget::default();
        let mut env = Assignment::new();
        env.insert("y".into(), BigInt::from(a % d));
        env.insert(ids[0].clone(), BigInt::from(d - 1 - a % d));
        env.insert(ids[1].clone(), BigInt::from(a / d));
        for eq in &g.equations {
            prop_assert!(eval_term(eq, &env, &budget).expect("eval").is_zero());
        }
        // a perturbed remainder violates at least one equation
        let wrong = (a % d + 1) % d;
        if wrong != a % d {
            env.insert("y".into(), BigInt::from(wrong));
            let still_fine = g.equations.iter().all(|eq| {
                eval_term(eq, &env, &budget)
                    .map(|v| v.is_zero())
                    .unwrap_or(false)
            });
            prop_assert!(!still_fine);
        }
    }

    #[test]
    fn hereditary_representation_round_trips(n in any::<u64>(), b in 2u64..12) {
        let n = BigUint::from(n);
        let base = BigUint::from(b);
        let t = oracle::to_hereditary(&n, &base);
        prop_assert_eq!(oracle::eval_tree(&t, &base), n);
        assert_canonical(&t, &base);
    }

    #[test]
    fn rebasing_by_tree_and_by_digits_agree(
        n in 0u64..64,
        from in 2u64..8,
        bump in 1u64..5,
    ) {
        // base 2 towers up fastest, so cap its inputs lower than the rest
        let n = BigUint::from(if from == 2 { n % 16 } else { n });
        let from_b = BigUint::from(from);
        let to_b = BigUint::from(from + bump);
        let via_tree = oracle::eval_tree(&oracle::to_hereditary(&n, &from_b), &to_b);
        prop_assert_eq!(oracle::rebase_direct(&n, &from_b, &to_b), via_tree);
        match oracle::goodstein_step(&n, &from_b) {
            Some(next) => {
                let up = &from_b + 1u32;
                let expected = oracle::rebase_direct(&n, &from_b, &up) - 1u32;
                prop_assert_eq!(next, expected);
            }
            None => prop_assert!(n.is_zero()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pell_pairs_satisfy_the_pell_equation_and_recurrence(
        a in 2u64..40,
        k in 0u64..25,
    ) {
        let ab = BigInt::from(a);
        let (psi, chi) = oracle::pell_pair(&ab, k);
        let d: BigInt = &ab * &ab - 1;
        prop_assert_eq!(&chi * &chi - &d * &psi * &psi, BigInt::one());
        let (psi1, chi1) = oracle::pell_pair(&ab, k + 1);
        let (psi2, chi2) = oracle::pell_pair(&ab, k + 2);
        let two_a: BigInt = 2 * &ab;
        prop_assert_eq!(psi2, &two_a * &psi1 - &psi);
        prop_assert_eq!(chi2, &two_a * &chi1 - &chi);
        prop_assert!(psi1 > psi);
    }

    #[test]
    fn partial_binomial_sums_shift_like_digits(
        x in 1u64..60,
        n in 0u64..14,
        off in 0u64..15,
    ) {
        let s = off.min(n);
        let xb = BigInt::from(x);
        // the whole sum is the binomial expansion of (x + 1)^n
        let xp1: BigInt = &xb + 1;
        prop_assert_eq!(oracle::partial_binomial_sum(&xb, n, 0), xp1.pow(n as u32));
        // the shortest suffix is the top coefficient alone
        prop_assert_eq!(oracle::partial_binomial_sum(&xb, n, n), BigInt::one());
        // peeling one term off the bottom shifts the rest up by x
        if s < n {
            let lhs = oracle::partial_binomial_sum(&xb, n, s);
            let rhs: BigInt = &xb * oracle::partial_binomial_sum(&xb, n, s + 1)
                + oracle::binomial(&BigInt::from(n), s);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pascal_rows_match_the_falling_factorial_binomial(n in 1u64..48) {
        let row = oracle::pascal_row(n);
        let prev = oracle::pascal_row(n - 1);
        prop_assert_eq!(row.len() as u64, n + 1);
        prop_assert!(row[0].is_one());
        prop_assert!(row[n as usize].is_one());
        for s in 1..n {
            let su = s as usize;
            prop_assert_eq!(&row[su], &(&prev[su - 1] + &prev[su]));
            prop_assert_eq!(&row[su], &row[(n - s) as usize]);
        }
        for s in 0..=n {
            let via_ff = oracle::binomial(&BigInt::from(n), s);
            prop_assert_eq!(via_ff.to_biguint().expect("nonnegative"), row[s as usize].clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn colouring_checks_are_monotone_in_the_box(
        k in 0u64..=3,
        r in 1u64..=2,
        m in 0u64..=2,
    ) {
        let limit = 1u64 << 22;
        let here = oracle::ph2_check(k, r, m, limit).expect("within budget");
        if here {
            // a larger box restricts to the smaller one, so the property
            // can only keep holding
            prop_assert!(oracle::ph2_check(k, r, m + 1, limit).expect("within budget"));
        }
        prop_assert_eq!(
            here,
            oracle::ph2_check_alt(k, r, m, limit).expect("within budget")
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn collapsing_adjacent_universals_preserves_verdicts(
        ca in 0u64..3,
        cb in 0u64..3,
        c0 in 0u64..3,
        d in 0u64..10,
        b1 in 0u64..3,
        b2 in 0u64..3,
        always_solvable in any::<bool>(),
    ) {
        let load = Term::nat(ca) * Term::var("x") + Term::nat(cb) * Term::var("y");
        let matrix = if always_solvable {
            Term::var("s") - (load + Term::nat(c0))
        } else {
            load + Term::var("s") + Term::one() - Term::nat(d)
        };
        let f = Formula::forall_le(
            "x",
            Term::nat(b1),
            Formula::forall_le(
                "y",
                Term::nat(b2),
                Formula::exists(vec!["s".into()], Formula::equation(matrix)),
            ),
        );
        // the matrix is solvable for s exactly when load + 1 <= d, and the
        // load is maximal at the box corner
        let expected_holds = always_solvable || ca * b1 + cb * b2 + 1 <= d;
        let cfg = CheckConfig {
            search_bound: 16,
            ..CheckConfig::default()
        };
        let env = Assignment::new();
        let original = check_sentence(&f, &env, &cfg).expect("original check");
        let (collapsed, _ledger) = collapse_pair_quantifiers(&f).expect("collapse");
        let merged = check_sentence(&collapsed, &env, &cfg).expect("collapsed check");
        prop_assert_eq!(original == Verdict::Holds, expected_holds);
        prop_assert_eq!(merged == Verdict::Holds, expected_holds);
        // neither side can ever report a definite failure here, because
        // both end in an existential block, so Holds-agreement is the
        // whole story; additionally the collapse must leave exactly one
        // universal quantifier
        prop_assert_eq!(collapsed.stats().forall_vars, 1);
    }
}

/// Coefficients lie in `1..base` and exponents strictly descend, at every
/// level of the tree.
fn assert_canonical(t: &HereditaryTree, base: &BigUint) {
    let mut last: Option<BigUint> = None;
    for (c, e) in &t.0 {
        assert!(!c.is_zero() && c < base, "coefficient {c} out of range");
        let ev = oracle::eval_tree(e, base);
        if let Some(prev) = &last {
            assert!(ev < *prev, "exponents not strictly descending");
        }
        last = Some(ev);
        assert_canonical(e, base);
    }
}

#[test]
fn cantor_codes_enumerate_each_diagonal_triangle_exactly() {
    for d in 0u64..=40 {
        let mut seen = BTreeSet::new();
        for x in 0..=d {
            for y in 0..=(d - x) {
                seen.insert(oracle::cantor_j(&BigUint::from(x), &BigUint::from(y)));
            }
        }
        let count = (d + 1) * (d + 2) / 2;
        let expected: BTreeSet<BigUint> = (0..count).map(BigUint::from).collect();
        assert_eq!(seen, expected, "triangle x + y <= {d}");
    }
}

#[test]
fn pipeline_stage_printing_round_trips() {
    let ph2 = build_ph2().expect("ph2 pipeline");
    let gs = build_goodstein().expect("goodstein pipeline");
    let stages: Vec<(&str, &Formula)> = vec![
        ("e3", &ph2.e3),
        ("e4", &ph2.e4),
        ("e6", &ph2.e6),
        ("ph2 final", &ph2.final_form),
        ("hp", &gs.hp),
        ("elem", &gs.elem),
        ("rb", &gs.rb),
        ("exp-k", &gs.exp_k),
        ("level", &gs.level),
        ("f-assembly", &gs.f_assembly),
        ("goodstein final", &gs.final_form),
    ];
    for (name, f) in stages {
        let src = f.to_string();
        let (params, back) = parse_input(&src).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(params.is_empty(), "{name} grew a params header");
        assert_eq!(&back, f, "{name} did not round-trip");
    }
}
