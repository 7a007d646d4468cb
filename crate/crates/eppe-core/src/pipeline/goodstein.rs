//! Termination of base-bumping sequences as a single prefixed equation.
//!
//! A sequence starts at `m` in base `a`: each step rewrites the current
//! value in hereditary base `i+a`, bumps every base occurrence to `i+a+1`,
//! and subtracts one.  Termination of every such sequence is expressed here
//! as one sentence with two free parameters `m` and `a`: an alternating
//! prefix of seven existential blocks and six bounded universal quantifiers
//! over a single polynomial-with-exponentials equation.
//!
//! The construction stacks three coding layers:
//!
//! * sequence access — every chain (the trajectory `m_0, m_1, …`, the
//!   exponent chains `z`, the rewrite accumulators `s` and `τ`, and the
//!   chains inside each base-bump application) is Gödel-coded by a pair
//!   `(b, d)` and read off with two-equation remainder groups;
//! * digit access — positional digits are pinned with five-unknown
//!   split groups (position pin, high part, digit, low part, two bounds);
//! * base bumping — each `RB` application nests nine groups (chain reads,
//!   digit reads, the accumulator update, and a leading-exponent group)
//!   into one squared summand.
//!
//! [`build_goodstein`] assembles the full sentence, a reusable one-step
//! assembly, and small self-contained versions of each ingredient, and it
//! reconciles the build's unknown ledger against a reference layout that
//! advertises 181 variables: the discrepancies (seven undeclared or
//! double-used unknowns plus a list of sign, pin, and source slips) are
//! reported in the [`GoodsteinArtifacts::erratum`] field rather than
//! silently absorbed.

use crate::formula::{Formula, PrefixBlock};
use crate::gadget::group_term;
use crate::ledger::VarLedger;
use crate::pipeline::hereditary::hp_product;
use crate::term::Term;
use crate::{Error, Result};

use std::collections::BTreeSet;

/// Free parameters of the full sentence: starting value and starting base.
pub const GOODSTEIN_PARAMS: [&str; 2] = ["m", "a"];

/// Existential-block sizes advertised by the reference layout (the six
/// universal variables bring its headline total to 181).
pub const GOODSTEIN_DISPLAY_CENSUS: [usize; 7] = [3, 13, 34, 27, 19, 44, 35];

/// Existential-block sizes of the reconciled build (188 with universals).
pub const GOODSTEIN_BUILT_CENSUS: [usize; 7] = [3, 17, 36, 27, 19, 45, 35];

/// Everything produced by [`build_goodstein`].
#[derive(Debug, Clone)]
pub struct GoodsteinArtifacts {
    /// Leading-exponent gadget: `l = HP(n)` in base `base` (free: `l`,
    /// `n`, `base`).
    pub hp: Formula,
    /// Positional-digit gadget: `c` is digit `j` of `n` in base `base`
    /// (free: `c`, `n`, `base`, `j`).
    pub elem: Formula,
    /// One base-bump application `nprime = RB(n)` at step `i`, start base
    /// `a` (free: `n`, `nprime`, `i`, `a`).
    pub rb: Formula,
    /// Exponent extraction `p = Exp_k(sn)` against the digits of `mi`
    /// (free: `p`, `sn`, `mi`, `i`, `a`, `k`).
    pub exp_k: Formula,
    /// Exponent-chain length `L = level(mi)` (free: `L`, `mi`, `i`, `a`).
    pub level: Formula,
    /// One full rewrite step `mnext = G_{i+a}(mi)` (free: `mi`, `mnext`,
    /// `i`, `a`).
    pub f_assembly: Formula,
    /// The closed sentence over parameters `m` and `a`.
    pub final_form: Formula,
    /// Every bound variable of `final_form` in quantifier order, including
    /// the six universals (origin `forall`); displays match the reference
    /// names, idents stay parser-plain (`dp` shows as `d'`).
    pub ledger: VarLedger,
    /// Headline variable count of the reference layout.
    pub display_total: usize,
    /// Reference-layout slips that the build corrects, one entry each.
    pub erratum: Vec<String>,
    /// Semantic caveats reproduced from the source construction.
    pub notes: Vec<String>,
}

impl GoodsteinArtifacts {
    /// Existential-block sizes read back off the built prefix.
    pub fn built_census(&self) -> Vec<usize> {
        self.final_form
            .stats()
            .prefix
            .iter()
            .filter_map(|b| match b {
                PrefixBlock::Exists(n) => Some(*n),
                PrefixBlock::Forall => None,
            })
            .collect()
    }

    /// Bound-variable total of the build (existentials plus universals).
    pub fn built_total(&self) -> usize {
        self.ledger.len()
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

/// `value = rem(source, pred + 1)` as its two-equation group: the strict
/// bound `value + lt = pred` and the division identity
/// `(pred + 1)·quot + value = source`.
fn rem_read(value: &Term, pred: Term, source: &Term, lt: &str, quot: &str) -> Vec<Term> {
    vec![
        Term::sum(vec![value.clone(), v(lt)]) - pred.clone(),
        Term::sum(vec![(pred + Term::one()) * v(quot), value.clone()]) - source.clone(),
    ]
}

/// Pinned digit split: `digit` is the digit of `source` at position `pos`
/// in base `base`.  Four equations over five fresh unknowns — the pin
/// (`pin = pos`), the split `hi·base^{pin+1} + digit·base^{pin} + lo =
/// source`, and the two bounds `digit < base`, `lo < base^{pin}`.
fn digit_pinned(
    digit: &Term,
    source: &Term,
    base: &Term,
    pos: Term,
    pin: &str,
    hi: &str,
    lo: &str,
    dslack: &str,
    rslack: &str,
) -> Vec<Term> {
    let pin_eq = if pos == Term::zero() {
        v(pin)
    } else {
        pos - v(pin)
    };
    vec![
        pin_eq,
        Term::sum(vec![
            v(hi) * base.clone().pow(v(pin) + Term::one()),
            digit.clone() * base.clone().pow(v(pin)),
            v(lo),
        ]) - source.clone(),
        Term::sum(vec![digit.clone(), v(dslack), Term::one()]) - base.clone(),
        Term::sum(vec![v(lo), v(rslack), Term::one()]) - base.clone().pow(v(pin)),
    ]
}

/// Slack names for one nested base-bump application.
struct RbNames<'a> {
    /// Chain reads: start, upper, lower, end values with their slack pairs.
    a0: &'a str,
    a0lt: &'a str,
    a0q: &'a str,
    hi: &'a str,
    hilt: &'a str,
    hiq: &'a str,
    lo: &'a str,
    lolt: &'a str,
    loq: &'a str,
    end: &'a str,
    endlt: &'a str,
    endq: &'a str,
    /// Digit split of the start value (position 0).
    elem0: [&'a str; 5],
    /// Digit split of the update coefficient (position `k + 1`).
    elemk: [&'a str; 5],
    /// Leading-exponent slacks.
    hp: [&'a str; 3],
}

/// One base-bump application `target = RB(source)` as a single squared
/// summand.  The chain is coded by `(chain_b, chain_d)`, runs to index
/// `hpvar = HP(source)`, is stepped by the universal `kvar`, and adds
/// `cvar·(base+1)^{k+1}` at each step, where `cvar` is digit `k+1` of
/// `source`.
#[allow(clippy::too_many_arguments)]
fn rb_nested(
    source: &Term,
    target: &Term,
    base: &Term,
    base1: &Term,
    chain_b: &str,
    chain_d: &str,
    hpvar: &str,
    kvar: &str,
    cvar: &str,
    n: &RbNames,
) -> Term {
    let cb = v(chain_b);
    let k1 = v(kvar) + Term::one();
    let a0 = v(n.a0);
    let [e0hi, e0lo, e0pin, e0ds, e0rs] = n.elem0;
    let [ekhi, eklo, ekpin, ekds, ekrs] = n.elemk;
    let groups: Vec<Vec<Term>> = vec![
        rem_read(&a0, v(chain_d), &cb, n.a0lt, n.a0q),
        digit_pinned(&a0, source, base, Term::zero(), e0pin, e0hi, e0lo, e0ds, e0rs),
        rem_read(
            &v(n.hi),
            (v(kvar) + Term::nat(2)) * v(chain_d),
            &cb,
            n.hilt,
            n.hiq,
        ),
        rem_read(&v(n.lo), k1.clone() * v(chain_d), &cb, n.lolt, n.loq),
        vec![Term::sum(vec![v(n.lo), v(cvar) * base1.clone().pow(k1.clone())]) - v(n.hi)],
        digit_pinned(&v(cvar), source, base, k1, ekpin, ekhi, eklo, ekds, ekrs),
        rem_read(
            &v(n.end),
            (v(hpvar) + Term::one()) * v(chain_d),
            &cb,
            n.endlt,
            n.endq,
        ),
        vec![v(n.end) - target.clone()],
        vec![hp_product(
            &v(hpvar),
            source,
            base,
            n.hp.map(|s| v(s)),
        )],
    ];
    Term::sum(groups.iter().map(|g| group_term(g)).collect()).squared()
}

/// Exponent extraction `exponent` for summand `k` of `sn`: the digit
/// `digit` (read from `mi` at position `pos`) contributes
/// `digit·base1^{exponent}` to `sn` with slack `y`, nested as one squared
/// summand.
#[allow(clippy::too_many_arguments)]
fn exp_nested(
    digit: &str,
    y: &str,
    exponent: &Term,
    sn: &Term,
    mi: &Term,
    base: &Term,
    base1: &Term,
    pos: Term,
    elem: [&str; 5],
) -> Term {
    let [hi, lo, pin, ds, rs] = elem;
    let main = Term::sum(vec![v(digit) * base1.clone().pow(exponent.clone()), v(y)]) - sn.clone();
    let split = digit_pinned(&v(digit), mi, base, pos, pin, hi, lo, ds, rs);
    Term::sum(vec![main.squared(), group_term(&split)]).squared()
}

/// Display-order summands of one rewrite step (free in `mi` and `mnext`):
/// everything between the trajectory reads, plus the terminal tie
/// `mnext + 1 = s_L` returned separately so the full sentence can splice
/// its own trajectory read in between.
fn step_groups(mi: &Term, mnext: &Term) -> (Vec<Term>, Term) {
    let i = v("i");
    let base = i.clone() + v("a");
    let rb_base1 = Term::sum(vec![v("i"), v("a"), Term::one()]);
    let tau_base1 = Term::sum(vec![v("i"), Term::one(), v("a")]);
    let b2 = v("b2");
    let d2 = v("d2");
    let b3 = v("b3");
    let d3 = v("d3");
    let b4 = v("b4");
    let d4 = v("d4");
    let n = v("n");
    let cap_l = v("L");
    let k = v("k");

    let mut groups: Vec<Term> = Vec::new();
    let push = |eqs: Vec<Term>, out: &mut Vec<Term>| out.push(group_term(&eqs));

    // Exponent chain z: next, current, start, one leading-exponent step,
    // then the two terminal bounds z_L < i+a <= z_{L-1}.
    push(
        rem_read(&v("v2"), d3.clone() * (n.clone() + Term::nat(2)), &b3, "w5", "w6"),
        &mut groups,
    );
    push(
        rem_read(&v("v3"), d3.clone() * (n.clone() + Term::one()), &b3, "w10", "w11"),
        &mut groups,
    );
    push(rem_read(mi, d3.clone(), &b3, "w1", "w2"), &mut groups);
    push(
        vec![hp_product(&v("v2"), &v("v3"), &base, [v("w7"), v("w8"), v("w9")])],
        &mut groups,
    );
    push(
        rem_read(&v("v4"), d3.clone() * (cap_l.clone() + Term::one()), &b3, "w12", "w13"),
        &mut groups,
    );
    push(
        vec![Term::sum(vec![v("v4"), v("w14"), Term::one()]) - base.clone()],
        &mut groups,
    );
    push(
        rem_read(&v("v5"), d3.clone() * cap_l.clone(), &b3, "w15", "w16"),
        &mut groups,
    );
    push(
        vec![Term::sum(vec![v("i"), v("a"), v("w17")]) - v("v5")],
        &mut groups,
    );

    // Accumulator chain s: start s_0 = RB(mi) via the nested u-block.
    push(rem_read(&v("v6"), d2.clone(), &b2, "j1", "j2"), &mut groups);
    groups.push(rb_nested(
        mi,
        &v("v6"),
        &base,
        &rb_base1,
        "u2",
        "u3",
        "u1",
        "u5",
        "u4",
        &RbNames {
            a0: "u6",
            a0lt: "u10",
            a0q: "u11",
            hi: "u7",
            hilt: "u17",
            hiq: "u18",
            lo: "u8",
            lolt: "u19",
            loq: "u20",
            end: "u9",
            endlt: "u26",
            endq: "u27",
            elem0: ["u12", "u13", "u14", "u15", "u16"],
            elemk: ["u21", "u22", "u23", "u24", "u25"],
            hp: ["u28", "u29", "u30"],
        },
    ));
    // Rewrite length: l = HP(mi), already available as u1.
    push(vec![v("l") - v("u1")], &mut groups);

    // Accumulator chain tau: start value and its digit-0 term.
    push(rem_read(&v("v7"), d4.clone(), &b4, "h5", "h6"), &mut groups);
    push(
        vec![v("v7") - v("c") * tau_base1.clone().pow(v("d"))],
        &mut groups,
    );
    push(
        digit_pinned(&v("c"), mi, &base, Term::zero(), "h9", "h7", "h8", "h10", "h11"),
        &mut groups,
    );
    // d = RB(d') via the nested h-block.
    groups.push(rb_nested(
        &v("dp"),
        &v("d"),
        &base,
        &rb_base1,
        "h13",
        "h14",
        "h12",
        "h15",
        "h16",
        &RbNames {
            a0: "h17",
            a0lt: "h21",
            a0q: "h22",
            hi: "h18",
            hilt: "h28",
            hiq: "h29",
            lo: "h19",
            lolt: "h30",
            loq: "h31",
            end: "h20",
            endlt: "h37",
            endq: "h38",
            elem0: ["h23", "h24", "h25", "h26", "h27"],
            elemk: ["h32", "h33", "h34", "h35", "h36"],
            hp: ["h39", "h40", "h41"],
        },
    ));
    // s_n read and d' = Exp_0(s_n).
    push(
        rem_read(&v("v8"), d2.clone() * (n.clone() + Term::one()), &b2, "e1", "e2"),
        &mut groups,
    );
    groups.push(exp_nested(
        "j7",
        "j8",
        &v("dp"),
        &v("v8"),
        mi,
        &base,
        &tau_base1,
        Term::zero(),
        ["j9", "j10", "j11", "j12", "j13"],
    ));

    // Tau update: tau_{k+1} = tau_k + f·(i+1+a)^{d'''}.
    push(
        rem_read(&v("v9"), d4.clone() * (k.clone() + Term::one()), &b4, "j14", "j15"),
        &mut groups,
    );
    push(
        rem_read(&v("v10"), d4.clone() * (k.clone() + Term::nat(2)), &b4, "j16", "j17"),
        &mut groups,
    );
    push(
        vec![
            Term::sum(vec![v("v9"), v("f") * tau_base1.clone().pow(v("dppp"))]) - v("v10"),
        ],
        &mut groups,
    );
    push(
        digit_pinned(
            &v("f"),
            mi,
            &base,
            k.clone() + Term::one(),
            "j19",
            "j17p",
            "j18",
            "j20",
            "j21",
        ),
        &mut groups,
    );
    // d''' = RB(d'') via the nested j-block.
    groups.push(rb_nested(
        &v("dpp"),
        &v("dppp"),
        &base,
        &rb_base1,
        "j23",
        "j24",
        "j22",
        "j25",
        "j26",
        &RbNames {
            a0: "j27",
            a0lt: "j31",
            a0q: "j32",
            hi: "j28",
            hilt: "j38",
            hiq: "j39",
            lo: "j29",
            lolt: "j40",
            loq: "j41",
            end: "j30",
            endlt: "j47",
            endq: "j48",
            elem0: ["j33", "j34", "j35", "j36", "j37"],
            elemk: ["j42", "j43", "j44", "j45", "j46"],
            hp: ["j49", "j50", "j51"],
        },
    ));
    // Chain ends: tau_l = s_{n+1}, and d'' = Exp_{k+1}(s_n).
    push(
        rem_read(&v("v12"), d4.clone() * (v("l") + Term::one()), &b4, "q8", "q9"),
        &mut groups,
    );
    groups.push(exp_nested(
        "q1",
        "q2",
        &v("dpp"),
        &v("v8"),
        mi,
        &base,
        &tau_base1,
        k.clone() + Term::one(),
        ["q3", "q4", "q5", "q6", "q7"],
    ));
    push(
        rem_read(&v("v12"), d2.clone() * (n.clone() + Term::nat(2)), &b2, "j3", "j4"),
        &mut groups,
    );
    push(
        rem_read(&v("v13"), d2.clone() * (cap_l.clone() + Term::one()), &b2, "j5", "j6"),
        &mut groups,
    );

    let tie = group_term(&[Term::sum(vec![mnext.clone(), Term::one()]) - v("v13")]);
    (groups, tie)
}

fn names(prefix: &str, lo: usize, hi: usize) -> Vec<String> {
    (lo..=hi).map(|i| format!("{prefix}{i}")).collect()
}

fn block1() -> Vec<String> {
    ["r", "b1", "d1"].map(String::from).to_vec()
}

fn block3() -> Vec<String> {
    let mut b: Vec<String> = ["v1", "v14", "v15", "v16", "h1", "h2", "h3", "h4", "w3", "w4",
        "p1", "p2", "L"]
        .map(String::from)
        .to_vec();
    b.extend(["b2", "d2", "b3", "d3"].map(String::from));
    b
}

fn block5() -> Vec<String> {
    let mut b: Vec<String> = ["v2", "v3", "v4", "v5", "v6", "v8", "v12", "v13", "w1", "w2"]
        .map(String::from)
        .to_vec();
    b.extend(names("w", 5, 17));
    b.extend(names("j", 1, 6));
    b.extend(["e1", "e2", "u1", "u2", "u3"].map(String::from));
    b.extend(["b4", "d4"].map(String::from));
    b
}

fn block7() -> Vec<String> {
    let mut b = vec!["u4".to_string()];
    b.extend(names("u", 6, 30));
    b.push("l".to_string());
    b
}

fn block9() -> Vec<String> {
    let mut b: Vec<String> = ["v7", "c", "d", "dp", "v9", "v10", "f", "dpp", "dppp"]
        .map(String::from)
        .to_vec();
    b.extend(names("h", 5, 14));
    b
}

fn block11() -> Vec<String> {
    let mut b = names("h", 16, 41);
    b.extend(names("j", 7, 24));
    b.push("j17p".to_string());
    b
}

fn block13() -> Vec<String> {
    let mut b = names("j", 26, 51);
    b.extend(names("q", 1, 9));
    b
}

/// Idents the reconciled build adds over the reference layout.
#[cfg(test)]
fn added_idents() -> [&'static str; 7] {
    ["b2", "d2", "b3", "d3", "b4", "d4", "j17p"]
}

fn pretty(ident: &str) -> &str {
    match ident {
        "dp" => "d'",
        "dpp" => "d''",
        "dppp" => "d'''",
        "j17p" => "j17'",
        other => other,
    }
}

/// Small self-contained `nprime = RB(n)` built from the clean gadgets
/// (no position pins), with conjunction matrix for direct checking.
fn build_rb() -> Formula {
    let base = v("i") + v("a");
    let base1 = Term::sum(vec![v("i"), v("a"), Term::one()]);
    let n = v("n");
    let k1 = v("k") + Term::one();

    let mut eqs: Vec<Term> = Vec::new();
    eqs.push(hp_product(&v("l"), &n, &base, [v("s1"), v("s2"), v("s3")]));
    eqs.extend(rem_read(&v("a0"), v("d"), &v("b"), "a0lt", "a0q"));
    // a0 = digit 0 of n.
    eqs.push(
        Term::sum(vec![
            v("e0hi") * base.clone().pow(Term::one()),
            v("a0"),
            v("e0lo"),
        ]) - n.clone(),
    );
    eqs.push(Term::sum(vec![v("a0"), v("e0dl"), Term::one()]) - base.clone());
    eqs.push(
        Term::sum(vec![v("e0lo"), v("e0rl"), Term::one()]) - base.clone().pow(Term::zero()),
    );
    eqs.extend(rem_read(
        &v("hi"),
        (v("k") + Term::nat(2)) * v("d"),
        &v("b"),
        "hilt",
        "hiq",
    ));
    eqs.extend(rem_read(&v("lo"), k1.clone() * v("d"), &v("b"), "lolt", "loq"));
    eqs.push(Term::sum(vec![v("lo"), v("c") * base1.pow(k1.clone())]) - v("hi"));
    // c = digit k+1 of n.
    eqs.push(
        Term::sum(vec![
            v("ekhi") * base.clone().pow(k1.clone() + Term::one()),
            v("c") * base.clone().pow(k1.clone()),
            v("eklo"),
        ]) - n.clone(),
    );
    eqs.push(Term::sum(vec![v("c"), v("ekdl"), Term::one()]) - base.clone());
    eqs.push(
        Term::sum(vec![v("eklo"), v("ekrl"), Term::one()]) - base.clone().pow(k1),
    );
    eqs.extend(rem_read(
        &v("end"),
        (v("l") + Term::one()) * v("d"),
        &v("b"),
        "endlt",
        "endq",
    ));
    eqs.push(v("end") - v("nprime"));

    let inner: Vec<String> = [
        "c", "a0", "hi", "lo", "end", "s1", "s2", "s3", "a0lt", "a0q", "e0hi", "e0lo",
        "e0dl", "e0rl", "hilt", "hiq", "lolt", "loq", "ekhi", "eklo", "ekdl", "ekrl",
        "endlt", "endq",
    ]
    .map(String::from)
    .to_vec();
    let matrix = Formula::and(eqs.into_iter().map(Formula::equation).collect());
    Formula::exists(
        ["l", "b", "d"].map(String::from).to_vec(),
        Formula::forall_le("k", v("l"), Formula::exists(inner, matrix)),
    )
}

/// Small self-contained `p = Exp_k(sn)`: digit `k` of `mi` contributes
/// `c·(i+1+a)^p` to `sn` with slack `y`.
fn build_exp_k() -> Formula {
    let base = v("i") + v("a");
    let base1 = Term::sum(vec![v("i"), Term::one(), v("a")]);
    let eqs = vec![
        Term::sum(vec![v("c") * base1.pow(v("p")), v("y")]) - v("sn"),
        Term::sum(vec![
            v("ehi") * base.clone().pow(v("k") + Term::one()),
            v("c") * base.clone().pow(v("k")),
            v("elo"),
        ]) - v("mi"),
        Term::sum(vec![v("c"), v("edl"), Term::one()]) - base.clone(),
        Term::sum(vec![v("elo"), v("erl"), Term::one()]) - base.pow(v("k")),
    ];
    Formula::exists(
        ["c", "y", "ehi", "elo", "edl", "erl"].map(String::from).to_vec(),
        Formula::and(eqs.into_iter().map(Formula::equation).collect()),
    )
}

/// Small self-contained `L = level(mi)`: the leading-exponent chain from
/// `mi` crosses the base between indices `L-1` and `L`.
fn build_level() -> Formula {
    let base = v("i") + v("a");
    let b = v("b");
    let k1 = v("k") + Term::one();

    let mut eqs: Vec<Term> = Vec::new();
    eqs.extend(rem_read(&v("cur"), k1.clone() * v("d"), &b, "curlt", "curq"));
    eqs.extend(rem_read(
        &v("nxt"),
        (v("k") + Term::nat(2)) * v("d"),
        &b,
        "nxtlt",
        "nxtq",
    ));
    eqs.push(hp_product(&v("nxt"), &v("cur"), &base, [v("s1"), v("s2"), v("s3")]));
    eqs.extend(rem_read(&v("mi"), v("d"), &b, "zlt", "zq"));
    eqs.extend(rem_read(
        &v("endv"),
        (v("L") + Term::one()) * v("d"),
        &b,
        "endlt",
        "endq",
    ));
    eqs.push(Term::sum(vec![v("endv"), v("bs1"), Term::one()]) - base.clone());
    eqs.extend(rem_read(&v("prev"), v("L") * v("d"), &b, "prevlt", "prevq"));
    eqs.push(Term::sum(vec![v("i"), v("a"), v("bs2")]) - v("prev"));

    let inner: Vec<String> = [
        "cur", "nxt", "curlt", "curq", "nxtlt", "nxtq", "s1", "s2", "s3", "zlt", "zq",
        "endv", "endlt", "endq", "bs1", "prev", "prevlt", "prevq", "bs2",
    ]
    .map(String::from)
    .to_vec();
    let matrix = Formula::and(eqs.into_iter().map(Formula::equation).collect());
    Formula::exists(
        ["b", "d"].map(String::from).to_vec(),
        Formula::forall_le("k", v("L"), Formula::exists(inner, matrix)),
    )
}

/// Assemble the full sentence, its one-step core, the small ingredient
/// formulas, the reconciled ledger, and the erratum report.
pub fn build_goodstein() -> Result<GoodsteinArtifacts> {
    // One rewrite step with the trajectory values left symbolic.
    let (step, tie) = step_groups(&v("mi"), &v("mnext"));
    let f_matrix = Formula::equation(Term::sum(
        step.iter().cloned().chain([tie.clone()]).collect(),
    ));
    let mut f_outer: Vec<String> = vec!["L".to_string()];
    f_outer.extend(["b2", "d2", "b3", "d3"].map(String::from));
    let f_block5: Vec<String> = block5();
    let f_assembly = Formula::exists(
        f_outer,
        Formula::forall_le(
            "n",
            v("L"),
            Formula::exists(
                f_block5,
                Formula::forall_le(
                    "u5",
                    v("u1"),
                    Formula::exists(
                        block7(),
                        Formula::forall_le(
                            "k",
                            v("l"),
                            Formula::exists(
                                block9(),
                                Formula::forall_le(
                                    "h15",
                                    v("h12"),
                                    Formula::exists(
                                        block11(),
                                        Formula::forall_le(
                                            "j25",
                                            v("j22"),
                                            Formula::exists(block13(), f_matrix),
                                        ),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );

    // The closed sentence: trajectory reads spliced around the same step.
    let (step, tie) = step_groups(&v("v1"), &v("v14"));
    let d1 = v("d1");
    let b1 = v("b1");
    let mut groups: Vec<Term> = Vec::new();
    groups.push(group_term(&rem_read(
        &v("v1"),
        d1.clone() * (v("i") + Term::one()),
        &b1,
        "w3",
        "w4",
    )));
    groups.extend(step);
    groups.push(group_term(&rem_read(
        &v("v14"),
        d1.clone() * (v("i") + Term::nat(2)),
        &b1,
        "p1",
        "p2",
    )));
    groups.push(tie);
    groups.push(group_term(&rem_read(&v("v15"), d1.clone(), &b1, "h1", "h2")));
    groups.push(group_term(&[v("v15") - v("m")]));
    let mut mr = rem_read(
        &v("v16"),
        d1 * (v("r") + Term::one()),
        &b1,
        "h3",
        "h4",
    );
    mr.push(v("v16"));
    groups.push(group_term(&mr));

    let matrix = Formula::equation(Term::sum(groups));
    let final_form = Formula::exists(
        block1(),
        Formula::forall_le(
            "i",
            v("r"),
            Formula::exists(
                block3(),
                Formula::forall_le(
                    "n",
                    v("L"),
                    Formula::exists(
                        block5(),
                        Formula::forall_le(
                            "u5",
                            v("u1"),
                            Formula::exists(
                                block7(),
                                Formula::forall_le(
                                    "k",
                                    v("l"),
                                    Formula::exists(
                                        block9(),
                                        Formula::forall_le(
                                            "h15",
                                            v("h12"),
                                            Formula::exists(
                                                block11(),
                                                Formula::forall_le(
                                                    "j25",
                                                    v("j22"),
                                                    Formula::exists(block13(), matrix),
                                                ),
                                            ),
                                        ),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    final_form.validate_no_rebind(&BTreeSet::new())?;

    let free = final_form.free_vars();
    let expected: BTreeSet<String> = GOODSTEIN_PARAMS.iter().map(|s| s.to_string()).collect();
    if free != expected {
        return Err(Error::ShapeMismatch(format!(
            "closed sentence should be free in exactly {GOODSTEIN_PARAMS:?}, got {free:?}"
        )));
    }

    // Ledger in quantifier order, universals included.
    let mut ledger = VarLedger::new();
    let universal_after: [(usize, &str); 7] = [
        (0, ""),
        (1, "i"),
        (3, "n"),
        (5, "u5"),
        (7, "k"),
        (9, "h15"),
        (11, "j25"),
    ];
    let blocks = [
        (1usize, block1()),
        (3, block3()),
        (5, block5()),
        (7, block7()),
        (9, block9()),
        (11, block11()),
        (13, block13()),
    ];
    for (idx, (blk, vars)) in blocks.iter().enumerate() {
        if idx > 0 {
            let (_, u) = universal_after[idx];
            ledger.note_existing(u, "forall", Some(u));
        }
        let origin = format!("blk{blk}");
        for ident in vars {
            ledger.note_existing(ident, &origin, Some(pretty(ident)));
        }
    }

    let erratum = vec![
        "block 3 declares 13 unknowns but the matrix also reads the undeclared \
         chain codes b2, d2 (accumulator s) and b3, d3 (exponent chain z); declared, 13 -> 17"
            .to_string(),
        "block 5 declares 34 unknowns but the matrix also reads the undeclared \
         accumulator codes b4, d4; declared, 34 -> 36"
            .to_string(),
        "j17 serves both as the quotient of the tau_{k+1} read and as the high \
         part of the digit split in the tau update; the high part gets the fresh \
         unknown j17' (block 11, 44 -> 45)"
            .to_string(),
        "position pins at the start of digit splits are printed one too high \
         ((u14+1)^2, (h9+1)^2, (h25+1)^2, (j11+1)^2, (j35+1)^2 have no solution); \
         corrected to pin position 0"
            .to_string(),
        "interior digit-split pins are printed one too low (u23 = u5, h34 = h15, \
         j44 = j25, j19 = k, q5 = k); corrected to position k+1, with the high-part \
         exponents following as pin+1"
            .to_string(),
        "high parts of digit splits are printed without their base power \
         (bare u12, h7, h23, j9, j33); restored as hi*(i+a)^(pin+1)"
            .to_string(),
        "the interior digit read of the s_0 block cites its own digit u4 as \
         source; corrected to v1"
            .to_string(),
        "the s_0 chain end is compared against u6 (the chain's own start); \
         corrected to v6 = s_0"
            .to_string(),
        "the tau_0 read cites u2 (the s_0 chain code) as source; corrected to b4"
            .to_string(),
        "leading-exponent groups print the lower bound as two stray summands \
         ((i+a)^l)^2 + slack - value; corrected to the single square \
         ((i+a)^l + slack - value)^2"
            .to_string(),
        "the pre-terminal bound (i+a+w17+1-v5)^2 demands z_{L-1} > i+a where \
         the chain-length definition requires >=; the +1 is dropped"
            .to_string(),
        "the terminal tie appears twice ((v13-v14-1)^2 and (v14+1-v13)^2); \
         one copy kept"
            .to_string(),
        "the rewrite length l is never tied to the exponent chain (the one-step \
         assembly's conjunct l = z_1 is missing); restored as (l-u1)^2, no new \
         unknowns since u1 already carries HP(m_i)"
            .to_string(),
    ];

    let notes = vec![
        "at a terminal step (single-digit m_i, including m_i = 0) the \
         pre-terminal bound forces rem(b3, 1) = 0 >= i+a, which no assignment \
         satisfies; the source construction has the same gap and it is \
         reproduced here, not repaired"
            .to_string(),
        "each base-bump application and each exponent extraction is nested \
         as one squared summand, following the reference layout's double-closed \
         grouping"
            .to_string(),
    ];

    let artifacts = GoodsteinArtifacts {
        hp: {
            let g = crate::pipeline::hereditary::g_hp(&v("l"), &v("n"), &v("base"));
            g.to_formula()
        },
        elem: {
            let g = crate::pipeline::hereditary::g_elem(&v("c"), &v("n"), &v("base"), &v("j"));
            g.to_formula()
        },
        rb: build_rb(),
        exp_k: build_exp_k(),
        level: build_level(),
        f_assembly,
        final_form,
        ledger,
        display_total: 181,
        erratum,
        notes,
    };

    debug_assert_eq!(artifacts.built_census(), GOODSTEIN_BUILT_CENSUS.to_vec());
    debug_assert_eq!(artifacts.built_total(), 188);
    Ok(artifacts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_sentence, CheckConfig, Verdict};
    use crate::eval::{eval_term, Assignment, Budget};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn assign(pairs: &[(&str, i64)]) -> Assignment {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), BigInt::from(*v)))
            .collect()
    }

    #[test]
    fn census_reconciles_the_reference_layout() {
        let art = build_goodstein().unwrap();
        assert_eq!(art.built_census(), GOODSTEIN_BUILT_CENSUS.to_vec());
        assert_eq!(art.built_total(), 188);
        assert_eq!(art.display_total, 181);
        // The reference layout's headline count is its existential blocks
        // plus the six universals; the build adds exactly the seven
        // reconciled unknowns.
        let displayed: usize = GOODSTEIN_DISPLAY_CENSUS.iter().sum::<usize>() + 6;
        assert_eq!(displayed, art.display_total);
        let added = added_idents();
        let kept = art
            .ledger
            .entries()
            .iter()
            .filter(|e| !added.contains(&e.ident.as_str()))
            .count();
        assert_eq!(kept, art.display_total);
        // Alternating prefix: seven existential blocks, six universals.
        let prefix = art.final_form.stats().prefix;
        assert_eq!(prefix.len(), 13);
        for (pos, block) in prefix.iter().enumerate() {
            if pos % 2 == 0 {
                assert!(matches!(block, PrefixBlock::Exists(_)));
            } else {
                assert_eq!(*block, PrefixBlock::Forall);
            }
        }
    }

    #[test]
    fn free_variables_name_the_interfaces() {
        let art = build_goodstein().unwrap();
        let free = |f: &Formula| {
            f.free_vars()
                .into_iter()
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(free(&art.final_form), "a,m");
        assert_eq!(free(&art.f_assembly), "a,i,mi,mnext");
        assert_eq!(free(&art.rb), "a,i,n,nprime");
        assert_eq!(free(&art.exp_k), "a,i,k,mi,p,sn");
        assert_eq!(free(&art.level), "L,a,i,mi");
        assert_eq!(free(&art.hp), "base,l,n");
        assert_eq!(free(&art.elem), "base,c,j,n");
    }

    #[test]
    fn the_matrix_is_one_equation_of_grouped_summands() {
        let art = build_goodstein().unwrap();
        let eqs = art.final_form.matrix_equations();
        assert_eq!(eqs.len(), 1);
        match eqs[0] {
            Term::Sum(parts) => assert_eq!(parts.len(), 32),
            other => panic!("matrix should be a flat sum of groups, got {other:?}"),
        }
        let step = art.f_assembly.matrix_equations();
        assert_eq!(step.len(), 1);
        match step[0] {
            Term::Sum(parts) => assert_eq!(parts.len(), 27),
            other => panic!("step matrix should be a flat sum, got {other:?}"),
        }
    }

    #[test]
    fn ledger_order_and_displays_follow_the_reference() {
        let art = build_goodstein().unwrap();
        let idents: Vec<&str> = art
            .ledger
            .entries()
            .iter()
            .map(|e| e.ident.as_str())
            .collect();
        assert_eq!(&idents[..4], &["r", "b1", "d1", "i"]);
        // Reconciled code pairs close block 3, right before the n-universal.
        assert_eq!(&idents[17..22], &["b2", "d2", "b3", "d3", "n"]);
        assert_eq!(art.ledger.display_of("dp"), Some("d'"));
        assert_eq!(art.ledger.display_of("dppp"), Some("d'''"));
        assert_eq!(art.ledger.display_of("j17p"), Some("j17'"));
        assert_eq!(art.ledger.display_of("v1"), Some("v1"));
        // Universals carry their own origin so census tools can drop them.
        let foralls: Vec<&str> = art
            .ledger
            .entries()
            .iter()
            .filter(|e| e.origin == "forall")
            .map(|e| e.ident.as_str())
            .collect();
        assert_eq!(foralls, vec!["i", "n", "u5", "k", "h15", "j25"]);
    }

    #[test]
    fn erratum_and_notes_cover_the_reconciliation() {
        let art = build_goodstein().unwrap();
        assert_eq!(art.erratum.len(), 13);
        assert!(art.erratum.iter().any(|e| e.contains("j17'")));
        assert!(art.erratum.iter().any(|e| e.contains("l = z_1")));
        assert!(art.erratum.iter().any(|e| e.contains("b4, d4")));
        assert!(art.notes.iter().any(|n| n.contains("terminal")));
    }

    #[test]
    fn rb_decodes_tiny_base_bumps() {
        // Base 3 at step 0 (i = 0, a = 3): 0 -> 0, 1 -> 1, 2 -> 2 keep
        // their digits; the chain codes for these fit a small search.
        let art = build_goodstein().unwrap();
        let cfg = CheckConfig {
            search_bound: 5,
            ..CheckConfig::default()
        };
        for value in 0..=2 {
            let env = assign(&[("n", value), ("nprime", value), ("i", 0), ("a", 3)]);
            assert_eq!(
                check_sentence(&art.rb, &env, &cfg).unwrap(),
                Verdict::Holds,
                "RB({value}) = {value} in base 3"
            );
        }
        let wrong = assign(&[("n", 1), ("nprime", 2), ("i", 0), ("a", 3)]);
        assert_ne!(
            check_sentence(&art.rb, &wrong, &cfg).unwrap(),
            Verdict::Holds,
            "RB(1) is 1, never 2"
        );
    }

    #[test]
    fn exp_k_splits_off_one_digit_term() {
        // m_i = 5 in base 3 has digits [2, 1]; after the bump the digit 2
        // contributes 2*4^0 to s_n = 6 with slack 4, so p = 0 is accepted
        // and p = 1 would overshoot.
        let art = build_goodstein().unwrap();
        let cfg = CheckConfig::default();
        let good = assign(&[("p", 0), ("sn", 6), ("mi", 5), ("i", 0), ("a", 3), ("k", 0)]);
        assert_eq!(
            check_sentence(&art.exp_k, &good, &cfg).unwrap(),
            Verdict::Holds
        );
        let over = assign(&[("p", 1), ("sn", 6), ("mi", 5), ("i", 0), ("a", 3), ("k", 0)]);
        assert_ne!(
            check_sentence(&art.exp_k, &over, &cfg).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn level_matrix_accepts_a_hand_built_chain() {
        // m_i = 3 in base 3: the leading-exponent chain is 3, 1, 0, which
        // crosses the base between indices 0 and 1, so L = 1.  The chain
        // is coded by b = 208, d = 4: rem(208, 5) = 3, rem(208, 9) = 1,
        // rem(208, 13) = 0.
        let art = build_goodstein().unwrap();
        let eqs = art.level.matrix_equations();
        let budget = Budget::default();
        let shared = [
            ("L", 1),
            ("mi", 3),
            ("i", 0),
            ("a", 3),
            ("b", 208),
            ("d", 4),
            ("zlt", 1),
            ("zq", 41),
            ("endv", 1),
            ("endlt", 7),
            ("endq", 23),
            ("bs1", 1),
            ("prev", 3),
            ("prevlt", 1),
            ("prevq", 41),
            ("bs2", 0),
        ];
        let per_k: [&[(&str, i64)]; 2] = [
            &[
                ("k", 0),
                ("cur", 3),
                ("curlt", 1),
                ("curq", 41),
                ("nxt", 1),
                ("nxtlt", 7),
                ("nxtq", 23),
                ("s1", 5),
                ("s2", 0),
                ("s3", 8),
            ],
            &[
                ("k", 1),
                ("cur", 1),
                ("curlt", 7),
                ("curq", 23),
                ("nxt", 0),
                ("nxtlt", 12),
                ("nxtq", 16),
                ("s1", 1),
                ("s2", 0),
                ("s3", 0),
            ],
        ];
        for slice in per_k {
            let mut env = assign(&shared);
            env.extend(assign(slice));
            for (pos, eq) in eqs.iter().enumerate() {
                let value = eval_term(eq, &env, &budget).unwrap();
                assert!(
                    value.is_zero(),
                    "equation {pos} evaluates to {value} at k = {}",
                    env["k"]
                );
            }
        }
    }
}
