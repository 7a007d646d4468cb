//! Command-line front end: parse and transform formulas, build the two
//! headline pipelines, sweep gadgets against their oracles, and compute
//! reference values directly.
//!
//! All primary output is deterministic (identical inputs and flags give
//! byte-identical bytes); timing chatter goes to stderr.  Exit codes:
//! 0 success, 2 parse error, 3 pass-shape mismatch, 4 budget exceeded,
//! 1 anything else (including unexpected verification counterexamples).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

use eppe_core::elim::{
    collapse_pair_quantifiers, eliminate_buq, flatten, EquationSystem, FlattenResult,
};
use eppe_core::emit::{emit_formula, emit_term, EmitFormat};
use eppe_core::error::Error;
use eppe_core::formula::Formula;
use eppe_core::gadget::group_term;
use eppe_core::ledger::VarLedger;
use eppe_core::oracle::harness::{
    default_ranges, equivalence_harness, gadget_names, HarnessConfig, ParamRange,
};
use eppe_core::oracle::{
    self, HereditaryTree,
};
use eppe_core::parse::parse_input;
use eppe_core::pipeline::{
    build_goodstein, build_ph2, Ph2Artifacts, GOODSTEIN_DISPLAY_CENSUS, GOODSTEIN_PARAMS,
    PH2_PARAMS,
};
use eppe_core::term::Term;
use eppe_core::Result;

#[derive(Debug, Parser)]
#[command(
    name = "eppe",
    version,
    about = "Exponential prefixed polynomial equations: compile, build, verify, compute"
)]
struct RunConfig {
    /// Search bound for non-determined unknowns in verification sweeps.
    #[arg(long, global = true, default_value_t = 8)]
    bound: u64,

    /// Resource budget as a maximum bit-length for computed values.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    budget_bits: u64,

    /// Output format for formulas and terms.
    #[arg(long, global = true, value_enum, default_value_t = EmitArg::Sexpr)]
    emit: EmitArg,

    /// Write primary output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for verification sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Sexpr,
    Plain,
    Latex,
}

impl From<EmitArg> for EmitFormat {
    fn from(a: EmitArg) -> EmitFormat {
        match a {
            EmitArg::Sexpr => EmitFormat::Sexpr,
            EmitArg::Plain => EmitFormat::Plain,
            EmitArg::Latex => EmitFormat::Latex,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula file and run transformation passes over it.
    Compile {
        /// Input file in the s-expression grammar.
        file: PathBuf,
        /// Merge the two adjacent bounded universals into one via the
        /// pairing polynomial.
        #[arg(long)]
        collapse_pairs: bool,
        /// Eliminate the bounded universal into an existential condition
        /// system.
        #[arg(long)]
        eliminate_buq: bool,
        /// Rewrite the eliminated system as one prefixed equation
        /// (implies --eliminate-buq).
        #[arg(long)]
        flatten: bool,
    },
    /// Build a full artifact chain and report its conformance summary.
    Pipeline {
        #[command(subcommand)]
        which: PipelineCmd,
    },
    /// Sweep a registered gadget against its independent oracle.
    Verify {
        /// Gadget name (an unknown name lists the registry).
        gadget: String,
        /// Override one default range, e.g. --range z=1..6 (repeatable).
        #[arg(long, value_name = "NAME=LO..HI")]
        range: Vec<String>,
    },
    /// Compute reference values directly.
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
}

#[derive(Debug, Subcommand)]
enum PipelineCmd {
    /// Pair-colouring sentence, taken down to one equation in 138
    /// unknowns.
    Ph2 {
        /// In LaTeX output, render the repeated divisibility blocks as
        /// one indexed sum.
        #[arg(long)]
        sum_notation: bool,
    },
    /// Termination sentence, reconciled against the 181-variable
    /// reference display.
    Goodstein,
}

#[derive(Debug, Subcommand)]
enum OracleCmd {
    /// Rewrite sequence from M at starting base A.
    Goodstein {
        m: u64,
        a: u64,
        /// Give up after this many steps.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Row N of Pascal's triangle.
    Binomial { n: u64 },
    /// Least M making the pair-colouring statement true at (k, r).
    #[command(name = "ph2-min-m", alias = "ph2-min-M")]
    Ph2MinM {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        /// Colouring-enumeration budget.
        #[arg(long, default_value_t = 1 << 22)]
        limit: u64,
    },
    /// Decide the pair-colouring statement at one (k, r, M).
    Ph2Check {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        m: u64,
        /// Colouring-enumeration budget.
        #[arg(long, default_value_t = 1 << 22)]
        limit: u64,
    },
    /// Table of the solution sequence of x^2 - (A^2-1) y^2 = 1.
    Psi {
        a: u64,
        /// Largest index to print.
        #[arg(long, default_value_t = 10)]
        count: u64,
    },
    /// Partial expansion sum of C(n, s+i) x^i for i = 0..=n-s.
    PartialBinom { x: u64, n: u64, s: u64 },
    /// Pairing value J(x, y).
    Cantor { x: u64, y: u64 },
    /// Hereditary base-BASE representation of N.
    Hereditary { n: u64, base: u64 },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } => 2,
        Error::ShapeMismatch(_) => 3,
        Error::BudgetExceeded(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let run = RunConfig::parse();
    if run.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(run.jobs)
            .build_global();
    }
    match dispatch(&run) {
        Ok((page, code)) => {
            if let Some(path) = &run.out {
                if let Err(e) = std::fs::write(path, page) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            } else {
                // a closed pipe (e.g. `eppe … | head`) is not an error
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                if out.write_all(page.as_bytes()).is_err() || out.flush().is_err() {
                    return ExitCode::from(code);
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(run: &RunConfig) -> Result<(String, u8)> {
    match &run.command {
        Command::Compile {
            file,
            collapse_pairs,
            eliminate_buq,
            flatten,
        } => cmd_compile(run, file, *collapse_pairs, *eliminate_buq, *flatten),
        Command::Pipeline { which } => match which {
            PipelineCmd::Ph2 { sum_notation } => cmd_pipeline_ph2(run, *sum_notation),
            PipelineCmd::Goodstein => cmd_pipeline_goodstein(run),
        },
        Command::Verify { gadget, range } => cmd_verify(run, gadget, range),
        Command::Oracle { which } => Ok((cmd_oracle(run, which)?, 0)),
    }
}

/// Ledger rows rendered as grammar comments, so formula output that
/// carries its ledger still re-parses as a single formula.
fn ledger_comment(ledger: &VarLedger) -> String {
    if ledger.len() == 0 {
        return String::new();
    }
    let mut out = String::from("; ledger\n");
    for line in ledger.to_tsv().lines() {
        let _ = writeln!(out, "; {line}");
    }
    out
}

fn cmd_compile(
    run: &RunConfig,
    file: &PathBuf,
    collapse_pairs: bool,
    do_eliminate: bool,
    do_flatten: bool,
) -> Result<(String, u8)> {
    let src = std::fs::read_to_string(file)?;
    let (_params, mut formula) = parse_input(&src)?;
    let fmt: EmitFormat = run.emit.into();
    let mut ledger = VarLedger::new();
    let mut notes: Vec<String> = Vec::new();

    if collapse_pairs {
        let (collapsed, l) = collapse_pair_quantifiers(&formula)?;
        formula = collapsed;
        ledger.absorb(&l);
    }

    if do_eliminate && !do_flatten {
        let sys = eliminate_buq(&formula)?;
        return Ok((render_system(&sys), 0));
    }

    if do_flatten {
        let sys = eliminate_buq(&formula)?;
        let fl = flatten(&sys)?;
        formula = fl.formula;
        ledger = fl.ledger;
        notes = fl.notes;
    }

    let mut page = emit_formula(&formula, fmt, Some(&ledger));
    page.push('\n');
    for n in &notes {
        let _ = writeln!(page, "; note: {n}");
    }
    page.push_str(&ledger_comment(&ledger));
    Ok((page, 0))
}

/// An eliminated-but-not-flattened system: one condition per line, then
/// the unknowns.
fn render_system(sys: &EquationSystem) -> String {
    let mut page = String::new();
    for (i, c) in sys.conditions.iter().enumerate() {
        let _ = writeln!(page, "condition {i}: {c}");
    }
    page.push_str(&ledger_comment(&sys.ledger));
    page
}

fn cmd_pipeline_ph2(run: &RunConfig, sum_notation: bool) -> Result<(String, u8)> {
    let art = build_ph2()?;
    let fmt: EmitFormat = run.emit.into();
    let mut page = String::new();

    let _ = writeln!(page, "pipeline: ph2");
    let _ = writeln!(page, "parameters: {}", PH2_PARAMS.join(" "));
    let _ = writeln!(
        page,
        "conditions: {} (expected 27)",
        art.system.conditions.len()
    );
    let _ = writeln!(page, "unknowns: {} (expected 138)", art.ledger.len());
    check_parameters(&art.final_form, &PH2_PARAMS, &mut page)?;
    for n in &art.notes {
        let _ = writeln!(page, "note: {n}");
    }
    for (name, f) in [("e3", &art.e3), ("e4", &art.e4), ("e6", &art.e6)] {
        let _ = writeln!(page, "stage {name}: {}", emit_formula(f, fmt, Some(&art.ledger)));
    }
    let _ = writeln!(
        page,
        "final (sexpr): {}",
        emit_formula(&art.final_form, EmitFormat::Sexpr, None)
    );
    let latex = if sum_notation {
        ph2_sum_notation_latex(&art)?
    } else {
        emit_formula(&art.final_form, EmitFormat::Latex, Some(&art.ledger))
    };
    let _ = writeln!(page, "final (latex): {latex}");
    page.push_str("ledger:\n");
    page.push_str(&art.ledger.to_tsv());
    Ok((page, 0))
}

fn cmd_pipeline_goodstein(run: &RunConfig) -> Result<(String, u8)> {
    let art = build_goodstein()?;
    let fmt: EmitFormat = run.emit.into();
    let mut page = String::new();

    let built = art.built_census();
    let _ = writeln!(page, "pipeline: goodstein");
    let _ = writeln!(page, "parameters: {}", GOODSTEIN_PARAMS.join(" "));
    let _ = writeln!(
        page,
        "unknowns: {} (displayed {})",
        art.ledger.len(),
        art.display_total
    );
    let _ = writeln!(
        page,
        "built blocks: {} (+ 6 universals)",
        census_line(&built)
    );
    let _ = writeln!(
        page,
        "displayed blocks: {} (+ 6 universals)",
        census_line(&GOODSTEIN_DISPLAY_CENSUS)
    );
    check_parameters(&art.final_form, &GOODSTEIN_PARAMS, &mut page)?;
    let _ = writeln!(page, "erratum ({} entries):", art.erratum.len());
    for e in &art.erratum {
        let _ = writeln!(page, "- {e}");
    }
    for n in &art.notes {
        let _ = writeln!(page, "note: {n}");
    }
    for (name, f) in [
        ("hp", &art.hp),
        ("elem", &art.elem),
        ("rb", &art.rb),
        ("exp-k", &art.exp_k),
        ("level", &art.level),
        ("f-assembly", &art.f_assembly),
    ] {
        let _ = writeln!(page, "stage {name}: {}", emit_formula(f, fmt, Some(&art.ledger)));
    }
    let _ = writeln!(
        page,
        "final (sexpr): {}",
        emit_formula(&art.final_form, EmitFormat::Sexpr, None)
    );
    let _ = writeln!(
        page,
        "final (latex): {}",
        emit_formula(&art.final_form, EmitFormat::Latex, Some(&art.ledger))
    );
    page.push_str("ledger:\n");
    page.push_str(&art.ledger.to_tsv());
    Ok((page, 0))
}

fn census_line(blocks: &[usize]) -> String {
    blocks
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Every matrix symbol must be quantified: the free variables of the
/// closed sentence are exactly the declared parameters.
fn check_parameters(f: &Formula, params: &[&str], page: &mut String) -> Result<()> {
    let free = f.free_vars();
    let expected: std::collections::BTreeSet<String> =
        params.iter().map(|s| s.to_string()).collect();
    if free == expected {
        let _ = writeln!(
            page,
            "ledger check: all matrix symbols bound; free parameters: {}",
            params.join(" ")
        );
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "free variables {free:?} do not match the declared parameters {params:?}"
        )))
    }
}

/// LaTeX for the final equation with the repeated three-equation
/// divisibility blocks folded into one indexed sum, and the quantifier
/// prefix compressed to index ranges.  Rendering-only: the underlying
/// formula is unchanged.
fn ph2_sum_notation_latex(art: &Ph2Artifacts) -> Result<String> {
    let fl = flatten(&art.system)?;
    let eqs = fl.formula.matrix_equations();
    let total = match eqs.as_slice() {
        [t] => *t,
        _ => {
            return Err(Error::ShapeMismatch(
                "sum notation needs a single-equation matrix".into(),
            ))
        }
    };
    let parts = match total {
        Term::Sum(parts) => parts,
        _ => {
            return Err(Error::ShapeMismatch(
                "sum notation needs a sum of group terms".into(),
            ))
        }
    };
    let nblocks = fl.names.blocks.len();
    if parts.len() <= nblocks {
        return Err(Error::ShapeMismatch(
            "fewer summands than divisibility blocks".into(),
        ));
    }
    let led = &art.ledger;

    let mut out = String::from("\\exists ");
    out.push_str(&compressed_prefix(&fl, led));
    out.push_str("\\: ");
    for head in &parts[..parts.len() - nblocks] {
        out.push_str(&emit_term(head, EmitFormat::Latex, Some(led)));
        out.push_str(" + ");
    }
    let _ = write!(out, "\\sum_{{l=1}}^{{{nblocks}}}\\left(");
    let generic = group_term(&fl.generic_block());
    let mut block = emit_term(&generic, EmitFormat::Latex, None);
    for (machine, nice) in [
        ("\\mathit{z\\_l}", "z_{l}"),
        ("\\mathit{f\\_l}", "f_{l}"),
        ("\\mathit{g\\_l}", "g_{l}"),
        ("\\mathit{m\\_l}", "m_{l}"),
        ("\\mathit{s\\_l}", "s_{l}"),
    ] {
        block = block.replace(machine, nice);
    }
    out.push_str(&block);
    out.push_str("\\right) = 0");
    Ok(out)
}

/// Quantifier prefix with consecutive indexed families compressed:
/// carried unknowns listed, `z` and `h` families as first…last, the four
/// per-block families as one indexed group.
fn compressed_prefix(fl: &FlattenResult, led: &VarLedger) -> String {
    let show = |id: &str| emit_term(&Term::var(id), EmitFormat::Latex, Some(led));
    let mut parts: Vec<String> = Vec::new();
    for c in &fl.names.carried {
        parts.push(show(c));
    }
    parts.push(show(&fl.names.q));
    parts.push(show(&fl.names.w));
    let z = &fl.names.z;
    if z.len() > 3 {
        parts.push(format!("{}\\ldots {}", show(&z[0]), show(&z[z.len() - 1])));
    } else {
        for zi in z {
            parts.push(show(zi));
        }
    }
    parts.push(show(&fl.names.y1));
    parts.push(show(&fl.names.y2));
    for j in &fl.names.j {
        parts.push(show(j));
    }
    let h = &fl.names.h;
    parts.push(format!("{}\\ldots {}", show(&h[0]), show(&h[4])));
    let n = fl.names.blocks.len();
    parts.push(format!(
        "f_{{l}}\\, g_{{l}}\\, m_{{l}}\\, s_{{l}}\\ (1 \\le l \\le {n})"
    ));
    parts.join("\\, ")
}

fn cmd_verify(run: &RunConfig, gadget: &str, overrides: &[String]) -> Result<(String, u8)> {
    let mut ranges = default_ranges(gadget).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown gadget {gadget:?}; registered: {}",
            gadget_names().join(", ")
        ))
    })?;
    let param_names = ranges
        .iter()
        .map(|d| d.name.clone())
        .collect::<Vec<_>>()
        .join(", ");
    for spec in overrides {
        let r = ParamRange::parse(spec)?;
        let slot = ranges
            .iter_mut()
            .find(|d| d.name == r.name)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{gadget} has no parameter {:?}; its parameters: {param_names}",
                    r.name
                ))
            })?;
        *slot = r;
    }
    let cfg = HarnessConfig {
        search_bound: run.bound,
        ..HarnessConfig::default()
    };
    let report = equivalence_harness(gadget, &ranges, &cfg)?;
    eprintln!(
        "verify {gadget}: {} tuples in {:?}",
        report.tuples, report.wall_time
    );

    let mut page = report.render_lines();
    page.push_str("records:\n");
    page.push_str(&report.render_records());

    let ok = if report.expects_counterexamples {
        !report.counterexamples.is_empty()
    } else {
        report.counterexamples.is_empty()
    };
    if !ok {
        eprintln!(
            "verify {gadget}: unexpected outcome ({} counterexamples, expected {})",
            report.counterexamples.len(),
            if report.expects_counterexamples {
                "some"
            } else {
                "none"
            }
        );
    }
    Ok((page, if ok { 0 } else { 1 }))
}

fn cmd_oracle(run: &RunConfig, which: &OracleCmd) -> Result<String> {
    let mut page = String::new();
    match which {
        OracleCmd::Goodstein { m, a, cap } => {
            if *m < 1 || *a < 2 {
                return Err(Error::InvalidArgument(
                    "need a starting value >= 1 and a base >= 2".into(),
                ));
            }
            let seq = oracle::goodstein_seq(*m, *a, *cap);
            for v in &seq {
                if v.bits() > run.budget_bits {
                    return Err(Error::BudgetExceeded(format!(
                        "sequence value needs {} bits (budget {})",
                        v.bits(),
                        run.budget_bits
                    )));
                }
            }
            let values: Vec<String> = seq.iter().map(|v| v.to_string()).collect();
            if seq.last().is_some_and(|v| v == &BigUint::from(0u32)) {
                let _ = writeln!(
                    page,
                    "{} (terminated, {} steps)",
                    values.join(" "),
                    values.len() - 1
                );
            } else {
                let shown = values.iter().take(16).cloned().collect::<Vec<_>>();
                let _ = writeln!(
                    page,
                    "{} ... (no termination within {cap} steps; last value {})",
                    shown.join(" "),
                    values.last().expect("sequence starts nonempty")
                );
            }
        }
        OracleCmd::Binomial { n } => {
            let row: Vec<String> = oracle::pascal_row(*n).iter().map(|c| c.to_string()).collect();
            let _ = writeln!(page, "{}", row.join(" "));
        }
        OracleCmd::Ph2MinM { k, r, limit } => {
            let m = oracle::ph2_min_m(*k, *r, *limit)?;
            let _ = writeln!(page, "least M: {m}");
        }
        OracleCmd::Ph2Check { k, r, m, limit } => {
            let _ = writeln!(page, "{}", oracle::ph2_check(*k, *r, *m, *limit)?);
        }
        OracleCmd::Psi { a, count } => {
            if *a < 2 {
                return Err(Error::InvalidArgument("need a sequence base >= 2".into()));
            }
            let ab = BigInt::from(*a);
            let _ = writeln!(page, "n\tpsi\tchi");
            for n in 0..=*count {
                let (psi, chi) = oracle::pell_pair(&ab, n);
                let _ = writeln!(page, "{n}\t{psi}\t{chi}");
            }
        }
        OracleCmd::PartialBinom { x, n, s } => {
            if s > n {
                return Err(Error::InvalidArgument(format!(
                    "digit position {s} exceeds the row index {n}"
                )));
            }
            let v = oracle::partial_binomial_sum(&BigInt::from(*x), *n, *s);
            let _ = writeln!(page, "{v}");
        }
        OracleCmd::Cantor { x, y } => {
            let _ = writeln!(
                page,
                "{}",
                oracle::cantor_j(&BigUint::from(*x), &BigUint::from(*y))
            );
        }
        OracleCmd::Hereditary { n, base } => {
            if *base < 2 {
                return Err(Error::InvalidArgument("hereditary base must be >= 2".into()));
            }
            let tree = oracle::to_hereditary(&BigUint::from(*n), &BigUint::from(*base));
            let _ = writeln!(page, "{}", render_tree(&tree, *base));
        }
    }
    Ok(page)
}

/// Readable form of a hereditary representation: `c*b^(e)` terms with the
/// exponents rendered recursively; exponent 1 prints as a bare base.
fn render_tree(t: &HereditaryTree, base: u64) -> String {
    if t.0.is_empty() {
        return "0".to_string();
    }
    let one = BigUint::from(1u32);
    let pieces: Vec<String> = t
        .0
        .iter()
        .map(|(c, e)| {
            if e.0.is_empty() {
                return c.to_string();
            }
            let estr = render_tree(e, base);
            let pow = if estr == "1" {
                base.to_string()
            } else {
                format!("{base}^({estr})")
            };
            if *c == one {
                pow
            } else {
                format!("{c}*{pow}")
            }
        })
        .collect();
    pieces.join(" + ")
}
