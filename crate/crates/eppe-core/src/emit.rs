//! Emitters: canonical s-expressions, readable infix, and LaTeX.
//!
//! The LaTeX emitter consults a [`VarLedger`] so that generated machine
//! names like `divb.f@7` come out as the compact subscripted names a
//! reader expects (`f_{8}`).

use crate::formula::Formula;
use crate::ledger::VarLedger;
use crate::term::Term;

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Sexpr,
    Plain,
    Latex,
}

impl std::str::FromStr for EmitFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sexpr" => Ok(EmitFormat::Sexpr),
            "plain" => Ok(EmitFormat::Plain),
            "latex" => Ok(EmitFormat::Latex),
            other => Err(format!("unknown format `{other}` (expected sexpr, plain, or latex)")),
        }
    }
}

/// Render a term.
pub fn emit_term(t: &Term, format: EmitFormat, ledger: Option<&VarLedger>) -> String {
    match format {
        EmitFormat::Sexpr => t.to_string(),
        EmitFormat::Plain => {
            let mut s = String::new();
            plain_term(t, 0, &mut s);
            s
        }
        EmitFormat::Latex => {
            let mut s = String::new();
            latex_term(t, 0, ledger, &mut s);
            s
        }
    }
}

/// Render a formula.
pub fn emit_formula(f: &Formula, format: EmitFormat, ledger: Option<&VarLedger>) -> String {
    match format {
        EmitFormat::Sexpr => f.to_string(),
        EmitFormat::Plain => {
            let mut s = String::new();
            plain_formula(f, &mut s);
            s
        }
        EmitFormat::Latex => {
            let mut s = String::new();
            latex_formula(f, ledger, &mut s);
            s
        }
    }
}

// precedence levels: 1 additive, 2 multiplicative, 3 power, 4 atom

fn plain_term(t: &Term, parent_prec: u8, out: &mut String) {
    let prec = match t {
        Term::Const(_) | Term::Var(_) => 4,
        Term::Power(_, _) => 3,
        Term::Product(_) => 2,
        Term::Sum(_) | Term::Difference(_, _) => 1,
    };
    let need_parens = prec < parent_prec;
    if need_parens {
        out.push('(');
    }
    match t {
        Term::Const(c) => out.push_str(&c.to_string()),
        Term::Var(v) => out.push_str(v),
        Term::Sum(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                plain_term(t, 1, out);
            }
        }
        Term::Product(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                plain_term(t, 2, out);
            }
        }
        Term::Difference(a, b) => {
            plain_term(a, 1, out);
            out.push_str(" - ");
            // right operand binds tighter: 3 - (1 + 2), 3 - (1 - 2)
            plain_term(b, 2, out);
        }
        Term::Power(b, e) => {
            plain_term(b, 4, out);
            out.push('^');
            plain_term(e, 4, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

fn plain_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Equation(t) => {
            plain_term(t, 0, out);
            out.push_str(" = 0");
        }
        Formula::And(fs) => {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str("  &  ");
                }
                plain_formula(f, out);
            }
        }
        Formula::Exists(vs, body) => {
            out.push_str("exists ");
            out.push_str(&vs.join(" "));
            out.push_str(". ");
            plain_formula(body, out);
        }
        Formula::ForallBounded {
            var,
            bound,
            strict,
            body,
        } => {
            out.push_str("forall ");
            out.push_str(var);
            out.push_str(if *strict { " < " } else { " <= " });
            plain_term(bound, 2, out);
            out.push_str(". ");
            plain_formula(body, out);
        }
    }
}

/// LaTeX name for a variable: prefer the ledger's display name, else fall
/// back to the machine identifier.  A trailing run of digits becomes a
/// subscript; primes pass through; anything longer than one letter is set
/// in `\mathit`.
fn latex_var(v: &str, ledger: Option<&VarLedger>) -> String {
    let shown = ledger
        .and_then(|l| l.display_of(v))
        .unwrap_or(v)
        .to_string();
    let (stem, digits) = split_trailing_digits(&shown);
    let (stem, primes) = split_trailing_primes(stem);
    let mut core = if stem.chars().count() == 1 {
        stem.to_string()
    } else {
        format!("\\mathit{{{}}}", stem.replace('@', "\\text{@}").replace('_', "\\_"))
    };
    for _ in 0..primes {
        core.push('\'');
    }
    if digits.is_empty() {
        core
    } else {
        format!("{core}_{{{digits}}}")
    }
}

fn split_trailing_digits(s: &str) -> (&str, &str) {
    let cut = s
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_digit())
        .map(|(i, _)| i)
        .last();
    match cut {
        Some(i) if i > 0 => (&s[..i], &s[i..]),
        _ => (s, ""),
    }
}

fn split_trailing_primes(s: &str) -> (&str, usize) {
    let n = s.chars().rev().take_while(|&c| c == '\'').count();
    (&s[..s.len() - n], n)
}

fn latex_term(t: &Term, parent_prec: u8, ledger: Option<&VarLedger>, out: &mut String) {
    let prec = match t {
        Term::Const(_) | Term::Var(_) => 4,
        Term::Power(_, _) => 3,
        Term::Product(_) => 2,
        Term::Sum(_) | Term::Difference(_, _) => 1,
    };
    let need_parens = prec < parent_prec;
    if need_parens {
        out.push_str("\\left(");
    }
    match t {
        Term::Const(c) => out.push_str(&c.to_string()),
        Term::Var(v) => out.push_str(&latex_var(v, ledger)),
        Term::Sum(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                latex_term(t, 1, ledger, out);
            }
        }
        Term::Product(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" \\cdot ");
                }
                latex_term(t, 2, ledger, out);
            }
        }
        Term::Difference(a, b) => {
            latex_term(a, 1, ledger, out);
            out.push_str(" - ");
            latex_term(b, 2, ledger, out);
        }
        Term::Power(b, e) => {
            latex_term(b, 4, ledger, out);
            out.push_str("^{");
            latex_term(e, 0, ledger, out);
            out.push('}');
        }
    }
    if need_parens {
        out.push_str("\\right)");
    }
}

fn latex_formula(f: &Formula, ledger: Option<&VarLedger>, out: &mut String) {
    match f {
        Formula::Equation(t) => {
            latex_term(t, 0, ledger, out);
            out.push_str(" = 0");
        }
        Formula::And(fs) => {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" \\;\\wedge\\; ");
                }
                latex_formula(f, ledger, out);
            }
        }
        Formula::Exists(vs, body) => {
            out.push_str("\\exists ");
            let names: Vec<String> = vs.iter().map(|v| latex_var(v, ledger)).collect();
            out.push_str(&names.join("\\, "));
            out.push_str("\\: ");
            latex_formula(body, ledger, out);
        }
        Formula::ForallBounded {
            var,
            bound,
            strict,
            body,
        } => {
            out.push_str("\\forall ");
            out.push_str(&latex_var(var, ledger));
            out.push_str(if *strict { " < " } else { " \\le " });
            latex_term(bound, 2, ledger, out);
            out.push_str("\\: ");
            latex_formula(body, ledger, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_respects_precedence() {
        // (x + 1) * y - 2^(z + 1)
        let t = (Term::var("x") + Term::one()) * Term::var("y")
            - Term::nat(2).pow(Term::var("z") + Term::one());
        assert_eq!(
            emit_term(&t, EmitFormat::Plain, None),
            "(x + 1)*y - 2^(z + 1)"
        );
    }

    #[test]
    fn latex_uses_ledger_display_names() {
        let mut l = VarLedger::new();
        let v = l.fresh_named("divb", "f", "f12");
        let t = Term::var(v) + Term::nat(1);
        assert_eq!(emit_term(&t, EmitFormat::Latex, Some(&l)), "f_{12} + 1");
    }

    #[test]
    fn latex_falls_back_to_machine_names() {
        let t = Term::var("rem.v@3");
        assert_eq!(
            emit_term(&t, EmitFormat::Latex, None),
            "\\mathit{rem.v\\text{@}}_{3}"
        );
    }

    #[test]
    fn primes_pass_through() {
        let mut l = VarLedger::new();
        let v = l.fresh_named("gs", "d", "d''");
        let t = Term::var(v);
        assert_eq!(emit_term(&t, EmitFormat::Latex, Some(&l)), "d''");
    }

    #[test]
    fn formula_emission_has_all_three_formats() {
        let f = Formula::forall_lt(
            "t",
            Term::var("z") + Term::one(),
            Formula::equation(Term::var("t") - Term::var("z")),
        );
        assert_eq!(
            emit_formula(&f, EmitFormat::Sexpr, None),
            "(forall (t < (+ z 1)) (= (- t z) 0))"
        );
        assert_eq!(
            emit_formula(&f, EmitFormat::Plain, None),
            "forall t < (z + 1). t - z = 0"
        );
        assert_eq!(
            emit_formula(&f, EmitFormat::Latex, None),
            "\\forall t < \\left(z + 1\\right)\\: t - z = 0"
        );
    }
}
