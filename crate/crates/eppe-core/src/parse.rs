//! Surface syntax: s-expressions with a tiny fixed grammar.
//!
//! ```text
//! input   ::= header? formula
//! header  ::= (params IDENT+)
//! formula ::= (= term 0)
//!           | (and formula+)
//!           | (exists (IDENT+) formula)
//!           | (forall (IDENT < term) formula)
//!           | (forall (IDENT <= term) formula)
//! term    ::= NAT | IDENT
//!           | (+ term term+) | (* term term+) | (- term term) | (^ term term)
//! ```
//!
//! Identifiers may contain letters, digits, `_`, `.`, `@` and `'` and must
//! not start with a digit.  `;` starts a comment that runs to end of line.

use num_bigint::BigInt;

use crate::error::Error;
use crate::formula::Formula;
use crate::term::Term;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Atom(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '@' | '\'')
}

fn tokenize(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                out.push(Spanned {
                    tok: Tok::LParen,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            ')' => {
                out.push(Spanned {
                    tok: Tok::RParen,
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '+' | '*' | '-' | '^' | '=' => {
                out.push(Spanned {
                    tok: Tok::Atom(c.to_string()),
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            '<' => {
                let (l, c0) = (line, col);
                chars.next();
                col += 1;
                let mut s = "<".to_string();
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    s.push('=');
                }
                out.push(Spanned {
                    tok: Tok::Atom(s),
                    line: l,
                    col: c0,
                });
            }
            c if is_ident_char(c) => {
                let (l, c0) = (line, col);
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_ident_char(c) {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Atom(s),
                    line: l,
                    col: c0,
                });
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect_lparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => Ok(()),
            Some(s) => Err(Error::Syntax {
                line: s.line,
                col: s.col,
                msg: "expected `(`".into(),
            }),
            None => Err(self.err_here("expected `(`, found end of input")),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.next() {
            Some(Spanned {
                tok: Tok::RParen, ..
            }) => Ok(()),
            Some(s) => Err(Error::Syntax {
                line: s.line,
                col: s.col,
                msg: "expected `)`".into(),
            }),
            None => Err(self.err_here("expected `)`, found end of input")),
        }
    }

    fn expect_atom(&mut self) -> Result<(String, usize, usize)> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Atom(a),
                line,
                col,
            }) => Ok((a, line, col)),
            Some(s) => Err(Error::Syntax {
                line: s.line,
                col: s.col,
                msg: "expected an atom".into(),
            }),
            None => Err(self.err_here("expected an atom, found end of input")),
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        let (a, line, col) = self.expect_atom()?;
        if a.chars().next().is_some_and(|c| c.is_ascii_digit()) || !a.chars().all(is_ident_char) {
            return Err(Error::Syntax {
                line,
                col,
                msg: format!("`{a}` is not a valid identifier"),
            });
        }
        Ok(a)
    }

    fn parse_term(&mut self) -> Result<Term> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Atom(a),
                line,
                col,
            }) => {
                if a.chars().all(|c| c.is_ascii_digit()) {
                    let n: BigInt = a.parse().map_err(|_| Error::Syntax {
                        line,
                        col,
                        msg: format!("bad numeral `{a}`"),
                    })?;
                    Ok(Term::Const(n))
                } else if a.chars().next().is_some_and(|c| is_ident_char(c) && !c.is_ascii_digit())
                    && !matches!(a.as_str(), "+" | "*" | "-" | "^" | "=" | "<" | "<=")
                {
                    Ok(Term::Var(a))
                } else {
                    Err(Error::Syntax {
                        line,
                        col,
                        msg: format!("`{a}` cannot start a term"),
                    })
                }
            }
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                let (op, line, col) = self.expect_atom()?;
                let t = match op.as_str() {
                    "+" | "*" => {
                        let mut parts = vec![self.parse_term()?, self.parse_term()?];
                        while !matches!(self.peek().map(|s| &s.tok), Some(Tok::RParen)) {
                            parts.push(self.parse_term()?);
                        }
                        if op == "+" {
                            Term::Sum(parts)
                        } else {
                            Term::Product(parts)
                        }
                    }
                    "-" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        Term::Difference(Box::new(a), Box::new(b))
                    }
                    "^" => {
                        let a = self.parse_term()?;
                        let b = self.parse_term()?;
                        Term::Power(Box::new(a), Box::new(b))
                    }
                    other => {
                        return Err(Error::Syntax {
                            line,
                            col,
                            msg: format!("unknown term operator `{other}`"),
                        })
                    }
                };
                self.expect_rparen()?;
                Ok(t)
            }
            Some(s) => Err(Error::Syntax {
                line: s.line,
                col: s.col,
                msg: "expected a term".into(),
            }),
            None => Err(self.err_here("expected a term, found end of input")),
        }
    }

    fn parse_formula(&mut self) -> Result<Formula> {
        self.expect_lparen()?;
        let (op, line, col) = self.expect_atom()?;
        let f = match op.as_str() {
            "=" => {
                let t = self.parse_term()?;
                let rhs = self.parse_term()?;
                if rhs != Term::zero() {
                    return Err(Error::Syntax {
                        line,
                        col,
                        msg: "the right-hand side of an equation must be the literal 0".into(),
                    });
                }
                Formula::Equation(t)
            }
            "and" => {
                let mut parts = vec![self.parse_formula()?];
                while !matches!(self.peek().map(|s| &s.tok), Some(Tok::RParen)) {
                    parts.push(self.parse_formula()?);
                }
                Formula::And(parts)
            }
            "exists" => {
                self.expect_lparen()?;
                let mut vars = vec![self.expect_ident()?];
                while !matches!(self.peek().map(|s| &s.tok), Some(Tok::RParen)) {
                    vars.push(self.expect_ident()?);
                }
                self.expect_rparen()?;
                let body = self.parse_formula()?;
                Formula::Exists(vars, Box::new(body))
            }
            "forall" => {
                self.expect_lparen()?;
                let var = self.expect_ident()?;
                let (rel, rline, rcol) = self.expect_atom()?;
                let strict = match rel.as_str() {
                    "<" => true,
                    "<=" => false,
                    other => {
                        return Err(Error::Syntax {
                            line: rline,
                            col: rcol,
                            msg: format!("expected `<` or `<=`, found `{other}`"),
                        })
                    }
                };
                let bound = self.parse_term()?;
                self.expect_rparen()?;
                let body = self.parse_formula()?;
                Formula::ForallBounded {
                    var,
                    bound,
                    strict,
                    body: Box::new(body),
                }
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unknown formula head `{other}`"),
                })
            }
        };
        self.expect_rparen()?;
        Ok(f)
    }
}

/// Parse a full input: an optional `(params …)` header followed by one
/// formula.  Returns the declared parameters and the formula.
pub fn parse_input(src: &str) -> Result<(Vec<String>, Formula)> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut params = Vec::new();
    // Look ahead for a (params ...) header.
    if matches!(p.peek().map(|s| &s.tok), Some(Tok::LParen)) {
        if let Some(Spanned {
            tok: Tok::Atom(a), ..
        }) = p.toks.get(1)
        {
            if a == "params" {
                p.expect_lparen()?;
                p.expect_atom()?; // "params"
                while !matches!(p.peek().map(|s| &s.tok), Some(Tok::RParen)) {
                    params.push(p.expect_ident()?);
                }
                p.expect_rparen()?;
            }
        }
    }
    let f = p.parse_formula()?;
    if let Some(s) = p.peek() {
        return Err(Error::Syntax {
            line: s.line,
            col: s.col,
            msg: "trailing input after formula".into(),
        });
    }
    let param_set = params.iter().cloned().collect();
    f.validate_no_rebind(&param_set)?;
    Ok((params, f))
}

/// Parse a single term (used by tests and small tools).
pub fn parse_term_str(src: &str) -> Result<Term> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.parse_term()?;
    if let Some(s) = p.peek() {
        return Err(Error::Syntax {
            line: s.line,
            col: s.col,
            msg: "trailing input after term".into(),
        });
    }
    Ok(t)
}
