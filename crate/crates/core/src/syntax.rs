//! Concrete syntax.
//!
//! ```text
//! term   := lam | app
//! lam    := '\' ident '.' term
//! app    := factor factor*
//! factor := ident | '(' term ')' | marked
//! marked := '(' '\*' ident '.' term ')' factor
//! ident  := [a-z][A-Za-z0-9_']*
//! ```
//!
//! `λ` may be written for `\` and `λ*` for `\*`. A marked lambda must be
//! applied, so `(\*x. x)` alone is rejected.
//!
//! Terms also have a JSON form made of nested arrays:
//! `["var",x] | ["lam",x,t] | ["app",t,u] | ["red",x,t,u]`.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::term::{is_ident, Term, VarName};

/// Byte range `start..end` in the parsed input.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("syntax error at {span}: {message}")]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Lambda,
    Marked,
    Dot,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Marked => f.write_str("`\\*`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn err(start: usize, end: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        span: SourceSpan { start, end },
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, SourceSpan)>, SyntaxError> {
    let mut toks = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        chars.next();
        let tok = match c {
            c if c.is_whitespace() => continue,
            '\\' | 'λ' => {
                if let Some(&(_, '*')) = chars.peek() {
                    chars.next();
                    Tok::Marked
                } else {
                    Tok::Lambda
                }
            }
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'a'..='z' => {
                let mut end = start + 1;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        chars.next();
                        end = i + 1;
                    } else {
                        break;
                    }
                }
                toks.push((
                    Tok::Ident(input[start..end].to_string()),
                    SourceSpan { start, end },
                ));
                continue;
            }
            other => {
                return Err(err(
                    start,
                    start + other.len_utf8(),
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        let end = chars.peek().map_or(input.len(), |&(i, _)| i);
        toks.push((tok, SourceSpan { start, end }));
    }
    toks.push((
        Tok::Eof,
        SourceSpan {
            start: input.len(),
            end: input.len(),
        },
    ));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        let s = self.span();
        err(
            s.start,
            s.end,
            format!("expected {wanted}, found {}", self.peek()),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<SourceSpan, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self) -> Result<VarName, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(VarName::new(s))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Term::lam(x, self.term()?))
            }
            Tok::Marked => {
                let s = self.span();
                Err(err(
                    s.start,
                    s.end,
                    "marked lambda must be parenthesized and applied",
                ))
            }
            _ => self.app(),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen)
    }

    fn app(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.factor()?;
        while self.starts_factor() {
            let a = self.factor()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term, SyntaxError> {
        match self.peek() {
            Tok::Ident(_) => Ok(Term::Var(self.ident()?)),
            Tok::LParen => {
                let open = self.bump().1;
                if *self.peek() == Tok::Marked {
                    let mark = self.bump().1;
                    let x = self.ident()?;
                    self.expect(Tok::Dot, "`.`")?;
                    let body = self.term()?;
                    let close = self.close(open)?;
                    if !self.starts_factor() {
                        return Err(err(mark.start, close.end, "marked lambda must be applied"));
                    }
                    let arg = self.factor()?;
                    Ok(Term::red(x, body, arg))
                } else {
                    let t = self.term()?;
                    self.close(open)?;
                    Ok(t)
                }
            }
            Tok::Marked => {
                let s = self.span();
                Err(err(
                    s.start,
                    s.end,
                    "marked lambda must be parenthesized and applied",
                ))
            }
            _ => Err(self.unexpected("term")),
        }
    }

    fn close(&mut self, open: SourceSpan) -> Result<SourceSpan, SyntaxError> {
        match self.peek() {
            Tok::RParen => Ok(self.bump().1),
            Tok::Eof => Err(err(open.start, open.end, "unbalanced parenthesis")),
            _ => Err(self.unexpected("`)`")),
        }
    }
}

pub fn parse(input: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let t = p.term()?;
    match p.peek() {
        Tok::Eof => Ok(t),
        Tok::RParen => {
            let s = p.span();
            Err(err(s.start, s.end, "unbalanced parenthesis"))
        }
        _ => Err(p.unexpected("end of input")),
    }
}

/// Canonical text of a term with minimal parentheses. A marked redex in
/// argument position is parenthesized.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Lam { binder, body } => {
            out.push('\\');
            out.push_str(binder.as_str());
            out.push_str(". ");
            write_term(body, out);
        }
        _ => write_head(t, out),
    }
}

fn write_head(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v.as_str()),
        Term::App { fun, arg } => {
            write_head(fun, out);
            out.push(' ');
            write_arg(arg, out);
        }
        Term::Red {
            binder, body, arg, ..
        } => {
            out.push_str("(\\*");
            out.push_str(binder.as_str());
            out.push_str(". ");
            write_term(body, out);
            out.push_str(") ");
            write_arg(arg, out);
        }
        Term::Lam { .. } => {
            out.push('(');
            write_term(t, out);
            out.push(')');
        }
    }
}

fn write_arg(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v.as_str()),
        _ => {
            out.push('(');
            write_term(t, out);
            out.push(')');
        }
    }
}

pub fn to_json(t: &Term) -> Value {
    match t {
        Term::Var(v) => json!(["var", v.as_str()]),
        Term::Lam { binder, body } => json!(["lam", binder.as_str(), to_json(body)]),
        Term::App { fun, arg } => json!(["app", to_json(fun), to_json(arg)]),
        Term::Red {
            binder, body, arg, ..
        } => json!(["red", binder.as_str(), to_json(body), to_json(arg)]),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("malformed term document: {0}")]
pub struct JsonTermError(String);

pub fn from_json(v: &Value) -> Result<Term, JsonTermError> {
    let bad = |what: &str| JsonTermError(format!("{what} in {v}"));
    let items = v.as_array().ok_or_else(|| bad("expected array"))?;
    let tag = items
        .first()
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing tag"))?;
    let name = |i: usize| -> Result<VarName, JsonTermError> {
        match items.get(i).and_then(Value::as_str) {
            Some(s) if is_ident(s) => Ok(VarName::new(s)),
            _ => Err(bad("expected identifier")),
        }
    };
    let sub = |i: usize| -> Result<Term, JsonTermError> {
        from_json(items.get(i).ok_or_else(|| bad("missing subterm"))?)
    };
    let arity = |n: usize| {
        if items.len() == n {
            Ok(())
        } else {
            Err(bad("wrong arity"))
        }
    };
    match tag {
        "var" => {
            arity(2)?;
            Ok(Term::Var(name(1)?))
        }
        "lam" => {
            arity(3)?;
            Ok(Term::lam(name(1)?, sub(2)?))
        }
        "app" => {
            arity(3)?;
            Ok(Term::app(sub(1)?, sub(2)?))
        }
        "red" => {
            arity(4)?;
            Ok(Term::red(name(1)?, sub(2)?, sub(3)?))
        }
        _ => Err(bad("unknown tag")),
    }
}
