//! Essential redexes: those that every complete development must contract,
//! either themselves or through a residual.
//!
//! A redex inside the argument `Q` of `(\*y. P) Q` is essential exactly when
//! it is essential in `Q` and `m_y(P) > 0`; a redex anywhere else inherits
//! essentiality from the enclosing component. Every marked redex is
//! essential in itself.

use crate::error::{Error, Result};
use crate::metrics::m;
use crate::term::{Mark, Path, Step, Term};

pub fn is_essential<L: Mark>(t: &Term<L>, p: &Path) -> Result<bool> {
    if !matches!(t.at(p), Some(Term::Red { .. })) {
        return Err(Error::InvalidPath(p.clone()));
    }
    let mut cur = t;
    for step in p.steps() {
        cur = match (step, cur) {
            (Step::LamBody, Term::Lam { body, .. }) => body,
            (Step::AppFun, Term::App { fun, .. }) => fun,
            (Step::AppArg, Term::App { arg, .. }) => arg,
            (Step::RedBody, Term::Red { body, .. }) => body,
            (
                Step::RedArg,
                Term::Red {
                    binder, body, arg, ..
                },
            ) => {
                if m(binder, body).is_zero() {
                    return Ok(false);
                }
                arg
            }
            _ => unreachable!("path checked above"),
        };
    }
    Ok(true)
}

/// All essential redexes, leftmost-outermost.
pub fn essential_set<L: Mark>(t: &Term<L>) -> Vec<Path> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    collect(t, &mut cur, &mut out);
    out
}

fn collect<L: Mark>(t: &Term<L>, cur: &mut Vec<Step>, out: &mut Vec<Path>) {
    let descend = |sub: &Term<L>, step: Step, cur: &mut Vec<Step>, out: &mut Vec<Path>| {
        cur.push(step);
        collect(sub, cur, out);
        cur.pop();
    };
    match t {
        Term::Var(_) => {}
        Term::Lam { body, .. } => descend(body, Step::LamBody, cur, out),
        Term::App { fun, arg } => {
            descend(fun, Step::AppFun, cur, out);
            descend(arg, Step::AppArg, cur, out);
        }
        Term::Red {
            binder, body, arg, ..
        } => {
            out.push(Path::from(cur.clone()));
            descend(body, Step::RedBody, cur, out);
            if !m(binder, body).is_zero() {
                descend(arg, Step::RedArg, cur, out);
            }
        }
    }
}
