//! One-step reduction of marked redexes and development traces.

use crate::error::{Error, Result};
use crate::term::{Mark, Path, Step, Term};

/// Paths to every marked redex, leftmost-outermost.
pub fn redex_positions<L: Mark>(m: &Term<L>) -> Vec<Path> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    collect_redexes(m, &mut cur, &mut out);
    out
}

fn collect_redexes<L: Mark>(m: &Term<L>, cur: &mut Vec<Step>, out: &mut Vec<Path>) {
    let visit = |t: &Term<L>, step: Step, cur: &mut Vec<Step>, out: &mut Vec<Path>| {
        cur.push(step);
        collect_redexes(t, cur, out);
        cur.pop();
    };
    match m {
        Term::Var(_) => {}
        Term::Lam { body, .. } => visit(body, Step::LamBody, cur, out),
        Term::App { fun, arg } => {
            visit(fun, Step::AppFun, cur, out);
            visit(arg, Step::AppArg, cur, out);
        }
        Term::Red { body, arg, .. } => {
            out.push(Path::from(cur.clone()));
            visit(body, Step::RedBody, cur, out);
            visit(arg, Step::RedArg, cur, out);
        }
    }
}

/// Contracts the marked redex at the root of `m`.
pub fn contract_root<L: Mark>(m: &Term<L>) -> Option<Term<L>> {
    match m {
        Term::Red {
            binder, body, arg, ..
        } => Some(body.subst(binder, arg)),
        _ => None,
    }
}

/// Contracts the marked redex at `p`.
pub fn contract<L: Mark>(m: &Term<L>, p: &Path) -> Result<Term<L>> {
    m.replace_at(p.steps(), &mut |t| contract_root(t))
        .ok_or_else(|| Error::InvalidPath(p.clone()))
}

/// Every one-step reduct, paired with the contracted position, in
/// leftmost-outermost order.
pub fn one_step_all<L: Mark>(m: &Term<L>) -> Vec<(Path, Term<L>)> {
    redex_positions(m)
        .into_iter()
        .map(|p| {
            let next = contract(m, &p).expect("redex_positions yields redex paths");
            (p, next)
        })
        .collect()
}

/// A finite development: a start term and the contracted position and result
/// of each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Term,
    pub steps: Vec<(Path, Term)>,
}

impl Trace {
    pub fn new(start: Term) -> Self {
        Trace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &Term {
        self.steps.last().map_or(&self.start, |(_, t)| t)
    }

    /// A trace is complete when it ends in a normal form.
    pub fn is_complete(&self) -> bool {
        self.last().is_nf()
    }

    /// Checks that every step contracts a marked redex of the preceding term
    /// and records its result up to α.
    pub fn validate(&self) -> bool {
        let mut prev = &self.start;
        for (p, next) in &self.steps {
            match contract(prev, p) {
                Ok(expected) if expected.alpha_eq(next) => prev = next,
                _ => return false,
            }
        }
        true
    }
}

pub fn validate_trace(t: &Trace) -> bool {
    t.validate()
}
