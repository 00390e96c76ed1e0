//! The one-step strategies computing shortest (`H`) and longest (`G`)
//! complete developments, and the drivers that iterate them to normal form.

use crate::error::{Error, Result};
use crate::metrics::{multiplicity, Extent};
use crate::reduction::Trace;
use crate::term::{Mark, Path, Step, Term};

/// One strategy step, returning the contracted position with the reduct.
///
/// At a marked redex `(\*y. P) Q` the strategy reduces inside `Q` when the
/// clamped multiplicity of `y` in `P` is exactly 1 and `Q` is not normal;
/// otherwise it contracts the redex itself. In an application the leftmost
/// non-normal component is reduced.
pub fn step_with<L: Mark>(m: &Term<L>, extent: Extent) -> Result<(Path, Term<L>)> {
    match m {
        Term::Var(_) => Err(Error::AlreadyNormal),
        Term::Lam { binder, body } => {
            let (p, body) = step_with(body, extent)?;
            Ok((
                p.prepend(Step::LamBody),
                Term::Lam {
                    binder: binder.clone(),
                    body: Box::new(body),
                },
            ))
        }
        Term::App { fun, arg } => {
            if !fun.is_nf() {
                let (p, fun) = step_with(fun, extent)?;
                Ok((
                    p.prepend(Step::AppFun),
                    Term::App {
                        fun: Box::new(fun),
                        arg: arg.clone(),
                    },
                ))
            } else {
                let (p, arg) = step_with(arg, extent)?;
                Ok((
                    p.prepend(Step::AppArg),
                    Term::App {
                        fun: fun.clone(),
                        arg: Box::new(arg),
                    },
                ))
            }
        }
        Term::Red {
            label,
            binder,
            body,
            arg,
        } => {
            let reduce_arg =
                !arg.is_nf() && extent.clamp(multiplicity(binder, body, extent)).is_one();
            if reduce_arg {
                let (p, arg) = step_with(arg, extent)?;
                Ok((
                    p.prepend(Step::RedArg),
                    Term::Red {
                        label: label.clone(),
                        binder: binder.clone(),
                        body: body.clone(),
                        arg: Box::new(arg),
                    },
                ))
            } else {
                Ok((Path::root(), body.subst(binder, arg)))
            }
        }
    }
}

/// `H`: one step of a shortest complete development.
pub fn h_step<L: Mark>(m: &Term<L>) -> Result<Term<L>> {
    step_with(m, Extent::Shortest).map(|(_, t)| t)
}

/// `G`: one step of a longest complete development.
pub fn g_step<L: Mark>(m: &Term<L>) -> Result<Term<L>> {
    step_with(m, Extent::Longest).map(|(_, t)| t)
}

/// Position of the redex `H` contracts, if any.
pub fn h_redex<L: Mark>(m: &Term<L>) -> Option<Path> {
    step_with(m, Extent::Shortest).ok().map(|(p, _)| p)
}

/// Iterates the strategy from the root until the term is normal.
pub fn trace_with(m: &Term, extent: Extent) -> Trace {
    let mut trace = Trace::new(m.clone());
    loop {
        match step_with(trace.last(), extent) {
            Ok(step) => trace.steps.push(step),
            Err(_) => return trace,
        }
    }
}

/// The development `M -> H(M) -> H(H(M)) -> ...` to normal form.
pub fn shortest_trace(m: &Term) -> Trace {
    trace_with(m, Extent::Shortest)
}

/// The development `M -> G(M) -> G(G(M)) -> ...` to normal form.
pub fn longest_trace(m: &Term) -> Trace {
    trace_with(m, Extent::Longest)
}
