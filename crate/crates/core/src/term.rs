//! Terms of the marked lambda calculus.
//!
//! A term is a variable, an abstraction, an application, or a marked redex
//! `(\*x. P) Q`. Marked lambdas only ever appear as the head of a `Red` node,
//! so the head of an `App` can never be a marked lambda.
//!
//! `Term` is generic over the annotation carried by marked redexes. Plain terms
//! use `()`; the oracle attaches labels to track residuals.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

/// Annotation attached to marked redexes.
pub trait Mark: Clone + Eq + Hash + fmt::Debug {}

impl<T: Clone + Eq + Hash + fmt::Debug> Mark for T {}

/// A variable name. The trailing decimal digits of the name act as its
/// freshness counter: renaming `y` apart yields `y1`, `y2`, ...
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        debug_assert!(is_ident(name), "invalid variable name {name:?}");
        VarName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits the name into its base and numeric suffix (`y12` -> `("y", 12)`).
    /// A name without trailing digits has suffix 0.
    pub fn split(&self) -> (&str, u64) {
        let s = self.as_str();
        let base_len = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let digits = &s[base_len..];
        // u64 overflow on absurd suffixes saturates; freshness only needs "greater than".
        let suffix =
            digits
                .parse::<u64>()
                .unwrap_or(if digits.is_empty() { 0 } else { u64::MAX / 2 });
        (&s[..base_len], suffix)
    }

    /// A name with the same base as `self` whose suffix is strictly greater than
    /// the suffix of every name in `avoid` sharing that base.
    pub fn fresh<'a>(&self, avoid: impl IntoIterator<Item = &'a VarName>) -> VarName {
        let (base, own) = self.split();
        let max = avoid
            .into_iter()
            .filter_map(|v| {
                let (b, s) = v.split();
                (b == base).then_some(s)
            })
            .fold(own, u64::max);
        VarName::new(format!("{base}{}", max + 1))
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VarName {
    fn from(s: &str) -> Self {
        VarName::new(s)
    }
}

/// True if `s` matches `[a-z][A-Za-z0-9_']*`.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// One child selector of a [`Path`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Step {
    LamBody,
    AppFun,
    AppArg,
    RedBody,
    RedArg,
}

impl Step {
    pub fn name(self) -> &'static str {
        match self {
            Step::LamBody => "LamBody",
            Step::AppFun => "AppFun",
            Step::AppArg => "AppArg",
            Step::RedBody => "RedBody",
            Step::RedArg => "RedArg",
        }
    }

    pub fn from_name(name: &str) -> Option<Step> {
        [
            Step::LamBody,
            Step::AppFun,
            Step::AppArg,
            Step::RedBody,
            Step::RedArg,
        ]
        .into_iter()
        .find(|s| s.name() == name)
    }

    fn short(self) -> &'static str {
        match self {
            Step::LamBody | Step::RedBody => "body",
            Step::AppFun => "fun",
            Step::AppArg | Step::RedArg => "arg",
        }
    }
}

/// Position of a subterm, as the sequence of selectors followed from the root.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Path(Vec<Step>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, step: Step) -> Path {
        let mut steps = self.0.clone();
        steps.push(step);
        Path(steps)
    }

    pub fn prepend(mut self, step: Step) -> Path {
        self.0.insert(0, step);
        self
    }

    /// True if `self` lies strictly below `other`.
    pub fn strictly_inside(&self, other: &Path) -> bool {
        self.0.len() > other.0.len() && self.0.starts_with(&other.0)
    }
}

impl From<Vec<Step>> for Path {
    fn from(steps: Vec<Step>) -> Self {
        Path(steps)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(s.short())?;
        }
        Ok(())
    }
}

/// A marked lambda term. `L` annotates marked redexes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term<L = ()> {
    Var(VarName),
    Lam {
        binder: VarName,
        body: Box<Term<L>>,
    },
    App {
        fun: Box<Term<L>>,
        arg: Box<Term<L>>,
    },
    /// The marked redex `(\*binder. body) arg`.
    Red {
        label: L,
        binder: VarName,
        body: Box<Term<L>>,
        arg: Box<Term<L>>,
    },
}

impl Term {
    pub fn red(binder: impl Into<VarName>, body: Term, arg: Term) -> Term {
        Term::red_labeled((), binder, body, arg)
    }
}

impl From<&str> for Term {
    fn from(s: &str) -> Self {
        Term::var(s)
    }
}

impl<L: Mark> Term<L> {
    pub fn var(name: impl Into<VarName>) -> Self {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<VarName>, body: Term<L>) -> Self {
        Term::Lam {
            binder: binder.into(),
            body: Box::new(body),
        }
    }

    pub fn app(fun: Term<L>, arg: Term<L>) -> Self {
        Term::App {
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }

    pub fn red_labeled(label: L, binder: impl Into<VarName>, body: Term<L>, arg: Term<L>) -> Self {
        Term::Red {
            label,
            binder: binder.into(),
            body: Box::new(body),
            arg: Box::new(arg),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam { body, .. } => 1 + body.size(),
            Term::App { fun, arg } => 1 + fun.size() + arg.size(),
            Term::Red { body, arg, .. } => 1 + body.size() + arg.size(),
        }
    }

    /// Number of marked redexes.
    pub fn redex_count(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam { body, .. } => body.redex_count(),
            Term::App { fun, arg } => fun.redex_count() + arg.redex_count(),
            Term::Red { body, arg, .. } => 1 + body.redex_count() + arg.redex_count(),
        }
    }

    /// A term is in normal form iff it contains no marked redex.
    pub fn is_nf(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam { body, .. } => body.is_nf(),
            Term::App { fun, arg } => fun.is_nf() && arg.is_nf(),
            Term::Red { .. } => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<VarName>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
            Term::Lam { binder, body } => {
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App { fun, arg } => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
            Term::Red {
                binder, body, arg, ..
            } => {
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
                arg.collect_free(bound, out);
            }
        }
    }

    pub fn has_free(&self, x: &VarName) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Lam { binder, body } => binder != x && body.has_free(x),
            Term::App { fun, arg } => fun.has_free(x) || arg.has_free(x),
            Term::Red {
                binder, body, arg, ..
            } => (binder != x && body.has_free(x)) || arg.has_free(x),
        }
    }

    /// Every name occurring in the term, free or bound.
    pub fn all_names(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Lam { binder, body } => {
                out.insert(binder.clone());
                body.collect_names(out);
            }
            Term::App { fun, arg } => {
                fun.collect_names(out);
                arg.collect_names(out);
            }
            Term::Red {
                binder, body, arg, ..
            } => {
                out.insert(binder.clone());
                body.collect_names(out);
                arg.collect_names(out);
            }
        }
    }

    /// Capture-avoiding substitution `self[x := n]`. Binders that would capture
    /// a free variable of `n` are renamed to fresh names first.
    pub fn subst(&self, x: &VarName, n: &Term<L>) -> Term<L> {
        let fv_n = n.free_vars();
        self.subst_with(x, n, &fv_n)
    }

    fn subst_with(&self, x: &VarName, n: &Term<L>, fv_n: &BTreeSet<VarName>) -> Term<L> {
        match self {
            Term::Var(v) => {
                if v == x {
                    n.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam { binder, body } => {
                if binder == x || !body.has_free(x) {
                    return self.clone();
                }
                let (binder, body) = rename_apart(binder, body, x, fv_n);
                Term::Lam {
                    binder,
                    body: Box::new(body.subst_with(x, n, fv_n)),
                }
            }
            Term::App { fun, arg } => Term::App {
                fun: Box::new(fun.subst_with(x, n, fv_n)),
                arg: Box::new(arg.subst_with(x, n, fv_n)),
            },
            Term::Red {
                label,
                binder,
                body,
                arg,
            } => {
                let arg = Box::new(arg.subst_with(x, n, fv_n));
                if binder == x || !body.has_free(x) {
                    return Term::Red {
                        label: label.clone(),
                        binder: binder.clone(),
                        body: body.clone(),
                        arg,
                    };
                }
                let (binder, body) = rename_apart(binder, body, x, fv_n);
                Term::Red {
                    label: label.clone(),
                    binder,
                    body: Box::new(body.subst_with(x, n, fv_n)),
                    arg,
                }
            }
        }
    }

    /// The nameless form of the term: bound variables become binder distances,
    /// free variables keep their names. Two terms are α-equivalent iff their
    /// canonical forms are equal.
    pub fn canonical(&self) -> Canonical<L> {
        let mut toks = Vec::with_capacity(self.size());
        let mut env = Vec::new();
        self.push_canonical(&mut env, &mut toks);
        Canonical(toks)
    }

    fn push_canonical<'a>(&'a self, env: &mut Vec<&'a VarName>, out: &mut Vec<Tok<L>>) {
        match self {
            Term::Var(v) => match env.iter().rev().position(|b| *b == v) {
                Some(i) => out.push(Tok::Bound(i as u32)),
                None => out.push(Tok::Free(v.clone())),
            },
            Term::Lam { binder, body } => {
                out.push(Tok::Lam);
                env.push(binder);
                body.push_canonical(env, out);
                env.pop();
            }
            Term::App { fun, arg } => {
                out.push(Tok::App);
                fun.push_canonical(env, out);
                arg.push_canonical(env, out);
            }
            Term::Red {
                label,
                binder,
                body,
                arg,
            } => {
                out.push(Tok::Red(label.clone()));
                env.push(binder);
                body.push_canonical(env, out);
                env.pop();
                arg.push_canonical(env, out);
            }
        }
    }

    pub fn alpha_eq(&self, other: &Term<L>) -> bool {
        self.canonical() == other.canonical()
    }

    /// The subterm at `path`, if the path stays inside the tree.
    pub fn at(&self, path: &Path) -> Option<&Term<L>> {
        let mut cur = self;
        for step in path.steps() {
            cur = match (step, cur) {
                (Step::LamBody, Term::Lam { body, .. }) => body,
                (Step::AppFun, Term::App { fun, .. }) => fun,
                (Step::AppArg, Term::App { arg, .. }) => arg,
                (Step::RedBody, Term::Red { body, .. }) => body,
                (Step::RedArg, Term::Red { arg, .. }) => arg,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Rebuilds the term with the subterm at `steps` replaced by `f(subterm)`.
    /// Returns `None` if the path leaves the tree or `f` declines.
    pub fn replace_at(
        &self,
        steps: &[Step],
        f: &mut impl FnMut(&Term<L>) -> Option<Term<L>>,
    ) -> Option<Term<L>> {
        let Some((step, rest)) = steps.split_first() else {
            return f(self);
        };
        Some(match (step, self) {
            (Step::LamBody, Term::Lam { binder, body }) => Term::Lam {
                binder: binder.clone(),
                body: Box::new(body.replace_at(rest, f)?),
            },
            (Step::AppFun, Term::App { fun, arg }) => Term::App {
                fun: Box::new(fun.replace_at(rest, f)?),
                arg: arg.clone(),
            },
            (Step::AppArg, Term::App { fun, arg }) => Term::App {
                fun: fun.clone(),
                arg: Box::new(arg.replace_at(rest, f)?),
            },
            (
                Step::RedBody,
                Term::Red {
                    label,
                    binder,
                    body,
                    arg,
                },
            ) => Term::Red {
                label: label.clone(),
                binder: binder.clone(),
                body: Box::new(body.replace_at(rest, f)?),
                arg: arg.clone(),
            },
            (
                Step::RedArg,
                Term::Red {
                    label,
                    binder,
                    body,
                    arg,
                },
            ) => Term::Red {
                label: label.clone(),
                binder: binder.clone(),
                body: body.clone(),
                arg: Box::new(arg.replace_at(rest, f)?),
            },
            _ => return None,
        })
    }

    pub fn map_labels<M: Mark>(&self, f: &mut impl FnMut(&L) -> M) -> Term<M> {
        match self {
            Term::Var(v) => Term::Var(v.clone()),
            Term::Lam { binder, body } => Term::Lam {
                binder: binder.clone(),
                body: Box::new(body.map_labels(f)),
            },
            Term::App { fun, arg } => Term::App {
                fun: Box::new(fun.map_labels(f)),
                arg: Box::new(arg.map_labels(f)),
            },
            Term::Red {
                label,
                binder,
                body,
                arg,
            } => {
                let label = f(label);
                Term::Red {
                    label,
                    binder: binder.clone(),
                    body: Box::new(body.map_labels(f)),
                    arg: Box::new(arg.map_labels(f)),
                }
            }
        }
    }

    pub fn erase_labels(&self) -> Term {
        self.map_labels(&mut |_| ())
    }

    /// Structural validity: every name is a well-formed identifier.
    /// The tree shape itself cannot express an ill-formed term.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Term::Var(v) => is_ident(v.as_str()),
            Term::Lam { binder, body } => is_ident(binder.as_str()) && body.is_well_formed(),
            Term::App { fun, arg } => fun.is_well_formed() && arg.is_well_formed(),
            Term::Red {
                binder, body, arg, ..
            } => is_ident(binder.as_str()) && body.is_well_formed() && arg.is_well_formed(),
        }
    }
}

/// Renames `binder` in `body` if it would capture a free variable of the
/// substituted term.
fn rename_apart<L: Mark>(
    binder: &VarName,
    body: &Term<L>,
    x: &VarName,
    fv_n: &BTreeSet<VarName>,
) -> (VarName, Term<L>) {
    if !fv_n.contains(binder) {
        return (binder.clone(), body.clone());
    }
    let names = body.all_names();
    let fresh = binder.fresh(names.iter().chain(fv_n).chain(std::iter::once(x)));
    let renamed = body.subst(binder, &Term::Var(fresh.clone()));
    (fresh, renamed)
}

/// Token of a nameless term in prefix order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Tok<L> {
    Bound(u32),
    Free(VarName),
    Lam,
    App,
    Red(L),
}

/// α-canonical form of a term, used as equality and hashing key.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Canonical<L = ()>(Vec<Tok<L>>);

impl<L> Canonical<L> {
    pub fn tokens(&self) -> &[Tok<L>] {
        &self.0
    }
}
