//! Brute-force ground truth.
//!
//! [`dev_stats`] walks the whole development graph of a term, memoized on
//! α-canonical forms, to find the lengths of its shortest and longest complete
//! developments. [`essential_oracle`] decides essentiality from its
//! definition by tracking residuals through labels. [`TermGenerator`] draws
//! random terms for the property suites.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::Count;
use crate::reduction::{one_step_all, redex_positions};
use crate::term::{Canonical, Mark, Path, Term, VarName};

pub const DEFAULT_STATE_LIMIT: usize = 200_000;
pub const DEFAULT_ESSENTIAL_MAX_REDEXES: usize = 5;

/// Identifies a marked redex and all of its residuals.
pub type Label = u32;

pub type LabeledTerm = Term<Label>;

/// Result of an exhaustive development search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevStats {
    /// Length of a shortest complete development; `None` if the search did not finish.
    pub shortest: Option<Count>,
    /// Length of a longest complete development; `None` if the search did not finish.
    pub longest: Option<Count>,
    /// Distinct α-canonical terms visited.
    pub states: usize,
    pub complete: bool,
    /// Why the search stopped early.
    pub detail: Option<String>,
}

struct Frame<L> {
    key: Canonical<L>,
    succs: Vec<Term<L>>,
    shortest: Option<Count>,
    longest: Option<Count>,
}

impl<L: Mark> Frame<L> {
    fn new(key: Canonical<L>, term: &Term<L>) -> Self {
        Frame {
            key,
            succs: one_step_all(term)
                .into_iter()
                .map(|(_, t)| t)
                .rev()
                .collect(),
            shortest: None,
            longest: None,
        }
    }

    fn absorb(&mut self, (s, l): &(Count, Count)) {
        if self.shortest.as_ref().is_none_or(|cur| s < cur) {
            self.shortest = Some(s.clone());
        }
        if self.longest.as_ref().is_none_or(|cur| l > cur) {
            self.longest = Some(l.clone());
        }
    }

    fn result(&self) -> (Count, Count) {
        match (&self.shortest, &self.longest) {
            (Some(s), Some(l)) => (s + &Count::one(), l + &Count::one()),
            _ => (Count::zero(), Count::zero()),
        }
    }
}

/// Shortest and longest complete development lengths by exhaustive search
/// over at most `state_limit` distinct terms.
///
/// Exceeding the limit is reported through `complete = false`. A cycle in the
/// development graph is impossible for a correct reduction relation, so it
/// is returned as [`Error::CycleDetected`].
pub fn dev_stats<L: Mark>(m: &Term<L>, state_limit: usize) -> Result<DevStats> {
    assert!(state_limit > 0, "state limit must be positive");
    let mut memo: HashMap<Canonical<L>, (Count, Count)> = HashMap::new();
    let mut on_path: HashSet<Canonical<L>> = HashSet::new();
    let root_key = m.canonical();
    on_path.insert(root_key.clone());
    let mut stack = vec![Frame::new(root_key, m)];

    let root = loop {
        let top = stack.last_mut().expect("stack is never empty here");
        if let Some(next) = top.succs.pop() {
            let key = next.canonical();
            if let Some(r) = memo.get(&key) {
                top.absorb(r);
                continue;
            }
            if on_path.contains(&key) {
                return Err(Error::CycleDetected);
            }
            if memo.len() + stack.len() >= state_limit {
                return Ok(DevStats {
                    shortest: None,
                    longest: None,
                    states: memo.len() + stack.len(),
                    complete: false,
                    detail: Some(Error::LimitExceeded { limit: state_limit }.to_string()),
                });
            }
            on_path.insert(key.clone());
            stack.push(Frame::new(key, &next));
            continue;
        }
        let done = stack.pop().expect("non-empty");
        on_path.remove(&done.key);
        let r = done.result();
        match stack.last_mut() {
            Some(parent) => {
                parent.absorb(&r);
                memo.insert(done.key, r);
            }
            None => {
                memo.insert(done.key, r.clone());
                break r;
            }
        }
    };

    Ok(DevStats {
        shortest: Some(root.0),
        longest: Some(root.1),
        states: memo.len(),
        complete: true,
        detail: None,
    })
}

/// Gives every marked redex a distinct label, numbered leftmost-outermost.
pub fn label<L: Mark>(m: &Term<L>) -> LabeledTerm {
    let mut next: Label = 0;
    m.map_labels(&mut |_| {
        let l = next;
        next += 1;
        l
    })
}

/// Decides essentiality from its definition: the redex at `p` is essential
/// iff no complete development avoids contracting it and all its residuals.
pub fn essential_oracle<L: Mark>(m: &Term<L>, p: &Path, state_limit: usize) -> Result<bool> {
    if !matches!(m.at(p), Some(Term::Red { .. })) {
        return Err(Error::InvalidPath(p.clone()));
    }
    let labeled = label(m);
    let target = match labeled.at(p) {
        Some(Term::Red { label, .. }) => *label,
        _ => unreachable!("checked above"),
    };
    // Only membership in the residual family of the target matters.
    let marked = labeled.map_labels(&mut |l| *l == target);
    Ok(!can_avoid(&marked, state_limit)?)
}

/// Is there a complete development contracting no `true`-labeled redex?
fn can_avoid(m: &Term<bool>, state_limit: usize) -> Result<bool> {
    fn avoiding_succs(t: &Term<bool>) -> Vec<Term<bool>> {
        let mut out: Vec<Term<bool>> = redex_positions(t)
            .into_iter()
            .filter(|p| matches!(t.at(p), Some(Term::Red { label: false, .. })))
            .map(|p| crate::reduction::contract(t, &p).expect("redex path"))
            .collect();
        out.reverse();
        out
    }

    let mut memo: HashMap<Canonical<bool>, bool> = HashMap::new();
    let mut on_path: HashSet<Canonical<bool>> = HashSet::new();
    if m.is_nf() {
        return Ok(true);
    }
    let root_key = m.canonical();
    on_path.insert(root_key.clone());
    let mut stack: Vec<(Canonical<bool>, Vec<Term<bool>>)> = vec![(root_key, avoiding_succs(m))];
    // Result of the most recently finished child, consumed by its parent.
    let mut child: Option<bool> = None;

    loop {
        let (key, succs) = stack.last_mut().expect("non-empty");
        let found = child.take() == Some(true);
        let next = if found { None } else { succs.pop() };
        let Some(next) = next else {
            let key = key.clone();
            stack.pop();
            on_path.remove(&key);
            memo.insert(key, found);
            if stack.is_empty() {
                return Ok(found);
            }
            child = Some(found);
            continue;
        };
        if next.is_nf() {
            child = Some(true);
            continue;
        }
        let k = next.canonical();
        if let Some(&r) = memo.get(&k) {
            child = Some(r);
            continue;
        }
        if on_path.contains(&k) {
            return Err(Error::CycleDetected);
        }
        if memo.len() + stack.len() >= state_limit {
            return Err(Error::LimitExceeded { limit: state_limit });
        }
        on_path.insert(k.clone());
        let succs = avoiding_succs(&next);
        stack.push((k, succs));
    }
}

/// Relative weights of the four term constructors in [`TermGenerator`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights {
    pub var: f64,
    pub lam: f64,
    pub app: f64,
    pub red: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            var: 1.0,
            lam: 1.0,
            app: 1.0,
            red: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub max_size: usize,
    pub max_redexes: usize,
    pub seed: u64,
    pub weights: Weights,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_size: 25,
            max_redexes: 8,
            seed: 0,
            weights: Weights::default(),
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.max_size == 0 {
            return Err("max_size must be at least 1".into());
        }
        let w = self.weights;
        if [w.var, w.lam, w.app, w.red]
            .iter()
            .any(|p| !p.is_finite() || *p <= 0.0)
        {
            return Err("constructor weights must be positive and finite".into());
        }
        Ok(())
    }
}

/// Free variables are drawn from this pool.
pub const FREE_POOL: [&str; 5] = ["a", "b", "c", "d", "e"];
const BINDERS: [&str; 4] = ["x", "y", "z", "u"];

/// Deterministic stream of random terms.
pub struct TermGenerator {
    params: GenParams,
    rng: ChaCha8Rng,
}

impl TermGenerator {
    pub fn new(params: GenParams) -> Self {
        debug_assert!(params.validate().is_ok());
        let rng = ChaCha8Rng::seed_from_u64(params.seed);
        TermGenerator { params, rng }
    }

    pub fn next_term(&mut self) -> Term {
        let size = self.rng.random_range(1..=self.params.max_size);
        let mut redexes = self.params.max_redexes;
        let mut scope = Vec::new();
        self.gen(size, &mut scope, &mut redexes)
    }

    /// A variable: bound when possible, most of the time.
    pub fn var_name(&mut self, scope: &[VarName]) -> VarName {
        if !scope.is_empty() && self.rng.random_bool(0.8) {
            scope[self.rng.random_range(0..scope.len())].clone()
        } else {
            VarName::new(FREE_POOL[self.rng.random_range(0..FREE_POOL.len())])
        }
    }

    fn binder(&mut self) -> VarName {
        // Occasionally reuse a free-pool name to exercise shadowing and capture.
        if self.rng.random_bool(0.15) {
            VarName::new(FREE_POOL[self.rng.random_range(0..2)])
        } else {
            VarName::new(BINDERS[self.rng.random_range(0..BINDERS.len())])
        }
    }

    fn gen(&mut self, budget: usize, scope: &mut Vec<VarName>, redexes: &mut usize) -> Term {
        let w = self.params.weights;
        // Variables only at leaves, so every term fills its drawn size.
        let choices = [
            (w.var, budget == 1),
            (w.lam, budget >= 2),
            (w.app, budget >= 3),
            (w.red, budget >= 3 && *redexes > 0),
        ];
        let total: f64 = choices.iter().filter(|c| c.1).map(|c| c.0).sum();
        let mut pick = self.rng.random::<f64>() * total;
        let mut which = 0;
        for (i, (weight, ok)) in choices.iter().enumerate() {
            if !ok {
                continue;
            }
            which = i;
            if pick < *weight {
                break;
            }
            pick -= weight;
        }
        match which {
            0 => Term::Var(self.var_name(scope)),
            1 => {
                let x = self.binder();
                scope.push(x.clone());
                let body = self.gen(budget - 1, scope, redexes);
                scope.pop();
                Term::lam(x, body)
            }
            2 => {
                let left = self.rng.random_range(1..=budget - 2);
                let fun = self.gen(left, scope, redexes);
                let arg = self.gen(budget - 1 - left, scope, redexes);
                Term::app(fun, arg)
            }
            _ => {
                *redexes -= 1;
                let left = self.rng.random_range(1..=budget - 2);
                let x = self.binder();
                scope.push(x.clone());
                let body = self.gen(left, scope, redexes);
                scope.pop();
                let arg = self.gen(budget - 1 - left, scope, redexes);
                Term::red(x, body, arg)
            }
        }
    }
}

impl Iterator for TermGenerator {
    type Item = Term;
    fn next(&mut self) -> Option<Term> {
        Some(self.next_term())
    }
}

pub fn gen_term(params: &GenParams) -> Term {
    TermGenerator::new(params.clone()).next_term()
}

/// Every term of exactly `size` nodes over `names`, where each name may be
/// used both as a binder and as a variable.
pub fn enumerate_terms(size: usize, names: &[VarName]) -> Vec<Term> {
    let mut table: Vec<Vec<Term>> = vec![Vec::new()];
    for n in 1..=size {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(names.iter().map(|x| Term::Var(x.clone())));
        } else {
            for x in names {
                for body in &table[n - 1] {
                    level.push(Term::lam(x.clone(), body.clone()));
                }
            }
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for a in &table[left] {
                    for b in &table[right] {
                        level.push(Term::app(a.clone(), b.clone()));
                        for x in names {
                            level.push(Term::red(x.clone(), a.clone(), b.clone()));
                        }
                    }
                }
            }
        }
        table.push(level);
    }
    table.swap_remove(size)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    fn exact(s: &DevStats) -> (u64, u64) {
        (
            s.shortest.as_ref().unwrap().to_u64().unwrap(),
            s.longest.as_ref().unwrap().to_u64().unwrap(),
        )
    }

    #[test]
    fn dev_stats_examples() {
        let nf = dev_stats(&Term::lam("x", v("x")), 10).unwrap();
        assert_eq!(exact(&nf), (0, 0));
        assert_eq!(nf.states, 1);
        assert!(nf.complete);

        let erasing = Term::red("x", v("z"), Term::red("y", v("y"), v("w")));
        let s = dev_stats(&erasing, 100).unwrap();
        assert!(s.complete);
        assert_eq!(exact(&s), (1, 2));
        // root, z, (\*x. z) w
        assert_eq!(s.states, 3);

        let dup = Term::red(
            "x",
            Term::app(v("x"), v("x")),
            Term::red("y", v("y"), v("w")),
        );
        let s = dev_stats(&dup, 100).unwrap();
        assert_eq!(exact(&s), (2, 3));
    }

    #[test]
    fn dev_stats_reports_limit() {
        let dup = Term::red(
            "x",
            Term::app(v("x"), v("x")),
            Term::red("y", v("y"), v("w")),
        );
        let s = dev_stats(&dup, 2).unwrap();
        assert!(!s.complete);
        assert!(s.shortest.is_none() && s.longest.is_none());
        assert!(s.detail.unwrap().contains("state limit"));
    }

    #[test]
    fn label_examples() {
        assert_eq!(
            label(&Term::lam("x", v("x"))),
            Term::lam("x", Term::var("x"))
        );
        assert_eq!(
            label(&Term::red("x", v("x"), v("y"))),
            Term::red_labeled(0, "x", Term::var("x"), Term::var("y"))
        );
        assert_eq!(
            label(&Term::red("x", Term::red("y", v("y"), v("z")), v("w"))),
            Term::red_labeled(
                0,
                "x",
                Term::red_labeled(1, "y", Term::var("y"), Term::var("z")),
                Term::var("w")
            )
        );
    }

    #[test]
    fn residuals_keep_labels() {
        // (\*x. x x) ((\*y. y) w): the inner redex is copied with its label.
        let dup = label(&Term::red(
            "x",
            Term::app(v("x"), v("x")),
            Term::red("y", v("y"), v("w")),
        ));
        let next = crate::reduction::contract(&dup, &Path::root()).unwrap();
        let inner = Term::red_labeled(1, "y", Term::var("y"), Term::var("w"));
        assert_eq!(next, Term::app(inner.clone(), inner));
    }

    #[test]
    fn essential_oracle_examples() {
        let inner = Path::from(vec![crate::term::Step::RedArg]);
        assert!(essential_oracle(&Term::red("x", v("x"), v("y")), &Path::root(), 100).unwrap());
        let erasing = Term::red("x", v("z"), Term::red("y", v("y"), v("w")));
        assert!(!essential_oracle(&erasing, &inner, 100).unwrap());
        assert!(essential_oracle(&erasing, &Path::root(), 100).unwrap());
        let dup = Term::red(
            "x",
            Term::app(v("x"), v("x")),
            Term::red("y", v("y"), v("w")),
        );
        assert!(essential_oracle(&dup, &inner, 100).unwrap());
        assert!(essential_oracle(&dup, &inner.child(crate::term::Step::RedBody), 100).is_err());
    }

    #[test]
    fn generator_is_deterministic_and_bounded() {
        let p = GenParams {
            seed: 7,
            ..GenParams::default()
        };
        let a: Vec<Term> = TermGenerator::new(p.clone()).take(50).collect();
        let b: Vec<Term> = TermGenerator::new(p.clone()).take(50).collect();
        assert_eq!(a, b);
        for t in &a {
            assert!(t.size() <= p.max_size);
            assert!(t.redex_count() <= p.max_redexes);
            assert!(t.is_well_formed());
        }
    }

    #[test]
    fn generator_edge_params() {
        let one = GenParams {
            max_size: 1,
            ..GenParams::default()
        };
        for seed in 0..20 {
            let t = gen_term(&GenParams {
                seed,
                ..one.clone()
            });
            match t {
                Term::Var(x) => assert!(FREE_POOL.contains(&x.as_str())),
                other => panic!("expected a variable, got {other:?}"),
            }
        }
        let nf = GenParams {
            max_redexes: 0,
            ..GenParams::default()
        };
        for t in TermGenerator::new(nf).take(50) {
            assert!(t.is_nf());
        }
    }

    #[test]
    fn params_validation() {
        assert!(GenParams::default().validate().is_ok());
        assert!(GenParams {
            max_size: 0,
            ..GenParams::default()
        }
        .validate()
        .is_err());
        let mut p = GenParams::default();
        p.weights.red = 0.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn enumeration_counts() {
        let names = [VarName::new("x"), VarName::new("y")];
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_terms(n, &names).len()).collect();
        // T(1)=2, T(n) = 2 T(n-1) + 3 * sum_{a+b=n-1} T(a) T(b)
        assert_eq!(counts, vec![2, 4, 20, 88, 464]);
    }
}
