//! The invariant suite run by `devlab check` on each generated term.

use std::collections::BTreeSet;

use crate::essential::{essential_set, is_essential};
use crate::metrics::{g, h, m, n, Count};
use crate::oracle::{dev_stats, essential_oracle, TermGenerator, DEFAULT_ESSENTIAL_MAX_REDEXES};
use crate::reduction::{one_step_all, Trace};
use crate::strategy::{g_step, h_redex, h_step, longest_trace, shortest_trace};
use crate::syntax::{from_json, parse, print, to_json};
use crate::term::{Step, Term, VarName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The oracle hit its limit; equalities against it were not checked.
    Skip(String),
    Fail {
        property: &'static str,
        detail: String,
    },
}

impl Outcome {
    fn fail(property: &'static str, detail: impl Into<String>) -> Self {
        Outcome::Fail {
            property,
            detail: detail.into(),
        }
    }
}

pub struct CheckConfig {
    pub state_limit: usize,
    pub essential_max_redexes: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            state_limit: crate::oracle::DEFAULT_STATE_LIMIT,
            essential_max_redexes: DEFAULT_ESSENTIAL_MAX_REDEXES,
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $prop:literal, $($fmt:tt)+) => {
        if !$cond {
            return Outcome::fail($prop, format!($($fmt)+));
        }
    };
}

/// Runs every invariant on `t`; `partner` and `x` feed the substitution laws.
pub fn check_term(t: &Term, partner: &Term, x: &VarName, cfg: &CheckConfig) -> Outcome {
    let (ht, gt) = (h(t), g(t));

    ensure!(ht <= gt, "h<=g", "h={ht} > g={gt}");
    ensure!(
        ht.is_zero() == t.is_nf() && gt.is_zero() == t.is_nf(),
        "nf-zero",
        "h={ht} g={gt} nf={}",
        t.is_nf()
    );
    for y in t.free_vars() {
        ensure!(m(&y, t) <= n(&y, t), "m<=n", "variable {y}");
    }

    for (name, trace, expected) in [
        ("shortest-trace", shortest_trace(t), &ht),
        ("longest-trace", longest_trace(t), &gt),
    ] {
        if let Some(msg) = trace_problem(&trace, expected) {
            return Outcome::fail(name, msg);
        }
    }

    let ess = essential_set(t);
    ensure!(
        Count::from(ess.len()) == ht,
        "essential-count",
        "|E|={} h={ht}",
        ess.len()
    );
    if let Some(p) = h_redex(t) {
        ensure!(
            ess.contains(&p),
            "h-redex-essential",
            "H contracts {p}, not essential"
        );
        let inside = p.child(Step::RedArg);
        ensure!(
            !ess.iter()
                .any(|e| *e == inside || e.strictly_inside(&inside)),
            "h-redex-innermost",
            "essential redex inside the argument of {p}"
        );
    }

    if let Some(problem) = monotonicity_problem(t) {
        return problem;
    }
    if let Some(problem) = substitution_problem(t, partner, x) {
        return problem;
    }

    let printed = print(t);
    match parse(&printed) {
        Ok(back) => {
            ensure!(back.alpha_eq(t), "roundtrip", "{printed}");
            ensure!(print(&back) == printed, "print-stable", "{printed}");
        }
        Err(e) => return Outcome::fail("roundtrip", format!("{printed}: {e}")),
    }
    ensure!(
        from_json(&to_json(t)).as_ref() == Ok(t),
        "json-roundtrip",
        "{printed}"
    );

    if t.redex_count() <= cfg.essential_max_redexes {
        for (p, _) in one_step_all(t) {
            match essential_oracle(t, &p, cfg.state_limit) {
                Ok(truth) => ensure!(
                    is_essential(t, &p).ok() == Some(truth),
                    "essential-oracle",
                    "redex {p}: oracle says {truth}"
                ),
                Err(crate::Error::LimitExceeded { .. }) => {
                    return Outcome::Skip(format!("essentiality search limit at {p}"))
                }
                Err(e) => return Outcome::fail("essential-oracle", e.to_string()),
            }
        }
    }

    match dev_stats(t, cfg.state_limit) {
        Ok(stats) if stats.complete => {
            ensure!(
                stats.shortest.as_ref() == Some(&ht),
                "oracle-shortest",
                "oracle {:?} h={ht}",
                stats.shortest
            );
            ensure!(
                stats.longest.as_ref() == Some(&gt),
                "oracle-longest",
                "oracle {:?} g={gt}",
                stats.longest
            );
            Outcome::Pass
        }
        Ok(stats) => Outcome::Skip(stats.detail.unwrap_or_default()),
        Err(e) => Outcome::fail("oracle", e.to_string()),
    }
}

fn trace_problem(trace: &Trace, expected: &Count) -> Option<String> {
    if Count::from(trace.len()) != *expected {
        return Some(format!("length {} expected {expected}", trace.len()));
    }
    if !trace.is_complete() {
        return Some("does not end in normal form".into());
    }
    let mut prev = &trace.start;
    for (i, (p, next)) in trace.steps.iter().enumerate() {
        let member = one_step_all(prev)
            .iter()
            .any(|(q, r)| q == p && r.alpha_eq(next));
        if !member {
            return Some(format!("step {} via {p} is not a one-step reduct", i + 1));
        }
        prev = next;
    }
    None
}

fn monotonicity_problem(t: &Term) -> Option<Outcome> {
    let (ht, gt) = (h(t), g(t));
    let mut vars: BTreeSet<VarName> = t.free_vars();
    vars.insert(VarName::new("a"));
    for (p, next) in one_step_all(t) {
        let (hn, gn) = (h(&next), g(&next));
        if ht > &hn + &Count::one() {
            return Some(Outcome::fail(
                "h-monotone",
                format!("step {p}: h {ht} -> {hn}"),
            ));
        }
        if gt < &gn + &Count::one() {
            return Some(Outcome::fail(
                "g-monotone",
                format!("step {p}: g {gt} -> {gn}"),
            ));
        }
        for x in &vars {
            if m(x, t) > m(x, &next) {
                return Some(Outcome::fail(
                    "m-monotone",
                    format!("step {p}, variable {x}"),
                ));
            }
            if n(x, t) < n(x, &next) {
                return Some(Outcome::fail(
                    "n-monotone",
                    format!("step {p}, variable {x}"),
                ));
            }
        }
    }
    if !t.is_nf() {
        let hs = h_step(t).expect("non-normal");
        if Some(h(&hs)) != ht.pred() {
            return Some(Outcome::fail(
                "h-progress",
                format!("h(H(M))={} h(M)={ht}", h(&hs)),
            ));
        }
        let gs = g_step(t).expect("non-normal");
        if Some(g(&gs)) != gt.pred() {
            return Some(Outcome::fail(
                "g-progress",
                format!("g(G(M))={} g(M)={gt}", g(&gs)),
            ));
        }
    }
    None
}

fn substitution_problem(t: &Term, partner: &Term, x: &VarName) -> Option<Outcome> {
    let s = t.subst(x, partner);
    let (mx, nx) = (m(x, t), n(x, t));
    if h(&s) != &h(t) + &(&h(partner) * &mx) {
        return Some(Outcome::fail(
            "h-subst",
            format!("x={x} N={}", print(partner)),
        ));
    }
    if g(&s) != &g(t) + &(&g(partner) * &nx) {
        return Some(Outcome::fail(
            "g-subst",
            format!("x={x} N={}", print(partner)),
        ));
    }
    let mut ys: BTreeSet<VarName> = t.free_vars();
    ys.extend(partner.free_vars());
    ys.insert(VarName::new("e"));
    ys.remove(x);
    for y in &ys {
        if m(y, &s) != &m(y, t) + &(&m(y, partner) * &mx) {
            return Some(Outcome::fail(
                "m-subst",
                format!("x={x} y={y} N={}", print(partner)),
            ));
        }
        if n(y, &s) != &n(y, t) + &(&n(y, partner) * &nx) {
            return Some(Outcome::fail(
                "n-subst",
                format!("x={x} y={y} N={}", print(partner)),
            ));
        }
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub terms: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// First failing term with the property it broke.
    pub first_failure: Option<(Term, &'static str, String)>,
}

/// Generates `count` terms and runs [`check_term`] on each. The substitution
/// partner of each term is the next term drawn from the same stream.
pub fn run_check(gen: &mut TermGenerator, count: usize, cfg: &CheckConfig) -> CheckSummary {
    let mut summary = CheckSummary::default();
    for _ in 0..count {
        let t = gen.next_term();
        let partner = gen.next_term();
        let x = gen.var_name(&[]);
        summary.terms += 1;
        match check_term(&t, &partner, &x, cfg) {
            Outcome::Pass => summary.passed += 1,
            Outcome::Skip(_) => summary.skipped += 1,
            Outcome::Fail { property, detail } => {
                summary.failed += 1;
                if summary.first_failure.is_none() {
                    summary.first_failure = Some((t, property, detail));
                }
            }
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::GenParams;

    #[test]
    fn worked_terms_pass() {
        let cfg = CheckConfig::default();
        for src in [
            "(\\*x. z) ((\\*y. y) w)",
            "(\\*x. x x) ((\\*y. y) w)",
            "\\a. a",
        ] {
            let t = parse(src).unwrap();
            let out = check_term(
                &t,
                &parse("(\\*q. q q) a").unwrap(),
                &VarName::new("w"),
                &cfg,
            );
            assert_eq!(out, Outcome::Pass, "{src}");
        }
    }

    #[test]
    fn broken_trace_is_reported() {
        let t = parse("(\\*x. x) y").unwrap();
        let bogus = Trace {
            start: t,
            steps: vec![(crate::term::Path::root(), Term::var("z"))],
        };
        assert!(trace_problem(&bogus, &Count::one()).is_some());
    }

    #[test]
    fn zero_terms_is_all_zero() {
        let mut gen = TermGenerator::new(GenParams::default());
        let s = run_check(&mut gen, 0, &CheckConfig::default());
        assert_eq!(s, CheckSummary::default());
    }
}
