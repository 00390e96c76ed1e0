use std::collections::BTreeSet;

use proptest::prelude::*;

use devlab::essential::essential_set;
use devlab::metrics::{g, h, m, n};
use devlab::oracle::label;
use devlab::reduction::{contract, one_step_all, redex_positions};
use devlab::syntax::{from_json, parse, print, to_json};
use devlab::{Term, VarName};

const NAMES: [&str; 5] = ["x", "y", "z", "a", "b"];

fn name() -> impl Strategy<Value = VarName> {
    prop::sample::select(&NAMES[..]).prop_map(VarName::new)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = name().prop_map(Term::Var);
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (name(), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (name(), inner.clone(), inner).prop_map(|(x, b, a)| Term::red(x, b, a)),
        ]
    })
}

/// Renames every binder to a fresh `r<k>`, giving an α-variant with no
/// shared binder names.
fn alpha_variant(t: &Term, next: &mut u32) -> Term {
    let mut fresh = || {
        *next += 1;
        VarName::new(format!("r{next}"))
    };
    match t {
        Term::Var(_) => t.clone(),
        Term::Lam { binder, body } => {
            let r = fresh();
            let body = body.subst(binder, &Term::Var(r.clone()));
            Term::lam(r, alpha_variant(&body, next))
        }
        Term::App { fun, arg } => Term::app(alpha_variant(fun, next), alpha_variant(arg, next)),
        Term::Red {
            binder, body, arg, ..
        } => {
            let r = fresh();
            let body = body.subst(binder, &Term::Var(r.clone()));
            let body = alpha_variant(&body, next);
            Term::red(r, body, alpha_variant(arg, next))
        }
    }
}

fn variant(t: &Term) -> Term {
    alpha_variant(t, &mut 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn alpha_eq_is_an_equivalence(t in term(), u in term()) {
        let tv = variant(&t);
        prop_assert!(t.alpha_eq(&t));
        prop_assert!(t.alpha_eq(&tv) && tv.alpha_eq(&t));
        prop_assert_eq!(t.alpha_eq(&u), tv.alpha_eq(&u));
    }

    #[test]
    fn subst_respects_alpha(t in term(), u in term(), x in name()) {
        let a = t.subst(&x, &u);
        let b = variant(&t).subst(&x, &variant(&u));
        prop_assert!(a.alpha_eq(&b), "{} vs {}", print(&a), print(&b));
        prop_assert!(a.is_well_formed());
    }

    #[test]
    fn free_vars_of_subst(t in term(), u in term(), x in name()) {
        let mut want: BTreeSet<VarName> = t.free_vars();
        let hit = want.remove(&x);
        if hit {
            want.extend(u.free_vars());
        }
        prop_assert_eq!(t.subst(&x, &u).free_vars(), want);
    }

    #[test]
    fn normal_forms_have_no_redexes(t in term()) {
        let ps = redex_positions(&t);
        prop_assert_eq!(ps.len(), t.redex_count());
        prop_assert_eq!(ps.is_empty(), t.is_nf());
        prop_assert_eq!(h(&t).is_zero(), t.is_nf());
        prop_assert_eq!(g(&t).is_zero(), t.is_nf());
    }

    #[test]
    fn reducts_are_well_formed_and_deterministic(t in term()) {
        let steps = one_step_all(&t);
        let again = one_step_all(&variant(&t));
        prop_assert_eq!(steps.len(), again.len());
        for ((p, a), (q, b)) in steps.iter().zip(&again) {
            prop_assert_eq!(p, q);
            prop_assert!(a.is_well_formed());
            prop_assert!(a.alpha_eq(b));
        }
    }

    #[test]
    fn metrics_are_alpha_invariant(t in term(), x in name()) {
        let tv = variant(&t);
        prop_assert_eq!(h(&t), h(&tv));
        prop_assert_eq!(g(&t), g(&tv));
        prop_assert_eq!(m(&x, &t), m(&x, &tv));
        prop_assert_eq!(n(&x, &t), n(&x, &tv));
        prop_assert_eq!(essential_set(&t), essential_set(&tv));
    }

    #[test]
    fn shortest_never_exceeds_longest(t in term(), x in name()) {
        prop_assert!(h(&t) <= g(&t));
        prop_assert!(m(&x, &t) <= n(&x, &t));
        if !t.has_free(&x) {
            prop_assert!(m(&x, &t).is_zero() && n(&x, &t).is_zero());
        }
    }

    #[test]
    fn erasing_labels_commutes_with_reduction(t in term()) {
        let labeled = label(&t);
        for p in redex_positions(&labeled) {
            let next = contract(&labeled, &p).unwrap();
            prop_assert!(next.erase_labels().alpha_eq(&contract(&t, &p).unwrap()));
        }
    }

    #[test]
    fn syntax_roundtrips(t in term()) {
        let printed = print(&t);
        let back = parse(&printed).unwrap();
        prop_assert!(back.alpha_eq(&t));
        prop_assert_eq!(print(&back), printed);
        prop_assert_eq!(from_json(&to_json(&t)).unwrap(), t);
    }
}
