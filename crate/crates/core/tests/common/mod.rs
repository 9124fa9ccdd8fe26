#![allow(dead_code)]

use std::collections::BTreeSet;

use logiclab_core::formula::{Binder, FolFormula, PropFormula, Term};
use proptest::prelude::*;

pub fn arb_prop(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = PropFormula> {
    let leaf = prop_oneof![
        6 => prop::sample::select(atoms).prop_map(PropFormula::atom),
        1 => Just(PropFormula::True),
        1 => Just(PropFormula::False),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::implies(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| PropFormula::iff(l, r)),
        ]
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => prop::sample::select(vec!["x", "y", "z"]).prop_map(|v| Term::Var(v.to_string())),
        1 => Just(Term::Const("1".to_string())),
    ]
}

/// First-order formulas over `R` (nullary), `P` (unary) and `Q` (binary),
/// one sort. Free variables may occur.
pub fn arb_fol(depth: u32) -> impl Strategy<Value = FolFormula> {
    let leaf = prop_oneof![
        1 => Just(FolFormula::Pred("R".into(), vec![])),
        3 => arb_term().prop_map(|t| FolFormula::Pred("P".into(), vec![t])),
        3 => (arb_term(), arb_term()).prop_map(|(a, b)| FolFormula::Pred("Q".into(), vec![a, b])),
        1 => Just(FolFormula::True),
        1 => Just(FolFormula::False),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y", "z"]);
        prop_oneof![
            inner.clone().prop_map(FolFormula::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FolFormula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FolFormula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FolFormula::implies(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| FolFormula::iff(l, r)),
            (var.clone(), inner.clone()).prop_map(|(v, b)| FolFormula::forall(Binder::unsorted(v), b)),
            (var, inner).prop_map(|(v, b)| FolFormula::exists(Binder::unsorted(v), b)),
        ]
    })
    .prop_map(|f| drop_shadowing(&f, &mut BTreeSet::new()))
}

/// Removes quantifiers that rebind a variable already in scope.
pub fn drop_shadowing(f: &FolFormula, scope: &mut BTreeSet<String>) -> FolFormula {
    let mut go = |g: &FolFormula| drop_shadowing(g, scope);
    match f {
        FolFormula::Pred(..) | FolFormula::True | FolFormula::False => f.clone(),
        FolFormula::Not(c) => FolFormula::neg(go(c)),
        FolFormula::And(l, r) => {
            let l = go(l);
            FolFormula::and(l, go(r))
        }
        FolFormula::Or(l, r) => {
            let l = go(l);
            FolFormula::or(l, go(r))
        }
        FolFormula::Implies(l, r) => {
            let l = go(l);
            FolFormula::implies(l, go(r))
        }
        FolFormula::Iff(l, r) => {
            let l = go(l);
            FolFormula::iff(l, go(r))
        }
        FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
            if scope.contains(&b.var) {
                return drop_shadowing(body, scope);
            }
            scope.insert(b.var.clone());
            let inner = drop_shadowing(body, scope);
            scope.remove(&b.var);
            if matches!(f, FolFormula::Forall(..)) {
                FolFormula::forall(b.clone(), inner)
            } else {
                FolFormula::exists(b.clone(), inner)
            }
        }
    }
}

/// Closes a formula by universally quantifying its free variables.
pub fn close(f: FolFormula) -> FolFormula {
    f.free_variables()
        .into_iter()
        .fold(f, |acc, (v, _)| FolFormula::forall(Binder::unsorted(v), acc))
}
