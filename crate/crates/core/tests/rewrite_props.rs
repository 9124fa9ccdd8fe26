use std::collections::BTreeMap;

use itertools::Itertools;
use logiclab_core::formula::{Binder, FolFormula, Formula, PropFormula};
use logiclab_core::rewrite::{
    apply_rule, derive_equiv, rule_catalog, step_holds, validate_step, Bindings, Direction, Pattern, StepClaim,
};
use logiclab_core::sat::{nnf_prop, to_cnf_naive};
use logiclab_core::semantics::{equiv_finite, equiv_tt, eval_prop, Bounds};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn atom(s: &str) -> PropFormula {
    PropFormula::atom(s)
}

/// Small formulas over A, B, C used to fill metavariables.
fn prop_pool() -> Vec<PropFormula> {
    vec![
        atom("A"),
        atom("B"),
        atom("C"),
        PropFormula::True,
        PropFormula::False,
        PropFormula::neg(atom("A")),
        PropFormula::and(atom("A"), atom("B")),
        PropFormula::or(atom("B"), PropFormula::neg(atom("C"))),
        PropFormula::implies(atom("C"), atom("A")),
        PropFormula::iff(atom("A"), atom("C")),
    ]
}

fn fol_pool() -> Vec<FolFormula> {
    let p = FolFormula::pred("P", &["x"]);
    let q = FolFormula::pred("Q", &["x"]);
    vec![
        p.clone(),
        FolFormula::neg(q.clone()),
        FolFormula::and(p.clone(), q.clone()),
        FolFormula::implies(q, p),
        FolFormula::pred("R", &[]),
        FolFormula::True,
    ]
}

#[test]
fn every_rule_instance_is_an_equivalence() {
    let pool = prop_pool();
    let fpool = fol_pool();
    for rule in rule_catalog() {
        let metas = rule.lhs.metas().into_iter().chain(rule.rhs.metas()).unique().collect::<Vec<_>>();
        if rule.lhs.has_quantifier() || rule.rhs.has_quantifier() {
            for combo in (0..metas.len()).map(|_| fpool.iter()).multi_cartesian_product() {
                let mut b = Bindings::default();
                b.binders.insert("x".into(), Binder::unsorted("x"));
                for (m, f) in metas.iter().zip(&combo) {
                    b.formulas.insert(m.clone(), (*f).clone());
                }
                let (l, r) = (rule.lhs.instantiate(&b).unwrap(), rule.rhs.instantiate(&b).unwrap());
                let v = equiv_finite(&l, &r, &Bounds::uniform(3)).unwrap();
                assert!(v.equivalent, "{} fails on {l} vs {r}: {:?}", rule.id, v.witness);
            }
            if metas.is_empty() {
                let mut b = Bindings::default();
                b.binders.insert("x".into(), Binder::unsorted("x"));
                let (l, r) = (rule.lhs.instantiate(&b).unwrap(), rule.rhs.instantiate(&b).unwrap());
                assert!(equiv_finite(&l, &r, &Bounds::uniform(3)).unwrap().equivalent, "{}", rule.id);
            }
            continue;
        }
        let combos: Vec<Vec<&PropFormula>> = if metas.is_empty() {
            vec![vec![]]
        } else {
            (0..metas.len()).map(|_| pool.iter()).multi_cartesian_product().collect()
        };
        for combo in combos {
            let mut b = Bindings::default();
            for (m, f) in metas.iter().zip(&combo) {
                b.formulas.insert(m.clone(), f.to_fol());
            }
            let l = rule.lhs.instantiate(&b).unwrap().to_prop().unwrap();
            let r = rule.rhs.instantiate(&b).unwrap().to_prop().unwrap();
            let v = equiv_tt(&l, &r).unwrap();
            assert!(v.equivalent, "{} fails on {l} vs {r}", rule.id);
        }
    }
}

#[test]
fn schemas_use_the_documented_letters() {
    for rule in rule_catalog() {
        for m in rule.lhs.metas().into_iter().chain(rule.rhs.metas()) {
            assert!(["P", "Q", "R"].contains(&m.as_str()), "{}: {m}", rule.id);
        }
        assert_eq!(Pattern::parse(rule.lhs_text), rule.lhs);
    }
}

fn arb_prop() -> impl Strategy<Value = PropFormula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["A", "B", "C", "D"]).prop_map(atom),
        1 => Just(PropFormula::True),
        1 => Just(PropFormula::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| PropFormula::implies(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| PropFormula::iff(l, r)),
        ]
    })
}

fn assignments(seed: u64) -> Vec<BTreeMap<String, bool>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..64)
        .map(|_| ["A", "B", "C", "D"].iter().map(|a| (a.to_string(), rng.gen())).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn application_is_local_and_reversible(f in arb_prop(), pick in any::<prop::sample::Index>(), ri in 0usize..64) {
        let form = Formula::Prop(f.clone());
        let fol = f.to_fol();
        let paths = fol.paths();
        let path = &paths[pick.index(paths.len())];
        let rule = &rule_catalog()[ri % rule_catalog().len()];
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            let Ok(out) = apply_rule(&form, rule.id, path, dir) else { continue };
            let after = out.as_fol();
            // only the addressed subtree changes
            prop_assert_eq!(fol.replace_at(path, after.at(path).unwrap().clone()).unwrap(), after.clone());
            prop_assert!(step_holds(&fol, &after, rule, path, dir));
            prop_assert!(step_holds(&after, &fol, rule, path, dir.flip()));
            if let Ok(back) = apply_rule(&out, rule.id, path, dir.flip()) {
                prop_assert_eq!(back, form.clone());
            }
            let verdict = equiv_tt(&f, &after.to_prop().unwrap()).unwrap();
            prop_assert!(verdict.equivalent);
        }
    }

    #[test]
    fn derivations_are_sound_and_validate(f in arb_prop(), which in 0usize..3, seed in any::<u64>()) {
        let g = match which {
            0 => nnf_prop(&f),
            1 => to_cnf_naive(&f).map(|c| cnf_formula(&c)).unwrap_or_else(|_| f.clone()),
            _ => PropFormula::neg(PropFormula::neg(f.clone())),
        };
        let d = derive_equiv(&Formula::Prop(f.clone()), &Formula::Prop(g.clone())).unwrap();
        let Formula::Prop(end) = &d.end else { unreachable!() };
        prop_assert_eq!(end, &g);
        for a in assignments(seed) {
            prop_assert_eq!(eval_prop(&f, &a).unwrap(), eval_prop(end, &a).unwrap());
        }
        let forms = d.formulas();
        for (i, s) in d.steps.iter().enumerate() {
            let claim = StepClaim { rule: s.rule.clone(), path: s.path.clone(), dir: s.dir };
            prop_assert!(validate_step(forms[i], &s.after, Some(&claim)).is_accepted(), "step {} {}", i, s.rule);
        }
    }
}

fn cnf_formula(c: &logiclab_core::sat::CnfFormula) -> PropFormula {
    let lit = |l: &logiclab_core::sat::Literal| {
        let a = atom(&c.var_map[&l.var]);
        if l.negated { PropFormula::neg(a) } else { a }
    };
    c.clauses
        .iter()
        .map(|cl| cl.iter().map(lit).reduce(PropFormula::or).unwrap_or(PropFormula::False))
        .reduce(PropFormula::and)
        .unwrap_or(PropFormula::True)
}
