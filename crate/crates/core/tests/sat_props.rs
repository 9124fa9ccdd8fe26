mod common;

use logiclab_core::formula::PropFormula;
use logiclab_core::sat::{
    dpll, nnf_prop, parse_dimacs, to_cnf_naive, tseitin, CnfFormula, Literal, SatStatus,
};
use logiclab_core::semantics::{equiv_tt, truth_table};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::arb_prop;

const ATOMS: &[&str] = &["A", "B", "C", "D", "E", "F", "G", "H"];

fn random_cnf(rng: &mut StdRng) -> CnfFormula {
    let vars = rng.gen_range(1..=12u32);
    let mut cnf = CnfFormula::new(vars);
    for _ in 0..rng.gen_range(0..=40) {
        let len = rng.gen_range(0..=4);
        let clause: Vec<Literal> = (0..len)
            .map(|_| Literal {
                var: rng.gen_range(1..=vars),
                negated: rng.gen(),
            })
            .collect();
        cnf.clauses.push(clause);
    }
    cnf
}

fn brute_force(cnf: &CnfFormula) -> bool {
    let n = cnf.num_vars as usize;
    (0u32..1 << n).any(|bits| {
        let model: Vec<bool> = std::iter::once(false).chain((0..n).map(|i| bits >> i & 1 == 1)).collect();
        cnf.satisfied_by(&model)
    })
}

#[test]
fn dpll_matches_exhaustive_search() {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut sat = 0;
    for _ in 0..500 {
        let cnf = random_cnf(&mut rng);
        let r = dpll(&cnf);
        assert_eq!(r.is_sat(), brute_force(&cnf), "{cnf:?}");
        if r.is_sat() {
            sat += 1;
            let model: Vec<bool> = std::iter::once(false).chain(r.model.values().copied()).collect();
            assert_eq!(model.len(), cnf.num_vars as usize + 1);
            assert!(cnf.satisfied_by(&model));
        }
        assert_eq!(dpll(&cnf), r, "deterministic");
    }
    assert!(sat > 50 && sat < 450, "mix of outcomes: {sat}");
}

#[test]
fn dimacs_round_trip() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..50 {
        let mut cnf = random_cnf(&mut rng);
        cnf.clauses.retain(|c| !c.is_empty());
        let back = parse_dimacs(&cnf.to_dimacs()).unwrap();
        assert_eq!(back.num_vars, cnf.num_vars);
        assert_eq!(back.clauses, cnf.clauses);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tseitin_is_equisatisfiable(f in arb_prop(ATOMS, 6)) {
        let satisfiable = truth_table(&f).unwrap().rows.iter().any(|&r| r);
        let cnf = tseitin(&f);
        prop_assert_eq!(dpll(&cnf).status == SatStatus::Sat, satisfiable);
        prop_assert!(cnf.clauses.iter().flatten().all(|l| l.var >= 1 && l.var <= cnf.num_vars));
    }

    #[test]
    fn naive_cnf_is_equivalent(f in arb_prop(ATOMS, 5)) {
        if let Ok(cnf) = to_cnf_naive(&f) {
            let lit = |l: &Literal| {
                let a = PropFormula::atom(cnf.var_map[&l.var].clone());
                if l.negated { PropFormula::neg(a) } else { a }
            };
            let g = cnf
                .clauses
                .iter()
                .map(|c| c.iter().map(lit).reduce(PropFormula::or).unwrap_or(PropFormula::False))
                .reduce(PropFormula::and)
                .unwrap_or(PropFormula::True);
            prop_assert!(equiv_tt(&f, &g).unwrap().equivalent);
            for c in &cnf.clauses {
                prop_assert!(c.windows(2).all(|w| w[0].var < w[1].var));
            }
        }
    }

    #[test]
    fn nnf_is_equivalent(f in arb_prop(ATOMS, 6)) {
        prop_assert!(equiv_tt(&f, &nnf_prop(&f)).unwrap().equivalent);
    }
}
