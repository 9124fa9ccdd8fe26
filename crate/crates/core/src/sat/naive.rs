use super::cnf::normalize_clause;
use super::nnf::nnf_prop;
use super::{CnfError, CnfFormula, Literal};
use crate::formula::PropFormula;

/// Largest clause count the distributive conversion will attempt.
pub const NAIVE_CLAUSE_LIMIT: usize = 512;

/// Product bound on the number of clauses distribution produces from the NNF of `f`.
pub fn estimate_clauses(f: &PropFormula) -> u128 {
    fn go(f: &PropFormula) -> u128 {
        match f {
            PropFormula::Atom(_) | PropFormula::Not(_) | PropFormula::False => 1,
            PropFormula::True => 0,
            PropFormula::And(l, r) => go(l).saturating_add(go(r)),
            PropFormula::Or(l, r) => go(l).saturating_mul(go(r)),
            PropFormula::Implies(..) | PropFormula::Iff(..) => unreachable!("input is in NNF"),
        }
    }
    go(&nnf_prop(f))
}

/// Equivalent CNF over the formula's own atoms (ids in lexicographic atom
/// order), built by distributing disjunction over conjunction.
pub fn to_cnf_naive(f: &PropFormula) -> Result<CnfFormula, CnfError> {
    let estimate = estimate_clauses(f);
    if estimate > NAIVE_CLAUSE_LIMIT as u128 {
        return Err(CnfError::BlowupExceeded {
            estimate,
            limit: NAIVE_CLAUSE_LIMIT,
        });
    }
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let id = |name: &str| atoms.iter().position(|a| a == name).expect("atom") as u32 + 1;
    let clauses = distribute(&nnf_prop(f), &id);
    let mut cnf = CnfFormula::new(atoms.len() as u32);
    for (i, a) in atoms.iter().enumerate() {
        cnf.var_map.insert(i as u32 + 1, a.clone());
    }
    for c in clauses {
        if let Some(c) = normalize_clause(c) {
            if !cnf.clauses.contains(&c) {
                cnf.clauses.push(c);
            }
        }
    }
    Ok(cnf)
}

fn distribute(f: &PropFormula, id: &dyn Fn(&str) -> u32) -> Vec<Vec<Literal>> {
    match f {
        PropFormula::Atom(a) => vec![vec![Literal::pos(id(a))]],
        PropFormula::Not(c) => match &**c {
            PropFormula::Atom(a) => vec![vec![Literal::neg(id(a))]],
            _ => unreachable!("input is in NNF"),
        },
        PropFormula::True => Vec::new(),
        PropFormula::False => vec![Vec::new()],
        PropFormula::And(l, r) => {
            let mut out = distribute(l, id);
            out.extend(distribute(r, id));
            out
        }
        PropFormula::Or(l, r) => {
            let (left, right) = (distribute(l, id), distribute(r, id));
            let mut out = Vec::with_capacity(left.len() * right.len());
            for a in &left {
                for b in &right {
                    out.push(a.iter().chain(b).copied().collect());
                }
            }
            out
        }
        PropFormula::Implies(..) | PropFormula::Iff(..) => unreachable!("input is in NNF"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_prop;

    fn lits(v: &[i64]) -> Vec<Literal> {
        v.iter().map(|&i| Literal::from_int(i).unwrap()).collect()
    }

    #[test]
    fn s1_clauses() {
        let cnf = to_cnf_naive(&parse_prop("(A | B) & C -> D").unwrap()).unwrap();
        // A=1, B=2, C=3, D=4
        assert_eq!(cnf.clauses, vec![lits(&[-1, -3, 4]), lits(&[-2, -3, 4])]);
        assert_eq!(cnf.to_string(), "(!A | !C | D) & (!B | !C | D)");
    }

    #[test]
    fn conjunction_of_units() {
        let cnf = to_cnf_naive(&parse_prop("A & B").unwrap()).unwrap();
        assert_eq!(cnf.clauses, vec![lits(&[1]), lits(&[2])]);
    }

    #[test]
    fn tautology_vanishes() {
        let cnf = to_cnf_naive(&parse_prop("A | !A").unwrap()).unwrap();
        assert!(cnf.clauses.is_empty());
        assert_eq!(cnf.num_vars, 1);
    }

    #[test]
    fn duplicates_and_false() {
        let cnf = to_cnf_naive(&parse_prop("(A | B) & (B | A) & (A | false)").unwrap()).unwrap();
        assert_eq!(cnf.clauses, vec![lits(&[1, 2]), lits(&[1])]);
        let cnf = to_cnf_naive(&PropFormula::False).unwrap();
        assert_eq!(cnf.clauses, vec![Vec::new()]);
    }

    #[test]
    fn blowup_guard() {
        // ten binary conjunctions under a disjunction: 2^10 clauses
        let text = (0..10).map(|i| format!("(X{i} & Y{i})")).collect::<Vec<_>>().join(" | ");
        let f = parse_prop(&text).unwrap();
        assert_eq!(estimate_clauses(&f), 1024);
        assert_eq!(
            to_cnf_naive(&f),
            Err(CnfError::BlowupExceeded { estimate: 1024, limit: 512 })
        );
    }
}
