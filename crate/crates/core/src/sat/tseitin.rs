use super::{CnfFormula, Literal};
use crate::formula::{render_prop, PropFormula};

/// Equisatisfiable CNF with one definition variable per connective or
/// constant. Atoms take ids `1..=n` in lexicographic order; definitions are
/// numbered after them in post-order. Negation reuses its child's variable.
pub fn tseitin(f: &PropFormula) -> CnfFormula {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let mut enc = Encoder {
        cnf: CnfFormula::new(atoms.len() as u32),
        atoms,
    };
    for (i, a) in enc.atoms.iter().enumerate() {
        enc.cnf.var_map.insert(i as u32 + 1, a.clone());
    }
    let root = enc.encode(f);
    enc.cnf.add_clause([root]);
    enc.cnf
}

struct Encoder {
    cnf: CnfFormula,
    atoms: Vec<String>,
}

impl Encoder {
    fn fresh(&mut self, f: &PropFormula) -> Literal {
        self.cnf.num_vars += 1;
        let v = self.cnf.num_vars;
        self.cnf.var_map.insert(v, format!("def {}", render_prop(f)));
        Literal::pos(v)
    }

    fn encode(&mut self, f: &PropFormula) -> Literal {
        match f {
            PropFormula::Atom(a) => {
                Literal::pos(self.atoms.iter().position(|x| x == a).expect("atom") as u32 + 1)
            }
            PropFormula::Not(c) => self.encode(c).negate(),
            PropFormula::True | PropFormula::False => {
                let x = self.fresh(f);
                self.cnf.add_clause([if matches!(f, PropFormula::True) {
                    x
                } else {
                    x.negate()
                }]);
                x
            }
            PropFormula::And(l, r)
            | PropFormula::Or(l, r)
            | PropFormula::Implies(l, r)
            | PropFormula::Iff(l, r) => {
                let a = self.encode(l);
                let b = self.encode(r);
                let x = self.fresh(f);
                let (nx, na, nb) = (x.negate(), a.negate(), b.negate());
                let clauses: Vec<Vec<Literal>> = match f {
                    PropFormula::And(..) => vec![vec![nx, a], vec![nx, b], vec![x, na, nb]],
                    PropFormula::Or(..) => vec![vec![nx, a, b], vec![x, na], vec![x, nb]],
                    PropFormula::Implies(..) => vec![vec![nx, na, b], vec![x, a], vec![x, nb]],
                    _ => vec![
                        vec![nx, na, b],
                        vec![nx, a, nb],
                        vec![x, a, b],
                        vec![x, na, nb],
                    ],
                };
                for c in clauses {
                    self.cnf.add_clause(c);
                }
                x
            }
        }
    }
}
