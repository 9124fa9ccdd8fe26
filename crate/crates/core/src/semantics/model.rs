use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SemanticsError;
use crate::formula::{FolFormula, PredSig, Term};

/// A finite interpretation: a domain size per sort and an extension per predicate.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "ModelRepr", from = "ModelRepr")]
pub struct FiniteModel {
    pub sort_sizes: BTreeMap<String, usize>,
    pub tables: BTreeMap<PredSig, BTreeSet<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    sizes: BTreeMap<String, usize>,
    predicates: Vec<TableRepr>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    name: String,
    sorts: Vec<String>,
    tuples: Vec<Vec<usize>>,
}

impl From<FiniteModel> for ModelRepr {
    fn from(m: FiniteModel) -> Self {
        ModelRepr {
            sizes: m.sort_sizes,
            predicates: m
                .tables
                .into_iter()
                .map(|(sig, tuples)| TableRepr {
                    name: sig.name,
                    sorts: sig.sorts,
                    tuples: tuples.into_iter().collect(),
                })
                .collect(),
        }
    }
}

impl From<ModelRepr> for FiniteModel {
    fn from(r: ModelRepr) -> Self {
        FiniteModel {
            sort_sizes: r.sizes,
            tables: r
                .predicates
                .into_iter()
                .map(|t| {
                    (
                        PredSig {
                            name: t.name,
                            sorts: t.sorts,
                        },
                        t.tuples.into_iter().collect(),
                    )
                })
                .collect(),
        }
    }
}

impl FiniteModel {
    pub fn new(sort_sizes: impl IntoIterator<Item = (String, usize)>) -> Self {
        FiniteModel {
            sort_sizes: sort_sizes.into_iter().collect(),
            tables: BTreeMap::new(),
        }
    }

    /// Adds a predicate over the given sorts holding exactly `tuples`.
    pub fn with_table(
        mut self,
        name: &str,
        sorts: &[&str],
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Self {
        let sig = PredSig {
            name: name.to_string(),
            sorts: sorts.iter().map(|s| s.to_string()).collect(),
        };
        self.tables.insert(sig, tuples.into_iter().collect());
        self
    }

    fn size_of(&self, sort: &str) -> Result<usize, SemanticsError> {
        match self.sort_sizes.get(sort) {
            Some(&n) if n > 0 => Ok(n),
            _ => Err(SemanticsError::SortSizeZero(sort.to_string())),
        }
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self
            .sort_sizes
            .iter()
            .map(|(s, n)| format!("|{s}|={n}"))
            .collect();
        write!(f, "{}", sizes.join(", "))?;
        for (sig, tuples) in &self.tables {
            let items: Vec<String> = tuples
                .iter()
                .map(|t| {
                    if t.len() == 1 {
                        t[0].to_string()
                    } else {
                        format!(
                            "({})",
                            t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
                        )
                    }
                })
                .collect();
            write!(f, "; {}={{{}}}", sig.name, items.join(","))?;
        }
        Ok(())
    }
}

/// Tarskian evaluation of `f` in `m`; quantifiers range over `0..size(sort)`.
pub fn eval_fol(
    f: &FolFormula,
    m: &FiniteModel,
    env: &BTreeMap<String, usize>,
) -> Result<bool, SemanticsError> {
    let sigs = f.signatures();
    let mut scope: Vec<(String, usize)> = env.iter().map(|(k, v)| (k.clone(), *v)).collect();
    eval(f, m, &sigs, &mut scope)
}

fn eval(
    f: &FolFormula,
    m: &FiniteModel,
    sigs: &BTreeMap<String, PredSig>,
    scope: &mut Vec<(String, usize)>,
) -> Result<bool, SemanticsError> {
    Ok(match f {
        FolFormula::Pred(name, args) => {
            let sig = &sigs[name];
            let table = m
                .tables
                .get(sig)
                .ok_or_else(|| SemanticsError::UnknownPredicate(name.clone()))?;
            let mut tuple = Vec::with_capacity(args.len());
            for (arg, sort) in args.iter().zip(&sig.sorts) {
                tuple.push(match arg {
                    Term::Var(v) => scope
                        .iter()
                        .rev()
                        .find(|(n, _)| n == v)
                        .map(|(_, i)| *i)
                        .ok_or_else(|| SemanticsError::UnboundVariable(v.clone()))?,
                    Term::Const(c) => {
                        let size = m.size_of(sort)?;
                        match c.parse::<usize>() {
                            Ok(i) if i < size => i,
                            _ => {
                                return Err(SemanticsError::ConstantOutOfRange {
                                    constant: c.clone(),
                                    sort: sort.clone(),
                                })
                            }
                        }
                    }
                });
            }
            table.contains(&tuple)
        }
        FolFormula::True => true,
        FolFormula::False => false,
        FolFormula::Not(c) => !eval(c, m, sigs, scope)?,
        FolFormula::And(l, r) => eval(l, m, sigs, scope)? && eval(r, m, sigs, scope)?,
        FolFormula::Or(l, r) => eval(l, m, sigs, scope)? || eval(r, m, sigs, scope)?,
        FolFormula::Implies(l, r) => !eval(l, m, sigs, scope)? || eval(r, m, sigs, scope)?,
        FolFormula::Iff(l, r) => eval(l, m, sigs, scope)? == eval(r, m, sigs, scope)?,
        FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
            let universal = matches!(f, FolFormula::Forall(..));
            let size = m.size_of(&b.sort)?;
            let mut result = universal;
            for i in 0..size {
                scope.push((b.var.clone(), i));
                let v = eval(body, m, sigs, scope);
                scope.pop();
                if v? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_fol, DEFAULT_SORT};

    fn model(size: usize) -> FiniteModel {
        FiniteModel::new([(DEFAULT_SORT.to_string(), size)])
    }

    #[test]
    fn existential_witness_in_singleton_domain() {
        let f = parse_fol("exists t. (S(t) & !T(t) & (C(t) | B(t)))").unwrap();
        let m = model(1)
            .with_table("S", &["U"], [vec![0]])
            .with_table("T", &["U"], [])
            .with_table("C", &["U"], [vec![0]])
            .with_table("B", &["U"], []);
        assert!(eval_fol(&f, &m, &BTreeMap::new()).unwrap());
        let g = parse_fol("!forall t. ((C(t) | B(t)) & S(t) -> T(t))").unwrap();
        assert!(eval_fol(&g, &m, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn universal_fails_on_partial_table() {
        let f = parse_fol("forall t. P(t)").unwrap();
        let m = model(2).with_table("P", &["U"], [vec![0]]);
        assert!(!eval_fol(&f, &m, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn errors() {
        let m = model(2).with_table("P", &["U"], [vec![0]]);
        let open = parse_fol("P(x)").unwrap();
        assert_eq!(
            eval_fol(&open, &m, &BTreeMap::new()),
            Err(SemanticsError::UnboundVariable("x".into()))
        );
        assert!(eval_fol(&open, &m, &BTreeMap::from([("x".to_string(), 0)])).unwrap());
        let unknown = parse_fol("exists x. Q(x)").unwrap();
        assert_eq!(
            eval_fol(&unknown, &m, &BTreeMap::new()),
            Err(SemanticsError::UnknownPredicate("Q".into()))
        );
        let sorted = parse_fol("exists x:S. P(x)").unwrap();
        assert_eq!(
            eval_fol(&sorted, &m, &BTreeMap::new()),
            Err(SemanticsError::SortSizeZero("S".into()))
        );
        let constant = parse_fol("P(5)").unwrap();
        assert!(matches!(
            eval_fol(&constant, &m, &BTreeMap::new()),
            Err(SemanticsError::ConstantOutOfRange { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let m = model(2).with_table("P", &["U"], [vec![0]]);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"sizes":{"U":2},"predicates":[{"name":"P","sorts":["U"],"tuples":[[0]]}]}"#
        );
        let back: FiniteModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.to_string(), "|U|=2; P={0}");
    }
}
