use std::collections::BTreeMap;

use crate::formula::{parse_fol, Binder, FolFormula};

/// Formula schema: like a formula, with metavariables standing for whole
/// subformulas and binder metavariables standing for a quantified variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Meta(String),
    True,
    False,
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Implies(Box<Pattern>, Box<Pattern>),
    Iff(Box<Pattern>, Box<Pattern>),
    Forall(String, Box<Pattern>),
    Exists(String, Box<Pattern>),
}

/// Metavariable assignment produced by matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    pub formulas: BTreeMap<String, FolFormula>,
    pub binders: BTreeMap<String, Binder>,
}

impl Pattern {
    /// Reads a schema written in formula syntax: nullary predicates become
    /// metavariables, quantified variables become binder metavariables.
    pub fn parse(schema: &str) -> Pattern {
        let f = parse_fol(schema).unwrap_or_else(|e| panic!("bad schema {schema:?}: {e}"));
        Pattern::from_formula(&f)
    }

    fn from_formula(f: &FolFormula) -> Pattern {
        let b = |g: &FolFormula| Box::new(Pattern::from_formula(g));
        match f {
            FolFormula::Pred(name, args) => {
                assert!(args.is_empty(), "schema metavariables take no arguments");
                Pattern::Meta(name.clone())
            }
            FolFormula::True => Pattern::True,
            FolFormula::False => Pattern::False,
            FolFormula::Not(c) => Pattern::Not(b(c)),
            FolFormula::And(l, r) => Pattern::And(b(l), b(r)),
            FolFormula::Or(l, r) => Pattern::Or(b(l), b(r)),
            FolFormula::Implies(l, r) => Pattern::Implies(b(l), b(r)),
            FolFormula::Iff(l, r) => Pattern::Iff(b(l), b(r)),
            FolFormula::Forall(v, body) => Pattern::Forall(v.var.clone(), b(body)),
            FolFormula::Exists(v, body) => Pattern::Exists(v.var.clone(), b(body)),
        }
    }

    /// Matches `f`, extending `bind`. Repeated metavariables must match equal subformulas.
    pub fn matches(&self, f: &FolFormula, bind: &mut Bindings) -> bool {
        match (self, f) {
            (Pattern::Meta(m), _) => match bind.formulas.get(m) {
                Some(existing) => existing == f,
                None => {
                    bind.formulas.insert(m.clone(), f.clone());
                    true
                }
            },
            (Pattern::True, FolFormula::True) | (Pattern::False, FolFormula::False) => true,
            (Pattern::Not(p), FolFormula::Not(g)) => p.matches(g, bind),
            (Pattern::And(pl, pr), FolFormula::And(l, r))
            | (Pattern::Or(pl, pr), FolFormula::Or(l, r))
            | (Pattern::Implies(pl, pr), FolFormula::Implies(l, r))
            | (Pattern::Iff(pl, pr), FolFormula::Iff(l, r)) => {
                pl.matches(l, bind) && pr.matches(r, bind)
            }
            (Pattern::Forall(v, p), FolFormula::Forall(b, g))
            | (Pattern::Exists(v, p), FolFormula::Exists(b, g)) => {
                let ok = match bind.binders.get(v) {
                    Some(existing) => existing == b,
                    None => {
                        bind.binders.insert(v.clone(), b.clone());
                        true
                    }
                };
                ok && p.matches(g, bind)
            }
            _ => false,
        }
    }

    /// Builds the formula for this schema, or names the first unbound metavariable.
    pub fn instantiate(&self, bind: &Bindings) -> Result<FolFormula, String> {
        let i = |p: &Pattern| p.instantiate(bind);
        Ok(match self {
            Pattern::Meta(m) => bind.formulas.get(m).cloned().ok_or_else(|| m.clone())?,
            Pattern::True => FolFormula::True,
            Pattern::False => FolFormula::False,
            Pattern::Not(p) => FolFormula::neg(i(p)?),
            Pattern::And(l, r) => FolFormula::and(i(l)?, i(r)?),
            Pattern::Or(l, r) => FolFormula::or(i(l)?, i(r)?),
            Pattern::Implies(l, r) => FolFormula::implies(i(l)?, i(r)?),
            Pattern::Iff(l, r) => FolFormula::iff(i(l)?, i(r)?),
            Pattern::Forall(v, p) | Pattern::Exists(v, p) => {
                let b = bind.binders.get(v).cloned().ok_or_else(|| v.clone())?;
                let body = i(p)?;
                if matches!(self, Pattern::Forall(..)) {
                    FolFormula::forall(b, body)
                } else {
                    FolFormula::exists(b, body)
                }
            }
        })
    }

    /// Formula metavariables, in first-occurrence order.
    pub fn metas(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut Vec<String>) {
        match self {
            Pattern::Meta(m) => {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            Pattern::True | Pattern::False => {}
            Pattern::Not(p) | Pattern::Forall(_, p) | Pattern::Exists(_, p) => p.collect_metas(out),
            Pattern::And(l, r) | Pattern::Or(l, r) | Pattern::Implies(l, r) | Pattern::Iff(l, r) => {
                l.collect_metas(out);
                r.collect_metas(out);
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Pattern::Forall(..) | Pattern::Exists(..) => true,
            Pattern::Meta(_) | Pattern::True | Pattern::False => false,
            Pattern::Not(p) => p.has_quantifier(),
            Pattern::And(l, r) | Pattern::Or(l, r) | Pattern::Implies(l, r) | Pattern::Iff(l, r) => {
                l.has_quantifier() || r.has_quantifier()
            }
        }
    }
}
