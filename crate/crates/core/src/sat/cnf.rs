use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A variable or its negation. Variable ids start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        debug_assert!(var >= 1);
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// DIMACS integer form.
    pub fn to_int(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn from_int(v: i64) -> Option<Self> {
        if v == 0 || v.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal {
            var: v.unsigned_abs() as u32,
            negated: v < 0,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_int())
    }
}

/// A clause set. No clauses means trivially satisfiable; an empty clause means
/// trivially unsatisfiable.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Literal>>,
    /// What each variable stands for: an atom, a definition, or a puzzle cell.
    pub var_map: BTreeMap<u32, String>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> Self {
        CnfFormula {
            num_vars,
            ..Default::default()
        }
    }

    /// Adds a clause with literals sorted and duplicates removed. Tautological
    /// clauses are dropped.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Literal>) {
        if let Some(c) = normalize_clause(lits) {
            self.clauses.push(c);
        }
    }

    /// Whether `model` (indexed by variable id, index 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| model[l.var as usize] != l.negated))
    }

    pub fn var_id(&self, label: &str) -> Option<u32> {
        self.var_map
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(id, _)| *id)
    }
}

/// Sorted, deduplicated clause; `None` for tautologies.
pub(crate) fn normalize_clause(lits: impl IntoIterator<Item = Literal>) -> Option<Vec<Literal>> {
    let mut c: Vec<Literal> = lits.into_iter().collect();
    c.sort();
    c.dedup();
    if c.windows(2).any(|w| w[0].var == w[1].var) {
        return None;
    }
    Some(c)
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |l: &Literal| {
            let base = self
                .var_map
                .get(&l.var)
                .cloned()
                .unwrap_or_else(|| format!("x{}", l.var));
            if l.negated {
                format!("!{base}")
            } else {
                base
            }
        };
        if self.clauses.is_empty() {
            return write!(f, "true");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "false".to_string()
                } else {
                    format!("({})", c.iter().map(name).collect::<Vec<_>>().join(" | "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}
