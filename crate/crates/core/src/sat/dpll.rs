use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CnfFormula, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SatStats {
    pub decisions: u64,
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatResult {
    pub status: SatStatus,
    /// Value of every variable `1..=num_vars` when satisfiable; empty otherwise.
    pub model: BTreeMap<u32, bool>,
    pub stats: SatStats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }

    pub fn value(&self, var: u32) -> bool {
        self.model.get(&var).copied().unwrap_or(false)
    }
}

/// Complete, deterministic DPLL: unit propagation to fixpoint, pure literals
/// fixed once at the root, then branching on the lowest unassigned variable of
/// an open clause, false before true. Unconstrained variables report false.
pub fn dpll(cnf: &CnfFormula) -> SatResult {
    let mut s = Solver::new(cnf);
    let sat = s.solve();
    let model = if sat {
        (1..=cnf.num_vars)
            .map(|v| (v, s.assign[v as usize] == Value::True))
            .collect()
    } else {
        BTreeMap::new()
    };
    SatResult {
        status: if sat { SatStatus::Sat } else { SatStatus::Unsat },
        model,
        stats: s.stats,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    Unset,
    True,
    False,
}

struct Solver<'a> {
    clauses: &'a [Vec<Literal>],
    assign: Vec<Value>,
    trail: Vec<u32>,
    /// Clauses mentioning each variable.
    occurs: Vec<Vec<usize>>,
    stats: SatStats,
}

impl<'a> Solver<'a> {
    fn new(cnf: &'a CnfFormula) -> Self {
        let n = cnf.num_vars as usize;
        let mut occurs = vec![Vec::new(); n + 1];
        for (i, c) in cnf.clauses.iter().enumerate() {
            for l in c {
                if occurs[l.var as usize].last() != Some(&i) {
                    occurs[l.var as usize].push(i);
                }
            }
        }
        Solver {
            clauses: &cnf.clauses,
            assign: vec![Value::Unset; n + 1],
            trail: Vec::new(),
            occurs,
            stats: SatStats::default(),
        }
    }

    fn lit_value(&self, l: Literal) -> Value {
        match (self.assign[l.var as usize], l.negated) {
            (Value::Unset, _) => Value::Unset,
            (Value::True, false) | (Value::False, true) => Value::True,
            _ => Value::False,
        }
    }

    fn set(&mut self, l: Literal) {
        self.assign[l.var as usize] = if l.negated { Value::False } else { Value::True };
        self.trail.push(l.var);
    }

    fn undo_to(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.assign[v as usize] = Value::Unset;
        }
    }

    fn satisfied(&self, c: &[Literal]) -> bool {
        c.iter().any(|&l| self.lit_value(l) == Value::True)
    }

    /// Propagates unit clauses until none remain. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        let mut queue: Vec<usize> = (0..self.clauses.len()).collect();
        while let Some(ci) = queue.pop() {
            let clause = &self.clauses[ci];
            let mut unassigned = None;
            let mut count = 0;
            let mut sat = false;
            for &l in clause {
                match self.lit_value(l) {
                    Value::True => {
                        sat = true;
                        break;
                    }
                    Value::Unset => {
                        count += 1;
                        unassigned = Some(l);
                    }
                    Value::False => {}
                }
            }
            if sat {
                continue;
            }
            match (count, unassigned) {
                (0, _) => return false,
                (1, Some(l)) => {
                    self.set(l);
                    self.stats.propagations += 1;
                    queue.extend(self.occurs[l.var as usize].iter().copied());
                }
                _ => {}
            }
        }
        true
    }

    /// Fixes every variable that occurs with one polarity only among open clauses.
    fn eliminate_pure(&mut self) -> bool {
        let n = self.assign.len();
        let mut pos = vec![false; n];
        let mut neg = vec![false; n];
        for c in self.clauses {
            if self.satisfied(c) {
                continue;
            }
            for &l in c {
                if self.assign[l.var as usize] == Value::Unset {
                    if l.negated {
                        neg[l.var as usize] = true;
                    } else {
                        pos[l.var as usize] = true;
                    }
                }
            }
        }
        let mut changed = false;
        for v in 1..n {
            if pos[v] != neg[v] {
                self.set(Literal {
                    var: v as u32,
                    negated: neg[v],
                });
                changed = true;
            }
        }
        changed
    }

    fn branch_var(&self) -> Option<u32> {
        self.clauses
            .iter()
            .filter(|c| !self.satisfied(c))
            .flat_map(|c| c.iter())
            .filter(|l| self.assign[l.var as usize] == Value::Unset)
            .map(|l| l.var)
            .min()
    }

    fn solve(&mut self) -> bool {
        if !self.propagate() {
            return false;
        }
        while self.eliminate_pure() {
            if !self.propagate() {
                return false;
            }
        }
        self.search()
    }

    fn search(&mut self) -> bool {
        let Some(var) = self.branch_var() else {
            return true;
        };
        for negated in [true, false] {
            self.stats.decisions += 1;
            let mark = self.trail.len();
            self.set(Literal { var, negated });
            if self.propagate() && self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: clauses
                .iter()
                .map(|c| c.iter().map(|&i| Literal::from_int(i).unwrap()).collect())
                .collect(),
            var_map: BTreeMap::new(),
        }
    }

    #[test]
    fn unit_conflict() {
        let r = dpll(&cnf(2, &[&[1, 2], &[-1], &[-2]]));
        assert_eq!(r.status, SatStatus::Unsat);
        assert!(r.model.is_empty());
    }

    #[test]
    fn unit_propagation_finds_b() {
        let r = dpll(&cnf(2, &[&[1, 2], &[-1]]));
        assert_eq!(r.status, SatStatus::Sat);
        assert!(r.value(2));
        assert!(!r.value(1));
        assert_eq!(r.stats.decisions, 0);
    }

    #[test]
    fn trivial_cases() {
        assert!(dpll(&cnf(3, &[])).is_sat());
        assert_eq!(dpll(&cnf(3, &[])).model.len(), 3);
        assert_eq!(dpll(&cnf(1, &[&[]])).status, SatStatus::Unsat);
    }

    #[test]
    fn branches_false_first() {
        // no units, no pure literals: x1 is tried false, forcing x2
        let r = dpll(&cnf(2, &[&[1, 2], &[-1, -2]]));
        assert!(r.is_sat());
        assert!(!r.value(1));
        assert!(r.value(2));
        assert_eq!(r.stats.decisions, 1);
    }

    #[test]
    fn backtracks() {
        // x1 = false leads to conflict
        let r = dpll(&cnf(3, &[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3, 2], &[-2, 3, 1]]));
        assert!(r.is_sat());
        let model: Vec<bool> = std::iter::once(false).chain(r.model.values().copied()).collect();
        assert!(cnf(3, &[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3, 2], &[-2, 3, 1]]).satisfied_by(&model));
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,j): pigeon i in hole j, var = 2*i + j + 1
        let v = |i: i64, j: i64| 2 * i + j + 1;
        let mut clauses: Vec<Vec<i64>> = (0..3).map(|i| vec![v(i, 0), v(i, 1)]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        assert_eq!(dpll(&cnf(6, &refs)).status, SatStatus::Unsat);
    }
}
