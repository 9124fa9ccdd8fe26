use serde::Serialize;

use super::propagate::PuzzleGrid;
use super::{Clue, PuzzleError, PuzzleSpec, Slot, Solution};
use crate::sat::{dpll, CnfFormula, Literal};

/// Variable for "position `pos` holds value `val` of category `cat`":
/// `pos·M·N + cat·N + val + 1` with `M` categories of `N` values.
pub fn var_id(spec: &PuzzleSpec, pos: usize, cat: usize, val: usize) -> u32 {
    let n = spec.positions;
    let m = spec.categories.len();
    (pos * m * n + cat * n + val + 1) as u32
}

fn x(spec: &PuzzleSpec, pos: usize, s: Slot) -> Literal {
    Literal::pos(var_id(spec, pos, s.cat, s.val))
}

/// CNF over the `N·M·N` cell variables: exactly one value per cell and one
/// position per value (one covering clause plus pairwise exclusions each),
/// then the clues.
pub fn encode_puzzle(spec: &PuzzleSpec) -> Result<CnfFormula, PuzzleError> {
    spec.validate()?;
    let n = spec.positions;
    let m = spec.categories.len();
    let mut cnf = CnfFormula::new((n * m * n) as u32);
    for pos in 0..n {
        for (cat, c) in spec.categories.iter().enumerate() {
            for (val, v) in c.values.iter().enumerate() {
                cnf.var_map.insert(var_id(spec, pos, cat, val), format!("x({pos},{},{v})", c.name));
            }
        }
    }
    let exactly_one = |cnf: &mut CnfFormula, lits: Vec<Literal>| {
        cnf.clauses.push(lits.clone());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                cnf.clauses.push(vec![lits[i].negate(), lits[j].negate()]);
            }
        }
    };
    for pos in 0..n {
        for cat in 0..m {
            let lits = (0..n).map(|val| Literal::pos(var_id(spec, pos, cat, val))).collect();
            exactly_one(&mut cnf, lits);
        }
    }
    for cat in 0..m {
        for val in 0..n {
            let lits = (0..n).map(|pos| Literal::pos(var_id(spec, pos, cat, val))).collect();
            exactly_one(&mut cnf, lits);
        }
    }
    for clue in &spec.clues {
        encode_clue(spec, clue, &mut cnf)?;
    }
    Ok(cnf)
}

fn encode_clue(spec: &PuzzleSpec, clue: &Clue, cnf: &mut CnfFormula) -> Result<(), PuzzleError> {
    let n = spec.positions;
    match clue {
        Clue::PositionIs { a, index } => {
            let a = spec.slot(a)?;
            cnf.add_clause([x(spec, *index, a)]);
        }
        Clue::Same { a, b } => {
            let (a, b) = (spec.slot(a)?, spec.slot(b)?);
            for p in 0..n {
                cnf.add_clause([x(spec, p, a).negate(), x(spec, p, b)]);
                cnf.add_clause([x(spec, p, a), x(spec, p, b).negate()]);
            }
        }
        Clue::ImmediatelyLeftOf { a, b } => {
            let (a, b) = (spec.slot(a)?, spec.slot(b)?);
            for p in 0..n - 1 {
                cnf.add_clause([x(spec, p, a).negate(), x(spec, p + 1, b)]);
            }
            cnf.add_clause([x(spec, n - 1, a).negate()]);
        }
        Clue::NextTo { a, b } => {
            let (a, b) = (spec.slot(a)?, spec.slot(b)?);
            for p in 0..n {
                let mut clause = vec![x(spec, p, a).negate()];
                if p > 0 {
                    clause.push(x(spec, p - 1, b));
                }
                if p + 1 < n {
                    clause.push(x(spec, p + 1, b));
                }
                cnf.add_clause(clause);
            }
        }
        Clue::LeftOf { a, b } => {
            let (a, b) = (spec.slot(a)?, spec.slot(b)?);
            for p in 0..n {
                for q in 0..=p {
                    cnf.add_clause([x(spec, p, a).negate(), x(spec, q, b).negate()]);
                }
            }
        }
    }
    Ok(())
}

fn decode(spec: &PuzzleSpec, model: &dyn Fn(u32) -> bool) -> Solution {
    let n = spec.positions;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|pos| {
            (0..spec.categories.len())
                .map(|cat| {
                    (0..n)
                        .find(|&val| model(var_id(spec, pos, cat, val)))
                        .expect("exactly-one constraints hold in every model")
                })
                .collect()
        })
        .collect();
    Solution::from_indices(spec, &rows)
}

fn solve_cnf(spec: &PuzzleSpec, cnf: &CnfFormula) -> Option<Solution> {
    let r = dpll(cnf);
    r.is_sat().then(|| decode(spec, &|v| r.value(v)))
}

/// DPLL on the encoding; `None` when the clues are inconsistent.
pub fn solve_puzzle(spec: &PuzzleSpec) -> Result<Option<Solution>, PuzzleError> {
    let cnf = encode_puzzle(spec)?;
    Ok(solve_cnf(spec, &cnf))
}

/// Solves with the candidates a grid has already eliminated as extra unit clauses.
pub fn solve_from_grid(spec: &PuzzleSpec, grid: &PuzzleGrid) -> Result<Option<Solution>, PuzzleError> {
    let mut cnf = encode_puzzle(spec)?;
    grid.check_dimensions(spec)?;
    for pos in 0..spec.positions {
        for cat in 0..spec.categories.len() {
            for val in 0..spec.positions {
                if !grid.has(pos, cat, val) {
                    cnf.add_clause([Literal::neg(var_id(spec, pos, cat, val))]);
                }
            }
        }
    }
    Ok(solve_cnf(spec, &cnf))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Uniqueness {
    Unique { solution: Solution },
    Multiple { solution: Solution, second: Solution },
    Unsatisfiable,
}

/// Solves, then re-solves with a clause blocking the first solution's cells.
pub fn check_uniqueness(spec: &PuzzleSpec) -> Result<Uniqueness, PuzzleError> {
    let mut cnf = encode_puzzle(spec)?;
    let Some(first) = solve_cnf(spec, &cnf) else {
        return Ok(Uniqueness::Unsatisfiable);
    };
    let mut blocking = Vec::new();
    for (pos, row) in first.rows.iter().enumerate() {
        for (cat, value) in row.iter().enumerate() {
            let val = spec.categories[cat].values.iter().position(|v| v == value).expect("decoded value");
            blocking.push(Literal::neg(var_id(spec, pos, cat, val)));
        }
    }
    cnf.add_clause(blocking);
    Ok(match solve_cnf(spec, &cnf) {
        None => Uniqueness::Unique { solution: first },
        Some(second) => Uniqueness::Multiple {
            solution: first,
            second,
        },
    })
}
