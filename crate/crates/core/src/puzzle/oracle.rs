use std::ops::ControlFlow;

use itertools::Itertools;

use super::{Clue, PuzzleError, PuzzleSpec, Solution, ValueRef};

/// Largest puzzle the permutation search accepts.
pub const ORACLE_MAX_POSITIONS: usize = 6;

/// Up to two solutions by exhaustive permutation search, in lexicographic
/// order of the per-category permutations.
pub fn oracle_backtrack(spec: &PuzzleSpec) -> Result<Vec<Solution>, PuzzleError> {
    oracle_solutions(spec, 2)
}

pub fn oracle_solutions(spec: &PuzzleSpec, cap: usize) -> Result<Vec<Solution>, PuzzleError> {
    let mut out = Vec::new();
    if cap > 0 {
        oracle_for_each(spec, |s| {
            out.push(s.clone());
            if out.len() >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
    }
    Ok(out)
}

/// Visits every solution in search order until `visit` breaks.
pub fn oracle_for_each(
    spec: &PuzzleSpec,
    mut visit: impl FnMut(&Solution) -> ControlFlow<()>,
) -> Result<(), PuzzleError> {
    spec.validate()?;
    let n = spec.positions;
    if n > ORACLE_MAX_POSITIONS {
        return Err(PuzzleError::InvalidSpec(format!(
            "the search oracle handles at most {ORACLE_MAX_POSITIONS} positions"
        )));
    }
    let m = spec.categories.len();
    let locate = |r: &ValueRef| -> (usize, usize) {
        let c = spec.categories.iter().position(|c| c.name == r.0).expect("validated");
        let v = spec.categories[c].values.iter().position(|v| *v == r.1).expect("validated");
        (c, v)
    };
    // clues become checkable once their last category is placed
    let mut ready: Vec<Vec<Pending>> = vec![Vec::new(); m];
    for clue in &spec.clues {
        let refs: Vec<(usize, usize)> = clue.refs().into_iter().map(locate).collect();
        let last = refs.iter().map(|r| r.0).max().expect("clues reference a value");
        ready[last].push((clue, refs));
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut search = Search {
        spec,
        ready,
        perms,
        placed: Vec::with_capacity(m),
        visit: &mut visit,
    };
    let _ = search.go();
    Ok(())
}

/// A clue with its references as (category, value) indices.
type Pending<'a> = (&'a Clue, Vec<(usize, usize)>);

struct Search<'a, F> {
    spec: &'a PuzzleSpec,
    ready: Vec<Vec<Pending<'a>>>,
    perms: Vec<Vec<usize>>,
    /// `placed[cat][val]` is the value's position.
    placed: Vec<Vec<usize>>,
    visit: &'a mut F,
}

impl<F: FnMut(&Solution) -> ControlFlow<()>> Search<'_, F> {
    fn go(&mut self) -> ControlFlow<()> {
        let k = self.placed.len();
        if k == self.spec.categories.len() {
            let s = self.solution();
            return (self.visit)(&s);
        }
        for i in 0..self.perms.len() {
            let mut at = vec![0; self.perms[i].len()];
            for (pos, &val) in self.perms[i].iter().enumerate() {
                at[val] = pos;
            }
            self.placed.push(at);
            if self.consistent(k) {
                self.go()?;
            }
            self.placed.pop();
        }
        ControlFlow::Continue(())
    }

    fn consistent(&self, k: usize) -> bool {
        self.ready[k].iter().all(|(clue, refs)| {
            let pos = |(c, v): (usize, usize)| self.placed[c][v];
            match clue {
                Clue::PositionIs { index, .. } => pos(refs[0]) == *index,
                _ => clue.relates(pos(refs[0]), pos(refs[1])) == Some(true),
            }
        })
    }

    fn solution(&self) -> Solution {
        let n = self.spec.positions;
        let rows: Vec<Vec<String>> = (0..n)
            .map(|p| {
                self.placed
                    .iter()
                    .enumerate()
                    .map(|(c, at)| {
                        let v = at.iter().position(|&q| q == p).expect("permutation");
                        self.spec.categories[c].values[v].clone()
                    })
                    .collect()
            })
            .collect();
        Solution {
            categories: self.spec.categories.iter().map(|c| c.name.clone()).collect(),
            rows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{einstein, solve_puzzle, Category};

    fn plain(n: usize, m: usize) -> PuzzleSpec {
        PuzzleSpec {
            positions: n,
            categories: (0..m)
                .map(|c| Category {
                    name: format!("c{c}"),
                    values: (0..n).map(|v| format!("v{c}{v}")).collect(),
                })
                .collect(),
            clues: vec![],
        }
    }

    #[test]
    fn einstein_has_one_solution_matching_sat() {
        let spec = einstein();
        let all = oracle_solutions(&spec, 10).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].satisfies(&spec));
        assert_eq!(solve_puzzle(&spec).unwrap().as_ref(), Some(&all[0]));
    }

    #[test]
    fn cap_and_order() {
        let found = oracle_backtrack(&plain(5, 5)).unwrap();
        assert_eq!(found.len(), 2);
        // identity first, then the last category's next permutation
        assert_eq!(found[0].rows[0], vec!["v00", "v10", "v20", "v30", "v40"]);
        assert_eq!(found[1].rows[3], vec!["v03", "v13", "v23", "v33", "v44"]);
    }

    #[test]
    fn contradiction_gives_nothing() {
        let mut spec = plain(3, 1);
        spec.clues = vec![
            Clue::PositionIs { a: ValueRef::new("c0", "v00"), index: 0 },
            Clue::PositionIs { a: ValueRef::new("c0", "v00"), index: 1 },
        ];
        assert!(oracle_backtrack(&spec).unwrap().is_empty());
    }

    #[test]
    fn size_limit() {
        assert!(oracle_backtrack(&plain(7, 1)).is_err());
    }
}
