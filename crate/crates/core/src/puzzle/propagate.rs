use serde::{Deserialize, Serialize};

use super::{Clue, PuzzleError, PuzzleSpec, Slot, Solution};

/// Candidate values per (position, category), as bit sets over value indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuzzleGrid {
    cells: Vec<Vec<u64>>,
}

impl PuzzleGrid {
    /// Every value possible everywhere.
    pub fn full(spec: &PuzzleSpec) -> Self {
        let all = if spec.positions >= 64 { u64::MAX } else { (1u64 << spec.positions) - 1 };
        PuzzleGrid {
            cells: vec![vec![all; spec.categories.len()]; spec.positions],
        }
    }

    pub fn has(&self, pos: usize, cat: usize, val: usize) -> bool {
        self.cells[pos][cat] >> val & 1 == 1
    }

    pub fn candidates(&self, pos: usize, cat: usize) -> Vec<usize> {
        (0..64).filter(|&v| self.has(pos, cat, v)).collect()
    }

    fn single(&self, pos: usize, cat: usize) -> Option<usize> {
        let c = self.cells[pos][cat];
        (c.count_ones() == 1).then(|| c.trailing_zeros() as usize)
    }

    pub fn is_solved(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.count_ones() == 1)
    }

    /// The grid as a solution, once every cell is a singleton.
    pub fn solution(&self, spec: &PuzzleSpec) -> Option<Solution> {
        let rows: Option<Vec<Vec<usize>>> = (0..spec.positions)
            .map(|p| (0..spec.categories.len()).map(|c| self.single(p, c)).collect())
            .collect();
        rows.map(|r| Solution::from_indices(spec, &r))
    }

    pub(crate) fn check_dimensions(&self, spec: &PuzzleSpec) -> Result<(), PuzzleError> {
        let limit = if spec.positions >= 64 { u64::MAX } else { (1u64 << spec.positions) - 1 };
        let ok = self.cells.len() == spec.positions
            && self
                .cells
                .iter()
                .all(|row| row.len() == spec.categories.len() && row.iter().all(|&c| c & !limit == 0));
        if ok {
            Ok(())
        } else {
            Err(PuzzleError::InvalidSpec("grid does not fit the puzzle's dimensions".into()))
        }
    }

    /// Candidate names, indexed `[position][category]`.
    pub fn to_names(&self, spec: &PuzzleSpec) -> Vec<Vec<Vec<String>>> {
        (0..spec.positions)
            .map(|p| {
                (0..spec.categories.len())
                    .map(|c| {
                        self.candidates(p, c)
                            .into_iter()
                            .map(|v| spec.value_name(c, v).to_string())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_names(spec: &PuzzleSpec, names: &[Vec<Vec<String>>]) -> Result<Self, PuzzleError> {
        let bad = |m: String| PuzzleError::InvalidSpec(m);
        if names.len() != spec.positions {
            return Err(bad(format!("grid has {} positions, expected {}", names.len(), spec.positions)));
        }
        let mut cells = Vec::with_capacity(spec.positions);
        for (p, row) in names.iter().enumerate() {
            if row.len() != spec.categories.len() {
                return Err(bad(format!("grid position {p} has {} categories", row.len())));
            }
            let mut out = Vec::with_capacity(row.len());
            for (c, values) in row.iter().enumerate() {
                let cat = &spec.categories[c];
                let mut bits = 0u64;
                for v in values {
                    let i = cat
                        .values
                        .iter()
                        .position(|x| x == v)
                        .ok_or_else(|| bad(format!("unknown value {v} in category {}", cat.name)))?;
                    bits |= 1 << i;
                }
                out.push(bits);
            }
            cells.push(out);
        }
        Ok(PuzzleGrid { cells })
    }

    fn check(&self, spec: &PuzzleSpec) -> Result<(), PuzzleError> {
        for (p, row) in self.cells.iter().enumerate() {
            for (c, &bits) in row.iter().enumerate() {
                if bits == 0 {
                    return Err(PuzzleError::ContradictionDetected {
                        position: p,
                        category: spec.categories[c].name.clone(),
                    });
                }
            }
        }
        for (c, cat) in spec.categories.iter().enumerate() {
            for (v, value) in cat.values.iter().enumerate() {
                if !(0..spec.positions).any(|p| self.has(p, c, v)) {
                    return Err(PuzzleError::ValueUnplaceable {
                        category: cat.name.clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeductionRule {
    /// A clue checked against cells that are already decided.
    Clue,
    /// A placed value cannot be anywhere else.
    Singleton,
    /// A value with one possible position is placed there.
    Unique,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub rule: DeductionRule,
    /// Index into the spec's clues, for clue deductions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clue: Option<usize>,
    pub position: usize,
    pub category: String,
    pub eliminated: Vec<String>,
    pub justification: String,
}

pub type PropagationTrace = Vec<TraceEntry>;

struct Round<'a> {
    spec: &'a PuzzleSpec,
    grid: PuzzleGrid,
    trace: PropagationTrace,
}

impl Round<'_> {
    fn eliminate(&mut self, pos: usize, cat: usize, mask: u64, rule: DeductionRule, clue: Option<usize>, why: String) {
        let removed = self.grid.cells[pos][cat] & mask;
        if removed == 0 {
            return;
        }
        self.grid.cells[pos][cat] &= !removed;
        self.trace.push(TraceEntry {
            rule,
            clue,
            position: pos,
            category: self.spec.categories[cat].name.clone(),
            eliminated: (0..64)
                .filter(|v| removed >> v & 1 == 1)
                .map(|v| self.spec.value_name(cat, v).to_string())
                .collect(),
            justification: why,
        });
    }

    /// Position where the value is decided, if any.
    fn placed(&self, s: Slot) -> Option<usize> {
        (0..self.spec.positions).find(|&p| self.grid.single(p, s.cat) == Some(s.val))
    }

    /// Decided cells rule the value out of `pos`.
    fn excluded(&self, s: Slot, pos: usize) -> bool {
        match self.grid.single(pos, s.cat) {
            Some(v) if v != s.val => true,
            _ => matches!(self.placed(s), Some(p) if p != pos),
        }
    }

    fn clue_filter(&mut self, index: usize, clue: &Clue) -> Result<(), PuzzleError> {
        let n = self.spec.positions;
        if let Clue::PositionIs { a, index: at } = clue {
            let s = self.spec.slot(a)?;
            let why = format!("clue {index} ({clue}) fixes position {at}");
            self.eliminate(*at, s.cat, !(1u64 << s.val), DeductionRule::Clue, Some(index), why);
            return Ok(());
        }
        let (a, b) = match clue {
            Clue::Same { a, b } | Clue::ImmediatelyLeftOf { a, b } | Clue::NextTo { a, b } | Clue::LeftOf { a, b } => {
                (self.spec.slot(a)?, self.spec.slot(b)?)
            }
            Clue::PositionIs { .. } => unreachable!(),
        };
        let rel = |pa: usize, pb: usize| clue.relates(pa, pb) == Some(true);
        for q in 0..n {
            if self.grid.has(q, b.cat, b.val) && (0..n).filter(|&p| rel(p, q)).all(|p| self.excluded(a, p)) {
                let why = format!(
                    "clue {index} ({clue}) leaves {} no place if {} were at position {q}",
                    self.spec.value_name(a.cat, a.val),
                    self.spec.value_name(b.cat, b.val)
                );
                self.eliminate(q, b.cat, 1 << b.val, DeductionRule::Clue, Some(index), why);
            }
        }
        for p in 0..n {
            if self.grid.has(p, a.cat, a.val) && (0..n).filter(|&q| rel(p, q)).all(|q| self.excluded(b, q)) {
                let why = format!(
                    "clue {index} ({clue}) leaves {} no place if {} were at position {p}",
                    self.spec.value_name(b.cat, b.val),
                    self.spec.value_name(a.cat, a.val)
                );
                self.eliminate(p, a.cat, 1 << a.val, DeductionRule::Clue, Some(index), why);
            }
        }
        Ok(())
    }

    fn singleton_exclusion(&mut self) {
        let n = self.spec.positions;
        for p in 0..n {
            for c in 0..self.spec.categories.len() {
                let Some(v) = self.grid.single(p, c) else { continue };
                for q in (0..n).filter(|&q| q != p) {
                    let why = format!("{} is already at position {p}", self.spec.value_name(c, v));
                    self.eliminate(q, c, 1 << v, DeductionRule::Singleton, None, why);
                }
            }
        }
    }

    fn unique_placement(&mut self) {
        let n = self.spec.positions;
        for c in 0..self.spec.categories.len() {
            for v in 0..n {
                let mut at = (0..n).filter(|&p| self.grid.has(p, c, v));
                if let (Some(p), None) = (at.next(), at.next()) {
                    let why = format!("{} can only be at position {p}", self.spec.value_name(c, v));
                    self.eliminate(p, c, !(1u64 << v), DeductionRule::Unique, None, why);
                }
            }
        }
    }
}

/// One round of the three deduction rules, in order: clue filtering against
/// decided cells, exclusion of placed values elsewhere, and placement of
/// values with a single possible position.
pub fn propagate_step(grid: &PuzzleGrid, spec: &PuzzleSpec) -> Result<(PuzzleGrid, PropagationTrace), PuzzleError> {
    spec.validate()?;
    grid.check_dimensions(spec)?;
    let mut round = Round {
        spec,
        grid: grid.clone(),
        trace: Vec::new(),
    };
    for (i, clue) in spec.clues.iter().enumerate() {
        round.clue_filter(i, clue)?;
    }
    round.grid.check(spec)?;
    round.singleton_exclusion();
    round.grid.check(spec)?;
    round.unique_placement();
    round.grid.check(spec)?;
    Ok((round.grid, round.trace))
}

/// Repeats [`propagate_step`] until nothing changes. Returns the final grid,
/// the concatenated trace and the number of rounds that changed something.
pub fn propagate_fixpoint(
    grid: &PuzzleGrid,
    spec: &PuzzleSpec,
) -> Result<(PuzzleGrid, PropagationTrace, usize), PuzzleError> {
    let mut cur = grid.clone();
    let mut trace = Vec::new();
    let mut rounds = 0;
    loop {
        let (next, t) = propagate_step(&cur, spec)?;
        if t.is_empty() {
            return Ok((cur, trace, rounds));
        }
        rounds += 1;
        trace.extend(t);
        cur = next;
    }
}

/// Applies a trace's eliminations to a grid.
pub fn replay(grid: &PuzzleGrid, spec: &PuzzleSpec, trace: &[TraceEntry]) -> Result<PuzzleGrid, PuzzleError> {
    let mut g = grid.clone();
    for e in trace {
        let cat = spec
            .categories
            .iter()
            .position(|c| c.name == e.category)
            .ok_or_else(|| PuzzleError::InvalidSpec(format!("unknown category {}", e.category)))?;
        for v in &e.eliminated {
            let val = spec.categories[cat]
                .values
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| PuzzleError::InvalidSpec(format!("unknown value {v}")))?;
            let cell = g
                .cells
                .get_mut(e.position)
                .ok_or_else(|| PuzzleError::InvalidSpec(format!("position {} out of range", e.position)))?;
            cell[cat] &= !(1u64 << val);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{einstein, solve_from_grid, solve_puzzle, ValueRef};

    fn names(g: &PuzzleGrid, spec: &PuzzleSpec, pos: usize, cat: &str) -> Vec<String> {
        let c = spec.categories.iter().position(|x| x.name == cat).unwrap();
        g.to_names(spec)[pos][c].clone()
    }

    #[test]
    fn position_clue_and_singleton_exclusion() {
        let mut spec = einstein();
        spec.clues = vec![Clue::PositionIs {
            a: ValueRef::new("nationality", "Norwegian"),
            index: 0,
        }];
        let (g, trace) = propagate_step(&PuzzleGrid::full(&spec), &spec).unwrap();
        assert_eq!(names(&g, &spec, 0, "nationality"), ["Norwegian"]);
        for p in 1..5 {
            assert!(!names(&g, &spec, p, "nationality").contains(&"Norwegian".to_string()));
        }
        assert_eq!(trace[0].rule, DeductionRule::Clue);
        assert_eq!(trace[0].clue, Some(0));
        assert!(trace[1..].iter().all(|e| e.rule == DeductionRule::Singleton));
    }

    #[test]
    fn next_to_a_placed_value() {
        let mut spec = einstein();
        spec.clues = vec![
            Clue::PositionIs {
                a: ValueRef::new("nationality", "Norwegian"),
                index: 0,
            },
            Clue::NextTo {
                a: ValueRef::new("nationality", "Norwegian"),
                b: ValueRef::new("color", "blue"),
            },
        ];
        let (g, _) = propagate_step(&PuzzleGrid::full(&spec), &spec).unwrap();
        assert_eq!(names(&g, &spec, 1, "color"), ["blue"]);
    }

    #[test]
    fn immediately_left_excludes_the_edges() {
        let mut spec = einstein();
        spec.clues = vec![spec.clues[3].clone()];
        let (g, _) = propagate_step(&PuzzleGrid::full(&spec), &spec).unwrap();
        assert!(!names(&g, &spec, 4, "color").contains(&"green".to_string()));
        assert!(!names(&g, &spec, 0, "color").contains(&"white".to_string()));
    }

    #[test]
    fn fixpoint_then_solve_agrees() {
        let spec = einstein();
        let (g, trace, rounds) = propagate_fixpoint(&PuzzleGrid::full(&spec), &spec).unwrap();
        assert!(rounds > 0);
        assert_eq!(replay(&PuzzleGrid::full(&spec), &spec, &trace).unwrap(), g);
        let (again, t) = propagate_step(&g, &spec).unwrap();
        assert!(t.is_empty());
        assert_eq!(again, g);
        assert_eq!(solve_from_grid(&spec, &g).unwrap(), solve_puzzle(&spec).unwrap());
    }

    #[test]
    fn contradiction_is_reported() {
        let mut spec = einstein();
        spec.clues = vec![
            Clue::PositionIs {
                a: ValueRef::new("drink", "milk"),
                index: 0,
            },
            Clue::PositionIs {
                a: ValueRef::new("drink", "tea"),
                index: 0,
            },
        ];
        assert!(matches!(
            propagate_step(&PuzzleGrid::full(&spec), &spec),
            Err(PuzzleError::ContradictionDetected { position: 0, .. })
        ));
    }

    #[test]
    fn names_round_trip() {
        let spec = einstein();
        let (g, _, _) = propagate_fixpoint(&PuzzleGrid::full(&spec), &spec).unwrap();
        assert_eq!(PuzzleGrid::from_names(&spec, &g.to_names(&spec)).unwrap(), g);
    }
}
