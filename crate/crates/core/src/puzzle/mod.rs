//! Positional logic puzzles (the Einstein/Zebra family): `N` ordered
//! positions, `M` categories of `N` values each, and clues relating values.
//! Puzzles are solved by CNF encoding and DPLL, cross-checked by an
//! independent permutation search, and explained by a small set of
//! human-style propagation rules.

mod encode;
mod oracle;
mod propagate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encode::{
    check_uniqueness, encode_puzzle, solve_from_grid, solve_puzzle, var_id, Uniqueness,
};
pub use oracle::{oracle_backtrack, oracle_for_each, oracle_solutions, ORACLE_MAX_POSITIONS};
pub use propagate::{
    propagate_fixpoint, propagate_step, replay, DeductionRule, PropagationTrace, PuzzleGrid, TraceEntry,
};

/// The canonical 15-clue formulation of the riddle, with a `pet` category
/// holding the unmentioned `fish`.
pub const EINSTEIN_JSON: &str = include_str!("../../fixtures/einstein.json");

pub fn einstein() -> PuzzleSpec {
    serde_json::from_str(EINSTEIN_JSON).expect("bundled fixture parses")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub values: Vec<String>,
}

/// A `(category, value)` reference, written `["color", "red"]` in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValueRef(pub String, pub String);

impl ValueRef {
    pub fn new(category: &str, value: &str) -> Self {
        ValueRef(category.to_string(), value.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Clue {
    /// Both values share a position.
    Same { a: ValueRef, b: ValueRef },
    /// The value sits at a fixed 0-based position.
    PositionIs { a: ValueRef, index: usize },
    /// `b` is at the position directly right of `a`.
    ImmediatelyLeftOf { a: ValueRef, b: ValueRef },
    NextTo { a: ValueRef, b: ValueRef },
    /// `a` is somewhere strictly left of `b`.
    LeftOf { a: ValueRef, b: ValueRef },
}

impl Clue {
    pub fn refs(&self) -> Vec<&ValueRef> {
        match self {
            Clue::PositionIs { a, .. } => vec![a],
            Clue::Same { a, b }
            | Clue::ImmediatelyLeftOf { a, b }
            | Clue::NextTo { a, b }
            | Clue::LeftOf { a, b } => vec![a, b],
        }
    }

    /// Whether positions `pa` of `a` and `pb` of `b` are compatible.
    /// `None` for the single-value clue.
    pub fn relates(&self, pa: usize, pb: usize) -> Option<bool> {
        Some(match self {
            Clue::PositionIs { .. } => return None,
            Clue::Same { .. } => pa == pb,
            Clue::ImmediatelyLeftOf { .. } => pb == pa + 1,
            Clue::NextTo { .. } => pa.abs_diff(pb) == 1,
            Clue::LeftOf { .. } => pa < pb,
        })
    }
}

impl fmt::Display for Clue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clue::Same { a, b } => write!(f, "{} goes with {}", a.1, b.1),
            Clue::PositionIs { a, index } => write!(f, "{} is at position {index}", a.1),
            Clue::ImmediatelyLeftOf { a, b } => write!(f, "{} is immediately left of {}", a.1, b.1),
            Clue::NextTo { a, b } => write!(f, "{} is next to {}", a.1, b.1),
            Clue::LeftOf { a, b } => write!(f, "{} is left of {}", a.1, b.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleSpec {
    pub positions: usize,
    pub categories: Vec<Category>,
    #[serde(default)]
    pub clues: Vec<Clue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("invalid puzzle: {0}")]
    InvalidSpec(String),
    #[error("contradiction: no value left for {category} at position {position}")]
    ContradictionDetected { position: usize, category: String },
    #[error("contradiction: {value} ({category}) has no position left")]
    ValueUnplaceable { category: String, value: String },
}

/// Index form of a value reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Slot {
    pub cat: usize,
    pub val: usize,
}

impl PuzzleSpec {
    pub fn validate(&self) -> Result<(), PuzzleError> {
        let bad = |m: String| Err(PuzzleError::InvalidSpec(m));
        if self.positions == 0 {
            return bad("at least one position is required".into());
        }
        if self.categories.is_empty() {
            return bad("at least one category is required".into());
        }
        let mut names = BTreeSet::new();
        for c in &self.categories {
            if !names.insert(&c.name) {
                return bad(format!("category {} appears twice", c.name));
            }
            if c.values.len() != self.positions {
                return bad(format!(
                    "category {} has {} values, expected {}",
                    c.name,
                    c.values.len(),
                    self.positions
                ));
            }
            if c.values.iter().collect::<BTreeSet<_>>().len() != c.values.len() {
                return bad(format!("category {} repeats a value", c.name));
            }
        }
        for (i, clue) in self.clues.iter().enumerate() {
            for r in clue.refs() {
                self.slot(r).map_err(|e| match e {
                    PuzzleError::InvalidSpec(m) => PuzzleError::InvalidSpec(format!("clue {i}: {m}")),
                    other => other,
                })?;
            }
            if let Clue::PositionIs { index, .. } = clue {
                if *index >= self.positions {
                    return bad(format!("clue {i}: position {index} is out of range"));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn slot(&self, r: &ValueRef) -> Result<Slot, PuzzleError> {
        let cat = self
            .categories
            .iter()
            .position(|c| c.name == r.0)
            .ok_or_else(|| PuzzleError::InvalidSpec(format!("unknown category {}", r.0)))?;
        let val = self.categories[cat]
            .values
            .iter()
            .position(|v| *v == r.1)
            .ok_or_else(|| PuzzleError::InvalidSpec(format!("unknown value {} in category {}", r.1, r.0)))?;
        Ok(Slot { cat, val })
    }

    pub(crate) fn value_name(&self, cat: usize, val: usize) -> &str {
        &self.categories[cat].values[val]
    }
}

/// One value per position and category. Rows follow positions, columns follow
/// the spec's category order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub categories: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Solution {
    pub(crate) fn from_indices(spec: &PuzzleSpec, rows: &[Vec<usize>]) -> Self {
        Solution {
            categories: spec.categories.iter().map(|c| c.name.clone()).collect(),
            rows: rows
                .iter()
                .map(|r| r.iter().enumerate().map(|(c, &v)| spec.value_name(c, v).to_string()).collect())
                .collect(),
        }
    }

    pub fn value(&self, position: usize, category: &str) -> Option<&str> {
        let c = self.categories.iter().position(|n| n == category)?;
        self.rows.get(position).map(|r| r[c].as_str())
    }

    pub fn position_of(&self, category: &str, value: &str) -> Option<usize> {
        let c = self.categories.iter().position(|n| n == category)?;
        self.rows.iter().position(|r| r[c] == value)
    }

    /// Whether every category is a permutation and every clue holds.
    pub fn satisfies(&self, spec: &PuzzleSpec) -> bool {
        if self.rows.len() != spec.positions {
            return false;
        }
        for cat in &spec.categories {
            let placed: BTreeSet<&str> = (0..spec.positions)
                .filter_map(|p| self.value(p, &cat.name))
                .collect();
            if placed.len() != spec.positions || !cat.values.iter().all(|v| placed.contains(v.as_str())) {
                return false;
            }
        }
        spec.clues.iter().all(|clue| {
            let pos = |r: &ValueRef| self.position_of(&r.0, &r.1);
            match clue {
                Clue::PositionIs { a, index } => pos(a) == Some(*index),
                Clue::Same { a, b }
                | Clue::ImmediatelyLeftOf { a, b }
                | Clue::NextTo { a, b }
                | Clue::LeftOf { a, b } => match (pos(a), pos(b)) {
                    (Some(x), Some(y)) => clue.relates(x, y) == Some(true),
                    _ => false,
                },
            }
        })
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widths: Vec<usize> = (0..self.categories.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| r[c].len())
                    .chain([self.categories[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(f, "#  {}", line(self.categories.iter().map(String::as_str).collect()))?;
        for (p, r) in self.rows.iter().enumerate() {
            writeln!(f, "{p}  {}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}
