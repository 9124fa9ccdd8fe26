//! Equivalence rewriting: a fixed catalog of schema rules, position-addressed
//! application, step validation and automatic derivations that meet at a
//! canonical conjunctive normal form.
//!
//! Positions are paths of child indices from the root: `0` is the left (or
//! only) operand or a quantifier body, `1` the right operand. Matching is
//! purely syntactic; commutativity and associativity are explicit steps.

mod apply;
mod canon;
mod catalog;
mod derive;
mod pattern;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use apply::{apply_rule, apply_rule_with, step_holds};
pub use catalog::{find_rule, rule_catalog, RewriteRule};
pub use derive::{derive_equiv, Derivation, DeriveError, RewriteStep};
pub use pattern::{Bindings, Pattern};
pub use validate::{diff_path, validate_step, Rejection, StepClaim, StepVerdict, SEMANTIC_RULE};

/// Which way a rule is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "ltr")]
    LeftToRight,
    #[serde(rename = "rtl")]
    RightToLeft,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "ltr",
            Direction::RightToLeft => "rtl",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ltr" | "l2r" | "lr" => Ok(Direction::LeftToRight),
            "rtl" | "r2l" | "rl" => Ok(Direction::RightToLeft),
            _ => Err(format!("unknown direction {s:?} (expected ltr or rtl)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("path {0:?} does not address a subformula")]
    PathInvalid(Vec<usize>),
    #[error("rule {rule} does not match at path {path:?}")]
    PatternMismatch { rule: String, path: Vec<usize> },
    #[error("rule {rule} leaves metavariable {meta} undetermined in this direction")]
    Underdetermined { rule: String, meta: String },
    #[error("result leaves the formula's logic")]
    LogicMismatch,
}
