//! Reference semantics: truth tables, finite first-order models, bounded
//! equivalence checking and categorical syllogisms.

mod finite;
mod model;
mod prop;
mod syllogism;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use finite::{equiv_finite, find_model, Bounds, DEFAULT_BUDGET, DEFAULT_MAX_SIZE};
pub use model::{eval_fol, FiniteModel};
pub use prop::{equiv_tt, eval_prop, truth_table, TruthTable, MAX_TABLE_ATOMS};
pub use syllogism::{check_syllogism, encode_syllogism, Mood, Statement, SyllogismVerdict};

/// Truth values for propositional atoms.
pub type Assignment = BTreeMap<String, bool>;

/// Something that tells two formulas apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Assignment(Assignment),
    Model(FiniteModel),
}

/// Outcome of an equivalence check. `bounded` marks verdicts that only cover
/// finite models up to a size limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivVerdict {
    pub equivalent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub bounded: bool,
}

impl EquivVerdict {
    pub fn equivalent() -> Self {
        EquivVerdict {
            equivalent: true,
            witness: None,
            bounded: false,
        }
    }

    pub fn differ(witness: Witness) -> Self {
        EquivVerdict {
            equivalent: false,
            witness: Some(witness),
            bounded: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("atom {0} has no truth value")]
    MissingAtom(String),
    #[error("{count} atoms exceed the limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("predicate {0} has no interpretation")]
    UnknownPredicate(String),
    #[error("sort {0} has no elements")]
    SortSizeZero(String),
    #[error("constant {constant} is outside the domain of sort {sort}")]
    ConstantOutOfRange { constant: String, sort: String },
    #[error("formula has free variables: {0}")]
    NotASentence(String),
    #[error("enumeration budget of {budget} interpretations exhausted after {enumerated}, at sort sizes {reached}")]
    BudgetExceeded {
        budget: u64,
        enumerated: u64,
        reached: String,
    },
    #[error("unknown syllogistic mood {0}")]
    UnknownMood(String),
    #[error("invalid syllogism: {0}")]
    InvalidSyllogism(String),
}
