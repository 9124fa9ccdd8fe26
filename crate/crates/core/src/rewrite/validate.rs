use serde::ser::{Serialize, SerializeMap, Serializer};

use super::apply::{context_agrees, step_holds};
use super::catalog::{find_rule, rule_catalog};
use super::pattern::Bindings;
use super::Direction;
use crate::formula::{FolFormula, Formula};
use crate::semantics::{equiv_finite, equiv_tt, Bounds, Witness};

/// Rule id reported for steps justified by semantics rather than a catalog rule.
pub const SEMANTIC_RULE: &str = "semantic";

/// A student's account of a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepClaim {
    pub rule: String,
    pub path: Vec<usize>,
    pub dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    LogicMismatch,
    UnknownRule(String),
    PathInvalid(Vec<usize>),
    PatternMismatch { rule: String, path: Vec<usize> },
    WrongResult { rule: String, path: Vec<usize> },
    NotEquivalent { witness: Option<Witness>, bounded: bool },
    Undecided(String),
}

impl Rejection {
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::LogicMismatch => "LogicMismatch",
            Rejection::UnknownRule(_) => "UnknownRule",
            Rejection::PathInvalid(_) => "PathInvalid",
            Rejection::PatternMismatch { .. } => "PatternMismatch",
            Rejection::WrongResult { .. } => "WrongResult",
            Rejection::NotEquivalent { .. } => "NotEquivalent",
            Rejection::Undecided(_) => "Undecided",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Rejection::LogicMismatch => "the two formulas are in different logics".into(),
            Rejection::UnknownRule(r) => format!("unknown rule {r}"),
            Rejection::PathInvalid(p) => format!("path {p:?} does not address a subformula"),
            Rejection::PatternMismatch { rule, path } => format!("rule {rule} does not match at path {path:?}"),
            Rejection::WrongResult { rule, path } => {
                format!("applying {rule} at path {path:?} does not give the stated formula")
            }
            Rejection::NotEquivalent { bounded: true, .. } => {
                "the formulas differ on a finite model".into()
            }
            Rejection::NotEquivalent { .. } => "the formulas are not equivalent".into(),
            Rejection::Undecided(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepVerdict {
    /// `semantic` marks acceptance by equivalence checking instead of a rule;
    /// `dir` is then absent and `path` is the smallest subtree holding every change.
    Accepted {
        rule: String,
        path: Vec<usize>,
        dir: Option<Direction>,
        semantic: bool,
    },
    Rejected(Rejection),
}

impl StepVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, StepVerdict::Accepted { .. })
    }
}

impl Serialize for StepVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            StepVerdict::Accepted { rule, path, dir, semantic } => {
                m.serialize_entry("accepted", &true)?;
                m.serialize_entry("rule", rule)?;
                m.serialize_entry("path", path)?;
                if let Some(d) = dir {
                    m.serialize_entry("dir", d)?;
                }
                m.serialize_entry("semantic", semantic)?;
            }
            StepVerdict::Rejected(r) => {
                m.serialize_entry("accepted", &false)?;
                m.serialize_entry("reason", r.code())?;
                m.serialize_entry("message", &r.message())?;
                if let Rejection::NotEquivalent { witness: Some(w), bounded } = r {
                    m.serialize_entry("witness", w)?;
                    if *bounded {
                        m.serialize_entry("bounded", &true)?;
                    }
                }
            }
        }
        m.end()
    }
}

/// Checks one derivation step. A claim is accepted exactly when the named
/// rewrite relates the two formulas; without a claim every position (preorder)
/// and rule (catalog order, left-to-right before right-to-left) is tried, then
/// semantic equivalence.
pub fn validate_step(before: &Formula, after: &Formula, claim: Option<&StepClaim>) -> StepVerdict {
    if before.logic() != after.logic() {
        return StepVerdict::Rejected(Rejection::LogicMismatch);
    }
    let (b, a) = (before.as_fol(), after.as_fol());
    match claim {
        Some(c) if c.rule == SEMANTIC_RULE => semantic_verdict(before, after),
        Some(c) => check_claim(&b, &a, c),
        None => {
            for path in b.paths() {
                if a.at(&path).is_none() || !context_agrees(&b, &a, &path) {
                    continue;
                }
                for rule in rule_catalog() {
                    for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                        if step_holds(&b, &a, rule, &path, dir) {
                            return StepVerdict::Accepted {
                                rule: rule.id.to_string(),
                                path,
                                dir: Some(dir),
                                semantic: false,
                            };
                        }
                    }
                }
            }
            semantic_verdict(before, after)
        }
    }
}

fn check_claim(b: &FolFormula, a: &FolFormula, c: &StepClaim) -> StepVerdict {
    let Some(rule) = find_rule(&c.rule) else {
        return StepVerdict::Rejected(Rejection::UnknownRule(c.rule.clone()));
    };
    let Some(sub) = b.at(&c.path) else {
        return StepVerdict::Rejected(Rejection::PathInvalid(c.path.clone()));
    };
    if step_holds(b, a, rule, &c.path, c.dir) {
        return StepVerdict::Accepted {
            rule: c.rule.clone(),
            path: c.path.clone(),
            dir: Some(c.dir),
            semantic: false,
        };
    }
    let (src, _) = rule.sides(c.dir);
    let rejection = if src.matches(sub, &mut Bindings::default()) {
        Rejection::WrongResult {
            rule: c.rule.clone(),
            path: c.path.clone(),
        }
    } else {
        Rejection::PatternMismatch {
            rule: c.rule.clone(),
            path: c.path.clone(),
        }
    };
    StepVerdict::Rejected(rejection)
}

fn semantic_verdict(before: &Formula, after: &Formula) -> StepVerdict {
    let verdict = match (before, after) {
        (Formula::Prop(x), Formula::Prop(y)) => equiv_tt(x, y),
        _ => equiv_finite(&before.as_fol(), &after.as_fol(), &Bounds::default()),
    };
    match verdict {
        Ok(v) if v.equivalent => StepVerdict::Accepted {
            rule: SEMANTIC_RULE.to_string(),
            path: diff_path(&before.as_fol(), &after.as_fol()),
            dir: None,
            semantic: true,
        },
        Ok(v) => StepVerdict::Rejected(Rejection::NotEquivalent {
            witness: v.witness,
            bounded: v.bounded,
        }),
        Err(e) => StepVerdict::Rejected(Rejection::Undecided(e.to_string())),
    }
}

/// Path of the smallest subtree outside which `a` and `b` coincide.
pub fn diff_path(a: &FolFormula, b: &FolFormula) -> Vec<usize> {
    let mut path = Vec::new();
    let (mut x, mut y) = (a, b);
    loop {
        let (xs, ys) = (x.children(), y.children());
        if xs.len() != ys.len() {
            return path;
        }
        let differing: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != ys[i]).collect();
        match differing.as_slice() {
            [i] if context_agrees(x, y, &[*i]) => {
                path.push(*i);
                x = xs[*i];
                y = ys[*i];
            }
            _ => return path,
        }
    }
}
