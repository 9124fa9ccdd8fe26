use serde::Serialize;
use thiserror::Error;

use super::canon::{Canonicalizer, RawStep, Stop};
use super::validate::{diff_path, SEMANTIC_RULE};
use super::Direction;
use crate::formula::{FolFormula, Formula};
use crate::semantics::{equiv_finite, equiv_tt, Bounds, SemanticsError, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: String,
    pub path: Vec<usize>,
    pub dir: Direction,
    #[serde(serialize_with = "render")]
    pub after: Formula,
    /// Justified by equivalence checking rather than a catalog rule.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub semantic: bool,
}

/// A chain of rewrites from `start` to `end`. `bridged` marks chains that
/// contain a semantic step because canonicalization could not finish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    #[serde(serialize_with = "render")]
    pub start: Formula,
    pub steps: Vec<RewriteStep>,
    #[serde(serialize_with = "render")]
    pub end: Formula,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub bridged: bool,
}

fn render<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.render())
}

impl Derivation {
    /// Formula before each step, followed by the end formula.
    pub fn formulas(&self) -> Vec<&Formula> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.after)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("the formulas are in different logics")]
    LogicMismatch,
    #[error("the formulas are not equivalent")]
    NotEquivalent { witness: Option<Witness>, bounded: bool },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Derivation from `f1` to `f2`, meeting at a canonical CNF: `f1` is
/// rewritten to it, then the rewriting of `f2` is replayed backwards. When
/// the reduced forms differ, both are expanded so each clause mentions every
/// literal base; if that is too large, or distribution would exceed the
/// clause limit, a single semantic step bridges the two halves.
pub fn derive_equiv(f1: &Formula, f2: &Formula) -> Result<Derivation, DeriveError> {
    if f1.logic() != f2.logic() {
        return Err(DeriveError::LogicMismatch);
    }
    let verdict = match (f1, f2) {
        (Formula::Prop(a), Formula::Prop(b)) => equiv_tt(a, b)?,
        _ => equiv_finite(&f1.as_fol(), &f2.as_fol(), &Bounds::default())?,
    };
    if !verdict.equivalent {
        return Err(DeriveError::NotEquivalent {
            witness: verdict.witness,
            bounded: verdict.bounded,
        });
    }
    let logic = f1.logic();
    let mut h1 = Canonicalizer::new(f1.as_fol());
    let mut h2 = Canonicalizer::new(f2.as_fol());
    let r1 = h1.reduce();
    let r2 = h2.reduce();
    if r1.is_ok() && r2.is_ok() && h1.cur != h2.cur {
        let mut bases = h1.bases();
        bases.extend(h2.bases());
        if h1.expansion_size(&bases).is_some() && h2.expansion_size(&bases).is_some() {
            // a step limit here leaves both halves valid, just unmet
            let _: Result<(), Stop> = h1.expand(&bases).and_then(|_| h2.expand(&bases));
        }
    }

    let wrap = |f: FolFormula| Formula::from_fol(logic, f).expect("rules preserve the logic");
    let mut steps: Vec<RewriteStep> = h1
        .steps
        .into_iter()
        .map(|s| RewriteStep {
            rule: s.rule.to_string(),
            path: s.path,
            dir: s.dir,
            after: wrap(s.after),
            semantic: false,
        })
        .collect();

    let bridged = h1.cur != h2.cur;
    if bridged {
        steps.push(RewriteStep {
            rule: SEMANTIC_RULE.to_string(),
            path: diff_path(&h1.cur, &h2.cur),
            dir: Direction::LeftToRight,
            after: wrap(h2.cur.clone()),
            semantic: true,
        });
    }

    let befores: Vec<FolFormula> = std::iter::once(f2.as_fol())
        .chain(h2.steps.iter().map(|s| s.after.clone()))
        .collect();
    for (i, RawStep { rule, path, dir, .. }) in h2.steps.into_iter().enumerate().rev() {
        steps.push(RewriteStep {
            rule: rule.to_string(),
            path,
            dir: dir.flip(),
            after: wrap(befores[i].clone()),
            semantic: false,
        });
    }

    Ok(Derivation {
        start: f1.clone(),
        steps,
        end: f2.clone(),
        bridged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Logic};
    use crate::rewrite::{validate_step, StepClaim};

    fn prop(s: &str) -> Formula {
        parse(Logic::Prop, s).unwrap()
    }

    fn assert_valid(d: &Derivation) {
        let forms = d.formulas();
        assert_eq!(*forms.last().unwrap(), &d.end);
        for (i, s) in d.steps.iter().enumerate() {
            let claim = StepClaim {
                rule: s.rule.clone(),
                path: s.path.clone(),
                dir: s.dir,
            };
            let v = validate_step(forms[i], &s.after, Some(&claim));
            assert!(v.is_accepted(), "step {i} ({}) rejected: {v:?}", s.rule);
        }
    }

    #[test]
    fn s1_to_s2() {
        let d = derive_equiv(&prop("(A | B) & C -> D"), &prop("(A -> (C -> D)) & (C -> (B -> D))")).unwrap();
        assert!(!d.bridged);
        assert_valid(&d);
        assert!(d.steps.iter().any(|s| s.after.render() == "(!A & !B) | !C | D"));
    }

    #[test]
    fn identical_formulas_need_no_steps() {
        let d = derive_equiv(&prop("A"), &prop("A")).unwrap();
        assert!(d.steps.is_empty());
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json, serde_json::json!({"start":"A","steps":[],"end":"A"}));
    }

    #[test]
    fn first_order_exercise() {
        let f1 = parse(Logic::Fol, "!forall t. ((C(t) | B(t)) & S(t) -> T(t))").unwrap();
        let f2 = parse(Logic::Fol, "exists t. (S(t) & !T(t) & (C(t) | B(t)))").unwrap();
        let d = derive_equiv(&f1, &f2).unwrap();
        assert!(!d.bridged);
        assert_valid(&d);
        let allowed = [
            "neg_forall",
            "impl_elim",
            "de_morgan_and",
            "de_morgan_or",
            "double_neg",
            "commute_and",
            "commute_or",
            "assoc_and",
            "assoc_or",
        ];
        assert!(d.steps.iter().all(|s| allowed.contains(&s.rule.as_str())), "{d:?}");
        assert_eq!(d.steps[0].rule, "neg_forall");
    }

    #[test]
    fn expansion_closes_absorption_gaps() {
        let d = derive_equiv(&prop("A & (A | B)"), &prop("A")).unwrap();
        assert!(!d.bridged);
        assert_valid(&d);
        let d = derive_equiv(&prop("A | !A"), &prop("B -> B")).unwrap();
        assert_valid(&d);
    }

    #[test]
    fn not_equivalent() {
        let e = derive_equiv(&prop("A"), &prop("B")).unwrap_err();
        assert!(matches!(e, DeriveError::NotEquivalent { witness: Some(_), .. }));
    }

    #[test]
    fn overflow_bridges() {
        let text = (0..10).map(|i| format!("(X{i} & Y{i})")).collect::<Vec<_>>().join(" | ");
        let flipped = (0..10).rev().map(|i| format!("(Y{i} & X{i})")).collect::<Vec<_>>().join(" | ");
        let d = derive_equiv(&prop(&text), &prop(&flipped)).unwrap();
        assert!(d.bridged);
        assert_eq!(d.steps.iter().filter(|s| s.semantic).count(), 1);
        assert_valid(&d);
    }
}
