use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{find_model, Bounds, FiniteModel, SemanticsError};
use crate::formula::{Binder, FolFormula};

/// The four categorical forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mood {
    /// All X are Y
    A,
    /// No X are Y
    E,
    /// Some X are Y
    I,
    /// Some X are not Y
    O,
}

impl FromStr for Mood {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Mood::A),
            "E" | "e" => Ok(Mood::E),
            "I" | "i" => Ok(Mood::I),
            "O" | "o" => Ok(Mood::O),
            other => Err(SemanticsError::UnknownMood(other.to_string())),
        }
    }
}

/// A categorical statement relating two predicate names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Statement {
    pub mood: Mood,
    pub subject: String,
    pub predicate: String,
}

impl Statement {
    pub fn new(mood: Mood, subject: &str, predicate: &str) -> Self {
        Statement {
            mood,
            subject: subject.to_string(),
            predicate: predicate.to_string(),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, p) = (&self.subject, &self.predicate);
        match self.mood {
            Mood::A => write!(f, "All {s} are {p}"),
            Mood::E => write!(f, "No {s} are {p}"),
            Mood::I => write!(f, "Some {s} are {p}"),
            Mood::O => write!(f, "Some {s} are not {p}"),
        }
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Statement {
    type Err = SemanticsError;

    /// Accepts `A(M,P)`, `A M P`, or the English forms `All M are P`,
    /// `No M are P`, `Some M are P`, `Some M are not P`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SemanticsError::UnknownMood(s.to_string());
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let mood: Mood = s[..open].trim().parse()?;
            let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            return match parts.as_slice() {
                [x, y] if valid_name(x) && valid_name(y) => Ok(Statement::new(mood, x, y)),
                _ => Err(bad()),
            };
        }
        let words: Vec<&str> = s.split_whitespace().collect();
        let (mood, x, y) = match words.as_slice() {
            [m, x, y] if m.len() == 1 => (m.parse()?, *x, *y),
            [all, x, "are", y] if all.eq_ignore_ascii_case("all") => (Mood::A, *x, *y),
            [no, x, "are", y] if no.eq_ignore_ascii_case("no") => (Mood::E, *x, *y),
            [some, x, "are", "not", y] if some.eq_ignore_ascii_case("some") => (Mood::O, *x, *y),
            [some, x, "are", y] if some.eq_ignore_ascii_case("some") => (Mood::I, *x, *y),
            _ => return Err(bad()),
        };
        if !valid_name(x) || !valid_name(y) {
            return Err(bad());
        }
        Ok(Statement::new(mood, x, y))
    }
}

fn unary(name: &str) -> FolFormula {
    FolFormula::pred(name, &["x"])
}

/// A ↦ ∀x.(X(x)→Y(x)), E ↦ ∀x.(X(x)→¬Y(x)), I ↦ ∃x.(X(x)∧Y(x)), O ↦ ∃x.(X(x)∧¬Y(x)).
pub fn encode_syllogism(s: &Statement) -> FolFormula {
    let x = Binder::unsorted("x");
    let (subj, pred) = (unary(&s.subject), unary(&s.predicate));
    match s.mood {
        Mood::A => FolFormula::forall(x, FolFormula::implies(subj, pred)),
        Mood::E => FolFormula::forall(x, FolFormula::implies(subj, FolFormula::neg(pred))),
        Mood::I => FolFormula::exists(x, FolFormula::and(subj, pred)),
        Mood::O => FolFormula::exists(x, FolFormula::and(subj, FolFormula::neg(pred))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyllogismVerdict {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counter_model: Option<FiniteModel>,
}

/// Largest domain needed to refute an invalid syllogism over three monadic predicates.
const SYLLOGISM_DOMAIN: usize = 3;

/// Valid iff every model of the premises (plus, with existential import,
/// nonemptiness of all three terms) satisfies the conclusion, checked over
/// domains of up to three elements.
pub fn check_syllogism(
    major: &Statement,
    minor: &Statement,
    conclusion: &Statement,
    existential_import: bool,
) -> Result<SyllogismVerdict, SemanticsError> {
    check_syllogism_within(major, minor, conclusion, existential_import, SYLLOGISM_DOMAIN)
}

pub(crate) fn check_syllogism_within(
    major: &Statement,
    minor: &Statement,
    conclusion: &Statement,
    existential_import: bool,
    max_domain: usize,
) -> Result<SyllogismVerdict, SemanticsError> {
    let terms: BTreeSet<&str> = [major, minor, conclusion]
        .iter()
        .flat_map(|s| [s.subject.as_str(), s.predicate.as_str()])
        .collect();
    if terms.len() != 3 {
        return Err(SemanticsError::InvalidSyllogism(format!(
            "expected three distinct terms, found {}",
            terms.len()
        )));
    }
    let mut hypothesis = FolFormula::and(encode_syllogism(major), encode_syllogism(minor));
    if existential_import {
        for t in &terms {
            hypothesis = FolFormula::and(
                hypothesis,
                FolFormula::exists(Binder::unsorted("x"), unary(t)),
            );
        }
    }
    let refutation = FolFormula::and(hypothesis, FolFormula::neg(encode_syllogism(conclusion)));
    let counter = find_model(&refutation, &Bounds::uniform(max_domain))?;
    Ok(SyllogismVerdict {
        valid: counter.is_none(),
        counter_model: counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_fol, render_fol};
    use crate::semantics::eval_fol;
    use std::collections::BTreeMap;

    fn st(s: &str) -> Statement {
        s.parse().unwrap()
    }

    #[test]
    fn encodings() {
        assert_eq!(
            encode_syllogism(&st("A(M,P)")),
            parse_fol("forall x. (M(x) -> P(x))").unwrap()
        );
        assert_eq!(
            render_fol(&encode_syllogism(&st("I(S,M)"))),
            "exists x. (S(x) & M(x))"
        );
        assert_eq!(
            encode_syllogism(&st("Some S are not P")),
            parse_fol("exists x. (S(x) & !P(x))").unwrap()
        );
        assert_eq!(
            encode_syllogism(&st("No S are P")),
            parse_fol("forall x. (S(x) -> !P(x))").unwrap()
        );
    }

    #[test]
    fn statement_forms() {
        assert_eq!(st("All M are P"), st("A(M,P)"));
        assert_eq!(st("A M P"), st("A(M, P)"));
        assert_eq!(st("Some S are not P").mood, Mood::O);
        assert_eq!(
            "X(M,P)".parse::<Statement>(),
            Err(SemanticsError::UnknownMood("X".into()))
        );
        assert!("Every M is P".parse::<Statement>().is_err());
    }

    #[test]
    fn barbara_is_valid() {
        let v = check_syllogism(&st("A(M,P)"), &st("A(S,M)"), &st("A(S,P)"), false).unwrap();
        assert!(v.valid);
        assert!(v.counter_model.is_none());
    }

    #[test]
    fn undistributed_middle_is_invalid() {
        let v = check_syllogism(&st("A(P,M)"), &st("A(S,M)"), &st("A(S,P)"), false).unwrap();
        assert!(!v.valid);
        let m = v.counter_model.unwrap();
        let premises = parse_fol("(forall x. (P(x) -> M(x))) & (forall x. (S(x) -> M(x)))").unwrap();
        let conclusion = parse_fol("forall x. (S(x) -> P(x))").unwrap();
        assert!(eval_fol(&premises, &m, &BTreeMap::new()).unwrap());
        assert!(!eval_fol(&conclusion, &m, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn darapti_needs_existential_import() {
        let (maj, min, con) = (st("A(M,P)"), st("A(M,S)"), st("I(S,P)"));
        assert!(!check_syllogism(&maj, &min, &con, false).unwrap().valid);
        assert!(check_syllogism(&maj, &min, &con, true).unwrap().valid);
    }

    #[test]
    fn term_count_is_checked() {
        let e = check_syllogism(&st("A(M,P)"), &st("A(S,M)"), &st("A(S,Q)"), false).unwrap_err();
        assert!(matches!(e, SemanticsError::InvalidSyllogism(_)));
    }

    #[test]
    fn three_elements_suffice() {
        // every mood and figure: the verdict at size 3 matches size 4
        let moods = [Mood::A, Mood::E, Mood::I, Mood::O];
        let figures = [
            (("M", "P"), ("S", "M")),
            (("P", "M"), ("S", "M")),
            (("M", "P"), ("M", "S")),
            (("P", "M"), ("M", "S")),
        ];
        for &(major_terms, minor_terms) in &figures {
            for &m1 in &moods {
                for &m2 in &moods {
                    for &m3 in &moods {
                        let maj = Statement::new(m1, major_terms.0, major_terms.1);
                        let min = Statement::new(m2, minor_terms.0, minor_terms.1);
                        let con = Statement::new(m3, "S", "P");
                        for import in [false, true] {
                            let small = check_syllogism_within(&maj, &min, &con, import, 3).unwrap();
                            let large = check_syllogism_within(&maj, &min, &con, import, 4).unwrap();
                            assert_eq!(small.valid, large.valid, "{maj}; {min}; {con}");
                        }
                    }
                }
            }
        }
    }
}
