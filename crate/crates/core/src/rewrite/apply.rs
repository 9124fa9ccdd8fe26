use super::catalog::{find_rule, RewriteRule};
use super::pattern::{Bindings, Pattern};
use super::{Direction, RewriteError};
use crate::formula::{FolFormula, Formula};

impl RewriteRule {
    /// Source and target schema for a direction.
    pub fn sides(&self, dir: Direction) -> (&Pattern, &Pattern) {
        match dir {
            Direction::LeftToRight => (&self.lhs, &self.rhs),
            Direction::RightToLeft => (&self.rhs, &self.lhs),
        }
    }
}

/// Rewrites the subformula at `path` with `rule`. A metavariable that occurs
/// only in the target side makes the step underdetermined.
pub fn apply_rule(f: &Formula, rule: &str, path: &[usize], dir: Direction) -> Result<Formula, RewriteError> {
    apply_rule_with(f, rule, path, dir, &Bindings::default())
}

/// As [`apply_rule`], with metavariables of the target side supplied up front.
pub fn apply_rule_with(
    f: &Formula,
    rule: &str,
    path: &[usize],
    dir: Direction,
    extra: &Bindings,
) -> Result<Formula, RewriteError> {
    let r = find_rule(rule).ok_or_else(|| RewriteError::UnknownRule(rule.to_string()))?;
    let fol = f.as_fol();
    let out = rewrite_fol(&fol, r, path, dir, extra)?;
    Formula::from_fol(f.logic(), out).ok_or(RewriteError::LogicMismatch)
}

pub(crate) fn rewrite_fol(
    f: &FolFormula,
    rule: &RewriteRule,
    path: &[usize],
    dir: Direction,
    extra: &Bindings,
) -> Result<FolFormula, RewriteError> {
    let sub = f.at(path).ok_or_else(|| RewriteError::PathInvalid(path.to_vec()))?;
    let (src, dst) = rule.sides(dir);
    let mut bind = Bindings::default();
    if !src.matches(sub, &mut bind) {
        return Err(RewriteError::PatternMismatch {
            rule: rule.id.to_string(),
            path: path.to_vec(),
        });
    }
    for (k, v) in &extra.formulas {
        bind.formulas.entry(k.clone()).or_insert_with(|| v.clone());
    }
    for (k, v) in &extra.binders {
        bind.binders.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let replacement = dst.instantiate(&bind).map_err(|meta| RewriteError::Underdetermined {
        rule: rule.id.to_string(),
        meta,
    })?;
    Ok(f.replace_at(path, replacement).expect("path checked above"))
}

/// Whether `after` is `before` with one instance of `rule` rewritten at
/// `path`. Both sides are matched together, so target-only metavariables
/// are read off `after`.
pub fn step_holds(before: &FolFormula, after: &FolFormula, rule: &RewriteRule, path: &[usize], dir: Direction) -> bool {
    let (Some(b), Some(a)) = (before.at(path), after.at(path)) else {
        return false;
    };
    if !context_agrees(before, after, path) {
        return false;
    }
    let (src, dst) = rule.sides(dir);
    let mut bind = Bindings::default();
    src.matches(b, &mut bind) && dst.matches(a, &mut bind)
}

/// Whether `before` and `after` agree everywhere outside the subtree at `path`.
pub(crate) fn context_agrees(before: &FolFormula, after: &FolFormula, path: &[usize]) -> bool {
    match path.split_first() {
        None => true,
        Some((&i, rest)) => {
            let (bc, ac) = (before.children(), after.children());
            if bc.len() != ac.len() || i >= bc.len() || !same_node(before, after) {
                return false;
            }
            bc.iter()
                .zip(&ac)
                .enumerate()
                .all(|(j, (b, a))| if j == i { context_agrees(b, a, rest) } else { b == a })
        }
    }
}

/// Same connective, and same binder for quantifiers.
fn same_node(a: &FolFormula, b: &FolFormula) -> bool {
    match (a, b) {
        (FolFormula::Forall(x, _), FolFormula::Forall(y, _)) | (FolFormula::Exists(x, _), FolFormula::Exists(y, _)) => x == y,
        (FolFormula::Pred(p, xs), FolFormula::Pred(q, ys)) => p == q && xs == ys,
        _ => std::mem::discriminant(a) == std::mem::discriminant(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Logic};

    fn prop(s: &str) -> Formula {
        parse(Logic::Prop, s).unwrap()
    }

    #[test]
    fn impl_elim_at_root() {
        let out = apply_rule(&prop("A -> B"), "impl_elim", &[], Direction::LeftToRight).unwrap();
        assert_eq!(out.render(), "!A | B");
    }

    #[test]
    fn de_morgan_or_inside_left_chain() {
        let f = prop("!(A | B) | !C | D");
        let out = apply_rule(&f, "de_morgan_or", &[0, 0], Direction::LeftToRight).unwrap();
        assert_eq!(out.render(), "(!A & !B) | !C | D");
        assert!(matches!(
            apply_rule(&f, "de_morgan_or", &[0], Direction::LeftToRight),
            Err(RewriteError::PatternMismatch { .. })
        ));
    }

    #[test]
    fn neg_forall_on_first_order() {
        let f = parse(Logic::Fol, "!forall t. P(t)").unwrap();
        let out = apply_rule(&f, "neg_forall", &[], Direction::LeftToRight).unwrap();
        assert_eq!(out.render(), "exists t. !P(t)");
    }

    #[test]
    fn errors() {
        let f = prop("A & B");
        assert_eq!(
            apply_rule(&f, "nope", &[], Direction::LeftToRight),
            Err(RewriteError::UnknownRule("nope".into()))
        );
        assert_eq!(
            apply_rule(&f, "commute_and", &[2], Direction::LeftToRight),
            Err(RewriteError::PathInvalid(vec![2]))
        );
        assert!(matches!(
            apply_rule(&prop("A"), "absorb_and", &[], Direction::RightToLeft),
            Err(RewriteError::Underdetermined { meta, .. }) if meta == "Q"
        ));
    }

    #[test]
    fn supplied_bindings_fill_target_only_metas() {
        let mut extra = Bindings::default();
        extra.formulas.insert("P".into(), FolFormula::pred("A", &[]));
        let out = apply_rule_with(&prop("false | B"), "contradiction", &[0], Direction::RightToLeft, &extra).unwrap();
        assert_eq!(out.render(), "(A & !A) | B");
    }

    #[test]
    fn relational_check_reads_target_metas() {
        let before = prop("A").as_fol();
        let after = prop("A & (A | C)").as_fol();
        let rule = find_rule("absorb_and").unwrap();
        assert!(step_holds(&before, &after, rule, &[], Direction::RightToLeft));
        assert!(!step_holds(&before, &after, rule, &[], Direction::LeftToRight));
        let wrong = prop("B & (A | C)").as_fol();
        assert!(!step_holds(&before, &wrong, rule, &[], Direction::RightToLeft));
    }

    #[test]
    fn context_must_be_untouched() {
        let before = prop("(A & B) | C").as_fol();
        let after = prop("(B & A) | D").as_fol();
        let rule = find_rule("commute_and").unwrap();
        assert!(!step_holds(&before, &after, rule, &[0], Direction::LeftToRight));
        let after = prop("(B & A) | C").as_fol();
        assert!(step_holds(&before, &after, rule, &[0], Direction::LeftToRight));
    }
}
