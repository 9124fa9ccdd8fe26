//! Recorded rewriting to a canonical CNF. Every change goes through a catalog
//! rule so the recorded steps replay exactly.

use std::collections::BTreeMap;

use super::apply::rewrite_fol;
use super::catalog::find_rule;
use super::pattern::Bindings;
use super::Direction;
use crate::formula::{render_fol, FolFormula};
use crate::sat::NAIVE_CLAUSE_LIMIT;

use Direction::{LeftToRight as Ltr, RightToLeft as Rtl};

const NNF_RULES: &[&str] = &[
    "impl_elim",
    "iff_expand",
    "de_morgan_and",
    "de_morgan_or",
    "double_neg",
    "neg_forall",
    "neg_exists",
];

const CONSTANT_RULES: &[&str] = &[
    "not_true",
    "not_false",
    "and_true",
    "true_and",
    "and_false",
    "false_and",
    "or_true",
    "true_or",
    "or_false",
    "false_or",
    "forall_true",
    "exists_false",
    "forall_false",
    "exists_true",
];

/// Upper bound on recorded steps for one half of a derivation.
const STEP_LIMIT: usize = 20_000;
/// Largest clause count the full-expansion stage will produce.
pub(crate) const FULL_CLAUSE_LIMIT: u128 = 64;
const FULL_ATOM_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawStep {
    pub rule: &'static str,
    pub path: Vec<usize>,
    pub dir: Direction,
    pub after: FolFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Stop {
    Overflow(u128),
    StepLimit,
}

pub(crate) struct Canonicalizer {
    pub cur: FolFormula,
    pub steps: Vec<RawStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
}

fn op_of(f: &FolFormula) -> Option<Op> {
    match f {
        FolFormula::And(..) => Some(Op::And),
        FolFormula::Or(..) => Some(Op::Or),
        _ => None,
    }
}

fn operands(f: &FolFormula) -> (&FolFormula, &FolFormula) {
    match f {
        FolFormula::And(l, r) | FolFormula::Or(l, r) => (l, r),
        _ => unreachable!("binary connective expected"),
    }
}

/// Elements of the maximal left-nested chain of `op` rooted at `f`.
fn chain(f: &FolFormula, op: Op) -> Vec<&FolFormula> {
    let mut out = Vec::new();
    let mut cur = f;
    while op_of(cur) == Some(op) {
        let (l, r) = operands(cur);
        out.push(r);
        cur = l;
    }
    out.push(cur);
    out.reverse();
    out
}

/// Literal base and polarity.
fn literal(f: &FolFormula) -> (&FolFormula, bool) {
    match f {
        FolFormula::Not(x) => (x, true),
        _ => (f, false),
    }
}

/// Sort key: a literal is keyed by its base then polarity, a chain by its elements' keys.
fn sort_key(f: &FolFormula) -> Vec<(String, bool)> {
    match op_of(f) {
        Some(op) => chain(f, op).into_iter().flat_map(sort_key).collect(),
        None => {
            let (base, negated) = literal(f);
            vec![(render_fol(base), negated)]
        }
    }
}

fn zeros(mut path: Vec<usize>, n: usize) -> Vec<usize> {
    path.extend(std::iter::repeat_n(0, n));
    path
}

/// Product estimate of the clauses distribution produces, the worst over the
/// formula and every quantifier body.
fn clause_estimate(f: &FolFormula) -> u128 {
    fn go(f: &FolFormula, worst: &mut u128) -> u128 {
        match f {
            FolFormula::True => 0,
            FolFormula::And(l, r) => go(l, worst).saturating_add(go(r, worst)),
            FolFormula::Or(l, r) => go(l, worst).saturating_mul(go(r, worst)),
            FolFormula::Forall(_, b) | FolFormula::Exists(_, b) => {
                let inner = go(b, worst);
                *worst = (*worst).max(inner);
                1
            }
            _ => 1,
        }
    }
    let mut worst = 0;
    let top = go(f, &mut worst);
    top.max(worst)
}

impl Canonicalizer {
    pub fn new(f: FolFormula) -> Self {
        Canonicalizer {
            cur: f,
            steps: Vec::new(),
        }
    }

    fn apply(&mut self, rule: &'static str, path: Vec<usize>, dir: Direction) -> Result<(), Stop> {
        self.apply_with(rule, path, dir, &Bindings::default())
    }

    fn apply_with(&mut self, rule: &'static str, path: Vec<usize>, dir: Direction, extra: &Bindings) -> Result<(), Stop> {
        let r = find_rule(rule).expect("catalog rule");
        let next = rewrite_fol(&self.cur, r, &path, dir, extra)
            .unwrap_or_else(|e| panic!("canonicalizer produced an inapplicable step: {e}"));
        self.steps.push(RawStep {
            rule,
            path,
            dir,
            after: next.clone(),
        });
        self.cur = next;
        if self.steps.len() > STEP_LIMIT {
            return Err(Stop::StepLimit);
        }
        Ok(())
    }

    /// First position in preorder where one of `rules` matches left to right.
    fn find_first(&self, rules: &[&'static str]) -> Option<(&'static str, Vec<usize>)> {
        for path in self.cur.paths() {
            let sub = self.cur.at(&path).expect("listed path");
            for &id in rules {
                let rule = find_rule(id).expect("catalog rule");
                if rule.lhs.matches(sub, &mut Bindings::default()) {
                    return Some((id, path));
                }
            }
        }
        None
    }

    fn exhaust(&mut self, rules: &[&'static str]) -> Result<bool, Stop> {
        let mut changed = false;
        while let Some((rule, path)) = self.find_first(rules) {
            self.apply(rule, path, Ltr)?;
            changed = true;
        }
        Ok(changed)
    }

    /// Reduced canonical form: NNF, constants folded, CNF by distribution,
    /// chains flattened to the left, sorted and deduplicated.
    pub fn reduce(&mut self) -> Result<(), Stop> {
        self.exhaust(NNF_RULES)?;
        self.exhaust(CONSTANT_RULES)?;
        debug_assert!(crate::sat::is_nnf(&self.cur));
        let estimate = clause_estimate(&self.cur);
        if estimate > NAIVE_CLAUSE_LIMIT as u128 {
            return Err(Stop::Overflow(estimate));
        }
        self.distribute()?;
        self.normalize()
    }

    fn distribute(&mut self) -> Result<(), Stop> {
        loop {
            let found = self.cur.paths().into_iter().find_map(|p| match self.cur.at(&p) {
                Some(FolFormula::Or(_, r)) if matches!(**r, FolFormula::And(..)) => Some(("distrib_or_over_and", p)),
                Some(FolFormula::Or(l, _)) if matches!(**l, FolFormula::And(..)) => {
                    Some(("distrib_or_over_and_right", p))
                }
                _ => None,
            });
            match found {
                Some((rule, path)) => self.apply(rule, path, Ltr)?,
                None => return Ok(()),
            }
        }
    }

    fn normalize(&mut self) -> Result<(), Stop> {
        loop {
            if self.exhaust(CONSTANT_RULES)? {
                continue;
            }
            if self.flatten_one()? {
                continue;
            }
            if self.order_one()? {
                continue;
            }
            return Ok(());
        }
    }

    /// Re-associates one right-nested chain link to the left.
    fn flatten_one(&mut self) -> Result<bool, Stop> {
        let found = self.cur.paths().into_iter().find_map(|p| match self.cur.at(&p) {
            Some(FolFormula::And(_, r)) if matches!(**r, FolFormula::And(..)) => Some(("assoc_and", p)),
            Some(FolFormula::Or(_, r)) if matches!(**r, FolFormula::Or(..)) => Some(("assoc_or", p)),
            _ => None,
        });
        match found {
            Some((rule, path)) => {
                self.apply(rule, path, Rtl)?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Makes one repair to the innermost chain that is not strictly sorted:
    /// a swap of neighbours, a duplicate merge or a complementary pair collapse.
    fn order_one(&mut self) -> Result<bool, Stop> {
        let paths = self.cur.paths();
        for p in paths.iter().rev() {
            let node = self.cur.at(p).expect("listed path");
            let Some(op) = op_of(node) else { continue };
            if let Some((&last, parent_path)) = p.split_last() {
                let parent = self.cur.at(parent_path).expect("parent");
                if op_of(parent) == Some(op) && last == 0 {
                    continue;
                }
            }
            let elems = chain(node, op);
            let n = elems.len();
            for i in 0..n - 1 {
                let (x, y) = (elems[i], elems[i + 1]);
                let pair_rule = if x == y {
                    Some(match op {
                        Op::And => "idempotent_and",
                        Op::Or => "idempotent_or",
                    })
                } else if *y == FolFormula::neg(x.clone()) {
                    Some(match op {
                        Op::And => "contradiction",
                        Op::Or => "excluded_middle",
                    })
                } else if sort_key(x) > sort_key(y) {
                    Some(match op {
                        Op::And => "commute_and",
                        Op::Or => "commute_or",
                    })
                } else {
                    None
                };
                let Some(rule) = pair_rule else { continue };
                let assoc = match op {
                    Op::And => "assoc_and",
                    Op::Or => "assoc_or",
                };
                let at = zeros(p.clone(), n - 2 - i);
                if i == 0 {
                    self.apply(rule, at, Ltr)?;
                } else {
                    self.apply(assoc, at.clone(), Ltr)?;
                    let mut inner = at.clone();
                    inner.push(1);
                    self.apply(rule, inner, Ltr)?;
                    if rule.starts_with("commute") {
                        self.apply(assoc, at, Rtl)?;
                    }
                }
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Literal bases of a reduced form, keyed by rendering.
    pub fn bases(&self) -> BTreeMap<String, FolFormula> {
        let mut out = BTreeMap::new();
        for clause in clauses(&self.cur) {
            for lit in clause_literals(clause) {
                let (base, _) = literal(lit);
                out.insert(render_fol(base), base.clone());
            }
        }
        out
    }

    /// Number of clauses full expansion over `bases` would create, or `None`
    /// if that is beyond the limits.
    pub fn expansion_size(&self, bases: &BTreeMap<String, FolFormula>) -> Option<u128> {
        if bases.len() > FULL_ATOM_LIMIT {
            return None;
        }
        let total: u128 = clauses(&self.cur)
            .iter()
            .map(|c| {
                let own = clause_literals(c).len();
                1u128 << (bases.len() - own.min(bases.len()))
            })
            .sum();
        (total <= FULL_CLAUSE_LIMIT).then_some(total)
    }

    /// Extends a reduced form so every clause mentions every base: a clause
    /// `C` missing `X` becomes `(C | X) & (C | !X)`.
    pub fn expand(&mut self, bases: &BTreeMap<String, FolFormula>) -> Result<(), Stop> {
        loop {
            let mut target = None;
            for (path, clause) in clause_paths(&self.cur) {
                let present: Vec<String> = clause_literals(clause)
                    .into_iter()
                    .filter(|l| !matches!(l, FolFormula::False))
                    .map(|l| render_fol(literal(l).0))
                    .collect();
                if let Some((_, base)) = bases.iter().find(|(k, _)| !present.contains(k)) {
                    target = Some((path, matches!(clause, FolFormula::False), base.clone()));
                    break;
                }
            }
            let Some((path, is_false, base)) = target else { break };
            let mut extra = Bindings::default();
            extra.formulas.insert("P".into(), base);
            if is_false {
                self.apply_with("contradiction", path, Rtl, &extra)?;
            } else {
                self.apply("or_false", path.clone(), Rtl)?;
                let mut right = path.clone();
                right.push(1);
                self.apply_with("contradiction", right, Rtl, &extra)?;
                self.apply("distrib_or_over_and", path, Ltr)?;
            }
        }
        self.normalize()
    }
}

/// Clauses of a CNF: the maximal non-conjunction subtrees under the root's conjunctions.
fn clauses(f: &FolFormula) -> Vec<&FolFormula> {
    clause_paths(f).into_iter().map(|(_, c)| c).collect()
}

fn clause_paths(f: &FolFormula) -> Vec<(Vec<usize>, &FolFormula)> {
    fn go<'a>(f: &'a FolFormula, path: Vec<usize>, out: &mut Vec<(Vec<usize>, &'a FolFormula)>) {
        match f {
            FolFormula::And(l, r) => {
                go(l, [path.as_slice(), &[0]].concat(), out);
                go(r, [path.as_slice(), &[1]].concat(), out);
            }
            FolFormula::True => {}
            _ => out.push((path, f)),
        }
    }
    let mut out = Vec::new();
    go(f, Vec::new(), &mut out);
    out
}

fn clause_literals(c: &FolFormula) -> Vec<&FolFormula> {
    match c {
        FolFormula::Or(l, r) => {
            let mut out = clause_literals(l);
            out.extend(clause_literals(r));
            out
        }
        _ => vec![c],
    }
}
