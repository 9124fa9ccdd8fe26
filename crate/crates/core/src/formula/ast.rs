use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Sort given to variables whose binder carries no annotation, and to free variables.
pub const DEFAULT_SORT: &str = "U";

/// A propositional formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    Atom(String),
    True,
    False,
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        PropFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    pub fn and(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: PropFormula, r: PropFormula) -> Self {
        PropFormula::Iff(Box::new(l), Box::new(r))
    }

    /// Atom names in lexicographic order, without duplicates.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::Atom(name) => {
                out.insert(name.clone());
            }
            PropFormula::True | PropFormula::False => {}
            PropFormula::Not(c) => c.collect_atoms(out),
            PropFormula::And(l, r)
            | PropFormula::Or(l, r)
            | PropFormula::Implies(l, r)
            | PropFormula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Embeds the formula into first-order syntax, atoms becoming nullary predicates.
    pub fn to_fol(&self) -> FolFormula {
        match self {
            PropFormula::Atom(name) => FolFormula::Pred(name.clone(), Vec::new()),
            PropFormula::True => FolFormula::True,
            PropFormula::False => FolFormula::False,
            PropFormula::Not(c) => FolFormula::neg(c.to_fol()),
            PropFormula::And(l, r) => FolFormula::and(l.to_fol(), r.to_fol()),
            PropFormula::Or(l, r) => FolFormula::or(l.to_fol(), r.to_fol()),
            PropFormula::Implies(l, r) => FolFormula::implies(l.to_fol(), r.to_fol()),
            PropFormula::Iff(l, r) => FolFormula::iff(l.to_fol(), r.to_fol()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PropFormula::Atom(_) | PropFormula::True | PropFormula::False => 1,
            PropFormula::Not(c) => 1 + c.size(),
            PropFormula::And(l, r)
            | PropFormula::Or(l, r)
            | PropFormula::Implies(l, r)
            | PropFormula::Iff(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render_prop(self))
    }
}

/// Argument of a predicate. Constants are domain indices written as numerals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

/// A quantified variable together with its sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binder {
    pub var: String,
    pub sort: String,
}

impl Binder {
    pub fn new(var: impl Into<String>, sort: impl Into<String>) -> Self {
        Binder {
            var: var.into(),
            sort: sort.into(),
        }
    }

    pub fn unsorted(var: impl Into<String>) -> Self {
        Binder::new(var, DEFAULT_SORT)
    }
}

/// A first-order formula without function symbols or equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FolFormula {
    Pred(String, Vec<Term>),
    True,
    False,
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Iff(Box<FolFormula>, Box<FolFormula>),
    Forall(Binder, Box<FolFormula>),
    Exists(Binder, Box<FolFormula>),
}

/// Name plus argument sorts of a predicate; arity is the number of sorts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredSig {
    pub name: String,
    pub sorts: Vec<String>,
}

impl PredSig {
    pub fn arity(&self) -> usize {
        self.sorts.len()
    }
}

impl FolFormula {
    pub fn pred(name: impl Into<String>, vars: &[&str]) -> Self {
        FolFormula::Pred(
            name.into(),
            vars.iter().map(|v| Term::Var(v.to_string())).collect(),
        )
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: FolFormula) -> Self {
        FolFormula::Not(Box::new(f))
    }

    pub fn and(l: FolFormula, r: FolFormula) -> Self {
        FolFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: FolFormula, r: FolFormula) -> Self {
        FolFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: FolFormula, r: FolFormula) -> Self {
        FolFormula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: FolFormula, r: FolFormula) -> Self {
        FolFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn forall(binder: Binder, body: FolFormula) -> Self {
        FolFormula::Forall(binder, Box::new(body))
    }

    pub fn exists(binder: Binder, body: FolFormula) -> Self {
        FolFormula::Exists(binder, Box::new(body))
    }

    /// Inverse of [`PropFormula::to_fol`]; `None` when quantifiers or
    /// predicates with arguments are present.
    pub fn to_prop(&self) -> Option<PropFormula> {
        Some(match self {
            FolFormula::Pred(name, args) if args.is_empty() => PropFormula::Atom(name.clone()),
            FolFormula::Pred(..) | FolFormula::Forall(..) | FolFormula::Exists(..) => return None,
            FolFormula::True => PropFormula::True,
            FolFormula::False => PropFormula::False,
            FolFormula::Not(c) => PropFormula::neg(c.to_prop()?),
            FolFormula::And(l, r) => PropFormula::and(l.to_prop()?, r.to_prop()?),
            FolFormula::Or(l, r) => PropFormula::or(l.to_prop()?, r.to_prop()?),
            FolFormula::Implies(l, r) => PropFormula::implies(l.to_prop()?, r.to_prop()?),
            FolFormula::Iff(l, r) => PropFormula::iff(l.to_prop()?, r.to_prop()?),
        })
    }

    /// Variables occurring outside any binder for their name. Free variables have the default sort.
    pub fn free_variables(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<(String, String)>) {
        match self {
            FolFormula::Pred(_, args) => {
                for arg in args {
                    if let Term::Var(v) = arg {
                        if !bound.contains(v) {
                            out.insert((v.clone(), DEFAULT_SORT.to_string()));
                        }
                    }
                }
            }
            FolFormula::True | FolFormula::False => {}
            FolFormula::Not(c) => c.collect_free(bound, out),
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
                bound.push(b.var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Signature of every predicate, keyed by name. Constant arguments take the
    /// sort of a variable used at the same argument position elsewhere, else the default sort.
    ///
    /// Formulas produced by the parser have one consistent signature per name;
    /// for hand-built formulas the first occurrence wins.
    pub fn signatures(&self) -> BTreeMap<String, PredSig> {
        let mut raw: BTreeMap<String, Vec<Option<String>>> = BTreeMap::new();
        let mut scope = Vec::new();
        self.collect_sigs(&mut scope, &mut raw);
        raw.into_iter()
            .map(|(name, sorts)| {
                let sorts = sorts
                    .into_iter()
                    .map(|s| s.unwrap_or_else(|| DEFAULT_SORT.to_string()))
                    .collect();
                (name.clone(), PredSig { name, sorts })
            })
            .collect()
    }

    fn collect_sigs(
        &self,
        scope: &mut Vec<(String, String)>,
        raw: &mut BTreeMap<String, Vec<Option<String>>>,
    ) {
        match self {
            FolFormula::Pred(name, args) => {
                let entry = raw
                    .entry(name.clone())
                    .or_insert_with(|| vec![None; args.len()]);
                if entry.len() != args.len() {
                    return;
                }
                for (slot, arg) in entry.iter_mut().zip(args) {
                    if let Term::Var(v) = arg {
                        if slot.is_none() {
                            *slot = Some(var_sort(scope, v));
                        }
                    }
                }
            }
            FolFormula::True | FolFormula::False => {}
            FolFormula::Not(c) => c.collect_sigs(scope, raw),
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => {
                l.collect_sigs(scope, raw);
                r.collect_sigs(scope, raw);
            }
            FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
                scope.push((b.var.clone(), b.sort.clone()));
                body.collect_sigs(scope, raw);
                scope.pop();
            }
        }
    }

    /// Every sort mentioned by a binder or by a predicate signature.
    pub fn sorts(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self
            .signatures()
            .into_values()
            .flat_map(|sig| sig.sorts)
            .collect();
        self.collect_binder_sorts(&mut out);
        out
    }

    fn collect_binder_sorts(&self, out: &mut BTreeSet<String>) {
        match self {
            FolFormula::Pred(..) | FolFormula::True | FolFormula::False => {}
            FolFormula::Not(c) => c.collect_binder_sorts(out),
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => {
                l.collect_binder_sorts(out);
                r.collect_binder_sorts(out);
            }
            FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
                out.insert(b.sort.clone());
                body.collect_binder_sorts(out);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FolFormula::Pred(..) | FolFormula::True | FolFormula::False => 1,
            FolFormula::Not(c) | FolFormula::Forall(_, c) | FolFormula::Exists(_, c) => {
                1 + c.size()
            }
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            FolFormula::Pred(..) | FolFormula::True | FolFormula::False => false,
            FolFormula::Not(c) => c.has_quantifiers(),
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => l.has_quantifiers() || r.has_quantifiers(),
            FolFormula::Forall(..) | FolFormula::Exists(..) => true,
        }
    }

    /// Immediate subformulas in path order.
    pub fn children(&self) -> Vec<&FolFormula> {
        match self {
            FolFormula::Pred(..) | FolFormula::True | FolFormula::False => Vec::new(),
            FolFormula::Not(c) | FolFormula::Forall(_, c) | FolFormula::Exists(_, c) => vec![c],
            FolFormula::And(l, r)
            | FolFormula::Or(l, r)
            | FolFormula::Implies(l, r)
            | FolFormula::Iff(l, r) => vec![l, r],
        }
    }

    pub(crate) fn child_mut(&mut self, index: usize) -> Option<&mut FolFormula> {
        match (self, index) {
            (FolFormula::Not(c) | FolFormula::Forall(_, c) | FolFormula::Exists(_, c), 0) => {
                Some(c)
            }
            (
                FolFormula::And(l, _)
                | FolFormula::Or(l, _)
                | FolFormula::Implies(l, _)
                | FolFormula::Iff(l, _),
                0,
            ) => Some(l),
            (
                FolFormula::And(_, r)
                | FolFormula::Or(_, r)
                | FolFormula::Implies(_, r)
                | FolFormula::Iff(_, r),
                1,
            ) => Some(r),
            _ => None,
        }
    }

    /// Subformula addressed by `path`, if it exists.
    pub fn at(&self, path: &[usize]) -> Option<&FolFormula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut FolFormula> {
        let mut cur = self;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// Copy of `self` with the subformula at `path` replaced.
    pub fn replace_at(&self, path: &[usize], replacement: FolFormula) -> Option<FolFormula> {
        let mut out = self.clone();
        *out.at_mut(path)? = replacement;
        Some(out)
    }

    /// All valid paths in lexicographic (pre-)order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.collect_paths(&mut cur, &mut out);
        out
    }

    fn collect_paths(&self, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for (i, child) in self.children().into_iter().enumerate() {
            cur.push(i);
            child.collect_paths(cur, out);
            cur.pop();
        }
    }
}

fn var_sort(scope: &[(String, String)], var: &str) -> String {
    scope
        .iter()
        .rev()
        .find(|(v, _)| v == var)
        .map(|(_, s)| s.clone())
        .unwrap_or_else(|| DEFAULT_SORT.to_string())
}

impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render_fol(self))
    }
}

/// Which of the two logics a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    Prop,
    Fol,
}

/// A formula of either logic. Engines that work on both take this.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(PropFormula),
    Fol(FolFormula),
}

impl Formula {
    pub fn logic(&self) -> Logic {
        match self {
            Formula::Prop(_) => Logic::Prop,
            Formula::Fol(_) => Logic::Fol,
        }
    }

    /// First-order view; propositional atoms become nullary predicates.
    pub fn as_fol(&self) -> FolFormula {
        match self {
            Formula::Prop(p) => p.to_fol(),
            Formula::Fol(f) => f.clone(),
        }
    }

    /// Wraps a first-order formula back into `logic`.
    pub fn from_fol(logic: Logic, f: FolFormula) -> Option<Formula> {
        match logic {
            Logic::Prop => f.to_prop().map(Formula::Prop),
            Logic::Fol => Some(Formula::Fol(f)),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Formula::Prop(p) => super::render_prop(p),
            Formula::Fol(f) => super::render_fol(f),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<PropFormula> for Formula {
    fn from(p: PropFormula) -> Self {
        Formula::Prop(p)
    }
}

impl From<FolFormula> for Formula {
    fn from(f: FolFormula) -> Self {
        Formula::Fol(f)
    }
}
