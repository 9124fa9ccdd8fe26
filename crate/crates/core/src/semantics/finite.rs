use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{EquivVerdict, FiniteModel, SemanticsError, Witness};
use crate::formula::{FolFormula, PredSig, Term};

pub const DEFAULT_MAX_SIZE: usize = 4;
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Limits for finite-model enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Largest domain size per sort; sorts not listed use `default_max`.
    pub max_sizes: BTreeMap<String, usize>,
    pub default_max: usize,
    /// Total number of interpretations that may be enumerated.
    pub budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_sizes: BTreeMap::new(),
            default_max: DEFAULT_MAX_SIZE,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Bounds {
    pub fn uniform(max: usize) -> Self {
        Bounds {
            default_max: max,
            ..Bounds::default()
        }
    }

    pub fn with_size(mut self, sort: &str, max: usize) -> Self {
        self.max_sizes.insert(sort.to_string(), max);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn max_for(&self, sort: &str) -> usize {
        self.max_sizes.get(sort).copied().unwrap_or(self.default_max)
    }
}

/// Bounded equivalence of two sentences: every interpretation with sort sizes
/// from 1 up to the bounds is tried, smallest sizes first, predicate tables
/// counted in binary. The witness is the first model where the two disagree.
pub fn equiv_finite(
    f1: &FolFormula,
    f2: &FolFormula,
    bounds: &Bounds,
) -> Result<EquivVerdict, SemanticsError> {
    let found = search(&[f1, f2], bounds, |v| v[0] != v[1])?;
    Ok(EquivVerdict {
        equivalent: found.is_none(),
        witness: found.map(Witness::Model),
        bounded: true,
    })
}

/// First model within `bounds` in which the sentence `f` holds.
pub fn find_model(f: &FolFormula, bounds: &Bounds) -> Result<Option<FiniteModel>, SemanticsError> {
    search(&[f], bounds, |v| v[0])
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Slot(usize),
    Const(usize),
}

enum Node {
    Pred { pred: usize, args: Vec<Arg> },
    Const(bool),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Quant { universal: bool, sort: usize, body: Box<Node> },
}

struct Universe {
    sorts: Vec<String>,
    preds: Vec<PredSig>,
    /// Per sort, the smallest size that contains every constant used at that sort.
    min_sizes: Vec<usize>,
}

impl Universe {
    fn new(formulas: &[&FolFormula]) -> Self {
        let mut sorts = BTreeSet::new();
        let mut preds = BTreeSet::new();
        for f in formulas {
            sorts.extend(f.sorts());
            preds.extend(f.signatures().into_values());
        }
        let sorts: Vec<String> = sorts.into_iter().collect();
        Universe {
            min_sizes: vec![1; sorts.len()],
            sorts,
            preds: preds.into_iter().collect(),
        }
    }

    fn sort_index(&self, sort: &str) -> usize {
        self.sorts.iter().position(|s| s == sort).expect("sort collected")
    }

    fn compile(&mut self, f: &FolFormula, sigs: &BTreeMap<String, PredSig>, scope: &mut Vec<String>) -> Node {
        let c = |g: &FolFormula, u: &mut Universe, scope: &mut Vec<String>| Box::new(u.compile(g, sigs, scope));
        match f {
            FolFormula::Pred(name, args) => {
                let sig = &sigs[name];
                let pred = self.preds.iter().position(|p| p == sig).expect("signature collected");
                let args = args
                    .iter()
                    .zip(&sig.sorts)
                    .map(|(a, sort)| match a {
                        Term::Var(v) => {
                            Arg::Slot(scope.iter().rposition(|s| s == v).expect("sentence"))
                        }
                        Term::Const(k) => {
                            let k: usize = k.parse().unwrap_or(usize::MAX - 1);
                            let si = self.sort_index(sort);
                            self.min_sizes[si] = self.min_sizes[si].max(k.saturating_add(1));
                            Arg::Const(k)
                        }
                    })
                    .collect();
                Node::Pred { pred, args }
            }
            FolFormula::True => Node::Const(true),
            FolFormula::False => Node::Const(false),
            FolFormula::Not(x) => Node::Not(c(x, self, scope)),
            FolFormula::And(l, r) => Node::And(c(l, self, scope), c(r, self, scope)),
            FolFormula::Or(l, r) => Node::Or(c(l, self, scope), c(r, self, scope)),
            FolFormula::Implies(l, r) => Node::Implies(c(l, self, scope), c(r, self, scope)),
            FolFormula::Iff(l, r) => Node::Iff(c(l, self, scope), c(r, self, scope)),
            FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
                let sort = self.sort_index(&b.sort);
                scope.push(b.var.clone());
                let body = c(body, self, scope);
                scope.pop();
                Node::Quant {
                    universal: matches!(f, FolFormula::Forall(..)),
                    sort,
                    body,
                }
            }
        }
    }
}

/// Bit layout of all predicate tables for one choice of sort sizes.
struct Layout {
    sizes: Vec<usize>,
    offsets: Vec<u32>,
    radices: Vec<Vec<usize>>,
    bits: u32,
}

impl Layout {
    fn new(u: &Universe, sizes: Vec<usize>) -> Option<Self> {
        let mut offsets = Vec::with_capacity(u.preds.len());
        let mut radices = Vec::with_capacity(u.preds.len());
        let mut bits: u64 = 0;
        for p in &u.preds {
            offsets.push(bits as u32);
            let r: Vec<usize> = p.sorts.iter().map(|s| sizes[u.sort_index(s)]).collect();
            let count: u64 = r.iter().map(|&n| n as u64).product();
            bits += count;
            if bits >= 64 {
                return None;
            }
            radices.push(r);
        }
        Some(Layout {
            sizes,
            offsets,
            radices,
            bits: bits as u32,
        })
    }

    fn eval(&self, n: &Node, model: u64, env: &mut Vec<usize>) -> bool {
        match n {
            Node::Pred { pred, args } => {
                let mut idx = 0usize;
                for (a, radix) in args.iter().zip(&self.radices[*pred]) {
                    let v = match a {
                        Arg::Slot(s) => env[*s],
                        Arg::Const(k) => *k,
                    };
                    idx = idx * radix + v;
                }
                (model >> (self.offsets[*pred] as usize + idx)) & 1 == 1
            }
            Node::Const(v) => *v,
            Node::Not(c) => !self.eval(c, model, env),
            Node::And(l, r) => self.eval(l, model, env) && self.eval(r, model, env),
            Node::Or(l, r) => self.eval(l, model, env) || self.eval(r, model, env),
            Node::Implies(l, r) => !self.eval(l, model, env) || self.eval(r, model, env),
            Node::Iff(l, r) => self.eval(l, model, env) == self.eval(r, model, env),
            Node::Quant { universal, sort, body } => {
                for i in 0..self.sizes[*sort] {
                    env.push(i);
                    let v = self.eval(body, model, env);
                    env.pop();
                    if v != *universal {
                        return !universal;
                    }
                }
                *universal
            }
        }
    }

    fn decode(&self, u: &Universe, model: u64) -> FiniteModel {
        let sort_sizes = u.sorts.iter().cloned().zip(self.sizes.iter().copied()).collect();
        let tables = u
            .preds
            .iter()
            .enumerate()
            .map(|(p, sig)| {
                let radix = &self.radices[p];
                let tuples = radix
                    .iter()
                    .map(|&n| 0..n)
                    .multi_cartesian_product()
                    .enumerate()
                    .filter(|(i, _)| (model >> (self.offsets[p] as usize + i)) & 1 == 1)
                    .map(|(_, t)| t)
                    .collect::<BTreeSet<Vec<usize>>>();
                // nullary predicates: multi_cartesian_product of nothing is empty
                let tuples = if radix.is_empty() && (model >> self.offsets[p]) & 1 == 1 {
                    BTreeSet::from([Vec::new()])
                } else {
                    tuples
                };
                (sig.clone(), tuples)
            })
            .collect();
        FiniteModel { sort_sizes, tables }
    }
}

fn size_combos(u: &Universe, bounds: &Bounds) -> Vec<Vec<usize>> {
    let mut combos: Vec<Vec<usize>> = if u.sorts.is_empty() {
        vec![Vec::new()]
    } else {
        u.sorts
            .iter()
            .map(|s| 1..=bounds.max_for(s).max(1))
            .multi_cartesian_product()
            .collect()
    };
    combos.retain(|c| c.iter().zip(&u.min_sizes).all(|(n, m)| n >= m));
    combos.sort_by_key(|c| (c.iter().sum::<usize>(), c.clone()));
    combos
}

fn describe_sizes(u: &Universe, sizes: &[usize]) -> String {
    u.sorts
        .iter()
        .zip(sizes)
        .map(|(s, n)| format!("{s}={n}"))
        .join(",")
}

fn search(
    formulas: &[&FolFormula],
    bounds: &Bounds,
    accept: impl Fn(&[bool]) -> bool,
) -> Result<Option<FiniteModel>, SemanticsError> {
    for f in formulas {
        let free = f.free_variables();
        if !free.is_empty() {
            return Err(SemanticsError::NotASentence(
                free.into_iter().map(|(v, _)| v).join(", "),
            ));
        }
    }
    let mut u = Universe::new(formulas);
    let nodes: Vec<Node> = formulas
        .iter()
        .map(|f| u.compile(f, &f.signatures(), &mut Vec::new()))
        .collect();
    let mut enumerated: u64 = 0;
    let mut values = vec![false; nodes.len()];
    let mut env = Vec::new();
    for sizes in size_combos(&u, bounds) {
        let exceeded = |enumerated| SemanticsError::BudgetExceeded {
            budget: bounds.budget,
            enumerated,
            reached: describe_sizes(&u, &sizes),
        };
        let Some(layout) = Layout::new(&u, sizes.clone()) else {
            return Err(exceeded(enumerated));
        };
        let count = 1u64 << layout.bits;
        let allowed = bounds.budget.saturating_sub(enumerated).min(count);
        for model in 0..allowed {
            for (v, n) in values.iter_mut().zip(&nodes) {
                *v = layout.eval(n, model, &mut env);
            }
            if accept(&values) {
                return Ok(Some(layout.decode(&u, model)));
            }
        }
        enumerated += allowed;
        if allowed < count {
            return Err(exceeded(enumerated));
        }
    }
    Ok(None)
}
