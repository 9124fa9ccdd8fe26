//! Request and response types for every endpoint, and the dispatcher shared by
//! the HTTP service and the CLI's `--json` mode.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use logiclab_core::formula::{self, detect_logic, FolFormula, Formula, Logic, PropFormula};
use logiclab_core::puzzle::{
    check_uniqueness, propagate_fixpoint, propagate_step, solve_puzzle, PropagationTrace, PuzzleGrid, PuzzleSpec,
    Solution, Uniqueness,
};
use logiclab_core::rewrite::{derive_equiv, diff_path, rule_catalog, validate_step, Derivation, Direction, RewriteRule, StepClaim, StepVerdict};
use logiclab_core::sat::{equiv_sat, to_cnf_naive, to_nnf, tseitin};
use logiclab_core::semantics::{
    check_syllogism, equiv_finite, equiv_tt, truth_table, Bounds, EquivVerdict, Statement, SyllogismVerdict,
};

use crate::error::{ApiError, ErrorCode};

/// Endpoint names, without the `/api/` prefix.
pub const ENDPOINTS: [&str; 13] = [
    "parse",
    "truth-table",
    "equiv",
    "nnf",
    "cnf",
    "derive",
    "step/validate",
    "rules",
    "syllogism",
    "puzzle/solve",
    "puzzle/unique",
    "puzzle/propagate",
    "health",
];

/// Runs `endpoint` on a JSON request body and returns the `result` payload.
pub fn dispatch(endpoint: &str, body: Value) -> Result<Value, ApiError> {
    let body = if body.is_null() { Value::Object(Default::default()) } else { body };
    match endpoint {
        "parse" => respond(parse(request(body)?)),
        "truth-table" => respond(truth_table_of(request(body)?)),
        "equiv" => respond(equiv(request(body)?)),
        "nnf" => respond(nnf(request(body)?)),
        "cnf" => respond(cnf(request(body)?)),
        "derive" => respond(derive(request(body)?)),
        "step/validate" => respond(step(request(body)?)),
        "rules" => respond(Ok(rules())),
        "syllogism" => respond(syllogism(request(body)?)),
        "puzzle/solve" => respond(puzzle_solve(request(body)?)),
        "puzzle/unique" => respond(puzzle_unique(request(body)?)),
        "puzzle/propagate" => respond(puzzle_propagate(request(body)?)),
        "health" => Ok(serde_json::json!({ "status": "ok" })),
        other => Err(ApiError::new(
            ErrorCode::UnknownEndpoint,
            format!("no endpoint /api/{other}"),
        )),
    }
}

fn request<T: DeserializeOwned>(body: Value) -> Result<T, ApiError> {
    serde_json::from_value(body).map_err(|e| ApiError::malformed(e.to_string()))
}

fn respond<T: Serialize>(r: Result<T, ApiError>) -> Result<Value, ApiError> {
    r.map(|v| serde_json::to_value(v).expect("responses serialize"))
}

fn parse_in(logic: Logic, text: &str, field: &str) -> Result<Formula, ApiError> {
    formula::parse(logic, text).map_err(|e| ApiError::from(e).in_field(field))
}

fn parse_auto(logic: Option<Logic>, text: &str, field: &str) -> Result<Formula, ApiError> {
    parse_in(logic.unwrap_or_else(|| detect_logic(text)), text, field)
}

fn parse_prop_only(text: &str, field: &str) -> Result<PropFormula, ApiError> {
    if detect_logic(text) == Logic::Fol {
        return Err(ApiError::new(
            ErrorCode::LogicMismatch,
            format!("{field} is first-order; this operation needs a propositional formula"),
        )
        .in_field(field));
    }
    match parse_in(Logic::Prop, text, field)? {
        Formula::Prop(p) => Ok(p),
        Formula::Fol(_) => unreachable!("propositional parser returns propositional formulas"),
    }
}

/// Parses a pair in one logic: first-order if either side is.
fn parse_pair(logic: Option<Logic>, f1: &str, f2: &str) -> Result<(Formula, Formula), ApiError> {
    let logic = logic.unwrap_or_else(|| {
        if detect_logic(f1) == Logic::Fol || detect_logic(f2) == Logic::Fol {
            Logic::Fol
        } else {
            Logic::Prop
        }
    });
    Ok((parse_in(logic, f1, "f1")?, parse_in(logic, f2, "f2")?))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TextRequest {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<Logic>,
}

/// One node of a formula's syntax tree, addressed by its child-index path.
#[derive(Debug, Clone, Serialize)]
pub struct TreeNode {
    pub path: Vec<usize>,
    pub kind: &'static str,
    pub label: String,
    pub text: String,
    pub children: Vec<TreeNode>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParseResponse {
    pub logic: Logic,
    pub formula: String,
    pub tree: TreeNode,
}

fn tree(logic: Logic, f: &FolFormula, path: &mut Vec<usize>) -> TreeNode {
    let (kind, label, kids): (&'static str, String, Vec<&FolFormula>) = match f {
        FolFormula::Pred(name, args) if args.is_empty() => ("atom", name.clone(), vec![]),
        FolFormula::Pred(name, _) => ("pred", name.clone(), vec![]),
        FolFormula::True => ("true", "true".into(), vec![]),
        FolFormula::False => ("false", "false".into(), vec![]),
        FolFormula::Not(c) => ("not", "!".into(), vec![c]),
        FolFormula::And(l, r) => ("and", "&".into(), vec![l, r]),
        FolFormula::Or(l, r) => ("or", "|".into(), vec![l, r]),
        FolFormula::Implies(l, r) => ("implies", "->".into(), vec![l, r]),
        FolFormula::Iff(l, r) => ("iff", "<->".into(), vec![l, r]),
        FolFormula::Forall(b, body) => ("forall", binder_label("forall", &b.var, &b.sort), vec![body]),
        FolFormula::Exists(b, body) => ("exists", binder_label("exists", &b.var, &b.sort), vec![body]),
    };
    let text = Formula::from_fol(logic, f.clone())
        .map(|g| g.render())
        .unwrap_or_else(|| f.to_string());
    let children = kids
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            path.push(i);
            let node = tree(logic, k, path);
            path.pop();
            node
        })
        .collect();
    TreeNode {
        path: path.clone(),
        kind,
        label,
        text,
        children,
    }
}

fn binder_label(q: &str, var: &str, sort: &str) -> String {
    if sort == formula::DEFAULT_SORT {
        format!("{q} {var}")
    } else {
        format!("{q} {var}:{sort}")
    }
}

pub fn parse(req: TextRequest) -> Result<ParseResponse, ApiError> {
    let f = parse_auto(req.logic, &req.text, "text")?;
    Ok(ParseResponse {
        logic: f.logic(),
        formula: f.render(),
        tree: tree(f.logic(), &f.as_fol(), &mut Vec::new()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub values: Vec<bool>,
    pub value: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TruthTableResponse {
    pub formula: String,
    pub atoms: Vec<String>,
    pub rows: Vec<TableRow>,
}

pub fn truth_table_of(req: TextRequest) -> Result<TruthTableResponse, ApiError> {
    let f = parse_prop_only(&req.text, "text")?;
    let t = truth_table(&f)?;
    let rows = t
        .rows
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let a = t.assignment(i);
            TableRow {
                values: t.atoms.iter().map(|x| a[x]).collect(),
                value,
            }
        })
        .collect();
    Ok(TruthTableResponse {
        formula: formula::render_prop(&f),
        atoms: t.atoms,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tt,
    Sat,
    Finite,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivRequest {
    pub f1: String,
    pub f2: String,
    /// Defaults to `sat` for propositional input and `finite` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    /// Largest domain size for every sort (`finite` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    /// Per-sort overrides of `max_size`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<BTreeMap<String, usize>>,
    /// Cap on enumerated interpretations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

/// Largest domain size accepted from a request.
const MAX_REQUEST_SIZE: usize = 16;

pub fn equiv(req: EquivRequest) -> Result<EquivVerdict, ApiError> {
    let method = req.method.unwrap_or_else(|| {
        if detect_logic(&req.f1) == Logic::Fol || detect_logic(&req.f2) == Logic::Fol {
            Method::Finite
        } else {
            Method::Sat
        }
    });
    match method {
        Method::Tt | Method::Sat => {
            let f1 = parse_prop_only(&req.f1, "f1")?;
            let f2 = parse_prop_only(&req.f2, "f2")?;
            if method == Method::Tt {
                Ok(equiv_tt(&f1, &f2)?)
            } else {
                Ok(equiv_sat(&f1, &f2))
            }
        }
        Method::Finite => {
            let f1 = parse_in(Logic::Fol, &req.f1, "f1")?.as_fol();
            let f2 = parse_in(Logic::Fol, &req.f2, "f2")?.as_fol();
            let mut bounds = Bounds::default();
            let sizes = req.max_size.iter().chain(req.sizes.iter().flat_map(|s| s.values()));
            for &n in sizes {
                if n == 0 || n > MAX_REQUEST_SIZE {
                    return Err(ApiError::malformed(format!(
                        "domain sizes must be between 1 and {MAX_REQUEST_SIZE}"
                    )));
                }
            }
            if let Some(n) = req.max_size {
                bounds = Bounds::uniform(n);
            }
            for (sort, &n) in req.sizes.iter().flatten() {
                bounds = bounds.with_size(sort, n);
            }
            if let Some(b) = req.budget {
                bounds = bounds.with_budget(b);
            }
            Ok(equiv_finite(&f1, &f2, &bounds)?)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulaResponse {
    pub logic: Logic,
    pub formula: String,
}

pub fn nnf(req: TextRequest) -> Result<FormulaResponse, ApiError> {
    let f = to_nnf(&parse_auto(req.logic, &req.text, "text")?);
    Ok(FormulaResponse {
        logic: f.logic(),
        formula: f.render(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CnfRequest {
    pub text: String,
    #[serde(default)]
    pub tseitin: bool,
    #[serde(default)]
    pub dimacs: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CnfResponse {
    /// Clauses rendered as a formula over the variable labels.
    pub formula: String,
    pub num_vars: u32,
    /// Clauses as signed variable ids.
    pub clauses: Vec<Vec<i64>>,
    pub var_map: BTreeMap<u32, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimacs: Option<String>,
}

pub fn cnf(req: CnfRequest) -> Result<CnfResponse, ApiError> {
    let f = parse_prop_only(&req.text, "text")?;
    let cnf = if req.tseitin { tseitin(&f) } else { to_cnf_naive(&f)? };
    Ok(CnfResponse {
        formula: cnf.to_string(),
        num_vars: cnf.num_vars,
        clauses: cnf
            .clauses
            .iter()
            .map(|c| c.iter().map(|l| l.to_int()).collect())
            .collect(),
        dimacs: req.dimacs.then(|| cnf.to_dimacs()),
        var_map: cnf.var_map,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairRequest {
    pub f1: String,
    pub f2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<Logic>,
}

pub fn derive(req: PairRequest) -> Result<Derivation, ApiError> {
    let (f1, f2) = parse_pair(req.logic, &req.f1, &req.f2)?;
    Ok(derive_equiv(&f1, &f2)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRequest {
    pub before: String,
    pub after: String,
    /// Claimed rule id; when absent every rule and position is tried.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// Claimed position; defaults to the smallest subtree containing every change.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    /// Claimed direction; when absent both are tried.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logic: Option<Logic>,
}

pub fn step(req: StepRequest) -> Result<StepVerdict, ApiError> {
    if req.rule.is_none() && (req.path.is_some() || req.dir.is_some()) {
        return Err(ApiError::malformed("path and dir need a rule"));
    }
    let (before, after) = parse_pair(req.logic, &req.before, &req.after).map_err(|e| {
        let field = match e.field.as_deref() {
            Some("f1") => "before",
            _ => "after",
        };
        e.in_field(field)
    })?;
    let Some(rule) = req.rule else {
        return Ok(validate_step(&before, &after, None));
    };
    let path = req
        .path
        .unwrap_or_else(|| diff_path(&before.as_fol(), &after.as_fol()));
    let dirs = match req.dir {
        Some(d) => vec![d],
        None => vec![Direction::LeftToRight, Direction::RightToLeft],
    };
    let mut first = None;
    for dir in dirs {
        let claim = StepClaim {
            rule: rule.clone(),
            path: path.clone(),
            dir,
        };
        let verdict = validate_step(&before, &after, Some(&claim));
        if verdict.is_accepted() {
            return Ok(verdict);
        }
        first.get_or_insert(verdict);
    }
    Ok(first.expect("at least one direction tried"))
}

pub fn rules() -> &'static [RewriteRule] {
    rule_catalog()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyllogismRequest {
    pub major: String,
    pub minor: String,
    pub conclusion: String,
    /// Assume every term names a nonempty class.
    #[serde(default)]
    pub import: bool,
}

fn statement(text: &str, field: &str) -> Result<Statement, ApiError> {
    text.parse::<Statement>()
        .map_err(|e| ApiError::from(e).in_field(field))
}

pub fn syllogism(req: SyllogismRequest) -> Result<SyllogismVerdict, ApiError> {
    let major = statement(&req.major, "major")?;
    let minor = statement(&req.minor, "minor")?;
    let conclusion = statement(&req.conclusion, "conclusion")?;
    Ok(check_syllogism(&major, &minor, &conclusion, req.import)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PuzzleRequest {
    pub spec: PuzzleSpec,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SolveResponse {
    Solved { solution: Solution },
    Unsatisfiable,
}

pub fn puzzle_solve(req: PuzzleRequest) -> Result<SolveResponse, ApiError> {
    Ok(match solve_puzzle(&req.spec)? {
        Some(solution) => SolveResponse::Solved { solution },
        None => SolveResponse::Unsatisfiable,
    })
}

pub fn puzzle_unique(req: PuzzleRequest) -> Result<Uniqueness, ApiError> {
    Ok(check_uniqueness(&req.spec)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropagateRequest {
    pub spec: PuzzleSpec,
    /// Candidate values per position and category; the full grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Vec<Vec<String>>>>,
    /// Repeat until nothing changes instead of a single pass.
    #[serde(default)]
    pub fixpoint: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropagateResponse {
    pub grid: Vec<Vec<Vec<String>>>,
    pub trace: PropagationTrace,
    pub changed: bool,
    pub solved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
}

pub fn puzzle_propagate(req: PropagateRequest) -> Result<PropagateResponse, ApiError> {
    let spec = &req.spec;
    spec.validate()?;
    let grid = match &req.grid {
        Some(names) => PuzzleGrid::from_names(spec, names)?,
        None => PuzzleGrid::full(spec),
    };
    let (next, trace, rounds) = if req.fixpoint {
        let (g, t, r) = propagate_fixpoint(&grid, spec)?;
        (g, t, Some(r))
    } else {
        let (g, t) = propagate_step(&grid, spec)?;
        (g, t, None)
    };
    Ok(PropagateResponse {
        grid: next.to_names(spec),
        changed: next != grid,
        solved: next.is_solved(),
        trace,
        rounds,
    })
}
