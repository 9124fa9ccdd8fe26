use std::ffi::OsString;
use std::io::Read;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use logiclab_core::formula::Logic;
use logiclab_core::puzzle::{PuzzleSpec, Uniqueness};
use logiclab_core::rewrite::{Direction, StepVerdict};

use crate::api::{self, Method};
use crate::error::{ApiError, ErrorCode};
use crate::render;
use crate::server::{self, DEFAULT_PORT};

#[derive(Debug, Parser)]
#[command(name = "logiclab", version, about = "Logic workbench: equivalence, derivations, SAT and grid puzzles")]
struct Cli {
    /// Print the JSON result documented for the matching HTTP endpoint.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and pretty-print a formula.
    Parse {
        text: String,
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
    },
    /// Truth table of a propositional formula.
    Tt { text: String },
    /// Decide whether two formulas are equivalent.
    Equiv {
        f1: String,
        f2: String,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Largest domain size per sort for the finite method.
        #[arg(long)]
        max_size: Option<usize>,
        /// Per-sort domain limit, as SORT=N. Repeatable.
        #[arg(long = "size", value_parser = parse_size)]
        sizes: Vec<(String, usize)>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Negation normal form.
    Nnf {
        text: String,
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
    },
    /// Conjunctive normal form, by distribution or Tseitin encoding.
    Cnf {
        text: String,
        #[arg(long)]
        tseitin: bool,
        /// Print DIMACS instead of a formula.
        #[arg(long)]
        dimacs: bool,
    },
    /// Rewrite one formula into another using the rule catalog.
    Derive {
        f1: String,
        f2: String,
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
    },
    /// Check a single rewrite step.
    Step {
        before: String,
        after: String,
        #[arg(long)]
        rule: Option<String>,
        /// Child-index path such as 0.1, or "root".
        #[arg(long, value_parser = parse_path, requires = "rule")]
        path: Option<NodePath>,
        #[arg(long, value_parser = parse_dir, requires = "rule")]
        dir: Option<Direction>,
        #[arg(long, value_parser = parse_logic)]
        logic: Option<Logic>,
    },
    /// List the rewrite rule catalog.
    Rules,
    /// Check a categorical syllogism, e.g. "All M are P" "All S are M" "All S are P".
    Syllogism {
        major: String,
        minor: String,
        conclusion: String,
        /// Assume every term is nonempty.
        #[arg(long)]
        import: bool,
    },
    /// Grid puzzles described by a JSON spec file ("-" reads stdin).
    Puzzle {
        #[command(subcommand)]
        command: PuzzleCommand,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "LOGICLAB_PORT", default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

#[derive(Debug, Subcommand)]
enum PuzzleCommand {
    /// Find a solution.
    Solve { spec: PathBuf },
    /// Decide whether the solution is unique.
    Unique { spec: PathBuf },
    /// Propagate from the full grid and print every deduction.
    Trace {
        spec: PathBuf,
        /// Stop after a single pass.
        #[arg(long)]
        once: bool,
    },
}

fn parse_logic(s: &str) -> Result<Logic, String> {
    match s {
        "prop" => Ok(Logic::Prop),
        "fol" => Ok(Logic::Fol),
        _ => Err("expected prop or fol".into()),
    }
}

fn parse_dir(s: &str) -> Result<Direction, String> {
    s.parse::<Direction>().map_err(|_| "expected ltr or rtl".to_string())
}

fn parse_size(s: &str) -> Result<(String, usize), String> {
    let (sort, n) = s.split_once('=').ok_or("expected SORT=N")?;
    let n = n.trim().parse().map_err(|_| format!("bad size {n}"))?;
    Ok((sort.trim().to_string(), n))
}

/// A single argument holding a whole path, not a list of arguments.
type NodePath = Vec<usize>;

fn parse_path(s: &str) -> Result<NodePath, String> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
    if s.is_empty() || s == "root" {
        return Ok(Vec::new());
    }
    s.split(['.', ',', '/'])
        .map(|p| p.trim().parse().map_err(|_| format!("bad path component {p:?}")))
        .collect()
}

/// What a CLI invocation printed and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn out(code: i32, stdout: String) -> Self {
        CliOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(code: i32, stderr: String) -> Self {
        CliOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Runs the command line `args` (program name first). `serve` blocks.
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutput::out(0, text)
                }
                _ => CliOutput::err(2, text),
            };
        }
    };
    let json = cli.json;
    match cli.command {
        Command::Parse { text, logic } => run(json, api::parse(api::TextRequest { text, logic }), |r| {
            (r.formula.clone(), 0)
        }),
        Command::Tt { text } => run(json, api::truth_table_of(api::TextRequest { text, logic: None }), |r| {
            (table(r), 0)
        }),
        Command::Equiv {
            f1,
            f2,
            method,
            max_size,
            sizes,
            budget,
        } => {
            let req = api::EquivRequest {
                f1,
                f2,
                method,
                max_size,
                sizes: (!sizes.is_empty()).then(|| sizes.into_iter().collect()),
                budget,
            };
            run(json, api::equiv(req), |v| {
                if v.equivalent {
                    let suffix = if v.bounded { " (within the size bounds)" } else { "" };
                    (format!("equivalent{suffix}"), 0)
                } else {
                    let w = v.witness.as_ref().map(render::witness).unwrap_or_default();
                    (format!("not equivalent\nwitness: {w}"), 1)
                }
            })
        }
        Command::Nnf { text, logic } => run(json, api::nnf(api::TextRequest { text, logic }), |r| {
            (r.formula.clone(), 0)
        }),
        Command::Cnf { text, tseitin, dimacs } => {
            run(json, api::cnf(api::CnfRequest { text, tseitin, dimacs }), |r| match &r.dimacs {
                Some(d) => (d.trim_end().to_string(), 0),
                None => (r.formula.clone(), 0),
            })
        }
        Command::Derive { f1, f2, logic } => run(json, api::derive(api::PairRequest { f1, f2, logic }), |d| {
            let mut lines = vec![format!("  {}", d.start)];
            for s in &d.steps {
                lines.push(format!(
                    "= {}    [{} {} at {}]",
                    s.after,
                    s.rule,
                    s.dir,
                    render::path(&s.path)
                ));
            }
            (lines.join("\n"), 0)
        }),
        Command::Step {
            before,
            after,
            rule,
            path,
            dir,
            logic,
        } => {
            let req = api::StepRequest {
                before,
                after,
                rule,
                path,
                dir,
                logic,
            };
            run(json, api::step(req), |v| match v {
                StepVerdict::Accepted {
                    semantic: true, path, ..
                } => (format!("valid: semantically equivalent at {}", render::path(path)), 0),
                StepVerdict::Accepted { rule, path, dir, .. } => {
                    let dir = dir.map(|d| format!(" {d}")).unwrap_or_default();
                    (format!("valid: {rule}{dir} at {}", render::path(path)), 0)
                }
                StepVerdict::Rejected(r) => (format!("invalid: {}", r.message()), 1),
            })
        }
        Command::Rules => run(json, Ok::<_, ApiError>(api::rules()), |rules| {
            let lines: Vec<String> = rules
                .iter()
                .map(|r| format!("{:<26} {}  ==  {}", r.id, r.lhs_text, r.rhs_text))
                .collect();
            (lines.join("\n"), 0)
        }),
        Command::Syllogism {
            major,
            minor,
            conclusion,
            import,
        } => {
            let req = api::SyllogismRequest {
                major,
                minor,
                conclusion,
                import,
            };
            run(json, api::syllogism(req), |v| match &v.counter_model {
                None => ("valid".to_string(), 0),
                Some(m) => (format!("invalid\ncounter-model: {m}"), 1),
            })
        }
        Command::Puzzle { command } => puzzle(json, command),
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(host, port);
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => return CliOutput::err(1, format!("error: {e}\n")),
            };
            eprintln!("listening on http://{addr}");
            match runtime.block_on(server::serve(addr)) {
                Ok(()) => CliOutput::out(0, String::new()),
                Err(e) => CliOutput::err(1, format!("error: cannot serve on {addr}: {e}\n")),
            }
        }
    }
}

fn puzzle(json: bool, command: PuzzleCommand) -> CliOutput {
    let (PuzzleCommand::Solve { spec } | PuzzleCommand::Unique { spec } | PuzzleCommand::Trace { spec, .. }) =
        &command;
    let spec = match load_spec(spec) {
        Ok(s) => s,
        Err(e) => return failure(json, &e),
    };
    match command {
        PuzzleCommand::Solve { .. } => run(json, api::puzzle_solve(api::PuzzleRequest { spec }), |r| match r {
            api::SolveResponse::Solved { solution } => (solution.to_string().trim_end().to_string(), 0),
            api::SolveResponse::Unsatisfiable => ("unsatisfiable".to_string(), 1),
        }),
        PuzzleCommand::Unique { .. } => run(json, api::puzzle_unique(api::PuzzleRequest { spec }), |u| match u {
            Uniqueness::Unique { solution } => (format!("unique\n{}", solution.to_string().trim_end()), 0),
            Uniqueness::Multiple { solution, second } => (
                format!(
                    "multiple solutions, for example\n{}\n\n{}",
                    solution.to_string().trim_end(),
                    second.to_string().trim_end()
                ),
                1,
            ),
            Uniqueness::Unsatisfiable => ("unsatisfiable".to_string(), 1),
        }),
        PuzzleCommand::Trace { once, .. } => {
            let req = api::PropagateRequest {
                spec,
                grid: None,
                fixpoint: !once,
            };
            run(json, api::puzzle_propagate(req), |r| {
                let mut lines: Vec<String> = r
                    .trace
                    .iter()
                    .map(|e| {
                        format!(
                            "[{}] position {}, {}: remove {} ({})",
                            serde_json::to_value(e.rule).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                            e.position,
                            e.category,
                            e.eliminated.join(", "),
                            e.justification
                        )
                    })
                    .collect();
                lines.push(if r.solved { "solved".into() } else { "not solved".into() });
                (lines.join("\n"), 0)
            })
        }
    }
}

fn load_spec(path: &PathBuf) -> Result<PuzzleSpec, ApiError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map(|_| s)
            .map_err(|e| ApiError::malformed(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| ApiError::malformed(format!("cannot read {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| ApiError::malformed(format!("invalid puzzle spec: {e}")))
}

fn failure(json: bool, e: &ApiError) -> CliOutput {
    if json {
        return CliOutput::out(e.code.exit_code(), format!("{}\n", e.envelope()));
    }
    let mut msg = format!("error: {}", e.message);
    if let (Some(pos), Some(field)) = (e.position, &e.field) {
        msg.push_str(&format!(" (in {field}, byte {pos})"));
    }
    if e.code == ErrorCode::InternalError {
        msg.push_str(" (internal)");
    }
    CliOutput::err(e.code.exit_code(), msg + "\n")
}

fn run<R: Serialize>(json: bool, result: Result<R, ApiError>, human: impl Fn(&R) -> (String, i32)) -> CliOutput {
    match result {
        Ok(r) => {
            let (text, code) = human(&r);
            if json {
                let v: Value = serde_json::to_value(&r).expect("responses serialize");
                CliOutput::out(code, format!("{v}\n"))
            } else {
                CliOutput::out(code, text + "\n")
            }
        }
        Err(e) => failure(json, &e),
    }
}

fn table(r: &api::TruthTableResponse) -> String {
    let widths: Vec<usize> = r.atoms.iter().map(|a| a.len()).collect();
    let mut out = String::new();
    for (a, w) in r.atoms.iter().zip(&widths) {
        out.push_str(&format!("{a:<w$} "));
    }
    out.push_str(&format!("| {}\n", r.formula));
    for row in &r.rows {
        for (v, w) in row.values.iter().zip(&widths) {
            out.push_str(&format!("{:<w$} ", if *v { "T" } else { "F" }));
        }
        out.push_str(&format!("| {}\n", if row.value { "T" } else { "F" }));
    }
    out.trim_end().to_string()
}
