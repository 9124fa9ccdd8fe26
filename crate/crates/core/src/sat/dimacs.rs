use std::fmt::Write as _;

use thiserror::Error;

use super::{CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed 'p cnf' header")]
    Header(usize),
    #[error("line {line}: bad token '{token}'")]
    Token { line: usize, token: String },
    #[error("variable {var} exceeds declared count {declared}")]
    VarOutOfRange { var: u32, declared: u32 },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
}

impl CnfFormula {
    /// DIMACS text: `c map <id> <label>` comments, then `p cnf <vars> <clauses>`,
    /// then one zero-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (id, label) in &self.var_map {
            let _ = writeln!(out, "c map {id} {label}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.to_int());
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut cnf = CnfFormula::default();
    let mut declared: Option<usize> = None;
    let mut current: Vec<Literal> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line == "%" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let mut parts = rest.trim_start().splitn(3, ' ');
                if parts.next() == Some("map") {
                    if let (Some(id), Some(label)) = (parts.next(), parts.next()) {
                        if let Ok(id) = id.parse::<u32>() {
                            cnf.var_map.insert(id, label.to_string());
                        }
                    }
                }
                continue;
            }
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] if declared.is_none() => {
                    cnf.num_vars = v.parse().map_err(|_| DimacsError::Header(lineno))?;
                    declared = Some(c.parse().map_err(|_| DimacsError::Header(lineno))?);
                }
                _ => return Err(DimacsError::Header(lineno)),
            }
            continue;
        }
        if declared.is_none() {
            return Err(DimacsError::Header(lineno));
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| DimacsError::Token {
                line: lineno,
                token: tok.to_string(),
            })?;
            if v == 0 {
                cnf.clauses.push(std::mem::take(&mut current));
                continue;
            }
            let lit = Literal::from_int(v).ok_or_else(|| DimacsError::Token {
                line: lineno,
                token: tok.to_string(),
            })?;
            if lit.var > cnf.num_vars {
                return Err(DimacsError::VarOutOfRange {
                    var: lit.var,
                    declared: cnf.num_vars,
                });
            }
            current.push(lit);
        }
    }
    let declared = declared.ok_or(DimacsError::Header(0))?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if declared != cnf.clauses.len() {
        return Err(DimacsError::ClauseCount {
            declared,
            found: cnf.clauses.len(),
        });
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CnfFormula {
        let mut cnf = CnfFormula::new(3);
        cnf.var_map.insert(1, "A".into());
        cnf.var_map.insert(3, "def A & B".into());
        cnf.add_clause([Literal::neg(1), Literal::pos(3)]);
        cnf.add_clause([Literal::pos(2)]);
        cnf
    }

    #[test]
    fn exact_text() {
        assert_eq!(
            sample().to_dimacs(),
            "c map 1 A\nc map 3 def A & B\np cnf 3 2\n-1 3 0\n2 0\n"
        );
    }

    #[test]
    fn round_trip() {
        let cnf = sample();
        assert_eq!(parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn clauses_may_span_lines() {
        let cnf = parse_dimacs("c plain comment\np cnf 2 2\n1 -2\n0 2 0\n").unwrap();
        assert_eq!(
            cnf.clauses,
            vec![vec![Literal::pos(1), Literal::neg(2)], vec![Literal::pos(2)]]
        );
    }

    #[test]
    fn empty_clause_survives() {
        let cnf = parse_dimacs("p cnf 0 1\n0\n").unwrap();
        assert_eq!(cnf.clauses, vec![Vec::<Literal>::new()]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("1 2 0\n"), Err(DimacsError::Header(1)));
        assert_eq!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::VarOutOfRange { var: 2, declared: 1 })
        );
        assert_eq!(parse_dimacs("p cnf 1 1\n1\n"), Err(DimacsError::Unterminated));
        assert_eq!(
            parse_dimacs("p cnf 1 2\n1 0\n"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        );
        assert!(matches!(parse_dimacs("p cnf 1 1\nx 0\n"), Err(DimacsError::Token { .. })));
    }
}
