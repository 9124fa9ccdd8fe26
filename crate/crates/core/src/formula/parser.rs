use std::collections::HashMap;

use super::ast::{Binder, FolFormula, PropFormula, Term, DEFAULT_SORT};
use super::error::{FormulaError, ParseError};
use super::lexer::{tokenize, Spanned, Tok};

const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Prop,
    Fol,
}

struct PredUse {
    arity: usize,
    sorts: Vec<Option<String>>,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Spanned>,
    pos: usize,
    mode: Mode,
    depth: usize,
    scope: Vec<(String, String)>,
    preds: HashMap<String, PredUse>,
}

/// Parses a propositional formula.
pub fn parse_prop(text: &str) -> Result<PropFormula, ParseError> {
    let mut p = Parser::new(text, Mode::Prop)?;
    let f = p.parse_all().map_err(|e| match e {
        FormulaError::Parse(e) => e,
        // nullary predicates only: arity and sorts cannot conflict
        other => unreachable!("{other}"),
    })?;
    Ok(f.to_prop().expect("propositional mode yields propositional trees"))
}

/// Parses a first-order formula, checking predicate arities, argument sorts and binder scoping.
pub fn parse_fol(text: &str) -> Result<FolFormula, FormulaError> {
    let mut p = Parser::new(text, Mode::Fol)?;
    p.parse_all()
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, mode: Mode) -> Result<Self, ParseError> {
        Ok(Parser {
            text,
            toks: tokenize(text)?,
            pos: 0,
            mode,
            depth: 0,
            scope: Vec::new(),
            preds: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> FormulaError {
        ParseError::at(self.text, self.offset(), expected, &self.peek().describe()).into()
    }

    fn expect(&mut self, tok: Tok) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn parse_all(&mut self) -> Result<FolFormula, FormulaError> {
        let f = self.formula()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error("an operator or end of input"));
        }
        Ok(f)
    }

    fn enter(&mut self) -> Result<(), FormulaError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(&format!("nesting depth at most {MAX_DEPTH}")));
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<FolFormula, FormulaError> {
        self.enter()?;
        let lhs = self.implication()?;
        let out = if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.formula()?;
            FolFormula::iff(lhs, rhs)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn implication(&mut self) -> Result<FolFormula, FormulaError> {
        self.enter()?;
        let lhs = self.disjunction()?;
        let out = if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            FolFormula::implies(lhs, rhs)
        } else {
            lhs
        };
        self.depth -= 1;
        Ok(out)
    }

    fn disjunction(&mut self) -> Result<FolFormula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = FolFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<FolFormula, FormulaError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = FolFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<FolFormula, FormulaError> {
        self.enter()?;
        let out = match self.peek().clone() {
            Tok::Not => {
                self.bump();
                FolFormula::neg(self.unary()?)
            }
            Tok::Forall | Tok::Exists if self.mode == Mode::Fol => self.quantifier()?,
            _ => self.primary()?,
        };
        self.depth -= 1;
        Ok(out)
    }

    fn quantifier(&mut self) -> Result<FolFormula, FormulaError> {
        let universal = self.bump().tok == Tok::Forall;
        let var_offset = self.offset();
        let var = match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                v
            }
            _ => return Err(self.error("a variable name")),
        };
        if self.scope.iter().any(|(v, _)| *v == var) {
            return Err(ParseError::at(
                self.text,
                var_offset,
                "a variable not bound by an enclosing quantifier",
                &format!("rebound variable '{var}'"),
            )
            .into());
        }
        let sort = if *self.peek() == Tok::Colon {
            self.bump();
            match self.peek().clone() {
                Tok::Ident(s) => {
                    self.bump();
                    s
                }
                _ => return Err(self.error("a sort name")),
            }
        } else {
            DEFAULT_SORT.to_string()
        };
        self.expect(Tok::Dot)?;
        self.scope.push((var.clone(), sort.clone()));
        let body = self.formula();
        self.scope.pop();
        let binder = Binder { var, sort };
        let body = body?;
        Ok(if universal {
            FolFormula::forall(binder, body)
        } else {
            FolFormula::exists(binder, body)
        })
    }

    fn primary(&mut self) -> Result<FolFormula, FormulaError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(FolFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(FolFormula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let offset = self.offset();
                self.bump();
                let args = if self.mode == Mode::Fol && *self.peek() == Tok::LParen {
                    self.bump();
                    self.terms()?
                } else {
                    Vec::new()
                };
                self.record_pred(&name, &args, offset)?;
                Ok(FolFormula::Pred(name, args))
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn terms(&mut self) -> Result<Vec<Term>, FormulaError> {
        let mut out = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(v) => {
                    self.bump();
                    out.push(Term::Var(v));
                }
                Tok::Number(n) => {
                    self.bump();
                    out.push(Term::Const(n));
                }
                _ => return Err(self.error("a variable or numeral")),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.error("',' or ')'")),
            }
        }
    }

    fn record_pred(&mut self, name: &str, args: &[Term], offset: usize) -> Result<(), FormulaError> {
        let sorts: Vec<Option<String>> = args
            .iter()
            .map(|a| match a {
                Term::Var(v) => Some(
                    self.scope
                        .iter()
                        .rev()
                        .find(|(b, _)| b == v)
                        .map(|(_, s)| s.clone())
                        .unwrap_or_else(|| DEFAULT_SORT.to_string()),
                ),
                Term::Const(_) => None,
            })
            .collect();
        match self.preds.get_mut(name) {
            None => {
                self.preds.insert(
                    name.to_string(),
                    PredUse {
                        arity: args.len(),
                        sorts,
                    },
                );
                Ok(())
            }
            Some(known) if known.arity != args.len() => Err(FormulaError::ArityMismatch {
                predicate: name.to_string(),
                first: known.arity,
                second: args.len(),
                offset,
            }),
            Some(known) => {
                for (i, (slot, new)) in known.sorts.iter_mut().zip(sorts).enumerate() {
                    match (slot.as_ref(), new) {
                        (Some(a), Some(b)) if *a != b => {
                            return Err(FormulaError::SortMismatch {
                                predicate: name.to_string(),
                                position: i,
                                first: a.clone(),
                                second: b,
                                offset,
                            })
                        }
                        (None, Some(b)) => *slot = Some(b),
                        _ => {}
                    }
                }
                Ok(())
            }
        }
    }
}
