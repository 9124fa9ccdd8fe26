//! Formula syntax for propositional and first-order logic.
//!
//! The grammar, tightest binding first:
//!
//! ```text
//! formula  := implies ("<->" formula)?
//! implies  := or ("->" implies)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := ("!" | "~") unary | quant | primary
//! quant    := ("forall" | "exists") ident (":" ident)? "." formula
//! primary  := "true" | "false" | "(" formula ")" | ident ("(" term ("," term)* ")")?
//! term     := ident | numeral
//! ```
//!
//! Quantifiers and argument lists are first-order only.

mod ast;
mod error;
mod lexer;
mod parser;
mod render;

pub use ast::{Binder, FolFormula, Formula, Logic, PredSig, PropFormula, Term, DEFAULT_SORT};
pub use error::{FormulaError, ParseError};
pub use parser::{parse_fol, parse_prop};
pub use render::{render_fol, render_prop};

/// Parses `text` in the given logic.
pub fn parse(logic: Logic, text: &str) -> Result<Formula, FormulaError> {
    match logic {
        Logic::Prop => Ok(Formula::Prop(parse_prop(text)?)),
        Logic::Fol => Ok(Formula::Fol(parse_fol(text)?)),
    }
}

/// Guesses the logic of `text`: first-order when it mentions a quantifier or
/// applies an identifier to arguments.
pub fn detect_logic(text: &str) -> Logic {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            if word == "forall" || word == "exists" {
                return Logic::Fol;
            }
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'(' {
                return Logic::Fol;
            }
        } else {
            i += 1;
        }
    }
    Logic::Prop
}
