//! A logic workbench: formula parsing and rendering, truth tables and finite
//! model checking, equivalence derivations by rewriting, CNF conversion with a
//! DPLL solver, and positional grid puzzles compiled to SAT.

pub mod formula;
pub mod puzzle;
pub mod rewrite;
pub mod sat;
pub mod semantics;

pub use formula::{
    parse_fol, parse_prop, render_fol, render_prop, Binder, FolFormula, Formula, Logic, PropFormula,
    Term,
};
