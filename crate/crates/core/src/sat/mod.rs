//! Clause-level reasoning: negation normal form, CNF conversion (by distribution
//! and by Tseitin definitions), DIMACS I/O and a deterministic DPLL solver.

mod cnf;
mod dimacs;
mod dpll;
mod naive;
mod nnf;
mod tseitin;

use serde::Serialize;
use thiserror::Error;

pub use cnf::{CnfFormula, Literal};
pub use dimacs::{parse_dimacs, DimacsError};
pub use dpll::{dpll, SatResult, SatStats, SatStatus};
pub use naive::{estimate_clauses, to_cnf_naive, NAIVE_CLAUSE_LIMIT};
pub use nnf::{nnf_fol, nnf_prop, to_nnf};
pub(crate) use nnf::is_nnf;
pub use tseitin::tseitin;

use crate::formula::PropFormula;
use crate::semantics::{Assignment, EquivVerdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CnfError {
    #[error("distribution would produce about {estimate} clauses (limit {limit}); use the Tseitin encoding")]
    BlowupExceeded { estimate: u128, limit: usize },
}

/// Equivalence by refutation: `f1` and `f2` agree everywhere iff the Tseitin
/// encoding of `!(f1 <-> f2)` is unsatisfiable.
pub fn equiv_sat(f1: &PropFormula, f2: &PropFormula) -> EquivVerdict {
    let query = PropFormula::neg(PropFormula::iff(f1.clone(), f2.clone()));
    let cnf = tseitin(&query);
    let result = dpll(&cnf);
    match result.status {
        SatStatus::Unsat => EquivVerdict::equivalent(),
        SatStatus::Sat => {
            let atoms = query.atoms();
            let witness: Assignment = cnf
                .var_map
                .iter()
                .filter(|(_, label)| atoms.contains(*label))
                .map(|(id, label)| (label.clone(), result.value(*id)))
                .collect();
            EquivVerdict::differ(Witness::Assignment(witness))
        }
    }
}
