use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Assignment, EquivVerdict, SemanticsError, Witness};
use crate::formula::PropFormula;

/// Largest atom count for which a truth table is built.
pub const MAX_TABLE_ATOMS: usize = 20;

/// Classical evaluation of `f` under `a`.
pub fn eval_prop(f: &PropFormula, a: &Assignment) -> Result<bool, SemanticsError> {
    Ok(match f {
        PropFormula::Atom(name) => *a
            .get(name)
            .ok_or_else(|| SemanticsError::MissingAtom(name.clone()))?,
        PropFormula::True => true,
        PropFormula::False => false,
        PropFormula::Not(c) => !eval_prop(c, a)?,
        PropFormula::And(l, r) => eval_prop(l, a)? && eval_prop(r, a)?,
        PropFormula::Or(l, r) => eval_prop(l, a)? || eval_prop(r, a)?,
        PropFormula::Implies(l, r) => !eval_prop(l, a)? || eval_prop(r, a)?,
        PropFormula::Iff(l, r) => eval_prop(l, a)? == eval_prop(r, a)?,
    })
}

/// Rows of a truth table. Row `k` gives atom `i` the bit of `k` at position
/// `n - 1 - i`: the first atom is the most significant bit and row 0 is all-false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    pub atoms: Vec<String>,
    pub rows: Vec<bool>,
}

impl TruthTable {
    pub fn assignment(&self, row: usize) -> Assignment {
        row_assignment(&self.atoms, row as u64)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widths: Vec<usize> = self.atoms.iter().map(|a| a.len().max(1)).collect();
        for (a, w) in self.atoms.iter().zip(&widths) {
            write!(f, "{a:<w$} ")?;
        }
        writeln!(f, "| value")?;
        for (row, value) in self.rows.iter().enumerate() {
            for (i, w) in widths.iter().enumerate() {
                let bit = bit_of(row as u64, self.atoms.len(), i);
                write!(f, "{:<w$} ", if bit { "T" } else { "F" })?;
            }
            writeln!(f, "| {}", if *value { "T" } else { "F" })?;
        }
        Ok(())
    }
}

fn bit_of(row: u64, n: usize, i: usize) -> bool {
    (row >> (n - 1 - i)) & 1 == 1
}

fn row_assignment(atoms: &[String], row: u64) -> Assignment {
    atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), bit_of(row, atoms.len(), i)))
        .collect()
}

/// A formula with atoms replaced by bit positions in a row index.
enum Compiled {
    Bit(u32),
    Const(bool),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn new(f: &PropFormula, atoms: &[String]) -> Self {
        let n = atoms.len();
        let c = |g: &PropFormula| Box::new(Compiled::new(g, atoms));
        match f {
            PropFormula::Atom(name) => {
                let i = atoms.iter().position(|a| a == name).expect("atom list covers formula");
                Compiled::Bit((n - 1 - i) as u32)
            }
            PropFormula::True => Compiled::Const(true),
            PropFormula::False => Compiled::Const(false),
            PropFormula::Not(x) => Compiled::Not(c(x)),
            PropFormula::And(l, r) => Compiled::And(c(l), c(r)),
            PropFormula::Or(l, r) => Compiled::Or(c(l), c(r)),
            PropFormula::Implies(l, r) => Compiled::Implies(c(l), c(r)),
            PropFormula::Iff(l, r) => Compiled::Iff(c(l), c(r)),
        }
    }

    fn eval(&self, row: u64) -> bool {
        match self {
            Compiled::Bit(b) => (row >> b) & 1 == 1,
            Compiled::Const(v) => *v,
            Compiled::Not(c) => !c.eval(row),
            Compiled::And(l, r) => l.eval(row) && r.eval(row),
            Compiled::Or(l, r) => l.eval(row) || r.eval(row),
            Compiled::Implies(l, r) => !l.eval(row) || r.eval(row),
            Compiled::Iff(l, r) => l.eval(row) == r.eval(row),
        }
    }
}

fn guard(count: usize) -> Result<(), SemanticsError> {
    if count > MAX_TABLE_ATOMS {
        return Err(SemanticsError::TooManyAtoms {
            count,
            limit: MAX_TABLE_ATOMS,
        });
    }
    Ok(())
}

pub fn truth_table(f: &PropFormula) -> Result<TruthTable, SemanticsError> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    guard(atoms.len())?;
    let compiled = Compiled::new(f, &atoms);
    let rows = (0..1u64 << atoms.len()).map(|k| compiled.eval(k)).collect();
    Ok(TruthTable { atoms, rows })
}

/// Equivalence by exhaustive valuation over the joint atom set. The witness is
/// the first disagreeing row in canonical order.
pub fn equiv_tt(f1: &PropFormula, f2: &PropFormula) -> Result<EquivVerdict, SemanticsError> {
    let atoms: Vec<String> = f1
        .atoms()
        .into_iter()
        .chain(f2.atoms())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    guard(atoms.len())?;
    let (c1, c2) = (Compiled::new(f1, &atoms), Compiled::new(f2, &atoms));
    for row in 0..1u64 << atoms.len() {
        if c1.eval(row) != c2.eval(row) {
            return Ok(EquivVerdict::differ(Witness::Assignment(row_assignment(&atoms, row))));
        }
    }
    Ok(EquivVerdict::equivalent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_prop;

    const S1: &str = "(A | B) & C -> D";
    const S2: &str = "(A -> (C -> D)) & (C -> (B -> D))";

    fn assign(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let s1 = parse_prop(S1).unwrap();
        let a = assign(&[("A", true), ("B", false), ("C", true), ("D", true)]);
        assert!(eval_prop(&s1, &a).unwrap());
        let contradiction = parse_prop("A & !A").unwrap();
        assert!(!eval_prop(&contradiction, &assign(&[("A", true)])).unwrap());
        assert!(!eval_prop(&contradiction, &assign(&[("A", false)])).unwrap());
        let imp = parse_prop("A -> B").unwrap();
        assert!(!eval_prop(&imp, &assign(&[("A", true), ("B", false)])).unwrap());
    }

    #[test]
    fn missing_atom() {
        let f = parse_prop("A & B").unwrap();
        assert_eq!(
            eval_prop(&f, &assign(&[("A", true)])),
            Err(SemanticsError::MissingAtom("B".into()))
        );
    }

    #[test]
    fn implication_table() {
        let t = truth_table(&parse_prop("A -> B").unwrap()).unwrap();
        assert_eq!(t.atoms, vec!["A", "B"]);
        assert_eq!(t.rows, vec![true, true, false, true]);
        assert_eq!(t.assignment(2), assign(&[("A", true), ("B", false)]));
    }

    #[test]
    fn constant_table() {
        let t = truth_table(&PropFormula::True).unwrap();
        assert!(t.atoms.is_empty());
        assert_eq!(t.rows, vec![true]);
    }

    #[test]
    fn s1_and_s2_tables_match() {
        let t1 = truth_table(&parse_prop(S1).unwrap()).unwrap();
        let t2 = truth_table(&parse_prop(S2).unwrap()).unwrap();
        assert_eq!(t1.rows.len(), 16);
        assert_eq!(t1, t2);
    }

    #[test]
    fn equiv_examples() {
        let p = |s| parse_prop(s).unwrap();
        assert!(equiv_tt(&p(S1), &p(S2)).unwrap().equivalent);
        assert!(equiv_tt(&p("A"), &p("A")).unwrap().equivalent);
        let v = equiv_tt(&p("A & B"), &p("A | B")).unwrap();
        assert!(!v.equivalent);
        assert_eq!(
            v.witness,
            Some(Witness::Assignment(assign(&[("A", false), ("B", true)])))
        );
    }

    #[test]
    fn atom_guard() {
        let text = (0..21).map(|i| format!("X{i}")).collect::<Vec<_>>().join(" & ");
        let f = parse_prop(&text).unwrap();
        assert_eq!(
            truth_table(&f),
            Err(SemanticsError::TooManyAtoms { count: 21, limit: 20 })
        );
    }

    #[test]
    fn display_is_aligned() {
        let t = truth_table(&parse_prop("A -> Bb").unwrap()).unwrap();
        let text = t.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "A Bb | value");
        assert_eq!(lines[3], "T F  | F");
    }
}
