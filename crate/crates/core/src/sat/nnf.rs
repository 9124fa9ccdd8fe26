use crate::formula::{FolFormula, Formula, PropFormula};

/// Negation normal form: no implications or biconditionals, negation only on
/// atoms and predicates. Constants are kept; a negated constant is flipped.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Prop(p) => Formula::Prop(nnf_prop(p)),
        Formula::Fol(g) => Formula::Fol(nnf_fol(g)),
    }
}

pub fn nnf_prop(f: &PropFormula) -> PropFormula {
    nnf_fol(&f.to_fol())
        .to_prop()
        .expect("NNF of a propositional formula stays propositional")
}

pub fn nnf_fol(f: &FolFormula) -> FolFormula {
    positive(f)
}

fn positive(f: &FolFormula) -> FolFormula {
    match f {
        FolFormula::Pred(..) | FolFormula::True | FolFormula::False => f.clone(),
        FolFormula::Not(c) => negative(c),
        FolFormula::And(l, r) => FolFormula::and(positive(l), positive(r)),
        FolFormula::Or(l, r) => FolFormula::or(positive(l), positive(r)),
        FolFormula::Implies(l, r) => FolFormula::or(negative(l), positive(r)),
        // (l -> r) & (r -> l)
        FolFormula::Iff(l, r) => FolFormula::and(
            FolFormula::or(negative(l), positive(r)),
            FolFormula::or(negative(r), positive(l)),
        ),
        FolFormula::Forall(b, body) => FolFormula::forall(b.clone(), positive(body)),
        FolFormula::Exists(b, body) => FolFormula::exists(b.clone(), positive(body)),
    }
}

/// NNF of `!f`.
fn negative(f: &FolFormula) -> FolFormula {
    match f {
        FolFormula::Pred(..) => FolFormula::neg(f.clone()),
        FolFormula::True => FolFormula::False,
        FolFormula::False => FolFormula::True,
        FolFormula::Not(c) => positive(c),
        FolFormula::And(l, r) => FolFormula::or(negative(l), negative(r)),
        FolFormula::Or(l, r) => FolFormula::and(negative(l), negative(r)),
        FolFormula::Implies(l, r) => FolFormula::and(positive(l), negative(r)),
        // !((l -> r) & (r -> l)) = (l & !r) | (r & !l)
        FolFormula::Iff(l, r) => FolFormula::or(
            FolFormula::and(positive(l), negative(r)),
            FolFormula::and(positive(r), negative(l)),
        ),
        FolFormula::Forall(b, body) => FolFormula::exists(b.clone(), negative(body)),
        FolFormula::Exists(b, body) => FolFormula::forall(b.clone(), negative(body)),
    }
}

pub(crate) fn is_nnf(f: &FolFormula) -> bool {
    match f {
        FolFormula::Pred(..) | FolFormula::True | FolFormula::False => true,
        FolFormula::Not(c) => matches!(**c, FolFormula::Pred(..)),
        FolFormula::And(l, r) | FolFormula::Or(l, r) => is_nnf(l) && is_nnf(r),
        FolFormula::Implies(..) | FolFormula::Iff(..) => false,
        FolFormula::Forall(_, b) | FolFormula::Exists(_, b) => is_nnf(b),
    }
}
