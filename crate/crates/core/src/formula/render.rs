use super::ast::{FolFormula, PropFormula, Term, DEFAULT_SORT};

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

/// Renders a propositional formula in the ASCII grammar.
pub fn render_prop(f: &PropFormula) -> String {
    render_fol(&f.to_fol())
}

/// Renders a first-order formula in the ASCII grammar.
///
/// Parentheses are emitted only where precedence, associativity or an open
/// quantifier scope demand them, with two exceptions kept for readability:
/// a conjunction that is an operand of a disjunction, and a binary quantifier body.
pub fn render_fol(f: &FolFormula) -> String {
    let mut out = String::new();
    write(f, true, &mut out);
    out
}

fn prec(f: &FolFormula) -> u8 {
    match f {
        FolFormula::Iff(..) => PREC_IFF,
        FolFormula::Implies(..) => PREC_IMPLIES,
        FolFormula::Or(..) => PREC_OR,
        FolFormula::And(..) => PREC_AND,
        FolFormula::Not(_) => PREC_UNARY,
        // quantifiers are prefix operators; whether they need parentheses depends
        // on what follows them, handled by `right_open`
        _ => PREC_ATOM,
    }
}

fn is_binary(f: &FolFormula) -> bool {
    matches!(
        f,
        FolFormula::And(..) | FolFormula::Or(..) | FolFormula::Implies(..) | FolFormula::Iff(..)
    )
}

/// Whether the last token of `f`'s unparenthesized rendering belongs to a quantifier body.
fn ends_in_quantifier(f: &FolFormula) -> bool {
    match f {
        FolFormula::Forall(..) | FolFormula::Exists(..) => true,
        FolFormula::Not(c) => ends_in_quantifier(c),
        FolFormula::And(_, r) | FolFormula::Or(_, r) | FolFormula::Implies(_, r) | FolFormula::Iff(_, r) => {
            ends_in_quantifier(r)
        }
        _ => false,
    }
}

fn child(f: &FolFormula, min_prec: u8, force: bool, right_open: bool, out: &mut String) {
    let paren = force || prec(f) < min_prec || (!right_open && ends_in_quantifier(f));
    if paren {
        out.push('(');
        write(f, true, out);
        out.push(')');
    } else {
        write(f, right_open, out);
    }
}

fn write(f: &FolFormula, right_open: bool, out: &mut String) {
    match f {
        FolFormula::Pred(name, args) => {
            out.push_str(name);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(term_text(a));
                }
                out.push(')');
            }
        }
        FolFormula::True => out.push_str("true"),
        FolFormula::False => out.push_str("false"),
        FolFormula::Not(c) => {
            out.push('!');
            child(c, PREC_UNARY, false, right_open, out);
        }
        FolFormula::And(l, r) => binary(l, r, " & ", PREC_AND, false, right_open, out),
        FolFormula::Or(l, r) => binary(l, r, " | ", PREC_OR, false, right_open, out),
        FolFormula::Implies(l, r) => binary(l, r, " -> ", PREC_IMPLIES, true, right_open, out),
        FolFormula::Iff(l, r) => binary(l, r, " <-> ", PREC_IFF, true, right_open, out),
        FolFormula::Forall(b, body) | FolFormula::Exists(b, body) => {
            out.push_str(if matches!(f, FolFormula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(&b.var);
            if b.sort != DEFAULT_SORT {
                out.push(':');
                out.push_str(&b.sort);
            }
            out.push_str(". ");
            child(body, 0, is_binary(body), right_open, out);
        }
    }
}

fn binary(
    l: &FolFormula,
    r: &FolFormula,
    op: &str,
    p: u8,
    right_assoc: bool,
    right_open: bool,
    out: &mut String,
) {
    let (lmin, rmin) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
    let and_in_or = |c: &FolFormula| p == PREC_OR && matches!(c, FolFormula::And(..));
    child(l, lmin, and_in_or(l), false, out);
    out.push_str(op);
    child(r, rmin, and_in_or(r), right_open, out);
}

fn term_text(t: &Term) -> &str {
    t.name()
}
