use std::sync::LazyLock;

use serde::Serialize;

use super::pattern::Pattern;

/// A classical equivalence `lhs ≡ rhs`, usable in either direction.
#[derive(Debug, Clone, Serialize)]
pub struct RewriteRule {
    pub id: &'static str,
    #[serde(rename = "lhs")]
    pub lhs_text: &'static str,
    #[serde(rename = "rhs")]
    pub rhs_text: &'static str,
    pub description: &'static str,
    #[serde(skip)]
    pub lhs: Pattern,
    #[serde(skip)]
    pub rhs: Pattern,
}

impl RewriteRule {
    fn new(id: &'static str, lhs: &'static str, rhs: &'static str, description: &'static str) -> Self {
        RewriteRule {
            id,
            lhs_text: lhs,
            rhs_text: rhs,
            description,
            lhs: Pattern::parse(lhs),
            rhs: Pattern::parse(rhs),
        }
    }
}

// Order matters: unclaimed steps are attributed to the first matching rule.
static CATALOG: LazyLock<Vec<RewriteRule>> = LazyLock::new(|| {
    let r = RewriteRule::new;
    vec![
        r("impl_elim", "P -> Q", "!P | Q", "implication elimination"),
        r("iff_expand", "P <-> Q", "(P -> Q) & (Q -> P)", "biconditional as two implications"),
        r("de_morgan_and", "!(P & Q)", "!P | !Q", "De Morgan over conjunction"),
        r("de_morgan_or", "!(P | Q)", "!P & !Q", "De Morgan over disjunction"),
        r("double_neg", "!!P", "P", "double negation"),
        r("neg_forall", "!forall x. P", "exists x. !P", "negated universal"),
        r("neg_exists", "!exists x. P", "forall x. !P", "negated existential"),
        r("distrib_and_over_or", "P & (Q | R)", "(P & Q) | (P & R)", "distribute conjunction over disjunction"),
        r("distrib_and_over_or_right", "(P | Q) & R", "(P & R) | (Q & R)", "distribute conjunction over disjunction, from the right"),
        r("distrib_or_over_and", "P | (Q & R)", "(P | Q) & (P | R)", "distribute disjunction over conjunction"),
        r("distrib_or_over_and_right", "(P & Q) | R", "(P | R) & (Q | R)", "distribute disjunction over conjunction, from the right"),
        r("absorb_and", "P & (P | Q)", "P", "absorption"),
        r("absorb_or", "P | (P & Q)", "P", "absorption"),
        r("idempotent_and", "P & P", "P", "idempotence of conjunction"),
        r("idempotent_or", "P | P", "P", "idempotence of disjunction"),
        r("commute_and", "P & Q", "Q & P", "commutativity of conjunction"),
        r("commute_or", "P | Q", "Q | P", "commutativity of disjunction"),
        r("assoc_and", "(P & Q) & R", "P & (Q & R)", "associativity of conjunction"),
        r("assoc_or", "(P | Q) | R", "P | (Q | R)", "associativity of disjunction"),
        r("not_true", "!true", "false", "negated truth"),
        r("not_false", "!false", "true", "negated falsity"),
        r("and_true", "P & true", "P", "truth is neutral for conjunction"),
        r("true_and", "true & P", "P", "truth is neutral for conjunction"),
        r("and_false", "P & false", "false", "falsity annihilates conjunction"),
        r("false_and", "false & P", "false", "falsity annihilates conjunction"),
        r("or_true", "P | true", "true", "truth annihilates disjunction"),
        r("true_or", "true | P", "true", "truth annihilates disjunction"),
        r("or_false", "P | false", "P", "falsity is neutral for disjunction"),
        r("false_or", "false | P", "P", "falsity is neutral for disjunction"),
        r("excluded_middle", "P | !P", "true", "excluded middle"),
        r("contradiction", "P & !P", "false", "contradiction"),
        r("forall_true", "forall x. true", "true", "universal of truth"),
        r("exists_false", "exists x. false", "false", "existential of falsity"),
        r("forall_false", "forall x. false", "false", "universal of falsity over a nonempty domain"),
        r("exists_true", "exists x. true", "true", "existential of truth over a nonempty domain"),
    ]
});

/// The fixed rule list, in tie-breaking order.
pub fn rule_catalog() -> &'static [RewriteRule] {
    &CATALOG
}

pub fn find_rule(id: &str) -> Option<&'static RewriteRule> {
    rule_catalog().iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_stable() {
        let ids: Vec<&str> = rule_catalog().iter().map(|r| r.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert_eq!(ids[0], "impl_elim");
        for id in ["impl_elim", "neg_forall", "neg_exists", "de_morgan_and", "de_morgan_or", "double_neg"] {
            assert!(find_rule(id).is_some(), "{id}");
        }
    }

    #[test]
    fn json_lists_schemas() {
        let json = serde_json::to_value(find_rule("impl_elim").unwrap()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"id":"impl_elim","lhs":"P -> Q","rhs":"!P | Q","description":"implication elimination"})
        );
    }
}
