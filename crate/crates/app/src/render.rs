//! Plain-text renderings for the CLI.

use logiclab_core::semantics::Witness;

pub fn witness(w: &Witness) -> String {
    match w {
        Witness::Assignment(a) if a.is_empty() => "the empty assignment".to_string(),
        Witness::Assignment(a) => a
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", "),
        Witness::Model(m) => m.to_string(),
    }
}

pub fn path(p: &[usize]) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}
