mod common;

use common::{cli, EINSTEIN};

const S1: &str = "(A|B)&C->D";
const S2: &str = "(A->(C->D))&(C->(B->D))";

#[test]
fn equivalent_pair_exits_zero() {
    let out = cli(&["equiv", S1, S2]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "equivalent\n");
    for method in ["tt", "sat", "finite"] {
        assert_eq!(cli(&["equiv", S1, S2, "--method", method]).code, 0, "{method}");
    }
}

#[test]
fn truth_table_has_four_rows() {
    let out = cli(&["tt", "A->B"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[3], "T F | F");
}

#[test]
fn inequivalent_pair_exits_one_with_witness() {
    let out = cli(&["equiv", "A", "!A"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("witness: A="), "{}", out.stdout);
    let out = cli(&["equiv", "A & B", "A | B", "--method", "tt"]);
    assert_eq!(out.stdout, "not equivalent\nwitness: A=false, B=true\n");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let out = cli(&["equiv", "A"]);
    assert_eq!(out.code, 2);
    assert!(!out.stderr.is_empty());
    let out = cli(&["parse", "A &"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("byte 3"), "{}", out.stderr);
    let out = cli(&["--json", "parse", "A &"]);
    assert_eq!(out.code, 2);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "parse_error");
    assert_eq!(cli(&["step", "A", "A", "--path", "0"]).code, 2);
    assert_eq!(cli(&["puzzle", "solve", "/nonexistent/spec.json"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn derive_prints_the_nnf_line() {
    let out = cli(&["derive", S1, S2]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l.starts_with("= (!A & !B) | !C | D ")), "{}", out.stdout);
    assert!(out.stdout.lines().last().unwrap().starts_with("= (A -> C -> D) & (C -> B -> D)"));
}

#[test]
fn step_verdicts_set_the_exit_code() {
    assert_eq!(cli(&["step", "A -> B", "!A | B"]).code, 0);
    let out = cli(&["step", "!(A | B) | !C | D", "(!A & !B) | !C | D", "--rule", "de_morgan_or", "--path", "0.0"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout, "valid: de_morgan_or ltr at 0.0\n");
    assert_eq!(cli(&["step", "A -> B", "!A | B", "--rule", "de_morgan_or"]).code, 1);
    assert_eq!(cli(&["step", "A", "!A"]).code, 1);
}

#[test]
fn syllogisms() {
    assert_eq!(cli(&["syllogism", "All M are P", "All S are M", "All S are P"]).code, 0);
    assert_eq!(cli(&["syllogism", "All M are P", "All M are S", "Some S are P"]).code, 1);
    assert_eq!(cli(&["syllogism", "A(M,P)", "A(M,S)", "I(S,P)", "--import"]).code, 0);
}

#[test]
fn cnf_outputs() {
    let out = cli(&["cnf", "A -> B"]);
    assert_eq!(out.stdout, "(!A | B)\n");
    let out = cli(&["cnf", "A & (B | !C)", "--tseitin", "--dimacs"]);
    assert!(out.stdout.contains("p cnf 5 "), "{}", out.stdout);
}

#[test]
fn puzzle_commands() {
    let out = cli(&["puzzle", "solve", EINSTEIN]);
    assert_eq!(out.code, 0);
    let fish = out.stdout.lines().find(|l| l.contains("fish")).unwrap();
    assert!(fish.contains("German"), "{fish}");
    let out = cli(&["puzzle", "unique", EINSTEIN]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("unique\n"));
    let out = cli(&["puzzle", "trace", EINSTEIN]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.trim_end().ends_with("solved"));
    let out = cli(&["puzzle", "trace", EINSTEIN, "--once"]);
    assert!(out.stdout.starts_with("[clue]"), "{}", out.stdout);
}

#[test]
fn serve_rejects_a_bad_port() {
    let out = cli(&["serve", "--port", "notaport"]);
    assert_eq!(out.code, 2);
}
