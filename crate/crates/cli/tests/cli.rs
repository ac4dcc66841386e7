//! End-to-end tests of the `acf` binary: exit codes, output contracts, and
//! the documented file formats.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sample(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.pop();
    p.pop();
    p.push("samples");
    p.push(name);
    p.to_str().unwrap().to_string()
}

fn acf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn parse_reports_sentences_and_free_variables() {
    let out = acf(&["parse", "exists x. x*x+1=0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sentence: true"), "{text}");
    assert!(text.contains("free: {}"), "{text}");

    let out = acf(&["parse", "x+1=0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("free: {x}"));
    assert!(stdout(&out).contains("sentence: false"));

    // Ungrammatical input is an input error.
    let out = acf(&["parse", "++"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn parse_json_is_one_document() {
    let out = acf(&["--format", "json", "parse", "exists x. x*x+1=0"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["sentence"], serde_json::json!(true));
    assert_eq!(doc["free_vars"], serde_json::json!([]));
    assert_eq!(doc["formula"], serde_json::json!("exists x. (x * x + 1 = 0)"));
}

#[test]
fn eval_uses_exit_codes_for_truth() {
    let f2 = sample("F2.structure");
    let out = acf(&["eval", &f2, "exists x. x + 1 = 0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true");

    // Z/4 has no multiplicative inverse for 2.
    let z4 = sample("Z4.structure");
    let inverse_axiom = "forall x. (x != 0 -> exists y. x * y = 1)";
    let out = acf(&["eval", &z4, inverse_axiom]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false");
    let out = acf(&["eval", &f2, inverse_axiom]);
    assert_eq!(code(&out), 0);

    // Free variables need assignments.
    let out = acf(&["eval", &f2, "x + 1 = 0"]);
    assert_eq!(code(&out), 2);
    let out = acf(&["eval", &f2, "x + 1 = 0", "--assign", "x=1"]);
    assert_eq!(code(&out), 0);
    let out = acf(&["eval", &f2, "x + 1 = 0", "--assign", "x=0"]);
    assert_eq!(code(&out), 1);
    let out = acf(&["eval", &f2, "x + 1 = 0", "--assign", "x=7"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn qe_prints_constructible_forms() {
    let out = acf(&["qe", "exists x. a*x+b=0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(a != 0) | (a = 0 & b = 0)");

    // Quantifier-free input comes back in disjunctive normal form.
    let out = acf(&["qe", "!(x = 0 & y = 0)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(x != 0) | (y != 0)");

    // Exhausting the budget is a resource error.
    let out = acf(&["qe", "--budget", "2", "forall a. exists x. x^2 + a = 0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn decide_and_spectrum() {
    let out = acf(&["decide", "--char", "0", "exists x. x*x+1=0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true");

    let out = acf(&["decide", "--char", "2", "1 + 1 = 0"]);
    assert_eq!(code(&out), 0);
    let out = acf(&["decide", "--char", "3", "1 + 1 = 0"]);
    assert_eq!(code(&out), 1);

    // 4 is not a characteristic.
    let out = acf(&["decide", "--char", "4", "1 = 0"]);
    assert_eq!(code(&out), 2);

    let out = acf(&["spectrum", "1+1=0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "char 0: false; primes: exactly {2}");

    let out = acf(&["--format", "json", "spectrum", "exists x. x + x = 1"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["char0"], serde_json::json!(true));
    assert_eq!(doc["mode"], serde_json::json!("all_except_listed"));
    assert_eq!(doc["primes"], serde_json::json!([2]));
}

#[test]
fn nss_solvability() {
    let out = acf(&["nss", "--char", "0", &sample("unsolvable.poly")]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "false");

    let out = acf(&["nss", "--char", "0", &sample("solvable.poly")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true");

    let out = acf(&["nss", &sample("unit.poly")]);
    assert_eq!(code(&out), 1);
}

#[test]
fn irreducibility_table() {
    let out = acf(&["irreducible", "x^2 + y^2 - 1", "--primes", "2,3,5"]);
    assert_eq!(code(&out), 0, "irreducible in char 0");
    let text = stdout(&out);
    assert!(text.contains("char 0: irreducible"), "{text}");
    assert!(text.contains("char 2: reducible"), "{text}");
    assert!(text.contains("char 3: irreducible"), "{text}");
    assert!(text.contains("differs from char 0 at: 2"), "{text}");

    let out = acf(&["irreducible", "x^2", "--primes", "3"]);
    assert_eq!(code(&out), 1, "x^2 factors");

    // Degree guardrails are input errors.
    let out = acf(&["irreducible", "x + 1"]);
    assert_eq!(code(&out), 2);
    let out = acf(&["irreducible", "x^4 + 1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn minimality_verdicts() {
    let out = acf(&["minimal", "x^2 = 1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("finite, at most 2"));

    let out = acf(&["--format", "json", "minimal", "x != 0"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], serde_json::json!("cofinite"));
    assert_eq!(doc["bound"], serde_json::json!(1));

    // Quantified one-variable formulas are eliminated first.
    let out = acf(&["minimal", "exists y. (y^2 = x & y != 1)"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn lefschetz_cross_check() {
    let out = acf(&["lefschetz", "exists x. x^2 + 1 = 0", "--primes-up-to", "7"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("char 0: true; primes: all"), "{text}");
    assert!(text.contains("p = 7: true (oracle: true, agrees)"), "{text}");
}

#[test]
fn structure_comparisons() {
    let out = acf(&["iso", &sample("F2.structure"), &sample("F2.structure")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("isomorphic"));

    let out = acf(&["iso", &sample("Z4group.structure"), &sample("klein.structure")]);
    assert_eq!(code(&out), 1);

    // Z/4 and the Klein group satisfy the same depth-0 sentences but are
    // separated at depth 2 (element of order 4).
    let out = acf(&[
        "equiv",
        &sample("Z4group.structure"),
        &sample("klein.structure"),
        "--depth",
        "0",
    ]);
    assert_eq!(code(&out), 0);
    let out = acf(&[
        "equiv",
        &sample("Z4group.structure"),
        &sample("klein.structure"),
        "--depth",
        "2",
    ]);
    assert_eq!(code(&out), 1);

    let out = acf(&["sub", &sample("even.structure"), &sample("Z6group.structure")]);
    assert_eq!(code(&out), 0);
    let out = acf(&["sub", &sample("Z4group.structure"), &sample("Z6group.structure")]);
    assert_eq!(code(&out), 1);

    // Graphs with an explicit signature file.
    let out = acf(&[
        "iso",
        &sample("triangle.structure"),
        &sample("path3.structure"),
        "--sig",
        &sample("graph.sig"),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn errors_are_json_in_json_mode() {
    let out = acf(&["--format", "json", "parse", "++"]);
    assert_eq!(code(&out), 2);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["error"].is_string());
}
