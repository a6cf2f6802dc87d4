use std::process::{Command, Output};

use serde_json::Value;

use recouple_core::{constants, Scalar};

fn recouple(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recouple"))
        .args(args)
        .env_remove("RECOUPLE_FORMAT")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = recouple(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn single_terms(v: &Value) -> Vec<(String, Scalar)> {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["result"].as_array().unwrap().clone())
        .map(|t| {
            (
                t["tree"].as_str().unwrap().to_string(),
                Scalar::from_json(&t["coeff"]).unwrap(),
            )
        })
        .collect()
}

#[test]
fn virtual_generator_squares_to_the_identity() {
    let once = json_of(&["leftassoc", "--braid", "n=2; v1", "--shape", "(L L)"]);
    let twice = json_of(&["leftassoc", "--braid", "n=2; v1 v1", "--shape", "(L L)"]);
    let inputs: Vec<_> = twice["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["tree"].clone())
        .collect();
    assert_eq!(inputs.len(), 2);
    let terms = single_terms(&twice);
    assert_eq!(terms.len(), 2);
    for (r, (tree, c)) in twice["results"].as_array().unwrap().iter().zip(&terms) {
        assert_eq!(r["tree"].as_str().unwrap(), tree);
        assert!(c.is_one());
        assert_eq!(r["exact"], Value::Bool(true));
    }
    let swapped = single_terms(&once);
    assert_eq!(swapped[0].0, "(L:~P L:~P):~P");
}

#[test]
fn bracket_of_the_one_crossing_closure() {
    let v = json_of(&["bracket", "--braid", "n=2; s1", "--at", "1", "0"]);
    let d = constants().d;
    let expected = &(&Scalar::a() * &d.pow(2)) + &(&Scalar::monomial(1, -1) * &d);
    assert_eq!(Scalar::from_json(&v["bracket"]["value"]).unwrap(), expected);
    assert_eq!(v["bracket"]["writhe"], 1);
    assert!((v["numeric"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["numeric"]["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn classical_dimensions_follow_fibonacci() {
    let total = |k: &str| -> u64 {
        json_of(&["dim", "--leaves", k, "--mode", "classical"])["total"]
            .as_str()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(total("7"), total("6") + total("5"));
    let seven = json_of(&["dim", "--leaves", "7"]);
    assert_eq!(seven["by_root"]["P"], "13");
    assert_eq!(seven["by_root"]["*"], "8");
    let virt = json_of(&["dim", "--leaves", "4", "--mode", "virtual"]);
    assert_eq!(virt["total"], "22");
}

#[test]
fn relation_report_for_two_strands() {
    let v = json_of(&["check-relations", "--strands", "2"]);
    assert_eq!(v["holding"], 4);
    assert_eq!(v["total"], 4);
}

#[test]
fn certificate_report_lists_every_rule() {
    let v = json_of(&["certify-rules"]);
    let rules = v["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 12);
    assert_eq!(v["certified"], 9);
    let lemma1 = rules
        .iter()
        .find(|r| r["name"].as_str().unwrap().starts_with("lemma 1"))
        .unwrap();
    assert_eq!(lemma1["certified"], false);
    assert_eq!(lemma1["provenance"], "paper-stated");
}

#[test]
fn scalar_output_parses_back() {
    let v = json_of(&["eval", "--constant", "c2", "--at", "1", "0"]);
    let c2 = Scalar::from_json(&v["value"]).unwrap();
    assert_eq!(c2, constants().c2);
    let text = serde_json::to_string(&v["value"]).unwrap();
    let again = json_of(&["eval", "--scalar", &text, "--at", "1", "0"]);
    assert_eq!(again["numeric"], v["numeric"]);
    assert!((v["numeric"]["re"].as_f64().unwrap() - 8.0 / 9.0).abs() < 1e-12);
}

#[test]
fn seeded_samples_are_deterministic() {
    let a = recouple(&["leftassoc", "--sample", "3", "--seed", "5"]);
    let b = recouple(&["leftassoc", "--sample", "3", "--seed", "5"]);
    let c = recouple(&["leftassoc", "--sample", "3", "--seed", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = recouple(&["bracket", "--braid", "n=2; s3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--braid"), "{err}");
    assert!(err.contains("n=<int>;"), "{err}");
    assert_eq!(recouple(&["bracket"]).status.code(), Some(2));
    assert_eq!(recouple(&["dim", "--leaves", "0"]).status.code(), Some(2));
    assert_eq!(recouple(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_one_and_a_structured_object() {
    let out = recouple(&["leftassoc", "--braid", "n=3; s1", "--tree", "(L:P L:P):P"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "shape_mismatch");
    let pole = recouple(&["eval", "--constant", "d", "--at", "0", "0"]);
    assert_eq!(pole.status.code(), Some(1));
}

#[test]
fn format_defaults_from_the_environment() {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_recouple"))
            .args(args)
            .env("RECOUPLE_FORMAT", "text")
            .output()
            .unwrap()
    };
    let text = run(&["dim", "--leaves", "3"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("root P: 2"));
    let json = run(&["--format", "json", "dim", "--leaves", "3"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["total"], "3");
}
