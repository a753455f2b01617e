use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&v).unwrap();
    again.push('\n');
    assert_eq!(again, text, "{args:?} does not round-trip");
    v
}

#[test]
fn bound_examples() {
    let v = json(&["bound", "--space", "johnson", "--n", "3", "--s", "2"]);
    assert_eq!(v["results"]["bound"], "10");
    assert_eq!(v["results"]["multiplicities"][1]["m"], "9");
    let v = json(&["bound", "--space", "hamming", "--n", "4", "--s", "2"]);
    assert_eq!(v["results"]["bound"], "7");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let o = run(&["bound", "--space", "johnson", "--n", "3", "--s", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_examples() {
    let v = json(&["certify", "--n", "3", "--s", "2"]);
    assert_eq!(v["results"]["verdict"], "known_tight_family");
    let v = json(&["certify", "--n", "3", "--s", "1"]);
    assert_eq!(v["results"]["verdict"], "excluded_by_thm14");
    assert_eq!(v["results"]["phi_coefficients"], serde_json::json!(["3/2", "-1"]));
    let v = json(&["certify", "--n", "10", "--s", "5"]);
    assert_eq!(v["results"]["verdict"], "excluded_by_thm14");
    let o = run(&["certify", "--n", "3", "--s", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exact_values_reparse() {
    let v = json(&["certify", "--n", "10", "--s", "5"]);
    for c in v["results"]["phi_coefficients"].as_array().unwrap() {
        let text = c.as_str().unwrap();
        let x = symdist::exactnum::parse_rational(text).unwrap();
        assert_eq!(symdist::exactnum::render(&x), text);
    }
}

#[test]
fn construct_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let ekr = dir.path().join("ekr.txt");
    let o = run(&["construct", "--family", "ekr", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 10);
    fs::write(&ekr, stdout(&o)).unwrap();
    let v = json(&["analyze", ekr.to_str().unwrap()]);
    assert_eq!(v["results"]["degree_set"], serde_json::json!([1, 2]));
    assert_eq!(v["results"]["verdict"], "tight");

    let h4 = dir.path().join("h4.txt");
    let code = dir.path().join("h4code.txt");
    let back = dir.path().join("h4back.txt");
    let p = |x: &std::path::Path| x.to_str().unwrap().to_string();
    assert!(run(&["construct", "--family", "sylvester", "--k", "2", "--out", &p(&h4)]).status.success());
    assert!(run(&["construct", "--family", "hadamard-code", "--input", &p(&h4), "--out", &p(&code)])
        .status
        .success());
    let v = json(&["analyze", &p(&code)]);
    assert_eq!(v["results"]["degree_set"], serde_json::json!([1]));
    assert_eq!(v["results"]["verdict"], "tight");
    assert!(run(&["construct", "--family", "code-hadamard", "--input", &p(&code), "--out", &p(&back)])
        .status
        .success());
    assert_eq!(fs::read(&h4).unwrap(), fs::read(&back).unwrap());

    let lopsided = dir.path().join("lopsided.txt");
    fs::write(&lopsided, "111000\n110100\n").unwrap();
    let v = json(&["analyze", &p(&lopsided)]);
    assert_eq!(v["results"]["verdict"], "not_symmetric");
}

#[test]
fn bad_inputs_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.txt");
    fs::write(&ragged, "11\n101\n").unwrap();
    assert_eq!(run(&["analyze", ragged.to_str().unwrap()]).status.code(), Some(4));
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["analyze", missing.to_str().unwrap()]).status.code(), Some(4));
    let not_hadamard = dir.path().join("bad.txt");
    fs::write(&not_hadamard, "++\n++\n").unwrap();
    let o = run(&["construct", "--family", "hadamard-code", "--input", not_hadamard.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["rho", "--s", "8"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "x", "--metric", "manhattan"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--family", "ekr"]).status.code(), Some(2));
}

#[test]
fn rho_and_guards() {
    let v = json(&["rho", "--s", "8", "--limit", "1000000"]);
    assert_eq!(v["results"]["rho"], 89);
    let v = json(&["rho", "--s", "8", "--limit", "95"]);
    assert_eq!(v["results"]["found"], false);
    let o = run(&["rho", "--s", "8", "--limit", "2000000000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_examples() {
    let v = json(&["sweep", "--s-min", "1", "--s-max", "1", "--rule", "explicit", "--r-min", "1", "--r-max", "9"]);
    assert_eq!(v["results"]["hits"], serde_json::json!([[1, 1], [1, 3], [1, 5], [1, 7], [1, 9]]));
    let on = json(&["sweep", "--s-min", "2", "--s-max", "10"]);
    let off = json(&["sweep", "--s-min", "2", "--s-max", "10", "--no-prefilter", "--jobs", "3"]);
    assert_eq!(on["results"]["hits"], serde_json::json!([]));
    assert_eq!(on["results"]["hits"], off["results"]["hits"]);
    let o = run(&["sweep", "--s-min", "2", "--s-max", "285"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--ack-long-run"));
}

#[test]
fn sweep_jobs_give_identical_output() {
    let outs: Vec<String> = ["1", "4", "16"]
        .iter()
        .map(|j| stdout(&run(&["sweep", "--s-min", "2", "--s-max", "20", "--jobs", j, "--json"])))
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn sweep_checkpoint_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck");
    let args = ["sweep", "--s-min", "2", "--s-max", "15", "--json", "--checkpoint", ck.to_str().unwrap()];
    let first = stdout(&run(&args));
    let text = fs::read_to_string(&ck).unwrap();
    fs::write(&ck, &text[..text.len() / 2]).unwrap();
    assert_eq!(stdout(&run(&args)), first);
    fs::write(&ck, text.replacen("END 3", "END 4", 1)).unwrap();
    assert_eq!(run(&args).status.code(), Some(4));
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "--suite", "prop41", "--max-n", "12"]);
    assert_eq!(v["results"]["all_passed"], true);
    assert_eq!(v["results"]["checks"][0]["checked"], 66);
    let v = json(&["verify", "--suite", "rank2", "--max-n", "3"]);
    assert_eq!(v["results"]["all_passed"], true);
    let v = json(&["verify", "--suite", "identities", "--max-n", "12"]);
    assert_eq!(v["results"]["all_passed"], true);
}

#[test]
fn text_output_is_default() {
    let o = run(&["bound", "--space", "johnson", "--n", "3", "--s", "2"]);
    let text = stdout(&o);
    assert!(text.starts_with("bound\n"));
    assert!(text.contains("  bound: 10\n"));
}
