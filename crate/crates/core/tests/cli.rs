use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dft-minors")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("one JSON document"))
}

#[test]
fn norm_of_the_order_seven_minor() {
    let o = run(&["norm", "--n", "7", "--rows", "0,1,3", "--cols", "0,1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2744 = 2^3·7^3"));
    let (code, v) = json(&["norm", "--n", "7", "--rows", "0,1,3", "--cols", "0,1,3", "--backend", "symbolic"]);
    assert_eq!(code, 0);
    assert_eq!(v["norm"], "2744");
    assert_eq!(v["factors"], serde_json::json!([["2", 3], ["7", 3]]));
}

#[test]
fn verify_order_four_reports_the_witness() {
    let o = run(&["verify", "--n", "4", "--family", "principal", "--allow-nonsquarefree"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("{0,2}"));
    // non-square-free orders need the override
    assert_eq!(run(&["verify", "--n", "4", "--family", "principal"]).status.code(), Some(2));
}

#[test]
fn verify_passes_for_square_free_orders() {
    let o = run(&["verify", "--n", "15", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));
    let (code, v) = json(&["verify", "--n", "10", "--family", "nprime-principal", "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], true);
    assert_eq!(v["family"], "nprime-principal(p=5)");
}

#[test]
fn threshold_chain_prints_exact_integers() {
    let o = run(&["threshold", "--prefix", "2,3", "--next", "29"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("threshold = 27"), "{text}");
    assert!(text.contains("lhs = ") && text.contains("rhs = "));
    assert_eq!(run(&["threshold", "--prefix", "2,3", "--next", "23"]).status.code(), Some(1));
    let (code, v) = json(&["threshold", "--p", "7", "--q", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["gamma"], "75");
}

#[test]
fn campaign_verbs() {
    assert_eq!(run(&["charp", "--n", "6", "--char", "5"]).status.code(), Some(0));
    let o = run(&["charp", "--n", "7", "--char", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("{0,1,3}"));
    assert_eq!(run(&["chebprop", "--n", "7", "--q", "3"]).status.code(), Some(0));
    assert_eq!(run(&["chebprop", "--n", "7", "--q", "2"]).status.code(), Some(1));
    let (code, v) = json(&["certify", "--n", "30"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], "certified");
    assert_eq!(v["rule"], "characteristic-lift");
    let (code, v) = json(&["certify", "--n", "174", "--strategy", "chain"]);
    assert_eq!(code, 0);
    assert_eq!(v["rule"], "threshold-chain");
}

#[test]
fn single_minor_verbs() {
    let o = run(&["minor", "--n", "6", "--rows", "0,1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("D = "));
    assert_eq!(run(&["minor", "--n", "4", "--rows", "0,2"]).status.code(), Some(1));
    let (code, v) = json(&["classify", "--n", "6", "--rows", "0,1", "--cols", "0,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["principal"], false);
    let o = run(&["gamma", "--p", "7"]);
    assert!(stdout(&o).contains("Γ_7 = 75"));
    assert_eq!(run(&["kron-check", "--m", "2", "--n", "3"]).status.code(), Some(0));
    assert_eq!(run(&["block-check", "--trials", "50"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["norm", "--n", "7", "--rows", "0,x"],
        vec!["norm", "--n", "7", "--rows", "0,9"],
        vec!["norm", "--n", "7", "--rows", "0,1", "--cols", "0"],
        vec!["verify", "--n", "6", "--family", "d-principal"],
        vec!["charp", "--n", "6", "--char", "3"],
        vec!["threshold", "--prefix", "2,3"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn every_verb_has_help() {
    for verb in ["minor", "norm", "classify", "verify", "charp", "chebprop", "certify", "gamma", "threshold", "kron-check", "block-check"] {
        let o = run(&[verb, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).lines().next().is_some_and(|l| !l.trim().is_empty()), "{verb}");
    }
}

#[test]
fn json_output_is_reproducible() {
    let args = ["verify", "--n", "11", "--family", "all", "--max-size", "2", "--json"];
    let a = run(&args).stdout;
    let b = run(&[&args[..], &["--workers", "3"]].concat()).stdout;
    assert_eq!(a, b);
}

#[test]
fn checkpointed_runs_resume() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n10.jsonl");
    let p = path.to_str().unwrap();
    let first = run(&["verify", "--n", "10", "--checkpoint", p, "--json"]);
    let second = run(&["verify", "--n", "10", "--checkpoint", p, "--json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(run(&["verify", "--n", "10", "--family", "all", "--checkpoint", p]).status.code(), Some(2));
}
