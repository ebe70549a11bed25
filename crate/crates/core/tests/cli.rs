use std::path::PathBuf;

use propalg::cli::{run, Outcome};
use propalg::valuation::{evaluate, ValuationTable};
use propalg::{desugar, parse};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("propalg").chain(args.iter().copied()))
}

fn temp_file(name: &str, text: &str) -> String {
    let path: PathBuf = std::env::temp_dir().join(format!("propalg-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn assert_out(args: &[&str], code: i32, stdout: &str) {
    let out = cli(args);
    assert_eq!(out.code, code, "{args:?}: stderr {}", out.stderr);
    assert_eq!(out.stdout, stdout, "{args:?}");
    assert!(out.stderr.is_empty(), "{args:?}: {}", out.stderr);
}

#[test]
fn normalize_cr_contracts_repeated_atom() {
    assert_out(&["normalize", "--variety", "cr", "(T <| a |> F) <| a |> F"], 0, "T <| a |> F\n");
}

#[test]
fn equal_verdicts() {
    assert_out(&["equal", "--variety", "st", "a land b", "b land a"], 0, "equal: true\n");
    assert_out(&["equal", "--variety", "fr", "a land b", "b land a"], 1, "equal: false\n");
}

#[test]
fn sat_witness_replays() {
    let out = cli(&["sat", "--variety", "fr", "a land not a", "--witness"]);
    assert_eq!(out.code, 0);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("satisfiable: true"));
    assert_eq!(lines.next(), Some("witness:"));
    let table_text: String = lines.map(|l| format!("{l}\n")).collect();
    assert!(table_text.contains("\na -> T\n"), "{table_text}");
    assert!(table_text.contains("\na.a -> F\n"), "{table_text}");
    let h = ValuationTable::parse_file(&table_text).unwrap();
    assert!(evaluate(&desugar(&parse("a land not a").unwrap()), &h).unwrap().value);
}

#[test]
fn sat_and_fal_negative() {
    assert_out(&["sat", "--variety", "st", "a land not a"], 1, "satisfiable: false\n");
    assert_out(&["fal", "--variety", "fr", "a lor T"], 1, "falsifiable: false\n");
    assert_out(&["fal", "--variety", "fr", "a"], 0, "falsifiable: true\n");
}

#[test]
fn parse_bf_and_project() {
    assert_out(&["parse", "a land (b lor c)"], 0, "a land (b lor c)\n");
    assert_out(&["bf", "a"], 0, "T <| a |> F\n");
    assert_out(&["project", "-n", "1", "(T <| b |> F) <| a |> F"], 0, "T <| a |> F\n");
}

#[test]
fn acc_lists_reachable_atoms() {
    assert_out(&["acc", "a land b"], 0, "acc: {a, b}\n");
}

#[test]
fn equiv_reports_oracle_lines() {
    let out = cli(&["equiv", "--variety", "rp", "a", "a <| a |> F"]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.starts_with("equivalent: true\ncongruent: false\nverdict: distinguished-by-derivative\n"),
        "{}",
        out.stdout
    );
    let out = cli(&["equiv", "--variety", "cr", "a", "a <| a |> F"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "equivalent: true\ncongruent: true\nverdict: congruent\n");
}

#[test]
fn eval_reads_valuation_file() {
    let val = temp_file("eval.val", "atoms a b\ndepth 3\ndefault T\na.b -> F\n");
    assert_out(&["eval", "--val", &val, "b land a"], 0, "value: T\ntrace: b.a\n");
    assert_out(&["eval", "--val", &val, "a land b"], 0, "value: F\ntrace: a.b\n");
}

#[test]
fn spec_verbs() {
    let spec = temp_file("loop.spec", "X1 = X3 <| a |> X2\nX2 = b then X1\nX3 = T\n");
    let out = cli(&["spec", "project", "--spec", &spec, "--var", "X1", "-n", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "pi_1: T <| a |> F\npi_2: T <| a |> (T <| b |> F)\n");

    let val = temp_file("loop.val", "atoms a b\ndepth 4\ndefault F\na.b.a -> T\n");
    assert_out(&["spec", "eval", "--spec", &spec, "--var", "X1", "--val", &val], 0, "result: T\ntrace: a.b.a\n");
    let never = temp_file("never.val", "atoms a b\ndepth 12\nstatic a=F b=T\n");
    let out = cli(&["spec", "eval", "--spec", &spec, "--var", "X1", "--val", &never, "--fuel", "10"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("result: diverged\n"), "{}", out.stdout);
}

#[test]
fn transform_verbs() {
    let out = cli(&["transform", "caching", "a land a"]);
    assert_eq!(out.code, 0);
    let cached = desugar(&parse(out.stdout.trim()).unwrap());
    assert!(propalg::transform::is_monotest(&cached));

    for variant in ["plain", "dlni", "dlni-subst"] {
        let out = cli(&["transform", "re-eval", "--variant", variant, "T <| a |> (F <| a |> T)"]);
        assert_eq!(out.code, 0, "{variant}: {}", out.stderr);
        assert!(out.stdout.starts_with("X0 = "), "{variant}: {}", out.stdout);
        propalg::projective::LinearSpec::parse(&out.stdout).unwrap();
    }
}

#[test]
fn search_verbs() {
    let out =
        cli(&["search", "--target", "a <| b |> c", "--variety", "wm", "--catalog", "connectives", "--max-2p", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("found: true\nwitness: "), "{}", out.stdout);
    assert!(out.stdout.contains("two_place_count: 3\n"));
    assert!(out.stdout.contains("\nbounds: "));

    let out = cli(&["search", "--target", "a <| a |> not a", "--variety", "fr", "--catalog", "tnd"]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    assert!(out.stdout.starts_with("found: false\nbounds: "), "{}", out.stdout);
}

#[test]
fn laws_verb() {
    let out = cli(&["laws", "--variety", "mem"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("passed: 41/41\n"), "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 42);
}

#[test]
fn usage_and_input_errors_exit_2() {
    for args in [
        &["parse", "a <| b"][..],
        &["frobnicate"],
        &["normalize", "a"],
        &["normalize", "--variety", "nope", "a"],
        &["normalize", "--variety", "pmem", "a"],
        &["laws", "--variety", "pmem"],
        &["eval", "--val", "/nonexistent/file", "a"],
        &["project", "-n", "0", "a"],
        &["parse", "--bogus", "a"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_exhaustion_exits_3() {
    let val = temp_file("huge.val", "atoms a b c d\ndepth 40\ndefault T\n");
    let out = cli(&["eval", "--val", &val, "a"]);
    assert_eq!(out.code, 3, "{}", out.stdout);
    assert!(out.stderr.starts_with("error: "));
}

#[test]
fn output_is_deterministic() {
    let args = ["sat", "--variety", "wm", "--witness", "(a land b) lor not a"];
    assert_eq!(cli(&args), cli(&args));
}
