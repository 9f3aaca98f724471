use std::path::Path;
use std::process::{Command, Output};

fn fuzzymat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzymat"))
        .args(args)
        .env_remove("FUZZYMAT_ENUM_CEILING")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn count_examples() {
    let out = fuzzymat(&["count", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "299\n");
    assert_eq!(stdout(&fuzzymat(&["count", "--n", "2", "--k", "3"])), "84\n");
    assert_eq!(stdout(&fuzzymat(&["count", "--n", "2", "--k", "1", "--root", "O"])), "15\n");
    assert_eq!(stdout(&fuzzymat(&["count", "--n", "2", "--k", "9"])), "0\n");
    assert_eq!(stdout(&fuzzymat(&["count", "--n", "2", "--k", "-1"])), "0\n");
    assert_eq!(stdout(&fuzzymat(&["count", "--n", "0"])), "1\n");
    assert_eq!(
        stdout(&fuzzymat(&["count", "--n", "4", "--method", "ie"])),
        "21262618727925419\n"
    );
    assert_eq!(stdout(&fuzzymat(&["--parallel", "3", "count", "--n", "3", "--k", "5"])), "6972840\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(fuzzymat(&["count", "--n", "-2"]).status.code(), Some(2));
    assert_eq!(fuzzymat(&["count"]).status.code(), Some(2));
    assert_eq!(fuzzymat(&["table", "--max-n", "2", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(fuzzymat(&["--parallel", "0", "count", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn table_matches_golden_file() {
    let golden = include_str!("golden/table1.csv");
    let out = fuzzymat(&["table", "--max-n", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden);
    let json: serde_json::Value = serde_json::from_slice(&fuzzymat(&["table", "--max-n", "2", "--format", "json", "--rooted"]).stdout).unwrap();
    assert_eq!(json["rows"][2]["f_n"], "299");
    assert_eq!(json["o_rooted"][2]["f_nk"][2], "50");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "--max-n", "3"][..],
        &["enumerate", "--m", "4", "--k", "2", "--list"][..],
        &["sequence", "--max-n", "4", "--b-file"][..],
    ] {
        let serial = stdout(&fuzzymat(args));
        let again = stdout(&fuzzymat(args));
        let mut parallel_args = vec!["--parallel", "4"];
        parallel_args.extend_from_slice(args);
        let parallel = stdout(&fuzzymat(&parallel_args));
        assert_eq!(serial, again);
        assert_eq!(serial, parallel);
    }
}

#[test]
fn sequence_output() {
    assert_eq!(
        stdout(&fuzzymat(&["sequence", "--max-n", "4"])),
        "1, 3, 299, 28349043, 21262618727925419\n"
    );
    assert_eq!(stdout(&fuzzymat(&["sequence", "--max-n", "0", "--b-file"])), "0 1\n");
    assert_eq!(
        stdout(&fuzzymat(&["sequence", "--max-n", "2", "--b-file"])),
        "0 1\n1 3\n2 299\n"
    );
}

#[test]
fn enumeration() {
    let out = stdout(&fuzzymat(&["enumerate", "--m", "4", "--k", "3", "--group-by-sizes"]));
    assert_eq!(
        out,
        "(0,1,2,3) 24\n(0,1,2,4) 12\n(0,1,3,4) 12\n(0,2,3,4) 12\n(1,2,3,4) 24\ncount 84\n"
    );
    let out = stdout(&fuzzymat(&["enumerate", "--m", "2", "--k", "2", "--list", "--labels"]));
    assert_eq!(out, "A0 < A1^{2} < A2\nA0 < A1^{1} < A2\ncount 2\n");
    let listed = stdout(&fuzzymat(&["enumerate", "--m", "4", "--k", "1", "--root", "J", "--list"]));
    assert_eq!(listed.lines().filter(|l| l.ends_with("< 1111")).count(), 15);
}

#[test]
fn infeasible_enumeration_exits_three() {
    let out = fuzzymat(&["enumerate", "--m", "16", "--k", "8", "--list"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ceiling"));
    assert_eq!(fuzzymat(&["lattice", "--m", "20"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_fuzzymat"))
        .args(["enumerate", "--m", "4", "--k", "2"])
        .env("FUZZYMAT_ENUM_CEILING", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_fuzzymat"))
        .args(["enumerate", "--m", "4", "--k", "2"])
        .env("FUZZYMAT_ENUM_CEILING", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn equivalence_and_signature() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"n": 1, "entries": [["1"]]}"#);
    let b = write(dir.path(), "b.json", r#"{"n": 1, "entries": [["0.9"]]}"#);
    let c = write(dir.path(), "c.txt", "9/10\n");
    let out = fuzzymat(&["equivalent", &a, &b]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "inequivalent\n");
    assert_eq!(fuzzymat(&["equivalent", &b, &c]).status.code(), Some(0));

    let f = write(dir.path(), "f.txt", "0.3 0.7\n0.7 1\n");
    let sig = stdout(&fuzzymat(&["signature", "--input", &f]));
    assert_eq!(
        sig,
        "{\"cuts\":[\"0001\",\"0111\",\"1111\"],\"j_rooted\":true,\"k\":2,\"n\":2,\"o_rooted\":false}\n"
    );
    let g = write(dir.path(), "g.dat", r#"{"n": 2, "entries": [["0.1","0.5"],["0.5","1"]]}"#);
    let sig_g = stdout(&fuzzymat(&["signature", "--input", &g, "--matrix-format", "json"]));
    assert_eq!(sig, sig_g);
}

#[test]
fn malformed_inputs_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "0.5 1.5\n0 0\n");
    let ragged = write(dir.path(), "ragged.txt", "0.5 1\n0\n");
    let bad_json = write(dir.path(), "bad.json", "{\"n\": 2}");
    let one = write(dir.path(), "one.txt", "1\n");
    for args in [
        vec!["signature", "--input", &bad],
        vec!["signature", "--input", &ragged],
        vec!["signature", "--input", &bad_json],
        vec!["signature", "--input", "/nonexistent/file.txt"],
        vec!["equivalent", &one, &ragged],
        vec!["equivalent", &one, &bad],
    ] {
        assert_eq!(fuzzymat(&args).status.code(), Some(4), "{args:?}");
    }
    let two = write(dir.path(), "two.txt", "1 0\n0 1\n");
    assert_eq!(fuzzymat(&["equivalent", &one, &two]).status.code(), Some(4));
}

#[test]
fn classify_corpus_files() {
    let dir = tempfile::tempdir().unwrap();
    let text = write(dir.path(), "corpus.txt", "0.5\n\n0.7\n\n1\n\n0\n\n1/3\n");
    let out = stdout(&fuzzymat(&["classify", "--input", &text]));
    assert!(out.starts_with("matrices 5\nclasses 3\n"), "{out}");

    let json = write(
        dir.path(),
        "corpus.json",
        r#"[{"n":1,"entries":[["0.5"]]},{"n":1,"entries":[["1"]]},{"n":1,"entries":[["0.25"]]}]"#,
    );
    let out = fuzzymat(&["classify", "--input", &json, "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let classes = report.as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0]["members"], serde_json::json!([0, 2]));
    assert_eq!(classes[0]["signature"]["cuts"], serde_json::json!(["0", "1"]));
    assert_eq!(classes[0]["representative"]["entries"], serde_json::json!([["0.5"]]));

    let mixed = write(dir.path(), "mixed.txt", "1\n\n1 0\n0 1\n");
    assert_eq!(fuzzymat(&["classify", "--input", &mixed]).status.code(), Some(4));
    let empty = write(dir.path(), "empty.txt", "\n");
    assert_eq!(fuzzymat(&["classify", "--input", &empty]).status.code(), Some(4));
}

#[test]
fn lattice_export() {
    let dot = stdout(&fuzzymat(&["lattice", "--m", "4", "--format", "dot"]));
    assert_eq!(dot.matches(" -> ").count(), 32);
    assert!(dot.contains("\"1010\" [label=\"A2^{1,3}\"];"));
    let json: serde_json::Value = serde_json::from_slice(&fuzzymat(&["lattice", "--m", "2", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(json["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn bench_reports_agreement() {
    let out = fuzzymat(&["bench", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("agree on all 10 per-k counts"), "{text}");
    assert!(text.contains("1023 size vectors"), "{text}");
    let out = fuzzymat(&["bench", "--n", "6", "--samples", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("skipped above 25 cells"));
}
