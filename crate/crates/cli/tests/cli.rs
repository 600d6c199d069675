use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn kncomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kncomp"))
        .args(args)
        .env_remove("KNCOMP_SEED")
        .output()
        .expect("binary runs")
}

fn edge_list(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1, "single-line JSON expected: {text}");
    serde_json::from_str(&text).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn count_path_is_three() {
    let f = edge_list("3 2\n1 2\n2 3\n");
    let out = kncomp(&[
        "count",
        "--n",
        "4",
        "--h",
        f.path().to_str().unwrap(),
        "--method",
        "auto",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["tau"], "3");
    assert_eq!(v["method_used"], "tree");
    assert_eq!(v["fallback_reason"], Value::Null);
    assert_eq!(v["n"], 4);
    assert_eq!(v["k_or_p"], 3);
    assert!(stderr(&out).is_empty());
}

#[test]
fn count_edgeless_is_cayley() {
    let f = edge_list("6 0\n");
    let out = kncomp(&[
        "count",
        "--n",
        "6",
        "--h",
        f.path().to_str().unwrap(),
        "--verbose",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["tau"], "1296");
    assert_eq!(v["method_used"], "tree");
    assert!(stderr(&out).contains("1296"));
}

#[test]
fn qt_on_p4_is_a_precondition_failure() {
    let f = edge_list("4 3\n1 2\n2 3\n3 4\n");
    let out = kncomp(&[
        "count",
        "--n",
        "4",
        "--h",
        f.path().to_str().unwrap(),
        "--method",
        "qt",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NotQuasiThreshold"));
    assert!(out.stdout.is_empty());

    let out = kncomp(&[
        "count",
        "--n",
        "6",
        "--h",
        f.path().to_str().unwrap(),
        "--method",
        "tree",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c4 = edge_list("4 4\n1 2\n2 3\n3 4\n4 1\n");
    let out = kncomp(&[
        "count",
        "--n",
        "6",
        "--h",
        c4.path().to_str().unwrap(),
        "--method",
        "tree",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn auto_falls_back_on_c4() {
    let c4 = edge_list("4 4\n1 2\n2 3\n3 4\n4 1\n");
    let out = kncomp(&["count", "--n", "6", "--h", c4.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["method_used"], "kirchhoff");
    assert!(v["fallback_reason"].as_str().unwrap().contains("qt"));
}

#[test]
fn csplit_input() {
    let out = kncomp(&["count", "--n", "9", "--csplit", "3,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    // 9^3 * 6 * 4^3
    assert_eq!(v["tau"], "279936");
    assert_eq!(v["method_used"], "csplit");

    let out = kncomp(&["count", "--n", "5", "--csplit", "3,2"]);
    assert_eq!(stdout_json(&out)["tau"], "0");
}

#[test]
fn parse_errors_exit_one() {
    let bad = edge_list("3 2\n1 2\n2 2\n");
    let out = kncomp(&["count", "--n", "4", "--h", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"));

    let f = edge_list("5 1\n1 2\n");
    let out = kncomp(&["count", "--n", "4", "--h", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(kncomp(&["count", "--n", "4"]).status.code(), Some(1));
    assert_eq!(
        kncomp(&["count", "--n", "x", "--csplit", "1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kncomp(&["count", "--n", "4", "--csplit", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kncomp(&["count", "--n", "4", "--h", "/nonexistent/h.el"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        kncomp(&["count", "--n", "4", "--csplit", "1,1", "--method", "fast"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(kncomp(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_tree_instance() {
    let f = edge_list("5 4\n1 2\n1 3\n3 4\n3 5\n");
    let path = f.path().to_str().unwrap();
    for oracle in ["kirchhoff", "cst-matrix", "enumerate"] {
        let out = kncomp(&[
            "verify",
            "--n",
            "7",
            "--h",
            path,
            "--method",
            "tree",
            "--against",
            oracle,
        ]);
        assert_eq!(out.status.code(), Some(0), "{oracle}: {}", stderr(&out));
        let v = stdout_json(&out);
        assert_eq!(v["equal"], true);
        assert_eq!(v["engine"]["tau"], v["oracle_tau"]);
    }
}

#[test]
fn verify_catches_a_wrong_answer() {
    let f = edge_list("5 4\n1 2\n1 3\n3 4\n3 5\n");
    let out = kncomp(&[
        "verify",
        "--n",
        "7",
        "--h",
        f.path().to_str().unwrap(),
        "--method",
        "tree",
        "--against",
        "kirchhoff",
        "--debug-perturb",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["equal"], false);
    assert!(stderr(&out).contains("MISMATCH"));
}

#[test]
fn verify_guards_enumeration_size() {
    let f = edge_list("3 2\n1 2\n2 3\n");
    let out = kncomp(&[
        "verify",
        "--n",
        "12",
        "--h",
        f.path().to_str().unwrap(),
        "--method",
        "tree",
        "--against",
        "enumerate",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("limited to 8 vertices"));

    let out = kncomp(&[
        "verify",
        "--n",
        "5",
        "--csplit",
        "1,2",
        "--method",
        "qt",
        "--against",
        "tree",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_emits_csv() {
    for family in ["path", "star", "caterpillar", "random-tree", "random-qt"] {
        for extra in [&[][..], &["--mod-p"][..]] {
            let mut args = vec!["bench", "--family", family, "--sizes", "1,10,100"];
            args.extend_from_slice(extra);
            let out = kncomp(&args);
            assert_eq!(out.status.code(), Some(0), "{family}: {}", stderr(&out));
            let text = String::from_utf8(out.stdout).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("size,millis,ops"));
            let sizes: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
            assert_eq!(sizes, ["1", "10", "100"]);
        }
    }
    assert_eq!(
        kncomp(&["bench", "--family", "grid", "--sizes", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_seed_from_env() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_kncomp"))
            .args([
                "bench",
                "--family",
                "random-tree",
                "--sizes",
                "500",
                "--mod-p",
            ])
            .env("KNCOMP_SEED", seed)
            .output()
            .unwrap()
    };
    let ops = |o: Output| {
        String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .to_string()
    };
    assert_eq!(ops(run("7")), ops(run("7")));
    assert_eq!(run("seven").status.code(), Some(1));
}
