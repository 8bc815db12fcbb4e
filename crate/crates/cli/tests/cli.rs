use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn isorefine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isorefine"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const K3: &str = "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
const P3: &str = "p edge 3 2\ne 1 2\ne 2 3\n";

#[test]
fn same_file_is_isomorphic() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.g", K3);
    let out = isorefine(&["test", s(&a), s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "isomorphic\n");
}

#[test]
fn triangle_and_path_differ() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3.g", K3);
    let p3 = write(&dir, "p3.g", P3);
    let out = isorefine(&["test", s(&k3), s(&p3)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "not isomorphic\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(isorefine(&["test", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(isorefine(&[]).status.code(), Some(2));
    let out = isorefine(&["test", "/nonexistent/a.g", "/nonexistent/b.g"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/a.g"));
}

#[test]
fn malformed_file_reports_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.g", "p edge 2 1\ne 1 1\n");
    let out = isorefine(&["test", s(&bad), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn mapping_lines_are_an_isomorphism() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.g", "p arc 3 2\na 1 2\na 2 3\n");
    let h = write(&dir, "h.g", "p arc 3 2\na 3 1\na 2 3\n");
    let out = isorefine(&["test", "--mapping", s(&g), s(&h)]);
    assert_eq!(out.status.code(), Some(0));
    // g is 1 -> 2 -> 3 and h is 2 -> 3 -> 1
    assert_eq!(stdout(&out), "isomorphic\n1 -> 2\n2 -> 3\n3 -> 1\n");
}

#[test]
fn json_and_stats_output() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "c4.g", "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n");
    let out = isorefine(&[
        "test",
        "--json",
        "--no-backjump",
        "--no-orbit-pruning",
        s(&a),
        s(&a),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["mapping"].as_array().unwrap().len(), 4);
    assert_eq!(v["stats"]["backjumps"], 0);

    let out = isorefine(&["test", "--stats", s(&a), s(&a)]);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines[0], "isomorphic");
    let stats: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert!(stats["calls"].as_u64().unwrap() >= 1);
}

#[test]
fn trace_goes_to_stderr() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "k3.g", K3);
    let out = isorefine(&["test", "--trace", s(&a), s(&a)]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("sequence of g") && err.contains("level 0 VERTEX"));
    assert!(err.contains("FIN"));
}

#[test]
fn orbits_listing() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "c4.g", "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n");
    assert_eq!(stdout(&isorefine(&["orbits", s(&a)])), "1 2 3 4\n");
    let p = write(&dir, "p3.g", P3);
    assert_eq!(
        stdout(&isorefine(&["orbits", "--json", s(&p)])),
        "[[1],[2],[3]]\n"
    );
}

#[test]
fn generated_pairs_decide_by_polarity() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 4] = [
        &["srg-join", "--copies", "3"],
        &["tripartite", "--alpha", "1", "--beta", "2", "--k", "5"],
        &["tripartite", "--alpha", "2", "--beta", "1", "--undirected"],
        &["two-level", "--n", "2", "--m", "2"],
    ];
    for (i, case) in cases.iter().enumerate() {
        for negative in [false, true] {
            let prefix = dir.path().join(format!("case{i}-{negative}"));
            let mut args = vec!["gen"];
            args.extend_from_slice(case);
            args.extend(["--seed", "4", "--out", s(&prefix)]);
            if negative {
                args.push("--negative");
            }
            assert!(isorefine(&args).status.success(), "{args:?}");
            let g = format!("{}-g.graph", s(&prefix));
            let h = format!("{}-h.graph", s(&prefix));
            let expected = if negative { 1 } else { 0 };
            assert_eq!(
                isorefine(&["test", &g, &h]).status.code(),
                Some(expected),
                "{args:?}"
            );
        }
    }
}

#[test]
fn gen_is_deterministic() {
    let a = isorefine(&["gen", "random", "--n", "12", "--p", "0.3", "--seed", "9"]);
    let b = isorefine(&["gen", "random", "--n", "12", "--p", "0.3", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("p "));
    assert_eq!(
        isorefine(&["gen", "random", "--n", "3", "--p", "1.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn two_level_with_user_components() {
    let dir = TempDir::new().unwrap();
    let star = write(
        &dir,
        "star.g",
        "p edge 4 3\ne 1 2\ne 1 3\ne 1 4\ns orbit1 1\ns orbit3 2 3 4\n",
    );
    let closed = write(
        &dir,
        "closed.g",
        "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 3 4\ne 2 4\ns orbit1 1\ns orbit3 2 3 4\n",
    );
    for negative in [false, true] {
        let prefix = dir.path().join(format!("user-{negative}"));
        let mut args = vec!["gen", "two-level", "--n", "3", "--m", "2", "--seed", "1"];
        args.extend(["--components", s(&star), s(&closed), "--out", s(&prefix)]);
        if negative {
            args.push("--negative");
        }
        assert!(isorefine(&args).status.success());
        let g = format!("{}-g.graph", s(&prefix));
        let h = format!("{}-h.graph", s(&prefix));
        assert_eq!(
            isorefine(&["test", &g, &h]).status.code(),
            Some(if negative { 1 } else { 0 })
        );
    }
    let unmarked = write(&dir, "plain.g", "p edge 2 1\ne 1 2\n");
    let out = isorefine(&[
        "gen",
        "two-level",
        "--n",
        "2",
        "--m",
        "2",
        "--components",
        s(&unmarked),
        s(&star),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_records_and_summary() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("run");
    let args = [
        "bench",
        "--family",
        "two-level",
        "--sizes",
        "1,2",
        "--m",
        "2",
        "--instances",
        "3",
        "--seed",
        "5",
        "--out",
        s(&out_dir),
    ];
    assert!(isorefine(&args).status.success());
    let records = fs::read_to_string(out_dir.join("records.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = records
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 12);
    for r in &lines {
        assert_eq!(r["decision"], r["positive"]);
        assert!(r["calls"].as_u64().unwrap() <= r["calls_without_backjump"].as_u64().unwrap());
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["divisor"], "population");
    assert_eq!(summary["rows"].as_array().unwrap().len(), 4);

    // same seeds give the same decisions and call counts on stdout
    let strip = |o: Output| -> Vec<(serde_json::Value, serde_json::Value)> {
        stdout(&o)
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
            .map(|v| (v["decision"].clone(), v["calls"].clone()))
            .collect()
    };
    let run = || {
        isorefine(&[
            "bench",
            "--family",
            "srg-join",
            "--sizes",
            "2",
            "--instances",
            "2",
            "--no-compare",
        ])
    };
    assert_eq!(strip(run()), strip(run()));
}

#[test]
fn bench_with_no_instances_is_empty() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("empty");
    let args = [
        "bench",
        "--family",
        "srg-join",
        "--sizes",
        "2",
        "--instances",
        "0",
        "--out",
        s(&out_dir),
    ];
    assert!(isorefine(&args).status.success());
    assert_eq!(
        fs::read_to_string(out_dir.join("records.jsonl")).unwrap(),
        ""
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert!(summary["rows"].as_array().unwrap().is_empty());
}
