use std::path::PathBuf;
use std::process::{Command, Output};

fn running_example() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/path4.json").display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracegen")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn mobius_reports_the_polynomial_and_series() {
    let g = running_example();
    let json: serde_json::Value = serde_json::from_str(&stdout(&["mobius", "--graph", &g, "--series-degree", "4", "--format", "json"])).unwrap();
    let text = json.to_string();
    for n in [1, 4, 13, 40, 121] {
        assert!(text.contains(&n.to_string()), "{text}");
    }
    let critical = stdout(&["mobius", "--graph", &g, "--critical"]);
    let value: f64 = critical.split_whitespace().rev().find_map(|w| w.parse().ok()).unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-9, "{critical}");
}

#[test]
fn same_seed_same_bytes() {
    let g = running_example();
    for args in [
        vec!["sample", "--graph", g.as_str(), "--p", "1/5", "--count", "200", "--seed", "9"],
        vec!["sample", "--graph", g.as_str(), "--p", "0.3", "--count", "200", "--algorithm", "rejection", "--normal-form"],
        vec!["stream", "--graph", g.as_str(), "--loops", "100", "--seed", "9"],
        vec!["stream", "--graph", "cycle:4", "--algorithm", "rejection", "--loops", "1000", "--budget-letters", "500"],
        vec!["verify", "--graph", g.as_str(), "--p", "1/5", "--samples", "2000", "--seed", "9"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    let other = stdout(&["sample", "--graph", &g, "--p", "1/5", "--count", "200", "--seed", "10"]);
    assert_ne!(other, stdout(&["sample", "--graph", &g, "--p", "1/5", "--count", "200", "--seed", "9"]));
}

#[test]
fn samples_come_one_per_line() {
    let out = stdout(&["sample", "--graph", &running_example(), "--p", "1/5", "--count", "500"]);
    let lines: Vec<&str> = out.split('\n').collect();
    assert_eq!(lines.len(), 501);
    assert_eq!(lines[500], "");
    // the empty trace is an empty line
    assert!(lines[..500].iter().any(|l| l.is_empty()));
    for l in lines[..500].iter().filter(|l| !l.is_empty()) {
        assert!(l.split('.').all(|a| ["a", "b", "c", "d"].contains(&a)), "{l}");
    }
}

#[test]
fn stream_is_monotone_ndjson() {
    let out = stdout(&["stream", "--graph", &running_example(), "--loops", "300", "--algorithm", "rejection"]);
    let mut total = 0u64;
    for (i, line) in out.lines().enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["loop"].as_u64(), Some(i as u64 + 1));
        let inc = v["increment"].as_str().unwrap();
        assert!(inc.ends_with('d'));
        total += inc.split('.').count() as u64;
        assert_eq!(v["total_length"].as_u64(), Some(total));
        assert_eq!(v["rejections"].as_u64(), Some(0));
    }
    assert_eq!(out.lines().count(), 300);
}

#[test]
fn analyze_and_verify_emit_json() {
    let g = running_example();
    let a: serde_json::Value = serde_json::from_str(&stdout(&["analyze", "--graph", &g, "--ordering", "a,c,b,d"])).unwrap();
    let text = a.to_string();
    assert!(text.contains("\"chordal\":true"), "{text}");
    assert!(text.contains("\"rejection_free\":false"), "{text}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&["verify", "--graph", &g, "--p", "1/5", "--samples", "5000"])).unwrap();
    assert_eq!(v["empty"]["exact"].as_f64(), Some(0.32));
    assert!(v["total_variation"].as_f64().unwrap() < 1.0);
}

#[test]
fn errors_map_to_exit_codes() {
    let g = running_example();
    // a parameter at or above the critical root is a domain error
    assert_eq!(run(&["sample", "--graph", &g, "--p", "0.4"]).status.code(), Some(2));
    assert_eq!(run(&["stream", "--graph", "edgeless:3", "--loops", "1"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--graph", "/no/such/graph.json", "--p", "0.1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["sample", "--graph", &g, "--p", "seven"]).status.code(), Some(1));
    let out = run(&["sample", "--graph", &g, "--p", "0.4"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("tracegen: "));
}
