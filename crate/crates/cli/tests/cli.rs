use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redos-ia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn syntax_error_exits_with_2_and_points_at_span() {
    let o = run(&["analyze", "ab(c"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing ')'"), "{err}");
    assert!(err.contains("~~"), "{err}");
}

#[test]
fn soa_findings_only_with_flag() {
    let plain = stdout(&run(&["analyze", "(b*c)*", "--json"]));
    let with = stdout(&run(&["analyze", "(b*c)*", "--json", "--soa"]));
    let plain: serde_json::Value = serde_json::from_str(&plain).unwrap();
    let with: serde_json::Value = serde_json::from_str(&with).unwrap();
    assert_eq!(plain["findings"].as_array().unwrap().len(), 0);
    assert_eq!(with["findings"][0]["kind"], "SOA_StarHeight");
    assert_eq!(with["verdict"]["degree"], "unambiguous");
}

#[test]
fn analyze_reports_degree_and_attack() {
    let o = run(&["analyze", "(a|b|ab)*"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("EDA"), "{out}");
    assert!(out.contains("Star2"), "{out}");
    assert!(out.contains("attack:"), "{out}");
}

#[test]
fn fix_reports_nothing_for_unambiguous() {
    let out = stdout(&run(&["fix", "b+c"]));
    assert!(out.contains("no IA findings; nothing to fix"), "{out}");
}

#[test]
fn fix_lists_delimiter_rewrite() {
    let out = stdout(&run(&["fix", r"\w*0\d*"]));
    assert!(out.contains(r"\w*:0\d*"), "{out}");
    let only = stdout(&run(&["fix", r"\w*0\d*", "--strategy", "f4", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&only).unwrap();
    let fixes = v["fixes"].as_array().unwrap();
    assert!(!fixes.is_empty());
    assert!(fixes.iter().all(|f| f["strategy"] == "F4"));
}

#[test]
fn export_nfa_writes_dot() {
    let out = stdout(&run(&["analyze", "a*", "--export-nfa", "-"]));
    assert!(out.starts_with("digraph"), "{out}");
}

fn scan_dir(name: &str, corpus: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("redos-ia-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("corpus.txt"), corpus).unwrap();
    dir
}

#[test]
fn scan_empty_corpus() {
    let dir = scan_dir("empty", "");
    let o = run(&["scan", dir.join("corpus.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["totals"]["records"], 0);
}

#[test]
fn scan_csv_columns_and_skips() {
    let dir = scan_dir("csv", "a+\n(?=x)y\n(a|b|ab)*\n");
    let csv = dir.join("out.csv");
    let corpus = dir.join("corpus.txt");
    let o = run(&[
        "scan",
        corpus.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "pattern,verdict,findings,strategies_applicable");
    assert_eq!(lines[2], "(?=x)y,skipped:unsupported,,");
    assert!(lines[3].starts_with("(a|b|ab)*,eda,Star2,"), "{}", lines[3]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["totals"]["skipped_by_reason"]["unsupported"], 1);
}

#[test]
fn scan_is_deterministic_across_job_counts() {
    let corpus: String = redos_ia::testgen::corpus(7, 60).join("\n");
    let dir = scan_dir("det", &corpus);
    let path = dir.join("corpus.txt");
    let a = run(&["scan", path.to_str().unwrap(), "--jobs", "1"]);
    let b = run(&["scan", path.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
}
