use redos_ia::analysis::{analyze, AnalyzeOptions};
use redos_ia::antipatterns::{FindingKind, Form};
use redos_ia::automata::Degree;
use redos_ia::harness::{evaluate, parse_corpus, scan, ScanOptions};
use redos_ia::syntax::{MatchMode, Span};
use redos_ia::theory::TheoremId;

fn run(p: &str, mode: MatchMode) -> redos_ia::analysis::AnalysisReport {
    analyze(p, mode, &AnalyzeOptions::default())
}

#[test]
fn partial_mode_exposes_the_implicit_loops() {
    let r = run("a+", MatchMode::Partial);
    assert_eq!(r.verdict.as_ref().unwrap().degree, Degree::Pda);
    assert!(r
        .findings
        .iter()
        .any(|f| f.kind == FindingKind::Concat1 && f.form == Form::Wrapped));
    let full = run("a+", MatchMode::Full);
    assert_eq!(full.verdict.unwrap().degree, Degree::Unambiguous);
    assert!(full.findings.is_empty());
    let anchored = run("^a+$", MatchMode::Partial);
    assert_eq!(anchored.verdict.unwrap().degree, Degree::Unambiguous);
}

#[test]
fn optional_bridge_is_concat3() {
    let r = run("(a+b?a+)", MatchMode::Full);
    assert!(r.verdict.as_ref().unwrap().is_infinite());
    let f = r.ia_findings().next().unwrap();
    assert_eq!(f.kind, FindingKind::Concat3);
    assert_eq!(f.witness.as_deref(), Some("a"));
}

#[test]
fn attack_strings_grow_the_run_count() {
    let r = run("(a|a)*", MatchMode::Full);
    let v = r.verdict.unwrap();
    assert_eq!(v.degree, Degree::Eda);
    let w = v.witness.unwrap();
    assert!(w.loop_word().chars().all(|c| c == 'a'));
    let (_, ast) =
        redos_ia::analysis::prepare("(a|a)*", MatchMode::Full, &Default::default()).unwrap();
    let nfa = redos_ia::automata::build_nfa(
        &ast,
        Default::default(),
        &redos_ia::budget::Budget::unlimited(),
    )
    .unwrap();
    let runs: Vec<u128> = (1..=4).map(|k| nfa.count_runs(&w.attack(k))).collect();
    assert!(runs.windows(2).all(|p| p[1] >= 2 * p[0]), "{runs:?}");
}

#[test]
fn skips_carry_reason_and_span() {
    let syntax = run("ab(c", MatchMode::Full);
    let s = syntax.skip.unwrap();
    assert_eq!(s.reason, "syntax");
    assert_eq!(s.span, Some(Span::new(2, 4)));
    assert_eq!(
        run("(?=x)y", MatchMode::Full).skip.unwrap().reason,
        "unsupported"
    );
    assert_eq!(
        run(r"(a)\1", MatchMode::Full).skip.unwrap().reason,
        "unsupported"
    );
    assert_eq!(
        run("a^b", MatchMode::Full).skip.unwrap().reason,
        "unsupported"
    );
    assert_eq!(
        run("(a{50}){50}", MatchMode::Full).skip.unwrap().reason,
        "budget"
    );
}

#[test]
fn theory_explanations_on_request() {
    let opts = AnalyzeOptions {
        explain_theory: true,
        ..AnalyzeOptions::default()
    };
    let r = analyze("(a|b|ab)*", MatchMode::Full, &opts);
    let ids: Vec<TheoremId> = r.theory.iter().map(|t| t.theorem).collect();
    assert_eq!(ids, [TheoremId::T0c, TheoremId::T3, TheoremId::T4]);
    assert!(run("(a|b|ab)*", MatchMode::Full).theory.is_empty());
}

#[test]
fn scan_totals_and_scores() {
    let text = "a+\n\n(a|b|ab)*\n(?=x)y\n\\w*\\d*\nb+c\n";
    let records = parse_corpus(text).unwrap();
    assert_eq!(
        records.iter().map(|r| r.line).collect::<Vec<_>>(),
        [1, 3, 4, 5, 6]
    );
    let out = scan(&records, &ScanOptions::default());
    let t = &out.report.totals;
    assert_eq!((t.records, t.analyzed, t.skipped), (5, 4, 1));
    assert_eq!(out.report.ours.tp, 2);
    assert_eq!(out.report.ours.fp, 0);
    assert_eq!(out.report.ours.tn, 2);
    // (a|b|ab)* is IA and missed by the SOA family
    assert_eq!(out.report.soa.fn_, 1);
    assert_eq!(evaluate(MatchMode::Full, &out.records), out.report);
}

#[test]
fn ndjson_corpus_keeps_origins() {
    let text = "{\"pattern\":\"a*a*\",\"origin\":\"pkg/x.js\"}\n{\"pattern\":\"b\"}\n";
    let records = parse_corpus(text).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].origin.as_deref(), Some("pkg/x.js"));
    assert!(parse_corpus("{\"nope\":1}\n").is_err());
}

#[test]
fn example_corpus_scores() {
    let patterns = [
        r"\w*\d*",
        r"\w*0\d*",
        r"\w*:*\d*",
        r"(\w|\d)*",
        "(a|b|ab)*",
        r"(0?\w*)*",
        "(xy*)*",
        "(b*c)*",
        "(a|b)*(ab)*",
    ];
    let records = parse_corpus(&patterns.join("\n")).unwrap();
    let report = scan(&records, &ScanOptions::default()).report;
    assert_eq!(report.ours.precision, Some(1.0));
    assert_eq!(report.ours.fp, 0);
    // (b*c)* is flagged by star height but is not ambiguous
    assert!(report.soa.fp >= 1);
    for s in [&report.ours, &report.soa] {
        if let Some(p) = s.precision {
            assert!((p - s.tp as f64 / (s.tp + s.fp) as f64).abs() < 1e-12);
        }
        if let Some(r) = s.recall {
            assert!((r - s.tp as f64 / (s.tp + s.fn_) as f64).abs() < 1e-12);
        }
    }
    let ia = report.ground_truth.pda + report.ground_truth.eda;
    assert_eq!(report.ours.tp + report.ours.fn_, ia);
    assert_eq!(report.soa.tp + report.soa.fn_, ia);
}
