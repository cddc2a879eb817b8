use redos_ia::analysis::{analyze, AnalyzeOptions};
use redos_ia::fixes::{verify_fix, FixOptions, LanguageRelation, SemanticNote, Strategy};
use redos_ia::syntax::{MatchMode, ParseOptions};

fn opts() -> AnalyzeOptions {
    AnalyzeOptions {
        fixes: true,
        ..Default::default()
    }
}

fn fixes(p: &str) -> Vec<(Strategy, Option<String>, SemanticNote, bool)> {
    let r = analyze(p, MatchMode::Full, &opts());
    r.fixes
        .iter()
        .map(|f| (f.strategy, f.regex.clone(), f.note, f.verified))
        .collect()
}

fn has(p: &str, s: Strategy, regex: &str) -> bool {
    fixes(p)
        .iter()
        .any(|(st, r, _, v)| *st == s && r.as_deref() == Some(regex) && *v)
}

#[test]
fn table_cells_are_produced_and_verified() {
    assert!(has(r"\w*\d*", Strategy::F1, r"\w*:\d*"));
    assert!(has(r"\w*0\d*", Strategy::F1, r"\w*:0\d*"));
    assert!(has(r"\w*:*\d*", Strategy::F1, r"\w*:+\d*"));
    assert!(has("(a|b|ab)*", Strategy::F1, "(a:|b|ab)*"));
    assert!(has(r"\w*\d*", Strategy::F2, r"[a-zA-Z_]*\d*"));
    assert!(has(r"\w*0\d*", Strategy::F2, r"[a-zA-Z_]*0\d*"));
    assert!(has(r"\w*:*\d*", Strategy::F2, r"[a-zA-Z_]*:*\d*"));
    assert!(has(r"(\w|\d)*", Strategy::F2, r"([a-zA-Z_]|\d)*"));
    assert!(has("(a|b|ab)*", Strategy::F2, "(b|ab)*"));
    assert!(has(r"(0?\w*)*", Strategy::F2, r"(0?[a-zA-Z1-9_])*"));
    assert!(has(r"\w*\d*", Strategy::F3, r"\w*"));
    assert!(has(r"(\w|\d)*", Strategy::F3, r"\w*"));
    assert!(has("(a|b|ab)*", Strategy::F3, "(a|b)*"));
    assert!(has(r"(0?\w*)*", Strategy::F3, r"\w*"));
    assert!(has(r"\w*\d*", Strategy::F4, r"\w{,10}\d{,10}"));
    assert!(has(r"\w*0\d*", Strategy::F4, r"\w{,10}0\d{,10}"));
    assert!(has(r"\w*:*\d*", Strategy::F4, r"\w{,10}:*\d{,10}"));
    assert!(has(r"(\w|\d)*", Strategy::F4, r"(\w|\d){,10}"));
    assert!(has("(a|b|ab)*", Strategy::F4, "(a|b|ab){,10}"));
    assert!(has(r"(0?\w*)*", Strategy::F4, r"(0?\w{,10}){,10}"));
    assert!(has("(a|b|ab)*", Strategy::F5, "a+|b+|(ab)+"));
    assert!(has(r"(\w|\d)*", Strategy::F5, r"\w*|\d*"));
}

#[test]
fn superset_merge_is_preserving_only_when_equal() {
    let fs = fixes(r"(\w|\d)*");
    assert!(fs.iter().any(|(s, r, n, _)| *s == Strategy::F3
        && r.as_deref() == Some(r"\w*")
        && *n == SemanticNote::Preserving));
}

#[test]
fn suggestions_follow_strategy_frequency() {
    let r = analyze(r"\w*\d*", MatchMode::Full, &opts());
    let order: Vec<Strategy> = r.fixes.iter().map(|f| f.strategy).collect();
    let mut sorted = order.clone();
    sorted.sort_by_key(|s| std::cmp::Reverse(s.frequency()));
    assert_eq!(order, sorted);
}

#[test]
fn verified_fixes_are_never_ia() {
    for p in [
        r"\w*\d*",
        r"\w*0\d*",
        r"\w*:*\d*",
        r"(\w|\d)*",
        "(a|b|ab)*",
        r"(0?\w*)*",
        "a*(aa)*",
        "(a+b?a+)",
    ] {
        let r = analyze(p, MatchMode::Full, &opts());
        for f in &r.fixes {
            if f.verified {
                assert!(
                    !f.verdict.as_ref().unwrap().is_infinite(),
                    "{p} -> {:?}",
                    f.regex
                );
            } else {
                assert_eq!(f.note, SemanticNote::AdvisoryOnly);
                assert!(f.regex.is_none());
            }
        }
    }
}

#[test]
fn nothing_to_fix_for_unambiguous() {
    assert!(fixes("b+c").is_empty());
}

#[test]
fn verify_fix_relations() {
    let p = ParseOptions::default();
    let o = FixOptions::default();
    let v = verify_fix(r"\w*\d*", r"\w*", MatchMode::Full, &p, &o).unwrap();
    assert!(!v.verdict.is_infinite());
    assert_eq!(v.relation, LanguageRelation::Equal);
    let v = verify_fix(r"(\w|\d)*", r"(\w|\d){,10}", MatchMode::Full, &p, &o).unwrap();
    assert!(!v.verdict.is_infinite());
    assert_eq!(v.relation, LanguageRelation::OriginalSupersetOfFixed);
    let v = verify_fix("a*a*", "a*", MatchMode::Full, &p, &o).unwrap();
    assert_eq!(v.relation, LanguageRelation::Equal);
    let v = verify_fix("a", "b", MatchMode::Full, &p, &o).unwrap();
    assert_eq!(v.relation, LanguageRelation::Incomparable);
    assert_eq!(v.counterexample.as_deref(), Some("a"));
}
