//! Invariants checked over generated inputs.

use proptest::prelude::*;
use redos_ia::analysis::{analyze, ground_truth, AnalysisReport, AnalyzeOptions};
use redos_ia::automata::{build_nfa, partition, to_dot};
use redos_ia::budget::{Budget, Limits};
use redos_ia::fixes::{verify_fix, FixOptions, LanguageRelation};
use redos_ia::syntax::{
    desugar, is_wrapper_loop, parse, wrap_for_match_mode, Alphabet, CharSet, MatchMode,
    ParseOptions,
};
use redos_ia::testgen::{GenConfig, RegexGen};

fn regex(depth: u32) -> impl Strategy<Value = String> {
    any::<u64>().prop_map(move |seed| {
        RegexGen::new(
            seed,
            GenConfig {
                max_depth: depth,
                ..GenConfig::default()
            },
        )
        .generate()
    })
}

fn charset() -> impl Strategy<Value = CharSet> {
    prop::collection::vec((0u32..128, 0u32..8), 0..5)
        .prop_map(|v| CharSet::from_ranges(v.into_iter().map(|(lo, w)| (lo, (lo + w).min(127)))))
}

fn well_formed(s: &CharSet) -> bool {
    let r = s.ranges();
    r.iter().all(|&(lo, hi)| lo <= hi) && r.windows(2).all(|w| w[0].1 + 1 < w[1].0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_and_reparsing_keeps_shape(p in regex(5)) {
        let opts = ParseOptions::default();
        let ast = parse(&p, &opts).unwrap();
        let printed = ast.to_source(Alphabet::Ascii, false);
        let again = parse(&printed, &opts).unwrap();
        prop_assert!(again.same_shape(&ast), "{} printed as {}", p, printed);
    }

    #[test]
    fn wrapping_is_idempotent(p in regex(4)) {
        let ast = desugar(&parse(&p, &ParseOptions::default()).unwrap(), 100).unwrap();
        let full = wrap_for_match_mode(&ast, MatchMode::Full, Alphabet::Ascii);
        prop_assert!(wrap_for_match_mode(&full, MatchMode::Full, Alphabet::Ascii).same_shape(&full));
        let once = wrap_for_match_mode(&ast, MatchMode::Partial, Alphabet::Ascii);
        let twice = wrap_for_match_mode(&once, MatchMode::Partial, Alphabet::Ascii);
        prop_assert!(twice.same_shape(&once), "{}", p);
    }

    #[test]
    fn charset_operations_stay_canonical(a in charset(), b in charset()) {
        for s in [a.union(&b), a.intersect(&b), a.difference(&b), a.complement(Alphabet::Ascii)] {
            prop_assert!(well_formed(&s), "{:?}", s.ranges());
        }
        for c in 0u32..128 {
            prop_assert_eq!(a.union(&b).contains(c), a.contains(c) || b.contains(c));
            prop_assert_eq!(a.intersect(&b).contains(c), a.contains(c) && b.contains(c));
            prop_assert_eq!(a.difference(&b).contains(c), a.contains(c) && !b.contains(c));
            prop_assert_eq!(a.complement(Alphabet::Ascii).contains(c), !a.contains(c));
        }
    }

    #[test]
    fn minterms_partition_the_alphabet(sets in prop::collection::vec(charset(), 0..6)) {
        let parts = partition(Alphabet::Ascii, &sets);
        let total: u64 = parts.iter().map(CharSet::len).sum();
        prop_assert_eq!(total, 128);
        for (i, p) in parts.iter().enumerate() {
            prop_assert!(!p.is_empty());
            for q in &parts[i + 1..] {
                prop_assert!(!p.overlaps(q));
            }
            for s in &sets {
                prop_assert!(p.is_subset(s) || !p.overlaps(s));
            }
        }
    }

    #[test]
    fn ia_findings_imply_infinite_ambiguity(p in regex(6)) {
        let r = analyze(&p, MatchMode::Full, &AnalyzeOptions::default());
        if let Some(v) = &r.verdict {
            prop_assert!(!r.has_ia_finding() || v.is_infinite(), "{} flagged but {}", p, v.degree.as_str());
            prop_assert_eq!(v.witness.is_some(), v.is_infinite());
        }
    }

    #[test]
    fn dot_export_lists_every_state(p in regex(4)) {
        let ast = desugar(&parse(&p, &ParseOptions::default()).unwrap(), 100).unwrap();
        let nfa = build_nfa(&ast, Alphabet::Ascii, &Budget::unlimited()).unwrap().trim();
        let dot = to_dot(&nfa);
        prop_assert!(dot.starts_with("digraph"));
        for s in 0..nfa.num_states() {
            prop_assert!(dot.contains(&format!("  s{s} [")), "state {} missing", s);
        }
    }
}

// fix generation and verification are the slow part; fewer cases
proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reports_round_trip_through_json(p in regex(4)) {
        let r = analyze(&p, MatchMode::Partial, &AnalyzeOptions { fixes: true, ..AnalyzeOptions::default() });
        let text = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn verified_fixes_are_not_ia(p in regex(5)) {
        let r = analyze(&p, MatchMode::Full, &AnalyzeOptions { fixes: true, ..AnalyzeOptions::default() });
        for f in &r.fixes {
            if let (Some(x), Some(v)) = (&f.regex, &f.verdict) {
                prop_assert!(!v.is_infinite(), "{} -> {}", p, x);
                let truth = ground_truth(x, MatchMode::Full, &ParseOptions::default(), Limits::default());
                if let Ok(t) = truth {
                    prop_assert_eq!(t.degree, v.degree);
                }
            }
        }
    }

    #[test]
    fn a_pattern_is_equal_to_itself(p in regex(4)) {
        let v = verify_fix(&p, &p, MatchMode::Full, &ParseOptions::default(), &FixOptions::default());
        if let Ok(v) = v {
            prop_assert_eq!(v.relation, LanguageRelation::Equal);
            prop_assert!(v.counterexample.is_none());
        }
    }
}

#[test]
fn partial_wrapping_adds_loops_once() {
    let ast = desugar(&parse("a+", &ParseOptions::default()).unwrap(), 100).unwrap();
    let once = wrap_for_match_mode(&ast, MatchMode::Partial, Alphabet::Ascii);
    let twice = wrap_for_match_mode(&once, MatchMode::Partial, Alphabet::Ascii);
    let loops = |n: &redos_ia::syntax::Node| {
        n.children()
            .into_iter()
            .filter(|c| is_wrapper_loop(c, Alphabet::Ascii))
            .count()
    };
    assert_eq!(loops(&once), 2);
    assert_eq!(loops(&twice), 2);
}
