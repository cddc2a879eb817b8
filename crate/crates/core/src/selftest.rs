//! A quick self-evaluation: reference example verdicts and findings, plus
//! soundness and recall on a seeded fuzz corpus.

use serde::Serialize;

use crate::analysis::{analyze, ground_truth, prepare, AnalyzeOptions};
use crate::antipatterns::FindingKind;
use crate::automata::Degree;
use crate::budget::{Budget, Limits};
use crate::fixes::{bound_repetitions, FixOptions};
use crate::syntax::{Alphabet, Node};
use crate::syntax::{MatchMode, ParseOptions};
use crate::testgen::{corpus, GenConfig, RegexGen};
use crate::theory::{
    thm0_unambiguity, thm1_alternation, thm2_concatenation, thm3_star, thm4_finite_to_infinite,
    Composition, Conclusion, Env, TheoremId,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Degree(Degree),
    NotIa,
    Ia,
}

pub const VERDICT_CASES: &[(&str, Expect)] = &[
    ("a*a*", Expect::Degree(Degree::Pda)),
    ("(a|a)*", Expect::Degree(Degree::Eda)),
    ("(a*)*", Expect::Degree(Degree::Eda)),
    ("(a*a)(aa*)", Expect::Degree(Degree::Pda)),
    (r"\w|\d", Expect::Degree(Degree::FinitelyAmbiguous)),
    ("a*|a*", Expect::Degree(Degree::FinitelyAmbiguous)),
    ("b+c", Expect::NotIa),
    ("(b+c)+", Expect::NotIa),
    ("(a|b)+(ab)+", Expect::Ia),
    ("(a|b|ab)+", Expect::Ia),
    ("(a+b?a+)", Expect::Ia),
    ("(b*c)*", Expect::NotIa),
    ("((a|ab)(c|bc))*", Expect::Ia),
];

pub const FINDING_CASES: &[(&str, &[FindingKind])] = &[
    (r"\w*\d*", &[FindingKind::Concat1]),
    (r"\w*0\d*", &[FindingKind::Concat2]),
    (r"\w*:*\d*", &[FindingKind::Concat3]),
    (r"(\w|\d)*", &[FindingKind::Star1]),
    ("(a|b|ab)*", &[FindingKind::Star2]),
    (r"(0?\w*)*", &[FindingKind::Star3]),
    ("(xy*)*", &[]),
    ("(b*c)*", &[]),
];

fn ia_kinds(pattern: &str) -> Vec<FindingKind> {
    let r = analyze(pattern, MatchMode::Full, &AnalyzeOptions::default());
    let mut k: Vec<FindingKind> = r.ia_findings().map(|f| f.kind).collect();
    k.sort();
    k.dedup();
    k
}

/// Patterns with whether the IA family and the SOA family should flag them.
pub const FAMILY_CASES: &[(&str, bool, bool)] = &[
    ("(b*c)*", false, true),
    ("(a|b)*(ab)*", true, false),
    ("(a|b|ab)*", true, false),
];

pub fn example_checks() -> Vec<Check> {
    let mut out = verdict_checks();
    out.extend(finding_checks());
    out
}

/// Ground-truth degrees of the reference examples.
pub fn verdict_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for &(p, expect) in VERDICT_CASES {
        let got = ground_truth(
            p,
            MatchMode::Full,
            &ParseOptions::default(),
            Limits::default(),
        );
        let (passed, detail) = match got {
            Ok(v) => {
                let ok = match expect {
                    Expect::Degree(d) => v.degree == d,
                    Expect::Ia => v.is_infinite(),
                    Expect::NotIa => !v.is_infinite(),
                };
                (ok, v.degree.as_str().to_string())
            }
            Err(e) => (false, e.to_string()),
        };
        out.push(Check {
            name: format!("verdict {p}"),
            passed,
            detail,
        });
    }
    out
}

/// Anti-pattern kinds of the reference examples, for both families.
pub fn finding_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for &(p, kinds) in FINDING_CASES {
        let got = ia_kinds(p);
        out.push(Check {
            name: format!("findings {p}"),
            passed: got == kinds,
            detail: format!("{got:?}"),
        });
    }
    for &(p, ia, soa) in FAMILY_CASES {
        let r = analyze(p, MatchMode::Full, &AnalyzeOptions::default());
        let got = (r.has_ia_finding(), r.has_soa_finding());
        out.push(Check {
            name: format!("families {p}"),
            passed: got == (ia, soa),
            detail: format!("IA flagged {}, SOA flagged {}", got.0, got.1),
        });
    }
    out
}

/// Soundness, recall and the pinned known miss over `n` fuzzed patterns.
pub fn fuzz_checks(n: usize, seed: u64, min_recall: f64) -> Vec<Check> {
    let opts = AnalyzeOptions::default();
    let (mut ia, mut flagged, mut fps, mut misses) = (0usize, 0usize, Vec::new(), Vec::new());
    for p in corpus(seed, n) {
        let r = analyze(&p, MatchMode::Full, &opts);
        let Some(v) = &r.verdict else { continue };
        let f = r.has_ia_finding();
        if v.is_infinite() {
            ia += 1;
            flagged += usize::from(f);
            if !f {
                misses.push(p.clone());
            }
        } else if f {
            fps.push(p);
        }
    }
    let recall = if ia == 0 {
        1.0
    } else {
        flagged as f64 / ia as f64
    };
    let pinned = "((a|ab)(c|bc))*";
    let pinned_ok = ia_kinds(pinned).is_empty()
        && ground_truth(
            pinned,
            MatchMode::Full,
            &ParseOptions::default(),
            Limits::default(),
        )
        .is_ok_and(|v| v.is_infinite());
    vec![
        Check {
            name: format!("soundness on {n} fuzzed patterns"),
            passed: fps.is_empty(),
            detail: format!(
                "{} false positives {:?}",
                fps.len(),
                fps.iter().take(5).collect::<Vec<_>>()
            ),
        },
        Check {
            name: format!("recall on {n} fuzzed patterns"),
            passed: recall >= min_recall,
            detail: format!(
                "{flagged}/{ia} = {recall:.4}; misses: {}",
                misses.join("  ")
            ),
        },
        Check {
            name: format!("known miss {pinned}"),
            passed: pinned_ok,
            detail: "IA and unflagged".into(),
        },
    ]
}

/// Agreement of one theorem predicate with the automaton classifier.
#[derive(Debug, Clone, Serialize)]
pub struct TheoryTally {
    pub theorem: TheoremId,
    /// Instances whose hypothesis held.
    pub instances: usize,
    pub agree: usize,
    /// Composite pattern, theorem conclusion, classifier degree.
    pub disagreements: Vec<(String, Conclusion, Degree)>,
    /// Draws needed to collect the instances.
    pub draws: usize,
}

impl TheoryTally {
    pub fn rate(&self) -> f64 {
        if self.instances == 0 {
            1.0
        } else {
            self.agree as f64 / self.instances as f64
        }
    }
}

fn component(gen: &mut RegexGen) -> Option<(String, Node)> {
    let src = gen.generate();
    let (_, ast) = prepare(&src, MatchMode::Full, &ParseOptions::default()).ok()?;
    Some((src, ast))
}

/// Draws random components until `n` instances satisfy `id`'s hypothesis
/// (or `n * 200` draws pass), comparing each conclusion with the degree the
/// classifier assigns to the composed regex.
pub fn theory_agreement(id: TheoremId, n: usize, seed: u64) -> TheoryTally {
    let mut gen = RegexGen::new(
        seed,
        GenConfig {
            max_depth: 4,
            ..GenConfig::default()
        },
    );
    let mut tally = TheoryTally {
        theorem: id,
        instances: 0,
        agree: 0,
        disagreements: Vec::new(),
        draws: 0,
    };
    while tally.instances < n && tally.draws < n * 200 {
        tally.draws += 1;
        let Some((s1, r1)) = component(&mut gen) else {
            continue;
        };
        let Some((s2, r2)) = component(&mut gen) else {
            continue;
        };
        let budget = Budget::new(Limits::default());
        let env = Env {
            alphabet: Alphabet::Ascii,
            budget: &budget,
        };
        let (verdict, composite, shown) = match id {
            TheoremId::T0a => (
                thm0_unambiguity(Composition::Alt, &r1, Some(&r2), &env),
                Node::alternation(vec![r1.clone(), r2.clone()]),
                format!("{s1}|{s2}"),
            ),
            TheoremId::T0b => (
                thm0_unambiguity(Composition::Concat, &r1, Some(&r2), &env),
                Node::concat(vec![r1.clone(), r2.clone()]),
                format!("({s1})({s2})"),
            ),
            TheoremId::T0c => (
                thm0_unambiguity(Composition::Star, &r1, None, &env),
                Node::star(r1.clone()),
                format!("({s1})*"),
            ),
            TheoremId::T1 => (
                thm1_alternation(&r1, &r2, &env),
                Node::alternation(vec![r1.clone(), r2.clone()]),
                format!("{s1}|{s2}"),
            ),
            TheoremId::T2 => (
                thm2_concatenation(&r1, &r2, &env),
                Node::concat(vec![r1.clone(), r2.clone()]),
                format!("({s1})({s2})"),
            ),
            TheoremId::T3 => (
                thm3_star(&r1, &env),
                Node::star(r1.clone()),
                format!("({s1})*"),
            ),
            TheoremId::T4 => (
                thm4_finite_to_infinite(&r1, &env),
                Node::star(r1.clone()),
                format!("({s1})*"),
            ),
        };
        let Ok(verdict) = verdict else { continue };
        if verdict.conclusion == Conclusion::NotApplicable {
            continue;
        }
        let Ok(degree) = env.degree(&composite) else {
            continue;
        };
        tally.instances += 1;
        if verdict.conclusion.agrees_with(degree) {
            tally.agree += 1;
        } else {
            tally
                .disagreements
                .push((shown, verdict.conclusion, degree));
        }
    }
    tally
}

/// Every string over `letters` of length at most `max_len`, shortest first.
pub fn strings_upto(letters: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| letters.iter().map(move |c| format!("{s}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn strictly_increasing(xs: &[u128]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// Checks one verdict against run counts: unambiguous means at most one run
/// on every short input; finite means no short pump family grows for four
/// steps in a row; infinite means the witness family grows strictly once
/// pumped past the automaton size, and reaches `2^k` runs when exponential.
///
/// The outer error is a pattern the pipeline could not analyze; the inner
/// one describes an inconsistency.
pub fn run_count_consistency(
    pattern: &str,
    max_len: usize,
) -> crate::error::Result<std::result::Result<Degree, String>> {
    let parse = ParseOptions::default();
    let (_, ast) = prepare(pattern, MatchMode::Full, &parse)?;
    let budget = Budget::new(Limits::default());
    let nfa = crate::automata::build_nfa(&ast, parse.alphabet, &budget)?;
    let v = crate::automata::classify_ambiguity(&nfa, &budget)?;
    let fail = |why: String| Ok(Err(format!("{pattern}: {} but {why}", v.degree.as_str())));
    match (v.degree, &v.witness) {
        (Degree::Unambiguous, _) => {
            if let Some(w) = strings_upto(&['a', 'b'], max_len)
                .into_iter()
                .find(|w| nfa.count_runs(w) > 1)
            {
                return fail(format!("{w:?} has {} runs", nfa.count_runs(&w)));
            }
        }
        (Degree::FinitelyAmbiguous, _) => {
            let short = strings_upto(&['a', 'b'], 2);
            for u in &short {
                for p in short.iter().filter(|p| !p.is_empty()) {
                    for s in &short {
                        let counts: Vec<u128> = (3..=6)
                            .map(|k| nfa.count_runs(&format!("{u}{}{s}", p.repeat(k))))
                            .collect();
                        if counts[0] > 0 && strictly_increasing(&counts) {
                            return fail(format!("{u:?}+{p:?}^k+{s:?} grows {counts:?}"));
                        }
                    }
                }
            }
        }
        (d, Some(w)) => {
            if !w.replays(&nfa) {
                return fail("the witness does not replay".into());
            }
            // finite branches can flatten the first few steps, so growth is
            // checked once the pumped part is longer than the automaton
            let k0 = nfa.num_states();
            let late: Vec<u128> = (k0..k0 + 6).map(|k| nfa.count_runs(&w.attack(k))).collect();
            if !strictly_increasing(&late) {
                return fail(format!("the pump family counts {late:?} from k={k0}"));
            }
            let counts: Vec<u128> = (1..=6).map(|k| nfa.count_runs(&w.attack(k))).collect();
            if d == Degree::Eda && counts.iter().zip(1u32..).any(|(&c, k)| c < 1u128 << k) {
                return fail(format!(
                    "the pump family counts {counts:?} grow slower than 2^k"
                ));
            }
        }
        (_, None) => return fail("no witness".into()),
    }
    Ok(Ok(v.degree))
}

/// Runs [`run_count_consistency`] on `n` fuzzed patterns over `{a,b}`.
pub fn run_count_checks(n: usize, seed: u64) -> (usize, Vec<String>) {
    let mut gen = RegexGen::new(seed, GenConfig::binary(5));
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in gen.take(n) {
        match run_count_consistency(&p, 7) {
            Ok(Ok(_)) => checked += 1,
            Ok(Err(e)) => {
                checked += 1;
                failures.push(e);
            }
            Err(_) => {}
        }
    }
    (checked, failures)
}

/// F4 on fuzzed IA patterns: bounding every repetition must remove infinite
/// ambiguity. Returns the number checked and the failures.
pub fn bounding_checks(n: usize, seed: u64) -> (usize, Vec<String>) {
    let parse = ParseOptions::default();
    let fix = FixOptions::default();
    let mut gen = RegexGen::new(seed, GenConfig::default());
    let (mut checked, mut failures, mut draws) = (0usize, Vec::new(), 0usize);
    while checked < n && draws < n * 50 {
        draws += 1;
        let p = gen.generate();
        let Ok(v) = ground_truth(&p, MatchMode::Full, &parse, Limits::default()) else {
            continue;
        };
        if !v.is_infinite() {
            continue;
        }
        checked += 1;
        let Some(fixed) = bound_repetitions(&p, &parse, &fix) else {
            failures.push(format!("{p}: no bounded rewrite"));
            continue;
        };
        match ground_truth(&fixed, MatchMode::Full, &parse, Limits::default()) {
            Ok(w) if !w.is_infinite() => {}
            Ok(w) => failures.push(format!("{p} -> {fixed}: still {}", w.degree.as_str())),
            // too large to classify: an acyclic trimmed automaton settles it
            Err(e) if acyclic(&fixed, &parse) != Some(true) => {
                failures.push(format!("{p} -> {fixed}: {e}"))
            }
            Err(_) => {}
        }
    }
    (checked, failures)
}

fn acyclic(pattern: &str, parse: &ParseOptions) -> Option<bool> {
    let (_, ast) = prepare(pattern, MatchMode::Full, parse).ok()?;
    let nfa =
        crate::automata::build_nfa(&ast, parse.alphabet, &Budget::new(Limits::default())).ok()?;
    Some(nfa.trim().is_acyclic())
}
