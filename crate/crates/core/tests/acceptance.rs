//! Acceptance suite: one pass/fail line per criterion, exit status 1 if any fail.

use std::time::{Duration, Instant};

use redos_ia::analysis::{analyze, AnalyzeOptions};
use redos_ia::fixes::SemanticNote;
use redos_ia::harness::{parse_corpus, scan, ScanOptions};
use redos_ia::selftest::{
    bounding_checks, finding_checks, fuzz_checks, run_count_checks, theory_agreement,
    verdict_checks, Check, FINDING_CASES,
};
use redos_ia::syntax::MatchMode;
use redos_ia::testgen::corpus;
use redos_ia::theory::TheoremId;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

fn from_checks(checks: Vec<Check>, elapsed: Duration, limit: Duration) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    let in_time = elapsed <= limit;
    let mut details = failed.clone();
    if !in_time {
        details.push(format!("took {elapsed:?}, limit {limit:?}"));
    }
    Outcome {
        passed: failed.is_empty() && in_time,
        summary: format!(
            "{}/{} checks in {elapsed:.2?}",
            checks.len() - failed.len(),
            checks.len()
        ),
        details,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn example_verdicts() -> Outcome {
    let (checks, dt) = timed(verdict_checks);
    from_checks(checks, dt, Duration::from_secs(5))
}

fn example_findings() -> Outcome {
    let (checks, dt) = timed(finding_checks);
    from_checks(checks, dt, Duration::from_secs(30))
}

fn soundness_and_recall() -> (Outcome, Outcome) {
    let (checks, dt) = timed(|| fuzz_checks(10_000, 42, 0.95));
    let mut it = checks.into_iter();
    let (sound, recall, pinned) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    let soundness = from_checks(vec![sound], dt, Duration::from_secs(300));
    let mut recall_out = from_checks(vec![recall.clone(), pinned], dt, Duration::from_secs(300));
    recall_out.summary = format!(
        "{} ({})",
        recall_out.summary,
        recall.detail.split(';').next().unwrap_or("")
    );
    // every miss is listed for triage, pass or fail
    if let Some((_, misses)) = recall.detail.split_once("misses: ") {
        recall_out.details.extend(
            misses
                .split("  ")
                .filter(|m| !m.is_empty())
                .map(|m| format!("miss {m}")),
        );
    }
    (soundness, recall_out)
}

fn theory_oracle() -> Outcome {
    let (tallies, dt) = timed(|| {
        [
            TheoremId::T0a,
            TheoremId::T0b,
            TheoremId::T0c,
            TheoremId::T1,
            TheoremId::T2,
            TheoremId::T3,
            TheoremId::T4,
        ]
        .into_iter()
        .map(|id| theory_agreement(id, 1000, 42))
        .collect::<Vec<_>>()
    });
    let mut passed = dt <= Duration::from_secs(600);
    let mut details = Vec::new();
    let mut parts = Vec::new();
    for t in &tallies {
        let ok = t.instances == 1000
            && if t.theorem == TheoremId::T2 {
                t.rate() >= 0.95
            } else {
                t.disagreements.is_empty()
            };
        passed &= ok;
        parts.push(format!("{:?} {}/{}", t.theorem, t.agree, t.instances));
        for (p, c, d) in &t.disagreements {
            details.push(format!(
                "{:?} {p}: theorem says {c:?}, classifier {}",
                t.theorem,
                d.as_str()
            ));
        }
    }
    Outcome {
        passed,
        summary: format!("{} in {dt:.2?}", parts.join(", ")),
        details,
    }
}

fn run_counts() -> Outcome {
    let ((checked, failures), dt) = timed(|| run_count_checks(500, 42));
    Outcome {
        passed: failures.is_empty() && checked >= 450,
        summary: format!(
            "{checked} patterns checked, {} inconsistencies in {dt:.2?}",
            failures.len()
        ),
        details: failures,
    }
}

fn fix_verification() -> Outcome {
    let t = Instant::now();
    let opts = AnalyzeOptions {
        fixes: true,
        ..AnalyzeOptions::default()
    };
    let mut details = Vec::new();
    let mut produced = Vec::new();
    for &(p, kinds) in FINDING_CASES.iter().filter(|(_, k)| !k.is_empty()) {
        let r = analyze(p, MatchMode::Full, &opts);
        for f in &r.fixes {
            match (&f.regex, &f.verdict) {
                (Some(x), Some(v)) if !v.is_infinite() => produced.push(x.clone()),
                (Some(x), v) => details.push(format!("{p} {}: {x} verdict {v:?}", f.strategy)),
                (None, _) if f.note == SemanticNote::AdvisoryOnly => {}
                (None, _) => details.push(format!("{p} {}: no regex", f.strategy)),
            }
        }
        if r.fixes.is_empty() {
            details.push(format!("{p} ({kinds:?}): no suggestions"));
        }
    }
    for want in [
        r"\w*:\d*",
        r"[a-zA-Z_]*\d*",
        r"\w*",
        r"\w{,10}\d{,10}",
        "(a|b)*",
    ] {
        if !produced.iter().any(|x| x == want) {
            details.push(format!("expected rewrite {want} was not produced"));
        }
    }
    let (checked, failures) = bounding_checks(1000, 42);
    details.extend(failures.iter().cloned());
    Outcome {
        passed: details.is_empty() && checked == 1000,
        summary: format!(
            "{} verified rewrites of the table examples, bounding {}/{checked} non-IA in {:.2?}",
            produced.len(),
            checked - failures.len(),
            t.elapsed()
        ),
        details,
    }
}

fn determinism_and_budget() -> Outcome {
    let text = corpus(42, 1000).join("\n");
    let records = parse_corpus(&text).expect("generated corpus parses");
    let opts = ScanOptions::default();
    let json = |out: redos_ia::harness::ScanOutput| {
        serde_json::to_string(&(out.report, out.records)).expect("serializable")
    };
    let (first, dt) = timed(|| json(scan(&records, &opts)));
    let second = json(scan(&records, &opts));
    let mut details = Vec::new();
    if first != second {
        details.push("two scans of the same corpus differ".into());
    }
    let (r, skip_time) =
        timed(|| analyze("(a{50}){50}", MatchMode::Full, &AnalyzeOptions::default()));
    if r.skip.is_none() {
        details.push("(a{50}){50} was not skipped".into());
    }
    if skip_time > Duration::from_secs(2) {
        details.push(format!("(a{{50}}){{50}} took {skip_time:?}"));
    }
    Outcome {
        passed: details.is_empty(),
        summary: format!("1000-pattern scan {dt:.2?} repeated identically, oversized pattern skipped in {skip_time:.2?}"),
        details,
    }
}

fn main() {
    let (soundness, recall) = soundness_and_recall();
    let results = [
        ("example verdicts", example_verdicts()),
        ("example anti-patterns", example_findings()),
        ("fuzz soundness", soundness),
        ("fuzz recall", recall),
        ("theory oracle agreement", theory_oracle()),
        ("run-count consistency", run_counts()),
        ("fix verification", fix_verification()),
        ("scan determinism and budget", determinism_and_budget()),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.passed;
        println!(
            "criterion {} {}: {} ({})",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.summary
        );
        for d in &o.details {
            println!("    {d}");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
