//! Human-readable output.

use std::fmt::Write;

use redos_ia::analysis::AnalysisReport;
use redos_ia::antipatterns::{Finding, Form};
use redos_ia::automata::{AmbiguityVerdict, Degree};
use redos_ia::fixes::FixSuggestion;
use redos_ia::harness::{DetectorScore, EvalReport};
use redos_ia::syntax::Span;

pub fn verdict_label(v: &AmbiguityVerdict) -> &'static str {
    match v.degree {
        Degree::Unambiguous => "not IA (unambiguous)",
        Degree::FinitelyAmbiguous => "not IA (finitely ambiguous)",
        Degree::Pda => "IA, polynomial (PDA)",
        Degree::Eda => "IA, exponential (EDA)",
    }
}

/// Underlines `spans` beneath the pattern; assumes one column per byte.
fn underline(pattern: &str, spans: &[Span]) -> String {
    let mut marks = vec![' '; pattern.len() + 1];
    for s in spans {
        if s.is_empty() {
            marks[s.start.min(pattern.len())] = '^';
        }
        for m in marks.iter_mut().take(s.end).skip(s.start) {
            *m = '~';
        }
    }
    marks.into_iter().collect::<String>().trim_end().to_string()
}

fn finding(out: &mut String, pattern: &str, i: usize, f: &Finding) {
    let form = if f.form == Form::Wrapped {
        " (partial-match form)"
    } else {
        ""
    };
    let _ = writeln!(out, "  [{i}] {}{form}", f.kind);
    if let Some(w) = &f.witness {
        let _ = writeln!(out, "      shared string: {w:?}");
    }
    let _ = writeln!(out, "      {}", f.explanation);
    let spans: Vec<Span> = f.parts.iter().map(|p| p.span).collect();
    if pattern.is_ascii() {
        let _ = writeln!(out, "      {pattern}\n      {}", underline(pattern, &spans));
    }
}

fn fix_line(out: &mut String, f: &FixSuggestion) {
    let note = serde_json::to_value(f.note)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    match &f.regex {
        Some(r) => {
            let verdict = f.verdict.as_ref().map_or("unverified", verdict_label);
            let _ = writeln!(
                out,
                "  {} {} for [{}]: {r}",
                f.strategy,
                f.strategy.title(),
                f.finding
            );
            let _ = writeln!(out, "      {note}; rewritten pattern is {verdict}");
        }
        None => {
            let _ = writeln!(
                out,
                "  {} {} for [{}]: advice only",
                f.strategy,
                f.strategy.title(),
                f.finding
            );
        }
    }
    let _ = writeln!(out, "      {}", f.explanation);
    if let Some(c) = &f.counterexample {
        let _ = writeln!(out, "      differs from the original on {c:?}");
    }
    if let Some(w) = &f.warning {
        let _ = writeln!(out, "      warning: {w}");
    }
}

pub fn report(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pattern: {}", r.pattern);
    let _ = writeln!(out, "mode:    {}", r.mode.as_str());
    if let Some(s) = &r.skip {
        let _ = writeln!(out, "skipped ({}): {}", s.reason, s.message);
        return out;
    }
    if let Some(v) = &r.verdict {
        let _ = writeln!(out, "verdict: {}", verdict_label(v));
        if let Some(w) = &v.witness {
            let _ = writeln!(
                out,
                "attack:  {:?} + {:?} repeated + {:?}",
                w.prefix,
                w.loop_word(),
                w.suffix
            );
        }
    }
    if r.findings.is_empty() {
        let _ = writeln!(out, "findings: none");
    } else {
        let _ = writeln!(out, "findings:");
        for (i, f) in r.findings.iter().enumerate() {
            finding(&mut out, &r.pattern, i, f);
        }
    }
    if !r.theory.is_empty() {
        let _ = writeln!(out, "theory:");
        for t in &r.theory {
            let _ = writeln!(
                out,
                "  {:?}: {:?}. {}",
                t.theorem, t.conclusion, t.explanation
            );
        }
    }
    if !r.fixes.is_empty() {
        let _ = writeln!(out, "fixes:");
        for f in &r.fixes {
            fix_line(&mut out, f);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

/// Error message with a caret line under the offending span.
pub fn syntax_error(r: &AnalysisReport) -> String {
    let Some(s) = &r.skip else {
        return String::new();
    };
    let mut out = format!("error: {}\n", s.message);
    if let (Some(span), true) = (s.span, r.pattern.is_ascii()) {
        let mut marks = underline(&r.pattern, &[span]);
        if span.is_empty() {
            marks = format!("{:>1$}", "^", span.start + 1);
        }
        let _ = writeln!(out, "  {}\n  {}", r.pattern, marks);
    }
    out
}

pub fn fixes(r: &AnalysisReport) -> String {
    let mut out = String::new();
    if let Some(s) = &r.skip {
        let _ = writeln!(out, "skipped ({}): {}", s.reason, s.message);
        return out;
    }
    if !r.has_ia_finding() {
        let _ = writeln!(out, "no IA findings; nothing to fix");
        return out;
    }
    let _ = writeln!(out, "pattern: {}", r.pattern);
    for (i, f) in r.findings.iter().enumerate() {
        finding(&mut out, &r.pattern, i, f);
    }
    let _ = writeln!(out, "suggestions:");
    for f in &r.fixes {
        fix_line(&mut out, f);
    }
    for n in &r.inapplicable {
        let _ = writeln!(
            out,
            "  {} not applicable to [{}]: {}",
            n.strategy, n.finding, n.reason
        );
    }
    out
}

fn score(s: &DetectorScore) -> String {
    let pct = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{:.1}%", v * 100.0));
    format!(
        "TP {} FP {} FN {} TN {}, precision {}, recall {}",
        s.tp,
        s.fp,
        s.fn_,
        s.tn,
        pct(s.precision),
        pct(s.recall)
    )
}

pub fn eval_summary(r: &EvalReport) -> String {
    let mut out = String::new();
    let t = &r.totals;
    let g = &r.ground_truth;
    let _ = writeln!(
        out,
        "[{}] {} records, {} analyzed, {} skipped",
        r.mode.as_str(),
        t.records,
        t.analyzed,
        t.skipped
    );
    let _ = writeln!(
        out,
        "  ground truth: {} unambiguous, {} finite, {} PDA, {} EDA",
        g.unambiguous, g.finitely_ambiguous, g.pda, g.eda
    );
    let _ = writeln!(out, "  IA anti-patterns:  {}", score(&r.ours));
    let _ = writeln!(out, "  SOA anti-patterns: {}", score(&r.soa));
    out
}
