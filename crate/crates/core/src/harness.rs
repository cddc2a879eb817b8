//! Corpus evaluation: run the pipeline over many patterns and score the
//! anti-pattern families against the automaton ground truth.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze, AnalysisReport, AnalyzeOptions, Skip};
use crate::antipatterns::FindingKind;
use crate::automata::Degree;
use crate::syntax::MatchMode;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub pattern: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
    /// 1-based line in the corpus file.
    pub line: usize,
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

#[derive(Deserialize)]
struct JsonRecord {
    pattern: String,
    #[serde(default)]
    origin: Option<serde_json::Value>,
}

/// Reads one pattern per line, or NDJSON objects with a `pattern` field when
/// the first non-blank byte is `{`. Blank lines are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
    let ndjson = text.trim_start().starts_with('{');
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if ndjson {
            let rec: JsonRecord = serde_json::from_str(raw).map_err(|e| CorpusError {
                line,
                message: e.to_string(),
            })?;
            if rec.pattern.trim().is_empty() {
                continue;
            }
            let origin = rec.origin.map(|v| match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            });
            out.push(CorpusRecord {
                pattern: rec.pattern,
                origin,
                line,
            });
        } else {
            out.push(CorpusRecord {
                pattern: raw.to_string(),
                origin: None,
                line,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub mode: MatchMode,
    pub analyze: AnalyzeOptions,
    /// Worker threads; `None` uses one per logical core.
    pub jobs: Option<usize>,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordResult {
    pub line: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
    pub report: AnalysisReport,
}

impl RecordResult {
    /// `unambiguous`, `finitely_ambiguous`, `pda`, `eda` or `skipped:<reason>`.
    pub fn verdict_label(&self) -> String {
        match (&self.report.verdict, &self.report.skip) {
            (Some(v), _) => v.degree.as_str().to_string(),
            (None, Some(s)) => format!("skipped:{}", s.reason),
            (None, None) => "skipped".into(),
        }
    }

    pub fn finding_kinds(&self) -> Vec<FindingKind> {
        let mut kinds: Vec<FindingKind> = self.report.findings.iter().map(|f| f.kind).collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }

    /// Strategies with at least one verified rewrite.
    pub fn strategies_applicable(&self) -> Vec<String> {
        let mut s: Vec<String> = self
            .report
            .fixes
            .iter()
            .filter(|f| f.verified)
            .map(|f| f.strategy.to_string())
            .collect();
        s.sort();
        s.dedup();
        s
    }

    /// The CSV row: pattern, verdict, findings, strategies_applicable.
    pub fn csv_row(&self) -> [String; 4] {
        let kinds: Vec<&str> = self.finding_kinds().iter().map(|k| k.name()).collect();
        [
            self.report.pattern.clone(),
            self.verdict_label(),
            kinds.join(";"),
            self.strategies_applicable().join(";"),
        ]
    }
}

pub const CSV_HEADER: [&str; 4] = ["pattern", "verdict", "findings", "strategies_applicable"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub records: usize,
    pub analyzed: usize,
    pub skipped: usize,
    pub skipped_by_reason: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthCounts {
    pub unambiguous: usize,
    pub finitely_ambiguous: usize,
    pub pda: usize,
    pub eda: usize,
}

impl GroundTruthCounts {
    pub fn infinitely_ambiguous(&self) -> usize {
        self.pda + self.eda
    }
}

/// Confusion counts where positive means infinitely ambiguous.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectorScore {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

impl DetectorScore {
    fn add(&mut self, flagged: bool, ia: bool) {
        match (flagged, ia) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    fn finish(&mut self) {
        let ratio = |a: usize, b: usize| (b > 0).then(|| a as f64 / b as f64);
        self.precision = ratio(self.tp, self.tp + self.fp);
        self.recall = ratio(self.tp, self.tp + self.fn_);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Prevalence {
    /// Ground-truth IA regexes carrying the kind.
    pub count: usize,
    /// `count` over all ground-truth IA regexes.
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub mean_ms: f64,
    pub max_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: MatchMode,
    pub totals: Totals,
    pub ground_truth: GroundTruthCounts,
    /// The six IA anti-patterns.
    pub ours: DetectorScore,
    /// The prior-art anti-patterns.
    pub soa: DetectorScore,
    pub prevalence: BTreeMap<String, Prevalence>,
    /// Lines of ground-truth IA patterns without an IA finding.
    pub ours_misses: Vec<usize>,
    /// Lines of non-IA patterns with an IA finding.
    pub ours_false_positives: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

pub struct ScanOutput {
    pub report: EvalReport,
    pub records: Vec<RecordResult>,
}

/// Runs [`analyze`], turning a panic into an `internal` skip so one bad
/// record cannot abort a corpus run.
pub fn analyze_isolated(pattern: &str, mode: MatchMode, opts: &AnalyzeOptions) -> AnalysisReport {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        analyze(pattern, mode, opts)
    }))
    .unwrap_or_else(|panic| {
        let message = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "analysis panicked".into());
        AnalysisReport {
            pattern: pattern.to_string(),
            mode,
            verdict: None,
            findings: Vec::new(),
            fixes: Vec::new(),
            inapplicable: Vec::new(),
            skip: Some(Skip {
                reason: "internal".into(),
                message,
                span: None,
            }),
            theory: Vec::new(),
            warnings: Vec::new(),
        }
    })
}

pub fn scan(records: &[CorpusRecord], opts: &ScanOptions) -> ScanOutput {
    let run = || -> Vec<(RecordResult, f64)> {
        records
            .par_iter()
            .map(|r| {
                let t = Instant::now();
                let report = analyze_isolated(&r.pattern, opts.mode, &opts.analyze);
                let ms = t.elapsed().as_secs_f64() * 1e3;
                (
                    RecordResult {
                        line: r.line,
                        origin: r.origin.clone(),
                        report,
                    },
                    ms,
                )
            })
            .collect()
    };
    let started = Instant::now();
    let timed = match rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    let total_ms = started.elapsed().as_secs_f64() * 1e3;
    let times: Vec<f64> = timed.iter().map(|(_, ms)| *ms).collect();
    let results: Vec<RecordResult> = timed.into_iter().map(|(r, _)| r).collect();
    let mut report = evaluate(opts.mode, &results);
    if opts.timings {
        let n = times.len().max(1) as f64;
        report.timings = Some(Timings {
            total_ms,
            mean_ms: times.iter().sum::<f64>() / n,
            max_ms: times.iter().copied().fold(0.0, f64::max),
        });
    }
    ScanOutput {
        report,
        records: results,
    }
}

/// Scores finished analyses. Deterministic for a given input order.
pub fn evaluate(mode: MatchMode, results: &[RecordResult]) -> EvalReport {
    let mut totals = Totals {
        records: results.len(),
        ..Default::default()
    };
    let mut gt = GroundTruthCounts::default();
    let (mut ours, mut soa) = (DetectorScore::default(), DetectorScore::default());
    let mut kind_counts: BTreeMap<FindingKind, usize> = BTreeMap::new();
    let (mut misses, mut fps) = (Vec::new(), Vec::new());
    for r in results {
        let Some(v) = &r.report.verdict else {
            totals.skipped += 1;
            let reason = r
                .report
                .skip
                .as_ref()
                .map_or("unknown".to_string(), |s| s.reason.clone());
            *totals.skipped_by_reason.entry(reason).or_default() += 1;
            continue;
        };
        totals.analyzed += 1;
        match v.degree {
            Degree::Unambiguous => gt.unambiguous += 1,
            Degree::FinitelyAmbiguous => gt.finitely_ambiguous += 1,
            Degree::Pda => gt.pda += 1,
            Degree::Eda => gt.eda += 1,
        }
        let ia = v.is_infinite();
        let flagged = r.report.has_ia_finding();
        ours.add(flagged, ia);
        soa.add(r.report.has_soa_finding(), ia);
        if ia && !flagged {
            misses.push(r.line);
        }
        if !ia && flagged {
            fps.push(r.line);
        }
        if ia {
            for k in r.finding_kinds() {
                *kind_counts.entry(k).or_default() += 1;
            }
        }
    }
    ours.finish();
    soa.finish();
    let n_ia = gt.infinitely_ambiguous();
    let prevalence = FindingKind::IA
        .iter()
        .chain(FindingKind::SOA.iter())
        .map(|k| {
            let count = kind_counts.get(k).copied().unwrap_or(0);
            let fraction = (n_ia > 0).then(|| count as f64 / n_ia as f64);
            (k.name().to_string(), Prevalence { count, fraction })
        })
        .collect();
    EvalReport {
        mode,
        totals,
        ground_truth: gt,
        ours,
        soa,
        prevalence,
        ours_misses: misses,
        ours_false_positives: fps,
        timings: None,
    }
}
