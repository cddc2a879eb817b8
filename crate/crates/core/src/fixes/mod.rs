//! Repair suggestions for IA findings, each re-verified against the
//! ground-truth classifier before it is offered as a fix.

mod relation;
mod strategies;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisReport;
use crate::antipatterns::{FindingKind, Form};
use crate::automata::AmbiguityVerdict;
use crate::budget::Limits;
use crate::syntax::{parse, ParseOptions};

pub use relation::{verify_fix, FixVerification, LanguageRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    F1,
    F2,
    F3,
    F4,
    F5,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::F1,
        Strategy::F2,
        Strategy::F3,
        Strategy::F4,
        Strategy::F5,
    ];

    /// How often developers chose each strategy; suggestions are ordered by it.
    pub fn frequency(self) -> u32 {
        match self {
            Strategy::F1 => 12,
            Strategy::F2 => 10,
            Strategy::F3 => 3,
            Strategy::F4 => 13,
            Strategy::F5 => 16,
        }
    }

    /// Strategies ordered most-frequent first.
    pub fn by_frequency() -> Vec<Strategy> {
        let mut all = Strategy::ALL.to_vec();
        all.sort_by_key(|s| std::cmp::Reverse(s.frequency()));
        all
    }

    pub fn title(self) -> &'static str {
        match self {
            Strategy::F1 => "add a delimiter",
            Strategy::F2 => "reduce one side",
            Strategy::F3 => "merge into a superset",
            Strategy::F4 => "bound the repetition",
            Strategy::F5 => "restructure",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Strategy, String> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown strategy {s:?} (expected f1..f5)"))
    }
}

/// How a rewrite changes the matched language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemanticNote {
    Preserving,
    Narrowing,
    Widening,
    Restructuring,
    AdvisoryOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixSuggestion {
    pub strategy: Strategy,
    /// Rewritten pattern; absent for prose-only advice.
    pub regex: Option<String>,
    /// Index into the report's findings.
    pub finding: usize,
    pub kind: FindingKind,
    pub note: SemanticNote,
    /// Ground truth of the rewritten pattern.
    pub verdict: Option<AmbiguityVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<LanguageRelation>,
    pub explanation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// A string on which the rewrite and the original disagree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// True when the rewrite was re-analyzed and is not infinitely ambiguous.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inapplicable {
    pub strategy: Strategy,
    pub finding: usize,
    pub kind: FindingKind,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixOptions {
    /// Upper bound used by F4.
    pub bound: u32,
    /// Length up to which rewrites are compared with the original.
    pub sample_len: usize,
    /// Budget for re-verifying each candidate.
    pub limits: Limits,
}

impl Default for FixOptions {
    fn default() -> FixOptions {
        FixOptions {
            bound: 10,
            sample_len: 6,
            limits: Limits::default(),
        }
    }
}

/// A rewrite proposed by one strategy before verification.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub regex: Option<String>,
    pub note: SemanticNote,
    pub explanation: String,
}

/// Bounds every unbounded repetition in `pattern` to at most `opts.bound`
/// iterations (lower if the expansion cap requires it). The result matches a
/// finite language, so it is never infinitely ambiguous. `None` when the
/// pattern has nothing to bound or cannot be parsed.
pub fn bound_repetitions(
    pattern: &str,
    parse_opts: &ParseOptions,
    opts: &FixOptions,
) -> Option<String> {
    let ast = parse(pattern, parse_opts).ok()?;
    strategies::bound_everything(&strategies::Ctx {
        src: pattern,
        ast: &ast,
        parse: parse_opts,
        fix: opts,
    })
}

pub fn suggest_fixes(
    report: &AnalysisReport,
    parse_opts: &ParseOptions,
    opts: &FixOptions,
) -> (Vec<FixSuggestion>, Vec<Inapplicable>) {
    let mut fixes = Vec::new();
    let mut inapplicable = Vec::new();
    let Ok(ast) = parse(&report.pattern, parse_opts) else {
        return (fixes, inapplicable);
    };
    let ctx = strategies::Ctx {
        src: &report.pattern,
        ast: &ast,
        parse: parse_opts,
        fix: opts,
    };
    let mut seen = std::collections::HashSet::new();
    for (idx, finding) in report.findings.iter().enumerate() {
        if !finding.kind.is_ia() {
            continue;
        }
        for strategy in Strategy::by_frequency() {
            let skip = |reason: String| Inapplicable {
                strategy,
                finding: idx,
                kind: finding.kind,
                reason,
            };
            if finding.form == Form::Wrapped {
                inapplicable.push(skip(
                    "the finding involves the implicit any-character loop of partial matching; anchor the pattern instead"
                        .into(),
                ));
                continue;
            }
            match strategies::candidates(&ctx, strategy, finding) {
                Err(reason) => inapplicable.push(skip(reason)),
                Ok(cands) => {
                    let s = choose(report, parse_opts, opts, strategy, idx, finding.kind, cands);
                    if let Some(s) = s {
                        if seen.insert((s.strategy, s.regex.clone(), s.explanation.clone())) {
                            fixes.push(s);
                        }
                    }
                }
            }
        }
    }
    (fixes, inapplicable)
}

/// Verifies candidates in order and keeps the first one that is not
/// infinitely ambiguous. When none is, the first is demoted to advice.
fn choose(
    report: &AnalysisReport,
    parse_opts: &ParseOptions,
    opts: &FixOptions,
    strategy: Strategy,
    finding: usize,
    kind: FindingKind,
    cands: Vec<Candidate>,
) -> Option<FixSuggestion> {
    let mut first_failure: Option<FixSuggestion> = None;
    for c in cands {
        let base = FixSuggestion {
            strategy,
            regex: c.regex.clone(),
            finding,
            kind,
            note: c.note,
            verdict: None,
            relation: None,
            explanation: c.explanation.clone(),
            warning: None,
            counterexample: None,
            verified: false,
        };
        let Some(regex) = &c.regex else {
            return Some(base);
        };
        let checked = verify_fix(&report.pattern, regex, report.mode, parse_opts, opts);
        let mut s = base;
        match checked {
            Ok(v) if !v.verdict.is_infinite() => {
                s.note = refine_note(c.note, v.relation);
                s.counterexample = v.counterexample.clone();
                s.relation = Some(v.relation);
                s.verdict = Some(v.verdict);
                s.verified = true;
                return Some(s);
            }
            Ok(v) => {
                s.warning = Some(format!(
                    "the rewrite `{regex}` is still infinitely ambiguous ({}), so it is offered as advice only",
                    v.verdict.degree.as_str()
                ));
            }
            Err(e) => s.warning = Some(format!("the rewrite `{regex}` could not be verified: {e}")),
        }
        s.regex = None;
        s.note = SemanticNote::AdvisoryOnly;
        first_failure.get_or_insert(s);
    }
    first_failure
}

/// Superset merges are only called preserving when sampling finds no
/// difference.
fn refine_note(note: SemanticNote, rel: LanguageRelation) -> SemanticNote {
    match (note, rel) {
        (SemanticNote::Preserving, LanguageRelation::Equal) => SemanticNote::Preserving,
        (SemanticNote::Preserving, LanguageRelation::OriginalSupersetOfFixed) => {
            SemanticNote::Narrowing
        }
        (SemanticNote::Preserving, _) => SemanticNote::Widening,
        (n, _) => n,
    }
}
