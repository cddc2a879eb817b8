//! The end-to-end pipeline: parse, normalize, classify, detect, explain, fix.

use serde::{Deserialize, Serialize};

use crate::antipatterns::{dedupe, detect_ia_antipatterns, detect_soa_antipatterns, Finding, Form};
use crate::automata::{build_nfa, classify_ambiguity, AmbiguityVerdict};
use crate::budget::{Budget, Limits};
use crate::error::{Error, Result};
use crate::fixes::{suggest_fixes, FixOptions, FixSuggestion, Inapplicable};
use crate::syntax::{desugar, parse, wrap_for_match_mode, MatchMode, Node, ParseOptions, Span};
use crate::theory::{explain, Env, TheoremVerdict};

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub parse: ParseOptions,
    pub limits: Limits,
    pub explain_theory: bool,
    pub fixes: bool,
    pub fix: FixOptions,
}

/// Why a pattern was not analyzed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    /// `syntax`, `unsupported`, `budget` or `internal`.
    pub reason: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl From<&Error> for Skip {
    fn from(e: &Error) -> Skip {
        let span = match e {
            Error::Syntax { span, .. } | Error::Unsupported { span, .. } => Some(*span),
            Error::BudgetExceeded { .. } => None,
        };
        Skip {
            reason: e.reason().to_string(),
            message: e.to_string(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub pattern: String,
    pub mode: MatchMode,
    /// Ground truth from the automaton of the mode-wrapped pattern.
    pub verdict: Option<AmbiguityVerdict>,
    /// IA findings in source order, then SOA findings in source order.
    pub findings: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixes: Vec<FixSuggestion>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inapplicable: Vec<Inapplicable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip: Option<Skip>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theory: Vec<TheoremVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    fn new(pattern: &str, mode: MatchMode) -> AnalysisReport {
        AnalysisReport {
            pattern: pattern.to_string(),
            mode,
            verdict: None,
            findings: Vec::new(),
            fixes: Vec::new(),
            inapplicable: Vec::new(),
            skip: None,
            theory: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn is_infinitely_ambiguous(&self) -> Option<bool> {
        self.verdict.as_ref().map(AmbiguityVerdict::is_infinite)
    }

    pub fn ia_findings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.kind.is_ia())
    }

    pub fn soa_findings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.kind.is_soa())
    }

    pub fn has_ia_finding(&self) -> bool {
        self.ia_findings().next().is_some()
    }

    pub fn has_soa_finding(&self) -> bool {
        self.soa_findings().next().is_some()
    }
}

/// Parses, desugars and wraps a pattern, returning the desugared written
/// form (anchors stripped) and the mode-wrapped form.
pub fn prepare(source: &str, mode: MatchMode, opts: &ParseOptions) -> Result<(Node, Node)> {
    let ast = parse(source, opts)?;
    let core = desugar(&ast, opts.rep_cap)?;
    let written = wrap_for_match_mode(&core, MatchMode::Full, opts.alphabet);
    let wrapped = wrap_for_match_mode(&core, mode, opts.alphabet);
    Ok((written, wrapped))
}

/// Ground-truth verdict only.
pub fn ground_truth(
    source: &str,
    mode: MatchMode,
    opts: &ParseOptions,
    limits: Limits,
) -> Result<AmbiguityVerdict> {
    let (_, wrapped) = prepare(source, mode, opts)?;
    let budget = Budget::new(limits);
    let nfa = build_nfa(&wrapped, opts.alphabet, &budget)?;
    classify_ambiguity(&nfa, &budget)
}

pub fn analyze(source: &str, mode: MatchMode, opts: &AnalyzeOptions) -> AnalysisReport {
    let mut report = AnalysisReport::new(source, mode);
    let budget = Budget::new(opts.limits);
    if let Err(e) = run(source, mode, opts, &budget, &mut report) {
        report.skip = Some(Skip::from(&e));
        report.findings.clear();
        return report;
    }
    if opts.fixes && report.has_ia_finding() {
        let (fixes, inapplicable) = suggest_fixes(&report, &opts.parse, &opts.fix);
        report.fixes = fixes;
        report.inapplicable = inapplicable;
    }
    report
}

fn run(
    source: &str,
    mode: MatchMode,
    opts: &AnalyzeOptions,
    budget: &Budget,
    report: &mut AnalysisReport,
) -> Result<()> {
    let alphabet = opts.parse.alphabet;
    let (written, wrapped) = prepare(source, mode, &opts.parse)?;
    let nfa = build_nfa(&wrapped, alphabet, budget)?;
    report.verdict = Some(classify_ambiguity(&nfa, budget)?);

    let env = Env { alphabet, budget };
    let det = detect_ia_antipatterns(&written, source, &env);
    let mut findings = det.findings;
    let mut errors = det.errors;
    if mode == MatchMode::Partial && !wrapped.same_shape(&written) {
        let det = detect_ia_antipatterns(&wrapped, source, &env);
        errors.extend(det.errors);
        findings.extend(det.findings.into_iter().map(|mut f| {
            f.form = Form::Wrapped;
            f
        }));
    }
    findings.extend(detect_soa_antipatterns(&written));
    dedupe(&mut findings);
    // IA findings first so fix indices survive hiding the prior-art ones
    findings.sort_by_key(|f| {
        (
            f.kind.is_soa(),
            f.parts.iter().map(|p| p.span).min(),
            f.kind,
        )
    });
    report.findings = findings;
    report.warnings.extend(
        errors
            .iter()
            .map(|e| format!("anti-pattern check skipped: {e}")),
    );

    if opts.explain_theory {
        match explain(&wrapped, &env) {
            Ok(t) => report.theory = t,
            Err(e) => report
                .warnings
                .push(format!("theory explanation skipped: {e}")),
        }
    }
    Ok(())
}
