//! Subcommands and their flags.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use redos_ia::analysis::{analyze, prepare, AnalysisReport, AnalyzeOptions};
use redos_ia::automata::{build_nfa, to_dot};
use redos_ia::budget::{Budget, Limits};
use redos_ia::fixes::{FixOptions, Strategy};
use redos_ia::harness::{parse_corpus, scan, EvalReport, ScanOptions, CSV_HEADER};
use redos_ia::selftest;
use redos_ia::syntax::{Alphabet, MatchMode, ParseOptions};

use crate::render;

/// Exit code for malformed patterns.
pub const EXIT_SYNTAX: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "redos-ia",
    version,
    about = "Detect, explain and fix infinitely ambiguous regexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze one pattern: ground truth, anti-patterns, optional theory and fixes.
    Analyze(AnalyzeArgs),
    /// Evaluate a corpus file (one pattern per line, or NDJSON with a `pattern` field).
    Scan(ScanArgs),
    /// Suggest and verify fixes for one pattern.
    Fix(FixArgs),
    /// Run the built-in example and fuzz checks.
    EvalSelftest(SelftestArgs),
    /// Serve the HTTP API and the static UI bundle.
    Serve(ServeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PatternOpts {
    /// Character universe: ascii (0-127) or latin1 (0-255).
    #[arg(long, default_value = "ascii", value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    /// Largest product of counted repetitions expanded before the pattern is skipped.
    #[arg(long, default_value_t = 100)]
    pub rep_cap: u32,
    /// Let `.` match newline too (by default it matches everything else).
    #[arg(long)]
    pub dotall: bool,
    /// Per-pattern wall-clock budget in milliseconds.
    #[arg(long, default_value_t = 2000)]
    pub timeout_ms: u64,
}

impl PatternOpts {
    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            alphabet: self.alphabet,
            rep_cap: self.rep_cap,
            dotall: self.dotall,
        }
    }

    pub fn limits(&self) -> Limits {
        Limits {
            timeout: Some(Duration::from_millis(self.timeout_ms)),
            ..Limits::default()
        }
    }
}

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    match s {
        "ascii" => Ok(Alphabet::Ascii),
        "latin1" => Ok(Alphabet::Latin1),
        _ => Err(format!("unknown alphabet {s:?} (expected ascii or latin1)")),
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub pattern: String,
    /// full: the pattern must match the whole input; partial: unanchored search.
    #[arg(long, default_value = "full")]
    pub mode: MatchMode,
    /// Add the theorem-by-theorem explanation.
    #[arg(long)]
    pub explain_theory: bool,
    /// Add verified fix suggestions.
    #[arg(long)]
    pub fixes: bool,
    /// Write the ground-truth automaton as Graphviz DOT to a file, or `-` for stdout.
    #[arg(long, value_name = "PATH")]
    pub export_nfa: Option<String>,
    /// Also show the prior-art anti-patterns.
    #[arg(long)]
    pub soa: bool,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub opts: PatternOpts,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub corpus: PathBuf,
    #[arg(long, default_value = "full")]
    pub mode: MatchMode,
    /// Evaluate under both full and partial matching.
    #[arg(long)]
    pub both_modes: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write one CSV row per pattern (pattern, verdict, findings, strategies_applicable).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Include wall-clock statistics (makes the report non-reproducible).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub opts: PatternOpts,
}

#[derive(Args, Debug)]
pub struct FixArgs {
    pub pattern: String,
    #[arg(long, default_value = "full")]
    pub mode: MatchMode,
    /// Only show these strategies (repeatable): f1..f5.
    #[arg(long = "strategy", value_name = "F")]
    pub strategies: Vec<Strategy>,
    /// Upper bound used when bounding repetitions.
    #[arg(long, default_value_t = 10)]
    pub bound: u32,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub opts: PatternOpts,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Fuzzed patterns for the soundness and recall checks.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    /// Address to listen on.
    #[arg(long, env = "REDOS_IA_BIND", default_value = "127.0.0.1:8080")]
    pub bind: String,
    /// Directory with the UI bundle served at `/`.
    #[arg(long, value_name = "DIR", default_value = "webui/dist")]
    pub static_dir: PathBuf,
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Fix(a) => cmd_fix(a),
        Command::EvalSelftest(a) => cmd_selftest(a),
        Command::Serve(a) => crate::server::serve_blocking(&a.bind, a.static_dir),
    }
}

fn analyze_options(
    opts: &PatternOpts,
    fixes: bool,
    explain_theory: bool,
    bound: u32,
) -> AnalyzeOptions {
    AnalyzeOptions {
        parse: opts.parse_options(),
        limits: opts.limits(),
        explain_theory,
        fixes,
        fix: FixOptions {
            bound,
            limits: opts.limits(),
            ..FixOptions::default()
        },
    }
}

fn exit_for(report: &AnalysisReport) -> u8 {
    match &report.skip {
        Some(s) if s.reason == "syntax" => EXIT_SYNTAX,
        _ => 0,
    }
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<u8> {
    let opts = analyze_options(&a.opts, a.fixes, a.explain_theory, 10);
    let mut report = analyze(&a.pattern, a.mode, &opts);
    if let Some(path) = &a.export_nfa {
        if report.skip.is_none() {
            export_nfa(&a.pattern, a.mode, &a.opts, path)?;
        }
    }
    if !a.soa {
        report.findings.retain(|f| f.kind.is_ia());
    }
    let mut out = std::io::stdout().lock();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else if exit_for(&report) == EXIT_SYNTAX {
        eprint!("{}", render::syntax_error(&report));
    } else {
        write!(out, "{}", render::report(&report))?;
    }
    Ok(exit_for(&report))
}

fn export_nfa(pattern: &str, mode: MatchMode, opts: &PatternOpts, path: &str) -> Result<()> {
    let parse = opts.parse_options();
    let (_, wrapped) = prepare(pattern, mode, &parse)?;
    let nfa = build_nfa(&wrapped, parse.alphabet, &Budget::new(opts.limits()))?;
    let dot = to_dot(&nfa.trim());
    if path == "-" {
        print!("{dot}");
    } else {
        fs::write(path, dot).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn cmd_fix(a: FixArgs) -> Result<u8> {
    let opts = analyze_options(&a.opts, true, false, a.bound);
    let mut report = analyze(&a.pattern, a.mode, &opts);
    report.findings.retain(|f| f.kind.is_ia());
    if !a.strategies.is_empty() {
        report.fixes.retain(|f| a.strategies.contains(&f.strategy));
        report
            .inapplicable
            .retain(|f| a.strategies.contains(&f.strategy));
    }
    let mut out = std::io::stdout().lock();
    if a.json {
        let body = serde_json::json!({
            "pattern": report.pattern,
            "mode": report.mode,
            "verdict": report.verdict,
            "findings": report.findings,
            "fixes": report.fixes,
            "inapplicable": report.inapplicable,
            "skip": report.skip,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
    } else if exit_for(&report) == EXIT_SYNTAX {
        eprint!("{}", render::syntax_error(&report));
    } else {
        write!(out, "{}", render::fixes(&report))?;
    }
    Ok(exit_for(&report))
}

fn cmd_scan(a: ScanArgs) -> Result<u8> {
    let text =
        fs::read_to_string(&a.corpus).with_context(|| format!("reading {}", a.corpus.display()))?;
    let records = parse_corpus(&text)?;
    let modes = if a.both_modes {
        vec![MatchMode::Full, MatchMode::Partial]
    } else {
        vec![a.mode]
    };
    let mut reports: Vec<EvalReport> = Vec::new();
    for (i, &mode) in modes.iter().enumerate() {
        let opts = ScanOptions {
            mode,
            analyze: analyze_options(&a.opts, a.csv.is_some() && i == 0, false, 10),
            jobs: a.jobs,
            timings: a.timings,
        };
        let output = scan(&records, &opts);
        if i == 0 {
            if let Some(path) = &a.csv {
                let mut w = csv::Writer::from_path(path)
                    .with_context(|| format!("writing {}", path.display()))?;
                w.write_record(CSV_HEADER)?;
                for r in &output.records {
                    w.write_record(r.csv_row())?;
                }
                w.flush()?;
            }
        }
        reports.push(output.report);
    }
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        serde_json::to_string_pretty(&reports)?
    };
    match &a.out {
        Some(path) => {
            fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{json}"),
    }
    for r in &reports {
        eprint!("{}", render::eval_summary(r));
    }
    Ok(0)
}

fn cmd_selftest(a: SelftestArgs) -> Result<u8> {
    let mut checks = selftest::example_checks();
    checks.extend(selftest::fuzz_checks(a.count, a.seed, 0.95));
    if a.json {
        println!("{}", serde_json::to_string_pretty(&checks)?);
    } else {
        for c in &checks {
            println!(
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
    }
    Ok(if checks.iter().all(|c| c.passed) {
        0
    } else {
        1
    })
}
