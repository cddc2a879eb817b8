//! Re-verification of a rewrite: its ground truth and how its language
//! relates to the original's on all short strings.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::FixOptions;
use crate::analysis::prepare;
use crate::automata::{align, build_nfa, classify_ambiguity, AmbiguityVerdict, Nfa};
use crate::budget::{Budget, Limits};
use crate::error::Result;
use crate::syntax::{MatchMode, ParseOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LanguageRelation {
    Equal,
    OriginalSupersetOfFixed,
    FixedSupersetOfOriginal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixVerification {
    pub verdict: AmbiguityVerdict,
    pub relation: LanguageRelation,
    /// Shortest string accepted by exactly one of the two patterns.
    pub counterexample: Option<String>,
}

pub fn verify_fix(
    original: &str,
    fixed: &str,
    mode: MatchMode,
    parse_opts: &ParseOptions,
    opts: &FixOptions,
) -> Result<FixVerification> {
    let budget = Budget::new(opts.limits);
    let (_, orig_ast) = prepare(original, mode, parse_opts)?;
    let (_, fixed_ast) = prepare(fixed, mode, parse_opts)?;
    let orig = build_nfa(&orig_ast, parse_opts.alphabet, &budget)?;
    let fixed = build_nfa(&fixed_ast, parse_opts.alphabet, &budget)?;
    let verdict = classify_ambiguity(&fixed, &budget)?;
    // exact when the subset pairs fit the budget, sampled otherwise
    let exact = Budget::new(Limits {
        timeout: None,
        ..opts.limits
    });
    let (relation, counterexample) = match compare(&orig, &fixed, None, &exact) {
        Ok(r) => r,
        Err(_) => compare(&orig, &fixed, Some(opts.sample_len), &budget)?,
    };
    Ok(FixVerification {
        verdict,
        relation,
        counterexample,
    })
}

/// Compares two languages by exploring pairs of subset-construction states
/// breadth first, on every string when `max_len` is `None` and on strings up
/// to that length otherwise.
pub fn compare(
    a: &Nfa,
    b: &Nfa,
    max_len: Option<usize>,
    budget: &Budget,
) -> Result<(LanguageRelation, Option<String>)> {
    let (a, b) = align(a, b);
    let start = (vec![0u32], vec![0u32]);
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([(start, Vec::<u32>::new())]);
    let (mut a_only, mut b_only) = (false, false);
    let mut counterexample = None;
    while let Some(((sa, sb), word)) = queue.pop_front() {
        budget.check_product(seen.len())?;
        let (in_a, in_b) = (accepts(&a, &sa), accepts(&b, &sb));
        if in_a != in_b {
            a_only |= in_a;
            b_only |= in_b;
            counterexample.get_or_insert_with(|| a.spell(&word));
        }
        if Some(word.len()) == max_len {
            continue;
        }
        for label in 0..a.minterms().len() as u32 {
            let next = (step(&a, &sa, label), step(&b, &sb, label));
            if (next.0.is_empty() && next.1.is_empty()) || !seen.insert(next.clone()) {
                continue;
            }
            let mut w = word.clone();
            w.push(label);
            queue.push_back((next, w));
        }
    }
    let relation = match (a_only, b_only) {
        (false, false) => LanguageRelation::Equal,
        (true, false) => LanguageRelation::OriginalSupersetOfFixed,
        (false, true) => LanguageRelation::FixedSupersetOfOriginal,
        (true, true) => LanguageRelation::Incomparable,
    };
    Ok((relation, counterexample))
}

fn accepts(nfa: &Nfa, set: &[u32]) -> bool {
    set.iter().any(|&s| nfa.is_accepting(s as usize))
}

fn step(nfa: &Nfa, set: &[u32], label: u32) -> Vec<u32> {
    let mut next: Vec<u32> = set
        .iter()
        .flat_map(|&s| {
            nfa.edges(s as usize)
                .iter()
                .filter(|e| e.label == label)
                .map(|e| e.to)
        })
        .collect();
    next.sort_unstable();
    next.dedup();
    next
}
