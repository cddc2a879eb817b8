//! ε-free automata over a minterm alphabet and the analyses built on them.

mod ambiguity;
mod dot;
mod glushkov;
mod ops;
mod search;

use crate::syntax::{Alphabet, CharSet};

pub use ambiguity::{ambiguous_word, classify_ambiguity, AmbiguityVerdict, Degree, PumpWitness};
pub use dot::to_dot;
pub use glushkov::{build_nfa, build_nfa_with, minterms_of};
pub use ops::{
    concat, intersect, is_empty, left_quotient, plus, right_quotient, shortest_member, star, union,
    universal, without_empty, word,
};

/// One bundle of parallel transitions: `mult` distinct transitions from the
/// owning state to `to`, all labeled with minterm `label`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: u32,
    pub to: u32,
    pub mult: u64,
}

/// An ε-free NFA whose initial state is always state 0 and has no incoming
/// transitions. Final weights count distinct ways of accepting in a state,
/// which keeps the number of accepting runs equal to the number of parse
/// trees for automata built by [`build_nfa`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    minterms: Vec<CharSet>,
    finals: Vec<u64>,
    out: Vec<Vec<Edge>>,
}

impl Nfa {
    /// Builds an automaton from parts, merging parallel duplicate edges.
    pub fn from_parts(
        alphabet: Alphabet,
        minterms: Vec<CharSet>,
        finals: Vec<u64>,
        out: Vec<Vec<Edge>>,
    ) -> Nfa {
        debug_assert_eq!(finals.len(), out.len());
        let out = out.into_iter().map(normalize_edges).collect();
        Nfa {
            alphabet,
            minterms,
            finals,
            out,
        }
    }

    /// Automaton for the empty language.
    pub fn empty_language(alphabet: Alphabet) -> Nfa {
        Nfa::from_parts(alphabet, vec![alphabet.full()], vec![0], vec![Vec::new()])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn minterms(&self) -> &[CharSet] {
        &self.minterms
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn final_weight(&self, state: usize) -> u64 {
        self.finals[state]
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.finals[state] > 0
    }

    pub fn accepting(&self) -> Vec<usize> {
        (0..self.num_states())
            .filter(|&s| self.is_accepting(s))
            .collect()
    }

    pub fn edges(&self, state: usize) -> &[Edge] {
        &self.out[state]
    }

    /// All transitions as `(from, edge)` pairs.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, es)| es.iter().map(move |e| (s, e)))
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// Character used to spell witnesses: the smallest visible ASCII
    /// character of the minterm, else its smallest character.
    pub fn representative(&self, label: u32) -> char {
        let set = &self.minterms[label as usize];
        let cp = set
            .intersect(&CharSet::range(0x21, 0x7e))
            .first()
            .or_else(|| set.first())
            .unwrap_or(0);
        char::from_u32(cp).unwrap_or('\u{fffd}')
    }

    pub fn spell(&self, labels: &[u32]) -> String {
        labels.iter().map(|&l| self.representative(l)).collect()
    }

    /// Minterm index containing `c`, if `c` is in the alphabet.
    pub fn label_of(&self, c: char) -> Option<u32> {
        let cp = c as u32;
        self.minterms
            .iter()
            .position(|m| m.contains(cp))
            .map(|i| i as u32)
    }

    fn labels_of(&self, input: &str) -> Option<Vec<u32>> {
        input.chars().map(|c| self.label_of(c)).collect()
    }

    /// Whether the automaton accepts `input`.
    pub fn accepts(&self, input: &str) -> bool {
        let Some(labels) = self.labels_of(input) else {
            return false;
        };
        let mut cur = vec![false; self.num_states()];
        cur[0] = true;
        for l in labels {
            let mut next = vec![false; self.num_states()];
            for (s, _) in cur.iter().enumerate().filter(|(_, on)| **on) {
                for e in self.edges(s).iter().filter(|e| e.label == l) {
                    next[e.to as usize] = true;
                }
            }
            cur = next;
        }
        cur.iter()
            .enumerate()
            .any(|(s, on)| *on && self.is_accepting(s))
    }

    /// Exact number of accepting runs on `input`, saturating at `u128::MAX`.
    pub fn count_runs(&self, input: &str) -> u128 {
        let Some(labels) = self.labels_of(input) else {
            return 0;
        };
        let mut cur = vec![0u128; self.num_states()];
        cur[0] = 1;
        for l in labels {
            let mut next = vec![0u128; self.num_states()];
            for (s, &n) in cur.iter().enumerate().filter(|(_, n)| **n > 0) {
                for e in self.edges(s).iter().filter(|e| e.label == l) {
                    let add = n.saturating_mul(e.mult as u128);
                    let slot = &mut next[e.to as usize];
                    *slot = slot.saturating_add(add);
                }
            }
            cur = next;
        }
        cur.iter().enumerate().fold(0u128, |acc, (s, &n)| {
            acc.saturating_add(n.saturating_mul(self.finals[s] as u128))
        })
    }

    /// Number of distinct paths from `from` to `to` spelling `labels`.
    pub fn count_paths(&self, from: usize, to: usize, labels: &[u32]) -> u128 {
        let mut cur = vec![0u128; self.num_states()];
        cur[from] = 1;
        for &l in labels {
            let mut next = vec![0u128; self.num_states()];
            for (s, &n) in cur.iter().enumerate().filter(|(_, n)| **n > 0) {
                for e in self.edges(s).iter().filter(|e| e.label == l) {
                    let slot = &mut next[e.to as usize];
                    *slot = slot.saturating_add(n.saturating_mul(e.mult as u128));
                }
            }
            cur = next;
        }
        cur[to]
    }

    /// States reachable from `from` by reading `labels`.
    pub fn run_from(&self, from: &[usize], labels: &[u32]) -> Vec<usize> {
        let mut cur = vec![false; self.num_states()];
        for &s in from {
            cur[s] = true;
        }
        for &l in labels {
            let mut next = vec![false; self.num_states()];
            for (s, _) in cur.iter().enumerate().filter(|(_, on)| **on) {
                for e in self.edges(s).iter().filter(|e| e.label == l) {
                    next[e.to as usize] = true;
                }
            }
            cur = next;
        }
        (0..self.num_states()).filter(|&s| cur[s]).collect()
    }

    /// Restricts to states that are reachable and co-reachable. State 0 is
    /// always kept so the result is well formed even for an empty language.
    pub fn trim(&self) -> Nfa {
        let n = self.num_states();
        let fwd = self.reachable_from(&[0]);
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, e) in self.transitions() {
            rev[e.to as usize].push(s);
        }
        let mut co = vec![false; n];
        let mut stack: Vec<usize> = self.accepting();
        for &s in &stack {
            co[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|s| s == 0 || (fwd[s] && co[s])).collect();
        let mut index = vec![u32::MAX; n];
        let mut next = 0u32;
        for s in 0..n {
            if keep[s] {
                index[s] = next;
                next += 1;
            }
        }
        let mut finals = Vec::with_capacity(next as usize);
        let mut out: Vec<Vec<Edge>> = Vec::with_capacity(next as usize);
        for s in (0..n).filter(|&s| keep[s]) {
            finals.push(self.finals[s]);
            let es: Vec<Edge> = self.out[s]
                .iter()
                .filter(|e| keep[e.to as usize] && e.to != 0)
                .map(|e| Edge {
                    to: index[e.to as usize],
                    ..*e
                })
                .collect();
            out.push(es);
        }
        // a useless initial state keeps no edges
        if !co[0] {
            out[0].clear();
        }
        Nfa::from_parts(self.alphabet, self.minterms.clone(), finals, out)
    }

    /// True when no state lies on a cycle. A trimmed acyclic automaton has a
    /// finite language and bounded ambiguity.
    pub fn is_acyclic(&self) -> bool {
        let n = self.num_states();
        let mut indegree = vec![0usize; n];
        for (_, e) in self.transitions() {
            indegree[e.to as usize] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&s| indegree[s] == 0).collect();
        let mut removed = 0;
        while let Some(s) = ready.pop() {
            removed += 1;
            for e in &self.out[s] {
                let t = e.to as usize;
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(t);
                }
            }
        }
        removed == n
    }

    pub fn reachable_from(&self, from: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = Vec::new();
        for &s in from {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for e in &self.out[s] {
                let t = e.to as usize;
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Re-expresses the automaton over a finer partition of the same alphabet.
    pub fn relabel(&self, finer: &[CharSet]) -> Nfa {
        let map: Vec<Vec<u32>> = self
            .minterms
            .iter()
            .map(|m| {
                finer
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.is_subset(m))
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .collect();
        let out = self
            .out
            .iter()
            .map(|es| {
                es.iter()
                    .flat_map(|e| {
                        map[e.label as usize]
                            .iter()
                            .map(move |&l| Edge { label: l, ..*e })
                    })
                    .collect()
            })
            .collect();
        Nfa::from_parts(self.alphabet, finer.to_vec(), self.finals.clone(), out)
    }
}

fn normalize_edges(mut es: Vec<Edge>) -> Vec<Edge> {
    es.sort_by_key(|e| (e.label, e.to));
    let mut merged: Vec<Edge> = Vec::with_capacity(es.len());
    for e in es {
        match merged.last_mut() {
            Some(last) if last.label == e.label && last.to == e.to => {
                last.mult = last.mult.saturating_add(e.mult);
            }
            _ => merged.push(e),
        }
    }
    merged
}

/// Coarsest partition of `alphabet` refining every set in `sets`, ordered by
/// smallest member.
pub fn partition(alphabet: Alphabet, sets: &[CharSet]) -> Vec<CharSet> {
    let full = alphabet.full();
    let mut parts = vec![full.clone()];
    let mut distinct: Vec<CharSet> = sets.iter().map(|s| s.intersect(&full)).collect();
    distinct.sort();
    distinct.dedup();
    for s in &distinct {
        if s.is_empty() {
            continue;
        }
        let mut next = Vec::with_capacity(parts.len() + 1);
        for p in parts {
            let inside = p.intersect(s);
            if inside.is_empty() || inside == p {
                next.push(p);
            } else {
                next.push(p.difference(&inside));
                next.push(inside);
            }
        }
        parts = next;
    }
    parts.sort_by_key(|p| p.first());
    parts
}

/// Common refinement of two partitions of the same alphabet.
pub fn refine(a: &[CharSet], b: &[CharSet]) -> Vec<CharSet> {
    if a == b {
        return a.to_vec();
    }
    let mut parts: Vec<CharSet> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.intersect(y)))
        .filter(|s| !s.is_empty())
        .collect();
    parts.sort_by_key(|p| p.first());
    parts
}

/// Brings two automata onto a common minterm partition.
pub fn align(a: &Nfa, b: &Nfa) -> (Nfa, Nfa) {
    if a.minterms == b.minterms {
        return (a.clone(), b.clone());
    }
    let common = refine(&a.minterms, &b.minterms);
    (a.relabel(&common), b.relabel(&common))
}
