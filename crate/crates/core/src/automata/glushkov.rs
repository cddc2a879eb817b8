//! Weighted position automaton.
//!
//! States are the literal positions of the regex plus an initial state. Edge
//! multiplicities and final weights count the distinct ways the regex can
//! produce each step, so accepting runs correspond one-to-one with parse
//! trees. Inside a star, consecutive non-empty iterations may be separated by
//! at most one empty iteration of a nullable body, chosen in `null(body)` ways.

use std::collections::HashMap;

use super::{partition, Edge, Nfa};
use crate::budget::Budget;
use crate::error::Result;
use crate::syntax::{Alphabet, CharSet, Node, NodeKind};

/// Builds the position automaton of a desugared, mode-wrapped tree.
pub fn build_nfa(ast: &Node, alphabet: Alphabet, budget: &Budget) -> Result<Nfa> {
    build_nfa_with(ast, alphabet, &minterms_of(ast, alphabet), budget)
}

/// The minterm partition induced by every character set in `ast`.
pub fn minterms_of(ast: &Node, alphabet: Alphabet) -> Vec<CharSet> {
    let mut sets = Vec::new();
    ast.walk(&mut |n| {
        if let NodeKind::Literal(s) = &n.kind {
            sets.push(s.clone());
        }
    });
    partition(alphabet, &sets)
}

/// Like [`build_nfa`] over a given partition, which must refine every set in `ast`.
pub fn build_nfa_with(
    ast: &Node,
    alphabet: Alphabet,
    minterms: &[CharSet],
    budget: &Budget,
) -> Result<Nfa> {
    let mut b = Builder {
        labels: Vec::new(),
        follow: Vec::new(),
        cache: HashMap::new(),
        minterms,
    };
    let mut count = 0usize;
    ast.walk(&mut |n| count += usize::from(matches!(n.kind, NodeKind::Literal(_))));
    budget.check_nfa_states(count + 1)?;
    let info = b.visit(ast);
    let n = b.labels.len() + 1;
    let mut finals = vec![0u64; n];
    finals[0] = info.null;
    for &(p, w) in &info.last {
        finals[p] = finals[p].saturating_add(w);
    }
    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let push = |out: &mut Vec<Vec<Edge>>, from: usize, to: usize, w: u64, labels: &[u32]| {
        for &l in labels {
            out[from].push(Edge {
                label: l,
                to: to as u32,
                mult: w,
            });
        }
    };
    for &(p, w) in &info.first {
        push(&mut out, 0, p, w, &b.labels[p - 1]);
    }
    for (from, targets) in b.follow.iter().enumerate() {
        for &(to, w) in targets {
            push(&mut out, from + 1, to, w, &b.labels[to - 1]);
        }
    }
    Ok(Nfa::from_parts(alphabet, minterms.to_vec(), finals, out))
}

struct Info {
    null: u64,
    first: Vec<(usize, u64)>,
    last: Vec<(usize, u64)>,
}

struct Builder<'m> {
    /// Minterm labels of position `i + 1`.
    labels: Vec<Vec<u32>>,
    /// Weighted follow lists of position `i + 1`.
    follow: Vec<Vec<(usize, u64)>>,
    cache: HashMap<CharSet, Vec<u32>>,
    minterms: &'m [CharSet],
}

fn scale(v: &[(usize, u64)], k: u64) -> impl Iterator<Item = (usize, u64)> + '_ {
    v.iter()
        .filter(move |_| k > 0)
        .map(move |&(p, w)| (p, w.saturating_mul(k)))
}

impl Builder<'_> {
    fn link(&mut self, from: &[(usize, u64)], to: &[(usize, u64)], k: u64) {
        if k == 0 {
            return;
        }
        for &(p, wp) in from {
            for &(q, wq) in to {
                self.follow[p - 1].push((q, wp.saturating_mul(wq).saturating_mul(k)));
            }
        }
    }

    fn visit(&mut self, node: &Node) -> Info {
        match &node.kind {
            NodeKind::Empty | NodeKind::AnchorStart | NodeKind::AnchorEnd => Info {
                null: 1,
                first: Vec::new(),
                last: Vec::new(),
            },
            NodeKind::Literal(set) => {
                let minterms = self.minterms;
                let labels = self
                    .cache
                    .entry(set.clone())
                    .or_insert_with(|| {
                        minterms
                            .iter()
                            .enumerate()
                            .filter(|(_, m)| m.is_subset(set))
                            .map(|(i, _)| i as u32)
                            .collect()
                    })
                    .clone();
                self.labels.push(labels);
                self.follow.push(Vec::new());
                let p = self.labels.len();
                Info {
                    null: 0,
                    first: vec![(p, 1)],
                    last: vec![(p, 1)],
                }
            }
            NodeKind::Group { child, .. } => self.visit(child),
            NodeKind::Concat(items) => {
                let mut acc = Info {
                    null: 1,
                    first: Vec::new(),
                    last: Vec::new(),
                };
                for item in items {
                    let b = self.visit(item);
                    self.link(&acc.last, &b.first, 1);
                    let mut first = acc.first;
                    first.extend(scale(&b.first, acc.null));
                    let mut last: Vec<(usize, u64)> = scale(&acc.last, b.null).collect();
                    last.extend(b.last);
                    acc = Info {
                        null: acc.null.saturating_mul(b.null),
                        first,
                        last,
                    };
                }
                acc
            }
            NodeKind::Alternation(items) => {
                let mut acc = Info {
                    null: 0,
                    first: Vec::new(),
                    last: Vec::new(),
                };
                for item in items {
                    let b = self.visit(item);
                    acc.null = acc.null.saturating_add(b.null);
                    acc.first.extend(b.first);
                    acc.last.extend(b.last);
                }
                acc
            }
            NodeKind::Quantifier {
                child, min, max, ..
            } => {
                let r = self.visit(child);
                match (min, max) {
                    (0, Some(1)) => Info { null: r.null.saturating_add(1), first: r.first, last: r.last },
                    (_, None) => {
                        self.link(&r.last, &r.first, r.null.saturating_add(1));
                        let null = if *min == 0 { 1 } else { r.null };
                        Info { null, first: r.first, last: r.last }
                    }
                    _ => panic!("counted repetition {min},{max:?} must be desugared before building an automaton"),
                }
            }
        }
    }
}
