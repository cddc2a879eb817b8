//! Degree-of-ambiguity classification by self-product analysis.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::ops::graph_of;
use super::search::{lex_shortest, scc, Graph};
use super::{Edge, Nfa};
use crate::budget::Budget;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degree {
    Unambiguous,
    FinitelyAmbiguous,
    /// Polynomial: two loops joined by a bridge, all on one string.
    Pda,
    /// Exponential: two distinct loops at one state on one string.
    Eda,
}

impl Degree {
    pub fn is_infinite(self) -> bool {
        matches!(self, Degree::Pda | Degree::Eda)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Degree::Unambiguous => "unambiguous",
            Degree::FinitelyAmbiguous => "finitely_ambiguous",
            Degree::Pda => "pda",
            Degree::Eda => "eda",
        }
    }
}

/// Attack family `prefix · pump^(period·k) · suffix`. The loops at `p` (and
/// `q`) read `pump` repeated `period` times; `pump` itself is primitive.
/// State ids refer to the trimmed automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpWitness {
    pub pump: String,
    pub period: usize,
    pub prefix: String,
    pub suffix: String,
    pub p: usize,
    /// Second loop state for polynomial ambiguity.
    pub q: Option<usize>,
}

impl PumpWitness {
    pub fn attack(&self, k: usize) -> String {
        format!(
            "{}{}{}",
            self.prefix,
            self.pump.repeat(k * self.period),
            self.suffix
        )
    }

    /// The word read by one traversal of the loops.
    pub fn loop_word(&self) -> String {
        self.pump.repeat(self.period)
    }

    /// Checks the witness against the automaton it was extracted from.
    pub fn replays(&self, nfa: &Nfa) -> bool {
        let labels = |s: &str| -> Option<Vec<u32>> { s.chars().map(|c| nfa.label_of(c)).collect() };
        let (Some(prefix), Some(pump), Some(suffix)) = (
            labels(&self.prefix),
            labels(&self.loop_word()),
            labels(&self.suffix),
        ) else {
            return false;
        };
        let p = self.p;
        if pump.is_empty() || p >= nfa.num_states() || !nfa.run_from(&[0], &prefix).contains(&p) {
            return false;
        }
        let accepts_from = |s: usize| {
            nfa.run_from(&[s], &suffix)
                .iter()
                .any(|&t| nfa.is_accepting(t))
        };
        match self.q {
            None => nfa.count_paths(p, p, &pump) >= 2 && accepts_from(p),
            Some(q) => {
                q < nfa.num_states()
                    && q != p
                    && nfa.count_paths(p, p, &pump) >= 1
                    && nfa.count_paths(p, q, &pump) >= 1
                    && nfa.count_paths(q, q, &pump) >= 1
                    && accepts_from(q)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityVerdict {
    pub degree: Degree,
    pub witness: Option<PumpWitness>,
}

impl AmbiguityVerdict {
    pub fn is_infinite(&self) -> bool {
        self.degree.is_infinite()
    }
}

/// The self-product restricted to pairs reachable from (0,0).
struct Pairs {
    nodes: Vec<(u32, u32)>,
    /// (label, target, distinct) where distinct means the two component
    /// transitions differ.
    out: Vec<Vec<(u32, usize, bool)>>,
}

fn joint<'e>(ea: &'e [Edge], eb: &'e [Edge]) -> impl Iterator<Item = (&'e Edge, &'e Edge)> + 'e {
    ea.iter().flat_map(move |x| {
        let lo = eb.partition_point(|y| y.label < x.label);
        eb[lo..]
            .iter()
            .take_while(move |y| y.label == x.label)
            .map(move |y| (x, y))
    })
}

fn self_product(nfa: &Nfa, budget: &Budget) -> Result<Pairs> {
    let mut index: HashMap<(u32, u32), usize> = HashMap::from([((0, 0), 0)]);
    let mut nodes = vec![(0u32, 0u32)];
    let mut out = Vec::new();
    let mut transitions = 0usize;
    let mut i = 0;
    while i < nodes.len() {
        let (p, q) = nodes[i];
        let mut es = Vec::new();
        for (x, y) in joint(nfa.edges(p as usize), nfa.edges(q as usize)) {
            let distinct = !(p == q && x.to == y.to) || x.mult >= 2;
            let key = (x.to, y.to);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    budget.check_product(nodes.len() + 1)?;
                    index.insert(key, nodes.len());
                    nodes.push(key);
                    nodes.len() - 1
                }
            };
            es.push((x.label, id, distinct));
        }
        transitions += es.len();
        budget.check_transitions(transitions)?;
        out.push(es);
        i += 1;
    }
    Ok(Pairs { nodes, out })
}

/// Classifies the degree of ambiguity of `nfa` (trimmed first).
pub fn classify_ambiguity(nfa: &Nfa, budget: &Budget) -> Result<AmbiguityVerdict> {
    let nfa = nfa.trim();
    let pairs = self_product(&nfa, budget)?;
    let g2: Graph = pairs
        .out
        .iter()
        .map(|es| es.iter().map(|&(l, t, _)| (l, t)).collect())
        .collect();
    let comp = scc(&g2);

    if let Some(w) = exponential(&nfa, &pairs, &comp, budget)? {
        return Ok(AmbiguityVerdict {
            degree: Degree::Eda,
            witness: Some(w),
        });
    }
    if let Some(w) = polynomial(&nfa, &pairs, &comp, budget)? {
        return Ok(AmbiguityVerdict {
            degree: Degree::Pda,
            witness: Some(w),
        });
    }
    let degree = if finitely_ambiguous(&nfa, &pairs) {
        Degree::FinitelyAmbiguous
    } else {
        Degree::Unambiguous
    };
    Ok(AmbiguityVerdict {
        degree,
        witness: None,
    })
}

/// A shortest string with at least two accepting runs, if any.
pub fn ambiguous_word(nfa: &Nfa, budget: &Budget) -> Result<Option<String>> {
    let nfa = nfa.trim();
    let pairs = self_product(&nfa, budget)?;
    let n = pairs.nodes.len();
    // node v (flag clear) or n + v (flag set: the two runs already differ)
    let mut g: Graph = vec![Vec::new(); 2 * n];
    for v in 0..n {
        for &(l, t, distinct) in &pairs.out[v] {
            g[v].push((l, if distinct { n + t } else { t }));
            g[n + v].push((l, n + t));
        }
    }
    let target = |x: usize| {
        let (v, split) = if x >= n { (x - n, true) } else { (x, false) };
        let (p, q) = pairs.nodes[v];
        let (p, q) = (p as usize, q as usize);
        nfa.is_accepting(p) && nfa.is_accepting(q) && (split || nfa.final_weight(p) >= 2)
    };
    Ok(lex_shortest(&g, &[0], &target).map(|(labels, _)| nfa.spell(&labels)))
}

fn finitely_ambiguous(nfa: &Nfa, pairs: &Pairs) -> bool {
    if (0..nfa.num_states()).any(|s| nfa.final_weight(s) >= 2) {
        return true;
    }
    let n = pairs.nodes.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, es) in pairs.out.iter().enumerate() {
        for &(_, t, _) in es {
            rev[t].push(v);
        }
    }
    let mut co = vec![false; n];
    let mut stack: Vec<usize> = (0..n)
        .filter(|&i| {
            let (p, q) = pairs.nodes[i];
            nfa.is_accepting(p as usize) && nfa.is_accepting(q as usize)
        })
        .collect();
    for &i in &stack {
        co[i] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in &rev[v] {
            if !co[u] {
                co[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).any(|v| {
        co[v]
            && (pairs.nodes[v].0 != pairs.nodes[v].1
                || pairs.out[v]
                    .iter()
                    .any(|&(_, t, distinct)| distinct && co[t]))
    })
}

fn prefix_to(nfa: &Nfa, g: &Graph, p: usize) -> String {
    let (labels, _) = lex_shortest(g, &[0], &|s| s == p).expect("trimmed state is reachable");
    nfa.spell(&labels)
}

fn suffix_from(nfa: &Nfa, g: &Graph, q: usize) -> String {
    let (labels, _) =
        lex_shortest(g, &[q], &|s| nfa.is_accepting(s)).expect("trimmed state is co-reachable");
    nfa.spell(&labels)
}

/// Splits a loop word into its primitive root and repetition count.
fn primitive(nfa: &Nfa, labels: &[u32]) -> (String, usize) {
    let n = labels.len();
    let d = (1..=n)
        .find(|&d| n.is_multiple_of(d) && labels.chunks(d).all(|c| c == &labels[..d]))
        .unwrap_or(n);
    (nfa.spell(&labels[..d]), n / d.max(1))
}

fn better(a: &[u32], b: &[u32]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// A diagonal pair whose component also holds an off-diagonal pair or a
/// distinct-transition edge gives two different cycles on one string.
fn exponential(
    nfa: &Nfa,
    pairs: &Pairs,
    comp: &[usize],
    budget: &Budget,
) -> Result<Option<PumpWitness>> {
    let n = pairs.nodes.len();
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut rich = vec![false; ncomp];
    for v in 0..n {
        let (p, q) = pairs.nodes[v];
        if p != q {
            rich[comp[v]] = true;
        }
        for &(_, t, distinct) in &pairs.out[v] {
            if distinct && comp[t] == comp[v] {
                rich[comp[v]] = true;
            }
        }
    }
    let mut best: Option<(Vec<u32>, usize)> = None;
    for v in 0..n {
        let (p, q) = pairs.nodes[v];
        if p != q || !rich[comp[v]] {
            continue;
        }
        budget.tick()?;
        // layered graph over (node, flag) inside the component
        let c = comp[v];
        let members: Vec<usize> = (0..n).filter(|&u| comp[u] == c).collect();
        let local: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let m = members.len();
        let mut g: Graph = vec![Vec::new(); 2 * m];
        for (i, &u) in members.iter().enumerate() {
            for &(l, t, distinct) in &pairs.out[u] {
                let Some(&j) = local.get(&t) else { continue };
                let off = pairs.nodes[t].0 != pairs.nodes[t].1;
                let raise = distinct || off;
                g[i].push((l, if raise { m + j } else { j }));
                g[m + i].push((l, m + j));
            }
        }
        let start = local[&v];
        if let Some((labels, _)) = lex_shortest(&g, &[start], &|x| x == m + start) {
            if best.as_ref().is_none_or(|(b, _)| better(&labels, b)) {
                best = Some((labels, p as usize));
            }
        }
    }
    Ok(best.map(|(labels, p)| {
        let g = graph_of(nfa);
        let (pump, period) = primitive(nfa, &labels);
        PumpWitness {
            pump,
            period,
            prefix: prefix_to(nfa, &g, p),
            suffix: suffix_from(nfa, &g, p),
            p,
            q: None,
        }
    }))
}

/// Searches the triple product for a path (p,p,q) → (p,q,q) with p ≠ q.
fn polynomial(
    nfa: &Nfa,
    pairs: &Pairs,
    comp2: &[usize],
    budget: &Budget,
) -> Result<Option<PumpWitness>> {
    let g1 = graph_of(nfa);
    let comp1 = scc(&g1);
    let n = pairs.nodes.len();
    let mut comp2_size = HashMap::new();
    for &c in comp2 {
        *comp2_size.entry(c).or_insert(0usize) += 1;
    }
    // an off-diagonal pair (p,q) with loops at both ends lies on a cycle of the pair graph
    let cyclic2 =
        |v: usize| comp2_size[&comp2[v]] > 1 || pairs.out[v].iter().any(|&(_, t, _)| t == v);
    let index2: HashMap<(u32, u32), usize> = pairs
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();
    let mut best: Option<(Vec<u32>, usize, usize)> = None;
    let mut explored = 0usize;
    for v in 0..n {
        let (p, q) = pairs.nodes[v];
        if p == q || !cyclic2(v) || comp1[p as usize] == comp1[q as usize] && p == q {
            continue;
        }
        let Some(&diag) = index2.get(&(p, p)) else {
            continue;
        };
        if !cyclic2(diag) {
            continue;
        }
        let (p, q) = (p as usize, q as usize);
        let (cp, cq) = (comp1[p], comp1[q]);
        // triple BFS; first component stays in p's SCC, third in q's
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut nodes = vec![(p, p, q)];
        index.insert((p, p, q), 0);
        let mut g: Graph = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (x, y, z) = nodes[i];
            while g.len() <= i {
                g.push(Vec::new());
            }
            for (ex, ey) in joint(nfa.edges(x), nfa.edges(y)) {
                if comp1[ex.to as usize] != cp {
                    continue;
                }
                let lo = nfa.edges(z).partition_point(|e| e.label < ex.label);
                for ez in nfa.edges(z)[lo..]
                    .iter()
                    .take_while(|e| e.label == ex.label)
                {
                    if comp1[ez.to as usize] != cq {
                        continue;
                    }
                    let key = (ex.to as usize, ey.to as usize, ez.to as usize);
                    let id = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            explored += 1;
                            budget.check_product(explored)?;
                            index.insert(key, nodes.len());
                            nodes.push(key);
                            queue.push_back(nodes.len() - 1);
                            nodes.len() - 1
                        }
                    };
                    g[i].push((ex.label, id));
                }
            }
        }
        g.resize(nodes.len(), Vec::new());
        let Some(&target) = index.get(&(p, q, q)) else {
            continue;
        };
        if let Some((labels, _)) = lex_shortest(&g, &[0], &|x| x == target) {
            if best.as_ref().is_none_or(|(b, _, _)| better(&labels, b)) {
                best = Some((labels, p, q));
            }
        }
    }
    Ok(best.map(|(labels, p, q)| {
        let (pump, period) = primitive(nfa, &labels);
        PumpWitness {
            pump,
            period,
            prefix: prefix_to(nfa, &g1, p),
            suffix: suffix_from(nfa, &g1, q),
            p,
            q: Some(q),
        }
    }))
}
