//! Language operations. These preserve languages; only [`intersect`] also
//! keeps run counts (as products), which nothing relies on.

use std::collections::HashMap;

use super::search::{lex_shortest, Graph};
use super::{align, Edge, Nfa};
use crate::budget::Budget;
use crate::error::Result;
use crate::syntax::{Alphabet, CharSet};

/// Σ*
pub fn universal(alphabet: Alphabet) -> Nfa {
    let minterms = vec![alphabet.full()];
    let edge = Edge {
        label: 0,
        to: 1,
        mult: 1,
    };
    Nfa::from_parts(alphabet, minterms, vec![1, 1], vec![vec![edge], vec![edge]])
}

/// The single-string language `{s}`. Characters outside the alphabet yield
/// the empty language.
pub fn word(alphabet: Alphabet, s: &str) -> Nfa {
    if !s.chars().all(|c| alphabet.contains(c)) {
        return Nfa::empty_language(alphabet);
    }
    let sets: Vec<CharSet> = s.chars().map(CharSet::single).collect();
    let minterms = super::partition(alphabet, &sets);
    let n = sets.len() + 1;
    let mut finals = vec![0; n];
    finals[n - 1] = 1;
    let out = (0..n)
        .map(|i| match sets.get(i) {
            Some(set) => {
                let label = minterms
                    .iter()
                    .position(|m| m == set)
                    .expect("singleton is a minterm") as u32;
                vec![Edge {
                    label,
                    to: i as u32 + 1,
                    mult: 1,
                }]
            }
            None => Vec::new(),
        })
        .collect();
    Nfa::from_parts(alphabet, minterms, finals, out)
}

/// L \ {ε}
pub fn without_empty(a: &Nfa) -> Nfa {
    let mut finals: Vec<u64> = (0..a.num_states()).map(|s| a.final_weight(s)).collect();
    finals[0] = 0;
    Nfa::from_parts(a.alphabet(), a.minterms().to_vec(), finals, a.out.clone()).trim()
}

pub fn is_empty(a: &Nfa) -> bool {
    let seen = a.reachable_from(&[0]);
    !(0..a.num_states()).any(|s| seen[s] && a.is_accepting(s))
}

pub(crate) fn graph_of(a: &Nfa) -> Graph {
    (0..a.num_states())
        .map(|s| {
            a.edges(s)
                .iter()
                .map(|e| (e.label, e.to as usize))
                .collect()
        })
        .collect()
}

/// A minimum-length member, smallest code point first at ties.
pub fn shortest_member(a: &Nfa) -> Option<String> {
    let g = graph_of(a);
    let (labels, _) = lex_shortest(&g, &[0], &|s| a.is_accepting(s))?;
    Some(a.spell(&labels))
}

/// Pairs of edges from `ea` and `eb` that share a label. Both lists are
/// sorted by label.
fn joint<'e>(ea: &'e [Edge], eb: &'e [Edge]) -> impl Iterator<Item = (&'e Edge, &'e Edge)> + 'e {
    ea.iter().flat_map(move |x| {
        let lo = eb.partition_point(|y| y.label < x.label);
        eb[lo..]
            .iter()
            .take_while(move |y| y.label == x.label)
            .map(move |y| (x, y))
    })
}

/// Product state list (index = product state) and adjacency.
type Product = (Vec<(u32, u32)>, Vec<Vec<Edge>>);

/// Explores the product of `a` and `b` from the given start pairs. Returns
/// the pair list (index = product state) and product adjacency.
fn product(a: &Nfa, b: &Nfa, starts: &[(u32, u32)], budget: &Budget) -> Result<Product> {
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut out: Vec<Vec<Edge>> = Vec::new();
    for &s in starts {
        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(s) {
            e.insert(pairs.len() as u32);
            pairs.push(s);
        }
    }
    let mut transitions = 0usize;
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut edges = Vec::new();
        for (x, y) in joint(a.edges(p as usize), b.edges(q as usize)) {
            let key = (x.to, y.to);
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = pairs.len() as u32;
                    budget.check_product(pairs.len() + 1)?;
                    index.insert(key, id);
                    pairs.push(key);
                    id
                }
            };
            edges.push(Edge {
                label: x.label,
                to: id,
                mult: x.mult.saturating_mul(y.mult),
            });
        }
        transitions += edges.len();
        budget.check_transitions(transitions)?;
        out.push(edges);
        i += 1;
    }
    Ok((pairs, out))
}

pub fn intersect(a: &Nfa, b: &Nfa, budget: &Budget) -> Result<Nfa> {
    let (a, b) = align(a, b);
    let (pairs, out) = product(&a, &b, &[(0, 0)], budget)?;
    let finals = pairs
        .iter()
        .map(|&(p, q)| {
            a.final_weight(p as usize)
                .saturating_mul(b.final_weight(q as usize))
        })
        .collect();
    Ok(Nfa::from_parts(a.alphabet(), a.minterms().to_vec(), finals, out).trim())
}

fn shifted(es: &[Edge], by: u32, scale: u64) -> impl Iterator<Item = Edge> + '_ {
    es.iter().map(move |e| Edge {
        to: e.to + by,
        mult: e.mult.saturating_mul(scale),
        ..*e
    })
}

pub fn union(a: &Nfa, b: &Nfa) -> Nfa {
    let (a, b) = align(a, b);
    let (na, nb) = (a.num_states() as u32, b.num_states() as u32);
    let mut out: Vec<Vec<Edge>> = Vec::with_capacity((1 + na + nb) as usize);
    let mut finals = Vec::with_capacity(out.capacity());
    out.push(
        shifted(a.edges(0), 1, 1)
            .chain(shifted(b.edges(0), 1 + na, 1))
            .collect(),
    );
    finals.push(a.final_weight(0).saturating_add(b.final_weight(0)));
    for s in 0..na as usize {
        out.push(shifted(a.edges(s), 1, 1).collect());
        finals.push(a.final_weight(s));
    }
    for s in 0..nb as usize {
        out.push(shifted(b.edges(s), 1 + na, 1).collect());
        finals.push(b.final_weight(s));
    }
    Nfa::from_parts(a.alphabet(), a.minterms().to_vec(), finals, out).trim()
}

pub fn concat(a: &Nfa, b: &Nfa) -> Nfa {
    let (a, b) = align(a, b);
    let na = a.num_states() as u32;
    let mut out: Vec<Vec<Edge>> = Vec::new();
    let mut finals = Vec::new();
    for s in 0..na as usize {
        let fa = a.final_weight(s);
        out.push(
            shifted(a.edges(s), 0, 1)
                .chain(shifted(b.edges(0), na, fa).filter(|e| e.mult > 0))
                .collect(),
        );
        finals.push(fa.saturating_mul(b.final_weight(0)));
    }
    for s in 0..b.num_states() {
        out.push(shifted(b.edges(s), na, 1).collect());
        finals.push(b.final_weight(s));
    }
    Nfa::from_parts(a.alphabet(), a.minterms().to_vec(), finals, out).trim()
}

pub fn plus(a: &Nfa) -> Nfa {
    let mut out = a.out.clone();
    for (s, es) in out.iter_mut().enumerate() {
        let f = a.final_weight(s);
        if f > 0 {
            es.extend(shifted(a.edges(0), 0, f));
        }
    }
    let finals = (0..a.num_states()).map(|s| a.final_weight(s)).collect();
    Nfa::from_parts(a.alphabet(), a.minterms().to_vec(), finals, out).trim()
}

pub fn star(a: &Nfa) -> Nfa {
    let p = plus(a);
    let mut finals: Vec<u64> = (0..p.num_states()).map(|s| p.final_weight(s)).collect();
    finals[0] = finals[0].max(1);
    Nfa::from_parts(p.alphabet(), p.minterms().to_vec(), finals, p.out).trim()
}

/// `{ w | ∃u ∈ X : uw ∈ Y }`
pub fn left_quotient(x: &Nfa, y: &Nfa, budget: &Budget) -> Result<Nfa> {
    let (x, y) = align(x, y);
    let (pairs, _) = product(&x, &y, &[(0, 0)], budget)?;
    let mut entry: Vec<usize> = pairs
        .iter()
        .filter(|&&(p, _)| x.is_accepting(p as usize))
        .map(|&(_, q)| q as usize)
        .collect();
    entry.sort_unstable();
    entry.dedup();
    let mut out: Vec<Vec<Edge>> = vec![entry
        .iter()
        .flat_map(|&q| shifted(y.edges(q), 1, 1))
        .collect()];
    let mut finals = vec![u64::from(entry.iter().any(|&q| y.is_accepting(q)))];
    for s in 0..y.num_states() {
        out.push(shifted(y.edges(s), 1, 1).collect());
        finals.push(y.final_weight(s));
    }
    Ok(Nfa::from_parts(y.alphabet(), y.minterms().to_vec(), finals, out).trim())
}

/// `{ w | ∃v ∈ X : wv ∈ Y }`
pub fn right_quotient(y: &Nfa, x: &Nfa, budget: &Budget) -> Result<Nfa> {
    let (y, x) = align(y, x);
    let starts: Vec<(u32, u32)> = (0..y.num_states() as u32).map(|s| (s, 0)).collect();
    let (pairs, out) = product(&y, &x, &starts, budget)?;
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); pairs.len()];
    for (v, es) in out.iter().enumerate() {
        for e in es {
            rev[e.to as usize].push(v);
        }
    }
    let mut co = vec![false; pairs.len()];
    let mut stack: Vec<usize> = (0..pairs.len())
        .filter(|&i| y.is_accepting(pairs[i].0 as usize) && x.is_accepting(pairs[i].1 as usize))
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
    // start pairs were inserted first, so pair index s is (s, 0)
    let finals = (0..y.num_states()).map(|s| u64::from(co[s])).collect();
    Ok(Nfa::from_parts(y.alphabet(), y.minterms().to_vec(), finals, y.out.clone()).trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build_nfa;
    use crate::syntax::{desugar, parse, ParseOptions};

    fn nfa(s: &str) -> Nfa {
        let ast = desugar(&parse(s, &ParseOptions::default()).unwrap(), 100).unwrap();
        build_nfa(&ast, Alphabet::Ascii, &Budget::unlimited()).unwrap()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn intersection() {
        let i = intersect(&nfa(r"\w"), &nfa(r"\d"), &b()).unwrap();
        assert!(!is_empty(&i));
        assert!(i.accepts("5") && !i.accepts("a"));
        assert!(is_empty(&intersect(&nfa("a"), &nfa("b"), &b()).unwrap()));
        let three = intersect(
            &intersect(&nfa(r"\w+"), &nfa(r"\d+"), &b()).unwrap(),
            &nfa("0"),
            &b(),
        )
        .unwrap();
        assert_eq!(shortest_member(&three).as_deref(), Some("0"));
    }

    #[test]
    fn closures() {
        let p = plus(&nfa("a"));
        assert!(p.accepts("aaa") && !p.accepts(""));
        assert!(star(&nfa("ab")).accepts(""));
        assert_eq!(shortest_member(&nfa("(ab)*")).as_deref(), Some(""));
        let c = concat(&nfa("a|b"), &nfa("c*"));
        assert!(c.accepts("acc") && c.accepts("b") && !c.accepts("c"));
        let u = union(&nfa("a"), &nfa("b+"));
        assert!(u.accepts("a") && u.accepts("bb") && !u.accepts("ab"));
    }

    #[test]
    fn quotients() {
        let l = left_quotient(&nfa("a"), &nfa("aa"), &b()).unwrap();
        assert!(l.accepts("a") && !l.accepts("") && !l.accepts("aa"));
        let l = left_quotient(&nfa("aa|a"), &nfa("aa|a"), &b()).unwrap();
        assert!(l.accepts("a") && l.accepts(""));
        let r = right_quotient(&nfa("a*"), &nfa("a*"), &b()).unwrap();
        assert!(r.accepts("") && r.accepts("aaaa"));
        let r = right_quotient(&nfa("abc"), &nfa("c"), &b()).unwrap();
        assert!(r.accepts("ab") && !r.accepts("abc"));
    }

    #[test]
    fn emptiness_and_members() {
        assert_eq!(shortest_member(&nfa("b|a")).as_deref(), Some("a"));
        assert!(is_empty(&Nfa::empty_language(Alphabet::Ascii)));
        assert!(word(Alphabet::Ascii, "ab").accepts("ab"));
        assert!(universal(Alphabet::Ascii).accepts("xyz"));
        assert!(!without_empty(&nfa("a*")).accepts(""));
    }
}
