//! Brute-force membership by backtracking over end positions.
//!
//! This is deliberately independent of the automata layer so that tests can
//! use it as an oracle.

use std::collections::BTreeSet;

use super::ast::{Node, NodeKind};

/// Full-match membership: does `node` match all of `input`?
pub fn matches(node: &Node, input: &str) -> bool {
    let chars: Vec<char> = input.chars().collect();
    ends(node, &chars, 0).contains(&chars.len())
}

/// All positions where a match of `node` starting at `start` can end.
pub fn ends(node: &Node, s: &[char], start: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    match &node.kind {
        NodeKind::Empty => {
            out.insert(start);
        }
        NodeKind::AnchorStart => {
            if start == 0 {
                out.insert(start);
            }
        }
        NodeKind::AnchorEnd => {
            if start == s.len() {
                out.insert(start);
            }
        }
        NodeKind::Literal(set) => {
            if s.get(start).is_some_and(|&c| set.contains_char(c)) {
                out.insert(start + 1);
            }
        }
        NodeKind::Group { child, .. } => return ends(child, s, start),
        NodeKind::Concat(items) => {
            let mut cur = BTreeSet::from([start]);
            for item in items {
                cur = cur.iter().flat_map(|&p| ends(item, s, p)).collect();
                if cur.is_empty() {
                    break;
                }
            }
            return cur;
        }
        NodeKind::Alternation(items) => {
            for item in items {
                out.extend(ends(item, s, start));
            }
        }
        NodeKind::Quantifier {
            child, min, max, ..
        } => {
            let mut cur = BTreeSet::from([start]);
            for _ in 0..*min {
                cur = cur.iter().flat_map(|&p| ends(child, s, p)).collect();
            }
            out.extend(cur.iter().copied());
            match max {
                Some(max) => {
                    for _ in *min..*max {
                        cur = cur.iter().flat_map(|&p| ends(child, s, p)).collect();
                        if cur.is_empty() {
                            break;
                        }
                        out.extend(cur.iter().copied());
                    }
                }
                None => loop {
                    let next: BTreeSet<usize> =
                        cur.iter().flat_map(|&p| ends(child, s, p)).collect();
                    cur = next.difference(&out).copied().collect();
                    if cur.is_empty() {
                        break;
                    }
                    out.extend(cur.iter().copied());
                },
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, ParseOptions};

    fn m(re: &str, s: &str) -> bool {
        matches(&parse(re, &ParseOptions::default()).unwrap(), s)
    }

    #[test]
    fn basics() {
        assert!(m("a*a*", "aaa"));
        assert!(m("", ""));
        assert!(!m("", "a"));
        assert!(m(r"\w*0\d*", "ab0"));
        assert!(m("(ab){2,3}", "ababab"));
        assert!(!m("(ab){2,3}", "ab"));
        assert!(!m("(ab){2,3}", "abababab"));
        assert!(m("(a*)*", ""));
        assert!(m("^a+$", "aa"));
        assert!(m("a{,2}", ""));
    }
}
