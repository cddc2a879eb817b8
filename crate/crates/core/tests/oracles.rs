//! Automata results against brute-force oracles that share no code with them.

use std::collections::HashMap;

use redos_ia::analysis::prepare;
use redos_ia::automata::{
    build_nfa, classify_ambiguity, concat, intersect, left_quotient, right_quotient, star, union,
    Degree, Nfa,
};
use redos_ia::budget::Budget;
use redos_ia::selftest::strings_upto;
use redos_ia::syntax::interp::matches;
use redos_ia::syntax::{desugar, parse, Alphabet, MatchMode, Node, NodeKind, ParseOptions};
use redos_ia::testgen::{GenConfig, RegexGen};
use redos_ia::theory::{brabrand_overlap_empty, moller_overlap};

/// Parse trees of a desugared tree over `s[i..j]`, with stars made of
/// non-empty iterations that may be separated by one empty iteration.
struct Trees {
    s: Vec<char>,
    memo: HashMap<(*const Node, usize, usize), u128>,
}

impl Trees {
    fn new(input: &str) -> Trees {
        Trees {
            s: input.chars().collect(),
            memo: HashMap::new(),
        }
    }

    fn count(&mut self, n: &Node, i: usize, j: usize) -> u128 {
        let key = (n as *const Node, i, j);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let c = match &n.kind {
            NodeKind::Empty => u128::from(i == j),
            NodeKind::Literal(set) => u128::from(j == i + 1 && set.contains_char(self.s[i])),
            NodeKind::Alternation(items) => items.iter().map(|x| self.count(x, i, j)).sum(),
            NodeKind::Concat(items) => {
                let mut ways = vec![0u128; j + 1];
                ways[i] = 1;
                for item in items {
                    let mut next = vec![0u128; j + 1];
                    for (a, &w) in ways.iter().enumerate().skip(i) {
                        if w == 0 {
                            continue;
                        }
                        for (b, slot) in next.iter_mut().enumerate().skip(a) {
                            *slot += w * self.count(item, a, b);
                        }
                    }
                    ways = next;
                }
                ways[j]
            }
            NodeKind::Quantifier {
                child,
                min: 0,
                max: Some(1),
                ..
            } => u128::from(i == j) + self.count(child, i, j),
            NodeKind::Quantifier {
                child,
                min,
                max: None,
                ..
            } => {
                if i == j {
                    if *min == 0 {
                        1
                    } else {
                        self.count(child, i, i)
                    }
                } else {
                    self.iterations(child, i, j)
                }
            }
            other => panic!("not desugared: {other:?}"),
        };
        self.memo.insert(key, c);
        c
    }

    /// Sequences of non-empty iterations of `child` covering `s[i..j]`, i < j.
    fn iterations(&mut self, child: &Node, i: usize, j: usize) -> u128 {
        let gap = self.count(child, i, i) + 1;
        let mut total = 0;
        for m in i + 1..=j {
            let first = self.count(child, i, m);
            if first == 0 {
                continue;
            }
            total += if m == j {
                first
            } else {
                first * gap * self.iterations(child, m, j)
            };
        }
        total
    }
}

fn trees(ast: &Node, input: &str) -> u128 {
    let mut t = Trees::new(input);
    let n = input.chars().count();
    t.count(ast, 0, n)
}

fn opts() -> ParseOptions {
    ParseOptions::default()
}

fn prepared(p: &str) -> Node {
    prepare(p, MatchMode::Full, &opts()).unwrap().1
}

fn nfa(p: &str) -> Nfa {
    build_nfa(&prepared(p), Alphabet::Ascii, &Budget::unlimited()).unwrap()
}

fn binary(seed: u64, n: usize, depth: u32) -> Vec<String> {
    RegexGen::new(seed, GenConfig::binary(depth)).take(n)
}

#[test]
fn count_runs_examples() {
    assert_eq!(nfa("a*a*").count_runs("aaa"), 4);
    assert_eq!(nfa("(a|a)*").count_runs("aa"), 4);
    assert_eq!(nfa("abc").count_runs("abc"), 1);
    let empty = nfa("");
    assert_eq!(empty.count_runs(""), 1);
    assert_eq!(empty.count_runs("a"), 0);
    for p in ["a*a*", "(a|a)*", "abc"] {
        for w in strings_upto(&['a', 'b', 'c'], 4) {
            assert_eq!(
                nfa(p).count_runs(&w),
                trees(&prepared(p), &w),
                "{p} on {w:?}"
            );
        }
    }
}

#[test]
fn count_runs_equals_parse_trees() {
    let inputs = strings_upto(&['a', 'b'], 5);
    for p in binary(11, 300, 4) {
        let ast = prepared(&p);
        let m = build_nfa(&ast, Alphabet::Ascii, &Budget::unlimited()).unwrap();
        for w in &inputs {
            assert_eq!(m.count_runs(w), trees(&ast, w), "{p} on {w:?}");
        }
    }
}

#[test]
fn nfa_language_matches_interpreter() {
    let inputs = strings_upto(&['a', 'b'], 6);
    for p in binary(12, 300, 5) {
        let parsed = parse(&p, &opts()).unwrap();
        let m = nfa(&p);
        for w in &inputs {
            assert_eq!(m.accepts(w), matches(&parsed, w), "{p} on {w:?}");
            assert_eq!(
                m.trim().accepts(w),
                m.accepts(w),
                "trim changed {p} on {w:?}"
            );
        }
    }
}

#[test]
fn desugar_preserves_language() {
    let inputs = strings_upto(&['a', 'b'], 6);
    for p in binary(13, 400, 5)
        .iter()
        .chain(&["a{2,3}".to_string(), "(ab){0,2}b{3,}".to_string()])
    {
        let parsed = parse(p, &opts()).unwrap();
        let sugar_free = desugar(&parsed, 100).unwrap();
        for w in &inputs {
            assert_eq!(matches(&parsed, w), matches(&sugar_free, w), "{p} on {w:?}");
        }
    }
}

#[test]
fn exponential_witness_doubles_runs() {
    let m = nfa("(a|a)*");
    let v = classify_ambiguity(&m, &Budget::unlimited()).unwrap();
    assert_eq!(v.degree, Degree::Eda);
    let w = v.witness.unwrap();
    assert!(w.replays(&m));
    for k in 1..=6 {
        assert!(m.count_runs(&w.attack(k)) >= 1 << k, "k = {k}");
    }
}

#[test]
fn witnesses_replay() {
    let b = Budget::unlimited();
    for p in binary(14, 300, 5) {
        let m = nfa(&p);
        let v = classify_ambiguity(&m, &b).unwrap();
        assert_eq!(v.witness.is_some(), v.degree.is_infinite(), "{p}");
        if let Some(w) = &v.witness {
            assert!(w.replays(&m), "{p}: {w:?}");
        }
    }
}

#[test]
fn boolean_operations_match_membership() {
    let b = Budget::unlimited();
    let inputs = strings_upto(&['a', 'b'], 6);
    let pats = binary(15, 80, 3);
    for pair in pats.chunks(2) {
        let (x, y) = (nfa(&pair[0]), nfa(&pair[1]));
        let (px, py) = (
            parse(&pair[0], &opts()).unwrap(),
            parse(&pair[1], &opts()).unwrap(),
        );
        let inter = intersect(&x, &y, &b).unwrap();
        let uni = union(&x, &y);
        let cat = concat(&x, &y);
        let st = star(&x);
        for w in &inputs {
            let (inx, iny) = (matches(&px, w), matches(&py, w));
            assert_eq!(inter.accepts(w), inx && iny, "{pair:?} ∩ on {w:?}");
            assert_eq!(uni.accepts(w), inx || iny, "{pair:?} ∪ on {w:?}");
            let chars: Vec<char> = w.chars().collect();
            let split = (0..=chars.len()).any(|k| {
                let (l, r): (String, String) =
                    (chars[..k].iter().collect(), chars[k..].iter().collect());
                matches(&px, &l) && matches(&py, &r)
            });
            assert_eq!(cat.accepts(w), split, "{pair:?} · on {w:?}");
            let starred = parse(&format!("({})*", pair[0]), &opts()).unwrap();
            assert_eq!(st.accepts(w), matches(&starred, w), "{pair:?} * on {w:?}");
        }
    }
}

#[test]
fn quotients_match_brute_force() {
    let b = Budget::unlimited();
    let short = strings_upto(&['a', 'b'], 4);
    let pats = binary(16, 60, 3);
    for pair in pats.chunks(2) {
        let (px, py) = (
            parse(&pair[0], &opts()).unwrap(),
            parse(&pair[1], &opts()).unwrap(),
        );
        let (x, y) = (nfa(&pair[0]), nfa(&pair[1]));
        let lq = left_quotient(&x, &y, &b).unwrap();
        let rq = right_quotient(&y, &x, &b).unwrap();
        for w in strings_upto(&['a', 'b'], 3) {
            // every witness u found by brute force must be accepted
            let left = short
                .iter()
                .any(|u| matches(&px, u) && matches(&py, &format!("{u}{w}")));
            let right = short
                .iter()
                .any(|v| matches(&px, v) && matches(&py, &format!("{w}{v}")));
            if left {
                assert!(lq.accepts(&w), "{pair:?}: {w:?} in X\\Y");
            }
            if right {
                assert!(rq.accepts(&w), "{pair:?}: {w:?} in Y/X");
            }
            // and anything accepted has a witness of moderate length
            let long = strings_upto(&['a', 'b'], 7);
            if lq.accepts(&w) {
                assert!(
                    long.iter()
                        .any(|u| matches(&px, u) && matches(&py, &format!("{u}{w}"))),
                    "{pair:?} {w:?}"
                );
            }
            if rq.accepts(&w) {
                assert!(
                    long.iter()
                        .any(|v| matches(&px, v) && matches(&py, &format!("{w}{v}"))),
                    "{pair:?} {w:?}"
                );
            }
        }
    }
}

/// `a` with 1 ≤ |a| is in Ω(X, Y) when x, xa ∈ X and ay, y ∈ Y for some x, y.
fn in_omega(px: &Node, py: &Node, a: &str, pool: &[String]) -> bool {
    pool.iter()
        .any(|x| matches(px, x) && matches(px, &format!("{x}{a}")))
        && pool
            .iter()
            .any(|y| matches(py, y) && matches(py, &format!("{a}{y}")))
}

#[test]
fn overlap_matches_brute_force() {
    let b = Budget::unlimited();
    let pool = strings_upto(&['a', 'b'], 5);
    let cores: Vec<String> = strings_upto(&['a', 'b'], 3)
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let pats = binary(17, 120, 3);
    for pair in pats.chunks(2) {
        let (px, py) = (
            parse(&pair[0], &opts()).unwrap(),
            parse(&pair[1], &opts()).unwrap(),
        );
        let r = moller_overlap(&nfa(&pair[0]), &nfa(&pair[1]), &b).unwrap();
        assert_eq!(r.witness.is_none(), r.empty, "{pair:?}");
        for a in &cores {
            if in_omega(&px, &py, a, &pool) {
                assert!(
                    r.language.accepts(a),
                    "{pair:?}: {a:?} missing from the overlap"
                );
            }
        }
        if let Some(a) = &r.witness {
            assert!(!a.is_empty());
            assert!(
                in_omega(&px, &py, a, &strings_upto(&['a', 'b'], 7)),
                "{pair:?}: witness {a:?}"
            );
        }
        let empty = brabrand_overlap_empty(&nfa(&pair[0]), &nfa(&pair[1]), &b).unwrap();
        assert_eq!(empty, r.empty, "{pair:?}");
    }
}

#[test]
fn overlap_examples() {
    let b = Budget::unlimited();
    let pool = strings_upto(&['a'], 4);
    let (a, astar) = (parse("a", &opts()).unwrap(), parse("a*", &opts()).unwrap());
    assert!(!(1..=4).any(|k| in_omega(&a, &astar, &"a".repeat(k), &pool)));
    assert!(moller_overlap(&nfa("a"), &nfa("a*"), &b).unwrap().empty);
    let (x, y) = (
        parse("aa|a", &opts()).unwrap(),
        parse("(aa|a)*", &opts()).unwrap(),
    );
    assert!(in_omega(&x, &y, "a", &pool));
    assert!(moller_overlap(&nfa("aa|a"), &nfa("(aa|a)*"), &b)
        .unwrap()
        .language
        .accepts("a"));
    let digits = strings_upto(&['0', 'a'], 3);
    let (w, d) = (
        parse(r"\w", &opts()).unwrap(),
        parse(r"\d", &opts()).unwrap(),
    );
    assert!(!digits
        .iter()
        .filter(|s| !s.is_empty())
        .any(|s| in_omega(&w, &d, s, &digits)));
    assert!(brabrand_overlap_empty(&nfa(r"\w"), &nfa(r"\d"), &b).unwrap());
}
