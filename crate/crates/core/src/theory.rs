//! Executable forms of the overlap operators and the ambiguity theorems for
//! alternation, concatenation and star.
//!
//! Every predicate checks its hypotheses with the automaton classifier first
//! and answers `NotApplicable` when they fail.

use serde::{Deserialize, Serialize};

use crate::automata::{
    ambiguous_word, build_nfa, classify_ambiguity, intersect, is_empty, left_quotient, plus,
    right_quotient, shortest_member, star, without_empty, Degree, Nfa,
};
use crate::budget::Budget;
use crate::error::Result;
use crate::syntax::{Alphabet, Node, NodeKind};

/// Shared inputs of every predicate.
#[derive(Debug, Clone, Copy)]
pub struct Env<'b> {
    pub alphabet: Alphabet,
    pub budget: &'b Budget,
}

impl Env<'_> {
    pub fn nfa(&self, node: &Node) -> Result<Nfa> {
        build_nfa(node, self.alphabet, self.budget)
    }

    pub fn degree(&self, node: &Node) -> Result<Degree> {
        Ok(classify_ambiguity(&self.nfa(node)?, self.budget)?.degree)
    }
}

#[derive(Debug, Clone)]
pub struct OverlapResult {
    pub language: Nfa,
    pub empty: bool,
    pub witness: Option<String>,
}

/// Ω(X, Y): non-empty strings `a` with `x, xa ∈ X` and `ay, y ∈ Y`.
pub fn moller_overlap(x: &Nfa, y: &Nfa, budget: &Budget) -> Result<OverlapResult> {
    let lx = left_quotient(x, x, budget)?;
    let ry = right_quotient(y, y, budget)?;
    let language = without_empty(&intersect(&lx, &ry, budget)?);
    let witness = shortest_member(&language);
    Ok(OverlapResult {
        empty: witness.is_none(),
        language,
        witness,
    })
}

/// Whether `{ xay | x, xa ∈ X; ay, y ∈ Y; a ≠ ε }` is empty. That set is
/// non-empty exactly when Ω(X, Y) is, since both are defined by the same
/// `x, a, y` triples.
pub fn brabrand_overlap_empty(x: &Nfa, y: &Nfa, budget: &Budget) -> Result<bool> {
    Ok(moller_overlap(x, y, budget)?.empty)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    T0a,
    T0b,
    T0c,
    T1,
    T2,
    T3,
    T4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Unambiguous,
    /// Ambiguous with the degree left open (the unambiguity theorem only
    /// separates unambiguous from ambiguous).
    Ambiguous,
    FinitelyAmbiguous,
    InfinitelyAmbiguous,
    NotApplicable,
}

impl Conclusion {
    /// Whether `degree` is consistent with this conclusion.
    pub fn agrees_with(self, degree: Degree) -> bool {
        match self {
            Conclusion::Unambiguous => degree == Degree::Unambiguous,
            Conclusion::Ambiguous => degree != Degree::Unambiguous,
            Conclusion::FinitelyAmbiguous => degree == Degree::FinitelyAmbiguous,
            Conclusion::InfinitelyAmbiguous => degree.is_infinite(),
            Conclusion::NotApplicable => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub conclusion: Conclusion,
    /// Strings that justify the conclusion (shared strings, overlap cores).
    pub witnesses: Vec<String>,
    pub explanation: String,
}

impl TheoremVerdict {
    fn new(
        theorem: TheoremId,
        conclusion: Conclusion,
        witnesses: Vec<String>,
        explanation: impl Into<String>,
    ) -> Self {
        TheoremVerdict {
            theorem,
            conclusion,
            witnesses,
            explanation: explanation.into(),
        }
    }

    fn not_applicable(theorem: TheoremId, why: impl Into<String>) -> Self {
        TheoremVerdict::new(theorem, Conclusion::NotApplicable, Vec::new(), why)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Composition {
    Alt,
    Concat,
    Star,
}

/// Language is exactly {ε}; stars over such bodies are treated as unambiguous.
fn only_empty(nfa: &Nfa) -> bool {
    nfa.accepts("") && is_empty(&without_empty(nfa))
}

/// Unambiguity of `r1|r2`, `r1·r2` or `r1*` for unambiguous components.
pub fn thm0_unambiguity(
    kind: Composition,
    r1: &Node,
    r2: Option<&Node>,
    env: &Env,
) -> Result<TheoremVerdict> {
    let id = match kind {
        Composition::Alt => TheoremId::T0a,
        Composition::Concat => TheoremId::T0b,
        Composition::Star => TheoremId::T0c,
    };
    if env.degree(r1)? != Degree::Unambiguous {
        return Ok(TheoremVerdict::not_applicable(
            id,
            "first component is ambiguous",
        ));
    }
    let l1 = env.nfa(r1)?;
    match kind {
        Composition::Alt | Composition::Concat => {
            let Some(r2) = r2 else {
                return Ok(TheoremVerdict::not_applicable(
                    id,
                    "second component missing",
                ));
            };
            if env.degree(r2)? != Degree::Unambiguous {
                return Ok(TheoremVerdict::not_applicable(
                    id,
                    "second component is ambiguous",
                ));
            }
            let l2 = env.nfa(r2)?;
            if kind == Composition::Alt {
                let shared = shortest_member(&intersect(&l1, &l2, env.budget)?);
                return Ok(match shared {
                    None => TheoremVerdict::new(
                        id,
                        Conclusion::Unambiguous,
                        vec![],
                        "the alternatives share no string",
                    ),
                    Some(s) => TheoremVerdict::new(
                        id,
                        Conclusion::Ambiguous,
                        vec![s],
                        "both alternatives match a shared string",
                    ),
                });
            }
            let omega = moller_overlap(&l1, &l2, env.budget)?;
            Ok(match omega.witness {
                None => TheoremVerdict::new(
                    id,
                    Conclusion::Unambiguous,
                    vec![],
                    "the overlap of the two languages is empty",
                ),
                Some(a) => TheoremVerdict::new(
                    id,
                    Conclusion::Ambiguous,
                    vec![a],
                    "a non-empty core can be split between the two parts",
                ),
            })
        }
        Composition::Star => {
            if only_empty(&l1) {
                return Ok(TheoremVerdict::new(
                    id,
                    Conclusion::Unambiguous,
                    vec![],
                    "the body only matches the empty string",
                ));
            }
            if l1.accepts("") {
                return Ok(TheoremVerdict::new(
                    id,
                    Conclusion::Ambiguous,
                    vec![String::new()],
                    "the body matches the empty string",
                ));
            }
            let omega = moller_overlap(&l1, &star(&l1), env.budget)?;
            Ok(match omega.witness {
                None => TheoremVerdict::new(
                    id,
                    Conclusion::Unambiguous,
                    vec![],
                    "iterations cannot be re-split",
                ),
                Some(a) => TheoremVerdict::new(
                    id,
                    Conclusion::Ambiguous,
                    vec![a],
                    "a core can move between iterations",
                ),
            })
        }
    }
}

/// Alternation of unambiguous regexes is never infinitely ambiguous.
pub fn thm1_alternation(r1: &Node, r2: &Node, env: &Env) -> Result<TheoremVerdict> {
    let id = TheoremId::T1;
    if env.degree(r1)? != Degree::Unambiguous || env.degree(r2)? != Degree::Unambiguous {
        return Ok(TheoremVerdict::not_applicable(
            id,
            "a component is ambiguous",
        ));
    }
    let shared = shortest_member(&intersect(&env.nfa(r1)?, &env.nfa(r2)?, env.budget)?);
    Ok(match shared {
        None => TheoremVerdict::new(
            id,
            Conclusion::Unambiguous,
            vec![],
            "the alternatives are disjoint",
        ),
        Some(s) => TheoremVerdict::new(
            id,
            Conclusion::FinitelyAmbiguous,
            vec![s],
            "each shared string has exactly two parses",
        ),
    })
}

/// Context of an unbounded quantifier site, read off the tree.
fn site_contexts(root: &Node) -> Vec<(Node, Node, Node)> {
    // (loop body, right context starting with the loop, left context ending with one iteration)
    let mut out = Vec::new();
    let mut path: Vec<(&Node, usize)> = Vec::new();
    collect_sites(root, &mut path, &mut out);
    out
}

fn collect_sites<'a>(
    node: &'a Node,
    path: &mut Vec<(&'a Node, usize)>,
    out: &mut Vec<(Node, Node, Node)>,
) {
    if let NodeKind::Quantifier {
        child, max: None, ..
    } = &node.kind
    {
        let mut right = vec![Node::star((**child).clone())];
        let mut left = vec![Node::plus((**child).clone())];
        for &(anc, idx) in path.iter().rev() {
            match &anc.kind {
                NodeKind::Concat(items) => {
                    right.extend(items[idx + 1..].iter().cloned());
                    let mut before: Vec<Node> = items[..idx].to_vec();
                    before.extend(left);
                    left = before;
                }
                NodeKind::Quantifier {
                    child, max: None, ..
                } => {
                    right.push(Node::star((**child).clone()));
                    left.insert(0, Node::star((**child).clone()));
                }
                _ => {}
            }
        }
        out.push(((**child).clone(), Node::concat(right), Node::concat(left)));
    }
    for (i, c) in node.children().into_iter().enumerate() {
        path.push((node, i));
        collect_sites(c, path, out);
        path.pop();
    }
}

/// Infinite ambiguity of `r1·r2` for unambiguous components with a
/// non-empty overlap. Sites are unbounded quantifiers `C*` in `r1` and `F*`
/// in `r2`; the bridge is what may follow an iteration of `C` to the end of
/// `r1`, then what may precede an iteration of `F` from the start of `r2`.
pub fn thm2_concatenation(r1: &Node, r2: &Node, env: &Env) -> Result<TheoremVerdict> {
    let id = TheoremId::T2;
    if env.degree(r1)? != Degree::Unambiguous || env.degree(r2)? != Degree::Unambiguous {
        return Ok(TheoremVerdict::not_applicable(
            id,
            "a component is ambiguous",
        ));
    }
    let (l1, l2) = (env.nfa(r1)?, env.nfa(r2)?);
    if brabrand_overlap_empty(&l1, &l2, env.budget)? {
        return Ok(TheoremVerdict::not_applicable(
            id,
            "the concatenation is unambiguous",
        ));
    }
    let left_sites = site_contexts(r1);
    let right_sites = site_contexts(r2);
    for (c, right_ctx, _) in &left_sites {
        let c_plus = without_empty(&plus(&env.nfa(c)?));
        let c_bridge = env.nfa(right_ctx)?;
        for (f, _, left_ctx) in &right_sites {
            env.budget.check_deadline()?;
            let f_plus = without_empty(&plus(&env.nfa(f)?));
            let loops = intersect(&c_plus, &f_plus, env.budget)?;
            if is_empty(&loops) {
                continue;
            }
            let bridge = crate::automata::concat(&c_bridge, &env.nfa(left_ctx)?);
            if let Some(s) = shortest_member(&intersect(&loops, &bridge, env.budget)?) {
                return Ok(TheoremVerdict::new(
                    id,
                    Conclusion::InfinitelyAmbiguous,
                    vec![s],
                    "two loops and the bridge between them share a string",
                ));
            }
        }
    }
    Ok(TheoremVerdict::new(
        id,
        Conclusion::FinitelyAmbiguous,
        vec![],
        "no loop pair shares a string with its bridge",
    ))
}

/// Infinite ambiguity of `r*` for unambiguous `r`.
pub fn thm3_star(r: &Node, env: &Env) -> Result<TheoremVerdict> {
    let id = TheoremId::T3;
    if env.degree(r)? != Degree::Unambiguous {
        return Ok(TheoremVerdict::not_applicable(id, "the body is ambiguous"));
    }
    let l = env.nfa(r)?;
    if only_empty(&l) {
        return Ok(TheoremVerdict::new(
            id,
            Conclusion::Unambiguous,
            vec![],
            "the body only matches the empty string",
        ));
    }
    if l.accepts("") {
        return Ok(TheoremVerdict::new(
            id,
            Conclusion::InfinitelyAmbiguous,
            vec![String::new()],
            "the body matches the empty string",
        ));
    }
    let omega = moller_overlap(&l, &star(&l), env.budget)?;
    Ok(match omega.witness {
        Some(a) => TheoremVerdict::new(
            id,
            Conclusion::InfinitelyAmbiguous,
            vec![a],
            "a core can move between iterations",
        ),
        None => TheoremVerdict::new(
            id,
            Conclusion::Unambiguous,
            vec![],
            "the overlap of the body with its star is empty",
        ),
    })
}

/// The star of a finitely ambiguous regex is infinitely ambiguous.
pub fn thm4_finite_to_infinite(r: &Node, env: &Env) -> Result<TheoremVerdict> {
    let id = TheoremId::T4;
    if env.degree(r)? != Degree::FinitelyAmbiguous {
        return Ok(TheoremVerdict::not_applicable(
            id,
            "the body is not finitely ambiguous",
        ));
    }
    let s = ambiguous_word(&env.nfa(r)?, env.budget)?.unwrap_or_default();
    Ok(TheoremVerdict::new(
        id,
        Conclusion::InfinitelyAmbiguous,
        vec![s],
        "each repetition of a string with two parses doubles the parses",
    ))
}

/// Theorems that apply to the top-level shape of `ast`, for explanations.
pub fn explain(ast: &Node, env: &Env) -> Result<Vec<TheoremVerdict>> {
    let mut out = Vec::new();
    match &ast.kind {
        NodeKind::Alternation(items) if items.len() >= 2 => {
            let rest = Node::alternation(items[1..].to_vec());
            out.push(thm0_unambiguity(
                Composition::Alt,
                &items[0],
                Some(&rest),
                env,
            )?);
            out.push(thm1_alternation(&items[0], &rest, env)?);
        }
        NodeKind::Concat(items) if items.len() >= 2 => {
            // split at the first point where both halves are unambiguous
            for k in 1..items.len() {
                let r1 = Node::concat(items[..k].to_vec());
                let r2 = Node::concat(items[k..].to_vec());
                let t0 = thm0_unambiguity(Composition::Concat, &r1, Some(&r2), env)?;
                if t0.conclusion == Conclusion::NotApplicable {
                    continue;
                }
                out.push(t0);
                out.push(thm2_concatenation(&r1, &r2, env)?);
                break;
            }
        }
        NodeKind::Quantifier {
            child, max: None, ..
        } => {
            out.push(thm0_unambiguity(Composition::Star, child, None, env)?);
            out.push(thm3_star(child, env)?);
            out.push(thm4_finite_to_infinite(child, env)?);
        }
        _ => {}
    }
    Ok(out)
}
