//! Normalization to the core constructs used by the automata layer.
//!
//! After desugaring a tree contains only `Empty`, `Literal`, `Concat`,
//! `Alternation`, anchors and quantifiers of the three forms `{0,}`, `{1,}`
//! and `{0,1}`. Groups and lazy flags are gone. Expanded copies keep the
//! spans of the node they were copied from.

use serde::{Deserialize, Serialize};

use super::ast::{Node, NodeKind, Span};
use super::charset::Alphabet;
use crate::error::{Error, Result};

/// Upper bound on literal positions produced by expansion.
pub const MAX_POSITIONS: usize = 5000;

/// Expands counted repetitions and drops groups and laziness.
///
/// `cap` bounds the product of repetition counts along any chain of nested
/// counted quantifiers, so `(a{50}){50}` is rejected under the default cap
/// of 100 while `\w{,10}` is accepted.
pub fn desugar(ast: &Node, cap: u32) -> Result<Node> {
    let node = go(ast, cap, 1)?;
    let positions = count_positions(&node);
    if positions > MAX_POSITIONS {
        return Err(Error::budget(format!(
            "expansion produces {positions} positions (limit {MAX_POSITIONS})"
        )));
    }
    Ok(node)
}

fn count_positions(node: &Node) -> usize {
    let mut n = 0;
    node.walk(&mut |x| {
        if matches!(x.kind, NodeKind::Literal(_)) {
            n += 1;
        }
    });
    n
}

fn go(node: &Node, cap: u32, factor: u64) -> Result<Node> {
    let span = node.span;
    Ok(match &node.kind {
        NodeKind::Empty | NodeKind::Literal(_) | NodeKind::AnchorStart | NodeKind::AnchorEnd => {
            node.clone()
        }
        NodeKind::Group { child, .. } => {
            let mut inner = go(child, cap, factor)?;
            // the group's span covers the parentheses, which is what fixes splice around
            inner.span = span;
            inner
        }
        NodeKind::Concat(items) => {
            let items = items
                .iter()
                .map(|c| go(c, cap, factor))
                .collect::<Result<Vec<_>>>()?;
            let mut n = Node::concat(items);
            n.span = span;
            n
        }
        NodeKind::Alternation(items) => {
            let items = items
                .iter()
                .map(|c| go(c, cap, factor))
                .collect::<Result<Vec<_>>>()?;
            let mut n = Node::alternation(items);
            n.span = span;
            n
        }
        NodeKind::Quantifier {
            child,
            min,
            max,
            op,
            ..
        } => {
            let (min, max) = (*min, *max);
            let core = matches!((min, max), (0, None) | (1, None) | (0, Some(1)));
            if core {
                let child = go(child, cap, factor)?;
                return Ok(Node::new(
                    NodeKind::Quantifier {
                        child: Box::new(child),
                        min,
                        max,
                        lazy: false,
                        op: *op,
                    },
                    span,
                ));
            }
            let count = u64::from(max.unwrap_or(min).max(min));
            let factor = factor.saturating_mul(count.max(1));
            if factor > u64::from(cap) {
                return Err(Error::budget(format!(
                    "bounded repetition at {span} expands {factor} times (cap {cap})"
                )));
            }
            let child = go(child, cap, factor)?;
            expand(child, min, max, span, *op)
        }
    })
}

fn expand(child: Node, min: u32, max: Option<u32>, span: Span, op: Span) -> Node {
    let mut parts: Vec<Node> = (0..min).map(|_| child.clone()).collect();
    match max {
        None => {
            parts.push(Node::new(
                NodeKind::Quantifier {
                    child: Box::new(child),
                    min: 0,
                    max: None,
                    lazy: false,
                    op,
                },
                span,
            ));
        }
        Some(max) => {
            // nested tail (x(x(x)?)?)? keeps the expansion unambiguous
            let mut tail: Option<Node> = None;
            for _ in min..max {
                let body = match tail.take() {
                    None => child.clone(),
                    Some(t) => with_span(Node::concat(vec![child.clone(), t]), span),
                };
                tail = Some(Node::new(
                    NodeKind::Quantifier {
                        child: Box::new(body),
                        min: 0,
                        max: Some(1),
                        lazy: false,
                        op,
                    },
                    span,
                ));
            }
            parts.extend(tail);
        }
    }
    match parts.len() {
        0 => Node::empty(span),
        _ => with_span(Node::concat(parts), span),
    }
}

fn with_span(mut n: Node, span: Span) -> Node {
    if !matches!(n.kind, NodeKind::Literal(_)) {
        n.span = span;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    #[default]
    Full,
    Partial,
}

impl MatchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMode::Full => "full",
            MatchMode::Partial => "partial",
        }
    }
}

impl std::str::FromStr for MatchMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<MatchMode, String> {
        match s {
            "full" => Ok(MatchMode::Full),
            "partial" => Ok(MatchMode::Partial),
            other => Err(format!(
                "unknown match mode {other:?} (expected full or partial)"
            )),
        }
    }
}

/// Rewrites a desugared tree so that full-match analysis sees the given mode.
///
/// Full strips extremity anchors. Partial adds a `.*`-style loop over the
/// whole alphabet on each side that is not anchored, then strips anchors.
/// The synthetic loops get empty spans at the pattern boundaries.
pub fn wrap_for_match_mode(ast: &Node, mode: MatchMode, alphabet: Alphabet) -> Node {
    let mut items = match &ast.kind {
        NodeKind::Concat(items) => items.clone(),
        _ => vec![ast.clone()],
    };
    let anchored_start = matches!(items.first().map(|n| &n.kind), Some(NodeKind::AnchorStart));
    let anchored_end = matches!(items.last().map(|n| &n.kind), Some(NodeKind::AnchorEnd));
    items.retain(|n| !matches!(n.kind, NodeKind::AnchorStart | NodeKind::AnchorEnd));
    if mode == MatchMode::Partial {
        let sigma_star = |at: usize| {
            let lit = Node::literal(alphabet.full(), Span::empty_at(at));
            Node::star(lit)
        };
        // a tree that is already wrapped keeps its loops
        let wrapped_start = items.first().is_some_and(|n| is_wrapper_loop(n, alphabet));
        let wrapped_end =
            items.len() > 1 && items.last().is_some_and(|n| is_wrapper_loop(n, alphabet));
        if !anchored_start && !wrapped_start {
            items.insert(0, sigma_star(ast.span.start));
        }
        if !anchored_end && !wrapped_end {
            items.push(sigma_star(ast.span.end));
        }
    }
    let mut out = Node::concat(items);
    if matches!(out.kind, NodeKind::Concat(_) | NodeKind::Empty) {
        out.span = ast.span;
    }
    out
}

/// True when the node is the synthetic any-character loop added by partial wrapping.
pub fn is_wrapper_loop(node: &Node, alphabet: Alphabet) -> bool {
    match &node.kind {
        NodeKind::Quantifier {
            child,
            min: 0,
            max: None,
            ..
        } => node.span.is_empty() && child.kind == NodeKind::Literal(alphabet.full()),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, ParseOptions};

    fn d(s: &str) -> Node {
        desugar(&parse(s, &ParseOptions::default()).unwrap(), 100).unwrap()
    }

    fn src(n: &Node) -> String {
        n.to_source(Alphabet::Ascii, false)
    }

    #[test]
    fn bounded_expansion_shape() {
        assert_eq!(src(&d("a{2,3}")), "aaa?");
        assert_eq!(src(&d("a{0,3}")), "(?:a(?:aa?)?)?");
        assert_eq!(src(&d("a{3}")), "aaa");
        assert_eq!(src(&d("a{2,}")), "aaa*");
        assert_eq!(src(&d("a{0}")), "");
    }

    #[test]
    fn drops_groups_and_laziness() {
        assert_eq!(src(&d("(a+)+")), "(?:a+)+");
        assert_eq!(src(&d("(?:ab)*?")), "(?:ab)*");
    }

    #[test]
    fn cap_is_multiplicative() {
        let opts = ParseOptions::default();
        let ast = parse("(a{50}){50}", &opts).unwrap();
        assert!(matches!(
            desugar(&ast, 100),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            desugar(&parse("a{101}", &opts).unwrap(), 100),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(desugar(&parse("(a{10}){10}", &opts).unwrap(), 100).is_ok());
    }

    #[test]
    fn wrapping() {
        let a = d("a+");
        let p = wrap_for_match_mode(&a, MatchMode::Partial, Alphabet::Ascii);
        let NodeKind::Concat(items) = &p.kind else {
            panic!()
        };
        assert_eq!(items.len(), 3);
        assert!(is_wrapper_loop(&items[0], Alphabet::Ascii));
        assert!(is_wrapper_loop(&items[2], Alphabet::Ascii));
        let anchored = wrap_for_match_mode(&d("^a+$"), MatchMode::Partial, Alphabet::Ascii);
        assert!(anchored.same_shape(&a));
        assert!(wrap_for_match_mode(&a, MatchMode::Full, Alphabet::Ascii).same_shape(&a));
    }
}
