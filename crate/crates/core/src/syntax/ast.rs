use std::fmt;

use serde::{Deserialize, Serialize};

use super::charset::{render_class, Alphabet, CharSet};

/// Byte range into the regex source.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn empty_at(pos: usize) -> Span {
        Span {
            start: pos,
            end: pos,
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn cover(&self, other: &Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Empty,
    Literal(CharSet),
    Concat(Vec<Node>),
    Alternation(Vec<Node>),
    Quantifier {
        child: Box<Node>,
        min: u32,
        /// `None` is unbounded.
        max: Option<u32>,
        lazy: bool,
        /// Span of the quantifier operator text (`*`, `{2,5}?`, ...).
        op: Span,
    },
    Group {
        child: Box<Node>,
        capturing: bool,
    },
    AnchorStart,
    AnchorEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
}

impl Node {
    pub fn new(kind: NodeKind, span: Span) -> Node {
        Node { kind, span }
    }

    pub fn empty(span: Span) -> Node {
        Node::new(NodeKind::Empty, span)
    }

    pub fn literal(set: CharSet, span: Span) -> Node {
        debug_assert!(!set.is_empty());
        Node::new(NodeKind::Literal(set), span)
    }

    pub fn quantifier(child: Node, min: u32, max: Option<u32>, span: Span) -> Node {
        let op = Span::empty_at(span.end);
        Node::new(
            NodeKind::Quantifier {
                child: Box::new(child),
                min,
                max,
                lazy: false,
                op,
            },
            span,
        )
    }

    pub fn star(child: Node) -> Node {
        let span = child.span;
        Node::quantifier(child, 0, None, span)
    }

    pub fn plus(child: Node) -> Node {
        let span = child.span;
        Node::quantifier(child, 1, None, span)
    }

    pub fn optional(child: Node) -> Node {
        let span = child.span;
        Node::quantifier(child, 0, Some(1), span)
    }

    /// Concatenation that flattens nested concatenations and drops empties.
    pub fn concat(children: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c.kind {
                NodeKind::Concat(inner) => flat.extend(inner),
                NodeKind::Empty => {}
                _ => flat.push(c),
            }
        }
        match flat.len() {
            0 => Node::empty(Span::default()),
            1 => flat.pop().unwrap(),
            _ => {
                let span = span_of(&flat);
                Node::new(NodeKind::Concat(flat), span)
            }
        }
    }

    /// Alternation that flattens nested alternations.
    pub fn alternation(children: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c.kind {
                NodeKind::Alternation(inner) => flat.extend(inner),
                _ => flat.push(c),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        let span = span_of(&flat);
        Node::new(NodeKind::Alternation(flat), span)
    }

    pub fn children(&self) -> Vec<&Node> {
        match &self.kind {
            NodeKind::Concat(c) | NodeKind::Alternation(c) => c.iter().collect(),
            NodeKind::Quantifier { child, .. } | NodeKind::Group { child, .. } => vec![child],
            _ => Vec::new(),
        }
    }

    /// True for quantifiers with no upper bound (`*`, `+`, `{m,}`).
    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, NodeKind::Quantifier { max: None, .. })
    }

    /// Whether the language contains the empty string.
    pub fn nullable(&self) -> bool {
        match &self.kind {
            NodeKind::Empty | NodeKind::AnchorStart | NodeKind::AnchorEnd => true,
            NodeKind::Literal(_) => false,
            NodeKind::Concat(c) => c.iter().all(Node::nullable),
            NodeKind::Alternation(c) => c.iter().any(Node::nullable),
            NodeKind::Quantifier { child, min, .. } => *min == 0 || child.nullable(),
            NodeKind::Group { child, .. } => child.nullable(),
        }
    }

    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Node)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn contains_unbounded(&self) -> bool {
        let mut found = false;
        self.walk(&mut |n| found |= n.is_unbounded());
        found
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Structural equality ignoring spans.
    pub fn same_shape(&self, other: &Node) -> bool {
        use NodeKind::*;
        match (&self.kind, &other.kind) {
            (Empty, Empty) | (AnchorStart, AnchorStart) | (AnchorEnd, AnchorEnd) => true,
            (Literal(a), Literal(b)) => a == b,
            (Concat(a), Concat(b)) | (Alternation(a), Alternation(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_shape(y))
            }
            (
                Quantifier {
                    child: c1,
                    min: m1,
                    max: x1,
                    lazy: l1,
                    ..
                },
                Quantifier {
                    child: c2,
                    min: m2,
                    max: x2,
                    lazy: l2,
                    ..
                },
            ) => m1 == m2 && x1 == x2 && l1 == l2 && c1.same_shape(c2),
            (
                Group {
                    child: c1,
                    capturing: k1,
                },
                Group {
                    child: c2,
                    capturing: k2,
                },
            ) => k1 == k2 && c1.same_shape(c2),
            _ => false,
        }
    }

    /// Renders the tree back to regex source.
    pub fn to_source(&self, alphabet: Alphabet, dotall: bool) -> String {
        let mut out = String::new();
        print(self, alphabet, dotall, &mut out);
        out
    }
}

fn span_of(nodes: &[Node]) -> Span {
    nodes
        .iter()
        .map(|n| n.span)
        .reduce(|a, b| a.cover(&b))
        .unwrap_or_default()
}

fn print(node: &Node, alphabet: Alphabet, dotall: bool, out: &mut String) {
    match &node.kind {
        NodeKind::Empty => {}
        NodeKind::Literal(set) => out.push_str(&render_class(set, alphabet, dotall)),
        NodeKind::AnchorStart => out.push('^'),
        NodeKind::AnchorEnd => out.push('$'),
        NodeKind::Concat(children) => {
            for c in children {
                let wrap = matches!(c.kind, NodeKind::Alternation(_) | NodeKind::Concat(_));
                print_wrapped(c, wrap, alphabet, dotall, out);
            }
        }
        NodeKind::Alternation(children) => {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push('|');
                }
                let wrap = matches!(c.kind, NodeKind::Alternation(_));
                print_wrapped(c, wrap, alphabet, dotall, out);
            }
        }
        NodeKind::Group { child, capturing } => {
            out.push_str(if *capturing { "(" } else { "(?:" });
            print(child, alphabet, dotall, out);
            out.push(')');
        }
        NodeKind::Quantifier {
            child,
            min,
            max,
            lazy,
            ..
        } => {
            let wrap = !matches!(child.kind, NodeKind::Literal(_) | NodeKind::Group { .. });
            print_wrapped(child, wrap, alphabet, dotall, out);
            out.push_str(&quantifier_op(*min, *max));
            if *lazy {
                out.push('?');
            }
        }
    }
}

fn print_wrapped(node: &Node, wrap: bool, alphabet: Alphabet, dotall: bool, out: &mut String) {
    if wrap {
        out.push_str("(?:");
        print(node, alphabet, dotall, out);
        out.push(')');
    } else {
        print(node, alphabet, dotall, out);
    }
}

pub fn quantifier_op(min: u32, max: Option<u32>) -> String {
    match (min, max) {
        (0, None) => "*".into(),
        (1, None) => "+".into(),
        (0, Some(1)) => "?".into(),
        (m, None) => format!("{{{m},}}"),
        (m, Some(n)) if m == n => format!("{{{m}}}"),
        (m, Some(n)) => format!("{{{m},{n}}}"),
    }
}
