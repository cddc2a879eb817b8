//! Prior-art anti-patterns: quantified overlapping adjacency, quantified
//! overlapping disjunction and star height above one. Overlap is decided on
//! character sets, which is all these shapes look at.

use super::{dedupe, Finding, FindingKind, Part, Role};
use crate::syntax::{CharSet, Node, NodeKind};

pub fn detect_soa_antipatterns(ast: &Node) -> Vec<Finding> {
    let mut out = Vec::new();
    star_height(ast, None, &mut out);
    ast.walk(&mut |node| match &node.kind {
        NodeKind::Quantifier {
            child, max: None, ..
        } => qod(node, child, &mut out),
        NodeKind::Concat(items) => qoa(items, &mut out),
        _ => {}
    });
    dedupe(&mut out);
    out
}

/// The character set a node stands for, when it is a single-character
/// construct: a class, a quantified class, or an alternation of those.
fn soa_charset(n: &Node) -> Option<CharSet> {
    match &n.kind {
        NodeKind::Literal(set) => Some(set.clone()),
        NodeKind::Quantifier { child, .. } | NodeKind::Group { child, .. } => soa_charset(child),
        NodeKind::Alternation(alts) => {
            let mut acc = CharSet::empty();
            for a in alts {
                acc = acc.union(&soa_charset(a)?);
            }
            Some(acc)
        }
        _ => None,
    }
}

fn star_height<'a>(n: &'a Node, outer: Option<&'a Node>, out: &mut Vec<Finding>) {
    let mut next = outer;
    if n.is_unbounded() {
        match outer {
            Some(o) => {
                let parts = vec![
                    Part {
                        role: Role::Star,
                        span: o.span,
                    },
                    Part {
                        role: Role::Inner,
                        span: n.span,
                    },
                ];
                out.push(Finding::new(
                    FindingKind::SoaStarHeight,
                    parts,
                    None,
                    "Nested quantifiers: the same string can be consumed by the inner quantifier or the outer one.".into(),
                ));
                // report each outermost quantifier once
                return;
            }
            None => next = Some(n),
        }
    }
    for c in n.children() {
        star_height(c, next, out);
    }
}

fn qod(star: &Node, child: &Node, out: &mut Vec<Finding>) {
    let NodeKind::Alternation(alts) = &child.kind else {
        return;
    };
    for i in 0..alts.len() {
        for j in i + 1..alts.len() {
            let overlap = match (soa_charset(&alts[i]), soa_charset(&alts[j])) {
                (Some(a), Some(b)) => a.overlaps(&b),
                _ => alts[i].same_shape(&alts[j]),
            };
            if overlap {
                let parts = vec![
                    Part {
                        role: Role::Star,
                        span: star.span,
                    },
                    Part {
                        role: Role::Alternative,
                        span: alts[i].span,
                    },
                    Part {
                        role: Role::Alternative,
                        span: alts[j].span,
                    },
                ];
                out.push(Finding::new(
                    FindingKind::SoaQod,
                    parts,
                    None,
                    "A quantified disjunction whose alternatives overlap in the characters they match.".into(),
                ));
                return;
            }
        }
    }
}

fn qoa(items: &[Node], out: &mut Vec<Finding>) {
    for (i, p) in items.iter().enumerate() {
        if !p.is_unbounded() {
            continue;
        }
        let Some(set) = soa_charset(p) else { continue };
        for q in &items[i + 1..] {
            let qs = soa_charset(q);
            let overlaps = qs.as_ref().is_some_and(|s| s.overlaps(&set));
            if q.is_unbounded() && overlaps {
                let parts = vec![
                    Part {
                        role: Role::P,
                        span: p.span,
                    },
                    Part {
                        role: Role::Q,
                        span: q.span,
                    },
                ];
                out.push(Finding::new(
                    FindingKind::SoaQoa,
                    parts,
                    None,
                    "Two quantified nodes with overlapping characters are adjacent once optional nodes between them are skipped."
                        .into(),
                ));
                break;
            }
            if q.nullable() || overlaps {
                continue;
            }
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{desugar, parse, ParseOptions};

    fn kinds(s: &str) -> Vec<FindingKind> {
        let ast = desugar(&parse(s, &ParseOptions::default()).unwrap(), 100).unwrap();
        detect_soa_antipatterns(&ast)
            .into_iter()
            .map(|f| f.kind)
            .collect()
    }

    #[test]
    fn table_examples() {
        assert_eq!(kinds("(a+)+"), vec![FindingKind::SoaStarHeight]);
        assert_eq!(kinds(r"\w*#?\w*"), vec![FindingKind::SoaQoa]);
        assert_eq!(kinds(r"(\w|\d)+"), vec![FindingKind::SoaQod]);
        assert_eq!(kinds("(b*c)*"), vec![FindingKind::SoaStarHeight]);
        assert!(kinds("(a|b|ab)*").is_empty());
        assert!(kinds("(a|b)*(ab)*").is_empty());
    }
}
