//! The six IA anti-patterns. Every check is an automaton emptiness test, so
//! a finding always comes with a shared string.

use std::collections::HashMap;

use super::{dedupe, Finding, FindingKind, Part, Role};
use crate::automata::{concat, intersect, plus, shortest_member, union, without_empty, Nfa};
use crate::error::{Error, Result};
use crate::syntax::{Node, NodeKind, Span};
use crate::theory::Env;

/// Findings plus the sites whose checks ran out of budget.
#[derive(Debug, Clone, Default)]
pub struct Detection {
    pub findings: Vec<Finding>,
    pub errors: Vec<Error>,
}

/// Scans every concatenation and every unbounded quantifier of a desugared
/// tree. `src` is the text the spans refer to.
pub fn detect_ia_antipatterns(ast: &Node, src: &str, env: &Env) -> Detection {
    let mut d = Detector {
        env,
        src,
        cache: HashMap::new(),
    };
    let mut out = Detection::default();
    ast.walk(&mut |node| {
        let res = match &node.kind {
            NodeKind::Concat(items) => {
                let items: Vec<&Node> = items.iter().collect();
                d.concat_hits(&items)
                    .map(|hits| hits.into_iter().map(|h| d.concat_finding(&h)).collect())
            }
            NodeKind::Quantifier {
                child, max: None, ..
            } => d.star_findings(node, child),
            _ => Ok(Vec::new()),
        };
        match res {
            Ok(fs) => out.findings.extend(fs),
            Err(e) => out.errors.push(e),
        }
    });
    dedupe(&mut out.findings);
    out
}

struct ConcatHit<'a> {
    kind: FindingKind,
    p: &'a Node,
    q: &'a Node,
    gap: Vec<&'a Node>,
    witness: String,
}

struct Detector<'e, 's> {
    env: &'e Env<'e>,
    src: &'s str,
    cache: HashMap<(*const Node, bool), Nfa>,
}

fn body(n: &Node) -> &Node {
    match &n.kind {
        NodeKind::Quantifier { child, .. } => child,
        _ => n,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Most exposures considered per concatenation item.
const MAX_EXPOSED: usize = 16;

/// Unbounded quantifiers that can sit at one edge of `n` along some path
/// through it, each with the nodes on that path between it and the edge.
/// Optional parts are taken as present and alternations pick one branch, so
/// every exposure is a restriction of the original regex.
fn exposed(n: &Node, side: Side) -> Vec<(&Node, Vec<&Node>)> {
    let mut out = Vec::new();
    expose(n, side, Vec::new(), &mut out);
    out
}

fn expose<'a>(
    n: &'a Node,
    side: Side,
    rest: Vec<&'a Node>,
    out: &mut Vec<(&'a Node, Vec<&'a Node>)>,
) {
    if out.len() >= MAX_EXPOSED {
        return;
    }
    match &n.kind {
        NodeKind::Quantifier { max: None, .. } => out.push((n, rest)),
        NodeKind::Quantifier { child, .. } => expose(child, side, rest, out),
        NodeKind::Alternation(alts) => {
            for a in alts {
                expose(a, side, rest.clone(), out);
            }
        }
        NodeKind::Concat(items) => {
            for k in 0..items.len() {
                let between: Vec<&Node> = match side {
                    Side::Right => items[k + 1..].iter().chain(rest.iter().copied()).collect(),
                    Side::Left => rest.iter().copied().chain(items[..k].iter()).collect(),
                };
                expose(&items[k], side, between, out);
            }
        }
        _ => {}
    }
}

fn cover(nodes: &[&Node]) -> Span {
    nodes
        .iter()
        .map(|n| n.span)
        .reduce(|a, b| a.cover(&b))
        .unwrap_or_default()
}

impl Detector<'_, '_> {
    fn text(&self, span: Span) -> String {
        if span.is_empty() {
            "the implicit any-character loop".to_string()
        } else {
            format!("`{}`", self.src.get(span.start..span.end).unwrap_or("?"))
        }
    }

    fn lang(&mut self, n: &Node) -> Result<Nfa> {
        let key = (n as *const Node, false);
        if let Some(a) = self.cache.get(&key) {
            return Ok(a.clone());
        }
        let a = self.env.nfa(n)?;
        self.cache.insert(key, a.clone());
        Ok(a)
    }

    /// L(n)⁺ without ε.
    fn pumps(&mut self, n: &Node) -> Result<Nfa> {
        let key = (n as *const Node, true);
        if let Some(a) = self.cache.get(&key) {
            return Ok(a.clone());
        }
        let a = without_empty(&plus(&self.lang(n)?));
        self.cache.insert(key, a.clone());
        Ok(a)
    }

    fn seq(&mut self, nodes: &[&Node]) -> Result<Nfa> {
        let mut acc: Option<Nfa> = None;
        for n in nodes {
            let l = self.lang(n)?;
            acc = Some(match acc {
                None => l,
                Some(a) => concat(&a, &l),
            });
        }
        Ok(acc.unwrap_or_else(|| crate::automata::word(self.env.alphabet, "")))
    }

    fn concat_hits<'a>(&mut self, items: &[&'a Node]) -> Result<Vec<ConcatHit<'a>>> {
        let mut hits = Vec::new();
        let rights: Vec<_> = items.iter().map(|n| exposed(n, Side::Right)).collect();
        let lefts: Vec<_> = items.iter().map(|n| exposed(n, Side::Left)).collect();
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                for (p, tail) in &rights[i] {
                    for (q, head) in &lefts[j] {
                        self.env.budget.check_deadline()?;
                        let gap: Vec<&Node> = tail
                            .iter()
                            .chain(&items[i + 1..j])
                            .chain(head.iter())
                            .copied()
                            .collect();
                        if let Some(hit) = self.concat_check(p, q, gap)? {
                            hits.push(hit);
                        }
                    }
                }
            }
        }
        Ok(hits)
    }

    fn concat_check<'a>(
        &mut self,
        p: &'a Node,
        q: &'a Node,
        gap: Vec<&'a Node>,
    ) -> Result<Option<ConcatHit<'a>>> {
        let loops = intersect(
            &self.pumps(body(p))?,
            &self.pumps(body(q))?,
            self.env.budget,
        )?;
        let (kind, shared) = if gap.is_empty() {
            (FindingKind::Concat1, loops)
        } else if gap.iter().all(|n| n.nullable()) {
            (FindingKind::Concat3, loops)
        } else {
            let bridge = self.seq(&gap)?;
            (
                FindingKind::Concat2,
                intersect(&loops, &bridge, self.env.budget)?,
            )
        };
        Ok(shortest_member(&shared).map(|witness| ConcatHit {
            kind,
            p,
            q,
            gap,
            witness,
        }))
    }

    fn concat_finding(&self, h: &ConcatHit) -> Finding {
        let (p, q) = (self.text(h.p.span), self.text(h.q.span));
        let s = &h.witness;
        let mut parts = vec![Part {
            role: Role::P,
            span: h.p.span,
        }];
        let explanation = match h.kind {
            FindingKind::Concat1 => {
                format!("The quantified parts {p} and {q} are adjacent and can both match the shared string \"{s}\".")
            }
            FindingKind::Concat2 => {
                parts.push(Part {
                    role: Role::S,
                    span: cover(&h.gap),
                });
                let mid = self.text(cover(&h.gap));
                format!("The quantified parts {p} and {q} can both match \"{s}\", which the middle part {mid} also matches.")
            }
            _ => {
                parts.push(Part {
                    role: Role::S,
                    span: cover(&h.gap),
                });
                let mid = self.text(cover(&h.gap));
                format!(
                    "The quantified parts {p} and {q} can both match \"{s}\", and the intervening {mid} can be skipped."
                )
            }
        };
        parts.push(Part {
            role: Role::Q,
            span: h.q.span,
        });
        Finding::new(h.kind, parts, Some(s.clone()), explanation)
    }

    fn star_findings(&mut self, star: &Node, child: &Node) -> Result<Vec<Finding>> {
        let mut out = Vec::new();
        let star_part = Part {
            role: Role::Star,
            span: star.span,
        };
        let body_part = Part {
            role: Role::Body,
            span: child.span,
        };
        self.option_findings(star_part, child, &mut out)?;
        self.nested_alternations(star_part, child, &mut out)?;
        if child.contains_unbounded() {
            let once: Vec<&Node> = match &child.kind {
                NodeKind::Concat(items) => items.iter().collect(),
                _ => vec![child],
            };
            let twice: Vec<&Node> = once.iter().chain(once.iter()).copied().collect();
            let hits = self.concat_hits(&twice)?;
            if let Some(h) = hits.first() {
                let explanation = format!(
                    "The body {} contains a nested quantifier, and repeating it twice gives a {} pattern: {} and {} can both match \"{}\".",
                    self.text(child.span),
                    h.kind,
                    self.text(h.p.span),
                    self.text(h.q.span),
                    h.witness
                );
                let parts = vec![
                    star_part,
                    body_part,
                    Part {
                        role: Role::P,
                        span: h.p.span,
                    },
                    Part {
                        role: Role::Q,
                        span: h.q.span,
                    },
                ];
                out.push(Finding::new(
                    FindingKind::Star3,
                    parts,
                    Some(h.witness.clone()),
                    explanation,
                ));
            }
        }
        if child.nullable() && !out.iter().any(|f| f.kind == FindingKind::Star3) {
            // an empty iteration can be inserted anywhere
            if let Some(s) = shortest_member(&without_empty(&self.lang(child)?)) {
                let explanation = format!(
                    "The repeated body {} can match the empty string, so \"{s}\" can be split into iterations in many ways.",
                    self.text(child.span)
                );
                out.push(Finding::new(
                    FindingKind::Star3,
                    vec![star_part, body_part],
                    Some(s),
                    explanation,
                ));
            }
        }
        Ok(out)
    }

    /// Star1 for an alternation nested inside the repeated body: overlapping
    /// alternatives make one repetition ambiguous, and repeating an
    /// ambiguous body multiplies the ambiguity.
    fn nested_alternations(
        &mut self,
        star_part: Part,
        child: &Node,
        out: &mut Vec<Finding>,
    ) -> Result<()> {
        let mut alts_nodes: Vec<&Node> = Vec::new();
        collect_alternations(child, true, &mut alts_nodes);
        for alt in alts_nodes {
            let NodeKind::Alternation(alts) = &alt.kind else {
                continue;
            };
            'pairs: for i in 0..alts.len() {
                for j in i + 1..alts.len() {
                    self.env.budget.check_deadline()?;
                    let shared = intersect(
                        &self.lang(&alts[i])?,
                        &self.lang(&alts[j])?,
                        self.env.budget,
                    )?;
                    if let Some(s) = shortest_member(&without_empty(&shared)) {
                        let explanation = format!(
                            "Inside the repeated body, the alternatives {} and {} can both match \"{s}\", so every repetition can be matched in more than one way.",
                            self.text(alts[i].span),
                            self.text(alts[j].span)
                        );
                        let parts = vec![
                            star_part,
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
                            FindingKind::Star1,
                            parts,
                            Some(s),
                            explanation,
                        ));
                        break 'pairs;
                    }
                }
            }
        }
        Ok(())
    }

    /// Star1 and Star2 over the options of the repeated body: its
    /// alternatives, or when options are hidden behind optional parts and
    /// nested alternations, the distinct paths through it.
    fn option_findings(
        &mut self,
        star_part: Part,
        child: &Node,
        out: &mut Vec<Finding>,
    ) -> Result<()> {
        let Some(paths) = paths(child) else {
            return Ok(());
        };
        let paths: Vec<Vec<&Node>> = paths
            .into_iter()
            .filter(|p| !p.iter().all(|n| n.nullable()))
            .collect();
        if paths.len() < 2 {
            return Ok(());
        }
        let syntactic = match &child.kind {
            NodeKind::Alternation(alts)
                if alts.len() == paths.len() && alts.iter().all(|a| !a.nullable()) =>
            {
                Some(alts.iter().map(|a| a.span).collect::<Vec<_>>())
            }
            _ => None,
        };
        let mut langs = Vec::with_capacity(paths.len());
        for p in &paths {
            langs.push(self.seq(p)?);
        }
        let describe = |this: &Self, k: usize| match &syntactic {
            Some(spans) => this.text(spans[k]),
            None => format!(
                "`{}`",
                paths[k]
                    .iter()
                    .map(|n| this.text(n.span).trim_matches('`').to_string())
                    .collect::<Vec<_>>()
                    .join("")
            ),
        };
        let part = |k: usize, role: Role| match &syntactic {
            Some(spans) => Part {
                role,
                span: spans[k],
            },
            None => Part {
                role: Role::Body,
                span: child.span,
            },
        };
        for i in 0..langs.len() {
            for j in i + 1..langs.len() {
                self.env.budget.check_deadline()?;
                let shared = intersect(&langs[i], &langs[j], self.env.budget)?;
                if let Some(s) = shortest_member(&without_empty(&shared)) {
                    let explanation = format!(
                        "The options {} and {} of the repeated body can both match \"{s}\".",
                        describe(self, i),
                        describe(self, j)
                    );
                    let parts = vec![
                        star_part,
                        part(i, Role::Alternative),
                        part(j, Role::Alternative),
                    ];
                    out.push(Finding::new(
                        FindingKind::Star1,
                        parts,
                        Some(s),
                        explanation,
                    ));
                }
            }
        }
        let all = langs
            .iter()
            .skip(1)
            .fold(langs[0].clone(), |acc, l| union(&acc, l));
        let all_plus = without_empty(&plus(&all));
        for k in 0..langs.len() {
            self.env.budget.check_deadline()?;
            let others = langs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, l)| l.clone())
                .reduce(|a, b| union(&a, &b))
                .expect("at least two options");
            let two_or_more = concat(&others, &without_empty(&plus(&others)));
            let composed = union(&two_or_more, &concat(&langs[k], &all_plus));
            let hit = intersect(&langs[k], &composed, self.env.budget)?;
            if let Some(s) = shortest_member(&without_empty(&hit)) {
                let explanation = format!(
                    "The option {} matches \"{s}\", which can also be built by repeating or combining the other options.",
                    describe(self, k)
                );
                let mut parts = vec![star_part, part(k, Role::Composite)];
                if syntactic.is_some() {
                    parts.extend(
                        (0..langs.len())
                            .filter(|&j| j != k)
                            .map(|j| part(j, Role::Alternative)),
                    );
                }
                out.push(Finding::new(
                    FindingKind::Star2,
                    parts,
                    Some(s),
                    explanation,
                ));
            }
        }
        Ok(())
    }
}

/// Alternations inside `n` that are not themselves the top-level body and
/// not under a nested unbounded quantifier (those are checked on their own).
fn collect_alternations<'a>(n: &'a Node, top: bool, out: &mut Vec<&'a Node>) {
    match &n.kind {
        NodeKind::Quantifier { max: None, .. } => {}
        NodeKind::Alternation(alts) => {
            if !top {
                out.push(n);
            }
            for a in alts {
                collect_alternations(a, false, out);
            }
        }
        _ => {
            for c in n.children() {
                collect_alternations(c, false, out);
            }
        }
    }
}

/// Most paths expanded from one repeated body.
const MAX_PATHS: usize = 32;

/// The body as a list of paths, distributing concatenation over alternation
/// and optional parts. Unbounded quantifiers stay whole. Each parse of the
/// body is a parse of exactly one path, so the paths can stand in for the
/// alternatives of the repetition.
fn paths(n: &Node) -> Option<Vec<Vec<&Node>>> {
    match &n.kind {
        NodeKind::Alternation(alts) => {
            let mut v = Vec::new();
            for a in alts {
                v.extend(inner_paths(a)?);
            }
            (v.len() <= MAX_PATHS).then_some(v)
        }
        _ => inner_paths(n),
    }
}

/// Paths below the top level, where alternations stay whole.
fn inner_paths(n: &Node) -> Option<Vec<Vec<&Node>>> {
    let out = match &n.kind {
        NodeKind::Empty | NodeKind::AnchorStart | NodeKind::AnchorEnd => vec![Vec::new()],
        NodeKind::Literal(_) | NodeKind::Quantifier { max: None, .. } | NodeKind::Group { .. } => {
            vec![vec![n]]
        }
        NodeKind::Quantifier { child, .. } => {
            let mut v = vec![Vec::new()];
            v.extend(inner_paths(child)?);
            v
        }
        NodeKind::Alternation(_) => vec![vec![n]],
        NodeKind::Concat(items) => {
            let mut acc: Vec<Vec<&Node>> = vec![Vec::new()];
            for it in items {
                let ps = inner_paths(it)?;
                if acc.len() * ps.len() > MAX_PATHS {
                    return None;
                }
                acc = acc
                    .iter()
                    .flat_map(|a| ps.iter().map(move |p| a.iter().chain(p).copied().collect()))
                    .collect();
            }
            acc
        }
    };
    (out.len() <= MAX_PATHS).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::syntax::{desugar, parse, Alphabet, ParseOptions};

    fn kinds(s: &str) -> Vec<(FindingKind, Option<String>)> {
        let ast = desugar(&parse(s, &ParseOptions::default()).unwrap(), 100).unwrap();
        let b = Budget::unlimited();
        let env = Env {
            alphabet: Alphabet::Ascii,
            budget: &b,
        };
        let d = detect_ia_antipatterns(&ast, s, &env);
        assert!(d.errors.is_empty());
        d.findings
            .into_iter()
            .map(|f| (f.kind, f.witness))
            .collect()
    }

    #[test]
    fn table_examples() {
        assert_eq!(
            kinds(r"\w*\d*"),
            vec![(FindingKind::Concat1, Some("0".into()))]
        );
        assert_eq!(
            kinds("a*(aa)*"),
            vec![(FindingKind::Concat1, Some("aa".into()))]
        );
        assert_eq!(
            kinds(r"\w*0\d*"),
            vec![(FindingKind::Concat2, Some("0".into()))]
        );
        assert_eq!(
            kinds(r"\w*:*\d*").iter().map(|k| k.0).collect::<Vec<_>>(),
            vec![FindingKind::Concat3]
        );
        assert_eq!(
            kinds(r"(\w|\d)*").iter().map(|k| k.0).collect::<Vec<_>>(),
            vec![FindingKind::Star1]
        );
        assert_eq!(
            kinds("(a|b|ab)*"),
            vec![(FindingKind::Star2, Some("ab".into()))]
        );
        assert_eq!(
            kinds(r"(0?\w*)*").iter().map(|k| k.0).collect::<Vec<_>>(),
            vec![FindingKind::Star3]
        );
        assert!(kinds("(xy*)*").is_empty());
        assert!(kinds("(b*c)*").is_empty());
        assert!(kinds("b+c").is_empty());
    }

    #[test]
    fn generalized_shapes() {
        let k = |s: &str| kinds(s).into_iter().map(|k| k.0).collect::<Vec<_>>();
        assert_eq!(k("(b?)*"), vec![FindingKind::Star3]);
        assert_eq!(k("(aa?)+"), vec![FindingKind::Star2]);
        assert_eq!(k("((a|a)b)*"), vec![FindingKind::Star1]);
        assert_eq!(k("(a{2,}){1,2}"), vec![FindingKind::Concat2]);
        // products of alternations stay out of reach
        assert!(k("((a|ab)(c|bc))*").is_empty());
    }
}
