//! Candidate rewrites per strategy and anti-pattern kind. Rewrites are text
//! splices on the original pattern at the spans the finding names.

use super::{Candidate, FixOptions, SemanticNote, Strategy};
use crate::analysis::prepare;
use crate::antipatterns::{Finding, FindingKind, Role};
use crate::syntax::{
    escape_char, quantifier_op, render_class, CharSet, MatchMode, Node, NodeKind, ParseOptions,
    Span,
};

pub(crate) struct Ctx<'a> {
    pub src: &'a str,
    pub ast: &'a Node,
    pub parse: &'a ParseOptions,
    pub fix: &'a FixOptions,
}

type Candidates = Result<Vec<Candidate>, String>;

pub(crate) fn candidates(ctx: &Ctx, strategy: Strategy, f: &Finding) -> Candidates {
    match strategy {
        Strategy::F1 => f1(ctx, f),
        Strategy::F2 => f2(ctx, f),
        Strategy::F3 => f3(ctx, f),
        Strategy::F4 => f4(ctx, f),
        Strategy::F5 => f5(ctx, f),
    }
}

fn cand(regex: String, note: SemanticNote, explanation: String) -> Candidate {
    Candidate {
        regex: Some(regex),
        note,
        explanation,
    }
}

// ---- tree and text helpers ----

/// Outermost node of the parsed tree with exactly this span.
fn find(n: &Node, span: Span) -> Option<&Node> {
    if n.span == span {
        return Some(n);
    }
    n.children()
        .into_iter()
        .filter(|c| c.span.contains(&span))
        .find_map(|c| find(c, span))
}

fn strip(n: &Node) -> &Node {
    match &n.kind {
        NodeKind::Group { child, .. } => strip(child),
        _ => n,
    }
}

/// A quantified single-class node: its bounds, class and class span.
struct ClassQuant<'a> {
    node: &'a Node,
    set: CharSet,
    class_span: Span,
    min: u32,
    max: Option<u32>,
    lazy: bool,
    op: Span,
}

fn class_quant(n: &Node) -> Option<ClassQuant<'_>> {
    let n = strip(n);
    let NodeKind::Quantifier {
        child,
        min,
        max,
        lazy,
        op,
    } = &n.kind
    else {
        return None;
    };
    let lit = strip(child);
    let NodeKind::Literal(set) = &lit.kind else {
        return None;
    };
    Some(ClassQuant {
        node: n,
        set: set.clone(),
        class_span: lit.span,
        min: *min,
        max: *max,
        lazy: *lazy,
        op: *op,
    })
}

/// Union of every character the subtree can read.
fn chars(n: &Node) -> CharSet {
    let mut acc = CharSet::empty();
    n.walk(&mut |x| {
        if let NodeKind::Literal(s) = &x.kind {
            acc = acc.union(s);
        }
    });
    acc
}

/// Characters read by `n` outside the subtree `except`.
fn chars_except(n: &Node, except: Span) -> CharSet {
    if n.span == except {
        return CharSet::empty();
    }
    match &n.kind {
        NodeKind::Literal(s) => s.clone(),
        _ => n.children().into_iter().fold(CharSet::empty(), |acc, c| {
            acc.union(&chars_except(c, except))
        }),
    }
}

/// True when the subtree consists of classes under concatenation,
/// alternation, grouping and quantifiers only.
fn class_only(n: &Node) -> bool {
    match &n.kind {
        NodeKind::Literal(_) => true,
        NodeKind::Empty | NodeKind::AnchorStart | NodeKind::AnchorEnd => false,
        _ => n.children().into_iter().all(class_only),
    }
}

fn alternatives(n: &Node) -> Option<&[Node]> {
    match &strip(n).kind {
        NodeKind::Alternation(alts) => Some(alts),
        NodeKind::Quantifier { child, .. } => match &strip(child).kind {
            NodeKind::Alternation(alts) => Some(alts),
            _ => None,
        },
        _ => None,
    }
}

/// Applies non-overlapping edits. Expanded copies of a counted repetition
/// share a span, so the same edit can arrive twice; later overlapping edits
/// are dropped.
fn splice(src: &str, mut edits: Vec<(Span, String)>) -> String {
    edits.sort_by_key(|(s, _)| (s.start, s.end));
    edits.dedup();
    let mut out = String::with_capacity(src.len() + 16);
    let mut at = 0;
    for (span, text) in edits {
        if span.start < at {
            continue;
        }
        out.push_str(&src[at..span.start]);
        out.push_str(&text);
        at = span.end;
    }
    out.push_str(&src[at..]);
    out
}

fn text(src: &str, span: Span) -> &str {
    &src[span.start..span.end]
}

fn class_text(ctx: &Ctx, set: &CharSet) -> String {
    render_class(set, ctx.parse.alphabet, ctx.parse.dotall)
}

fn quantifier_of(n: &Node) -> Option<(u32, Option<u32>, bool, Span)> {
    match &strip(n).kind {
        NodeKind::Quantifier {
            min, max, lazy, op, ..
        } => Some((*min, *max, *lazy, *op)),
        _ => None,
    }
}

fn node_at<'a>(ctx: &'a Ctx, span: Option<Span>) -> Result<&'a Node, String> {
    span.and_then(|s| find(ctx.ast, s))
        .ok_or_else(|| "the finding's parts could not be located in the pattern".to_string())
}

// ---- F1 ----

const DELIMITERS: [char; 12] = [':', ';', ',', '#', '@', '!', '%', '&', '~', '=', '-', '/'];

/// First preferred printable character outside `forbidden`.
fn delimiter(ctx: &Ctx, forbidden: &CharSet) -> Option<char> {
    let fresh = |c: char| !forbidden.contains_char(c) && ctx.parse.alphabet.contains(c);
    DELIMITERS
        .into_iter()
        .find(|&c| fresh(c))
        .or_else(|| (0x21u8..0x7f).map(char::from).find(|&c| fresh(c)))
}

fn f1(ctx: &Ctx, f: &Finding) -> Candidates {
    let note = SemanticNote::Narrowing;
    match f.kind {
        FindingKind::Concat1 | FindingKind::Concat2 | FindingKind::Concat3 => {
            let p = node_at(ctx, f.span_of(Role::P))?;
            let q = node_at(ctx, f.span_of(Role::Q))?;
            let gap = f.span_of(Role::S);
            let mut forbidden = chars(p).union(&chars(q));
            if let Some(g) = gap {
                forbidden = forbidden.union(&chars_in(ctx.ast, g));
            }
            let d =
                delimiter(ctx, &forbidden).ok_or("no character is free to act as a delimiter")?;
            let dt = escape_char(d);
            let why = |at: &str| {
                format!("Insert the delimiter `{dt}` {at} so the two quantified parts can no longer share a string.")
            };
            let mut out = Vec::new();
            match f.kind {
                FindingKind::Concat1 => out.push(cand(
                    splice(ctx.src, vec![(Span::empty_at(p.span.end), dt.clone())]),
                    note,
                    why("between them"),
                )),
                FindingKind::Concat2 => {
                    let s = gap.ok_or("missing middle part")?;
                    out.push(cand(
                        splice(ctx.src, vec![(Span::empty_at(s.start), dt.clone())]),
                        note,
                        why("before the middle part"),
                    ));
                }
                _ => {
                    if let Some(g) = gap.and_then(|g| find(ctx.ast, g)).and_then(class_quant) {
                        if g.min == 0 && !g.set.overlaps(&chars(p).union(&chars(q))) {
                            let op = match g.max {
                                Some(1) => String::new(),
                                max => quantifier_op(1, max) + if g.lazy { "?" } else { "" },
                            };
                            let text = text(ctx.src, g.class_span);
                            out.push(cand(
                                splice(ctx.src, vec![(g.op, op)]),
                                note,
                                format!("Make the skippable middle part `{text}` mandatory so it always separates the two quantified parts."),
                            ));
                        }
                    }
                    out.push(cand(
                        splice(ctx.src, vec![(Span::empty_at(p.span.end), dt.clone())]),
                        note,
                        why("right after the first quantified part"),
                    ));
                }
            }
            Ok(out)
        }
        FindingKind::Star1 | FindingKind::Star2 => {
            let star = node_at(ctx, f.span_of(Role::Star))?;
            let d =
                delimiter(ctx, &chars(star)).ok_or("no character is free to act as a delimiter")?;
            let dt = escape_char(d);
            let alts = alternatives(star).ok_or("the repeated body is not an alternation")?;
            Ok(alts
                .iter()
                .map(|a| {
                    cand(
                        splice(ctx.src, vec![(Span::empty_at(a.span.end), dt.clone())]),
                        note,
                        format!("Append the delimiter `{dt}` to the alternative `{}` so iterations cannot be regrouped.", text(ctx.src, a.span)),
                    )
                })
                .collect())
        }
        FindingKind::Star3 => {
            let body = node_at(ctx, f.span_of(Role::Body))?;
            let d =
                delimiter(ctx, &chars(body)).ok_or("no character is free to act as a delimiter")?;
            let dt = escape_char(d);
            let why = format!("Start every repetition with the delimiter `{dt}` so repetitions cannot be regrouped.");
            let edit = match &body.kind {
                NodeKind::Group { child, .. } if !matches!(child.kind, NodeKind::Empty) => {
                    (Span::empty_at(child.span.start), dt.clone())
                }
                _ => (body.span, format!("(?:{dt}{})", text(ctx.src, body.span))),
            };
            let mut out = vec![cand(splice(ctx.src, vec![edit]), note, why)];
            if let Some(p) = f.span_of(Role::P) {
                out.push(cand(
                    splice(ctx.src, vec![(Span::empty_at(p.start), dt.clone())]),
                    note,
                    format!(
                        "Insert the delimiter `{dt}` before the nested quantifier `{}`.",
                        text(ctx.src, p)
                    ),
                ));
            }
            Ok(out)
        }
        _ => Err("not an IA anti-pattern".into()),
    }
}

fn chars_in(ast: &Node, span: Span) -> CharSet {
    let mut acc = CharSet::empty();
    ast.walk(&mut |n| {
        if let NodeKind::Literal(s) = &n.kind {
            if span.contains(&n.span) {
                acc = acc.union(s);
            }
        }
    });
    acc
}

// ---- F2 ----

fn f2(ctx: &Ctx, f: &Finding) -> Candidates {
    let note = SemanticNote::Narrowing;
    let reduce = |side: &ClassQuant, other: &CharSet, who: &str| -> Option<Candidate> {
        let rest = side.set.difference(other);
        if rest.is_empty() || rest == side.set {
            return None;
        }
        let new = class_text(ctx, &rest);
        Some(cand(
            splice(ctx.src, vec![(side.class_span, new.clone())]),
            note,
            format!(
                "Narrow {who} `{}` to `{new}` so it no longer matches the shared characters.",
                text(ctx.src, side.class_span)
            ),
        ))
    };
    match f.kind {
        FindingKind::Concat1 | FindingKind::Concat2 | FindingKind::Concat3 => {
            let p = node_at(ctx, f.span_of(Role::P))?;
            let q = node_at(ctx, f.span_of(Role::Q))?;
            let mut out = Vec::new();
            if let Some(cp) = class_quant(p) {
                out.extend(reduce(&cp, &chars(q), "the first class"));
            }
            if let Some(cq) = class_quant(q) {
                out.extend(reduce(&cq, &chars(p), "the second class"));
            }
            if out.is_empty() {
                return Err(
                    "neither quantified part is a character class that can be narrowed".into(),
                );
            }
            Ok(out)
        }
        FindingKind::Star1 => {
            let alts: Vec<&Node> = f
                .spans_of(Role::Alternative)
                .into_iter()
                .filter_map(|s| find(ctx.ast, s))
                .collect();
            let mut out = Vec::new();
            for (i, a) in alts.iter().enumerate() {
                let NodeKind::Literal(set) = &strip(a).kind else {
                    continue;
                };
                let side = ClassQuant {
                    node: a,
                    set: set.clone(),
                    class_span: strip(a).span,
                    min: 1,
                    max: Some(1),
                    lazy: false,
                    op: a.span,
                };
                let other = alts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(CharSet::empty(), |acc, (_, b)| acc.union(&chars(b)));
                out.extend(reduce(&side, &other, "the alternative"));
            }
            if out.is_empty() {
                return Err("the overlapping alternatives are not character classes".into());
            }
            Ok(out)
        }
        FindingKind::Star2 => {
            let star = node_at(ctx, f.span_of(Role::Star))?;
            let alts = alternatives(star).ok_or("the repeated body is not an alternation")?;
            let composite = f.span_of(Role::Composite);
            let out: Vec<Candidate> = alts
                .iter()
                .enumerate()
                .filter(|(_, a)| Some(a.span) != composite)
                .map(|(i, a)| {
                    let kept: Vec<&Node> = alts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b).collect();
                    cand(
                        rebuild_alternation(ctx.src, alts, &kept),
                        note,
                        format!("Remove the alternative `{}`, which the composite option is built from.", text(ctx.src, a.span)),
                    )
                })
                .collect();
            if out.is_empty() {
                return Err("no alternative can be removed".into());
            }
            Ok(out)
        }
        FindingKind::Star3 => {
            let body = node_at(ctx, f.span_of(Role::Body))?;
            let mut spans = vec![f.span_of(Role::P), f.span_of(Role::Q)];
            spans.dedup();
            let mut out = Vec::new();
            for inner in spans
                .into_iter()
                .flatten()
                .filter_map(|s| find(ctx.ast, s))
                .filter_map(class_quant)
            {
                let rest = inner.set.difference(&chars_except(body, inner.node.span));
                if rest.is_empty() {
                    continue;
                }
                let new = class_text(ctx, &rest);
                out.push(cand(
                    splice(ctx.src, vec![(inner.node.span, new.clone())]),
                    note,
                    format!(
                        "Replace the nested quantifier `{}` with the single class `{new}`.",
                        text(ctx.src, inner.node.span)
                    ),
                ));
            }
            if out.is_empty() {
                return Err(
                    "the nested quantifier is not a character class that can be reduced".into(),
                );
            }
            Ok(out)
        }
        _ => Err("not an IA anti-pattern".into()),
    }
}

/// Rewrites the alternation holding `all` so that only `kept` remain.
fn rebuild_alternation(src: &str, all: &[Node], kept: &[&Node]) -> String {
    let region = all[0].span.cover(&all[all.len() - 1].span);
    let joined: Vec<&str> = kept.iter().map(|n| text(src, n.span)).collect();
    splice(src, vec![(region, joined.join("|"))])
}

// ---- F3 ----

fn f3(ctx: &Ctx, f: &Finding) -> Candidates {
    let note = SemanticNote::Preserving;
    match f.kind {
        FindingKind::Concat1 => {
            let p = node_at(ctx, f.span_of(Role::P))?;
            let q = node_at(ctx, f.span_of(Role::Q))?;
            let (Some(cp), Some(cq)) = (class_quant(p), class_quant(q)) else {
                return Err("both quantified parts must be character classes".into());
            };
            let op = if cp.min == 0 && cq.min == 0 { "*" } else { "+" };
            let new = class_text(ctx, &cp.set.union(&cq.set)) + op;
            Ok(vec![cand(
                splice(ctx.src, vec![(p.span.cover(&q.span), new.clone())]),
                note,
                format!("Merge both quantified classes into `{new}`."),
            )])
        }
        FindingKind::Concat2 | FindingKind::Concat3 => {
            Err("merging is not defined when a middle part separates the quantifiers".into())
        }
        FindingKind::Star1 | FindingKind::Star3 => {
            let star = node_at(ctx, f.span_of(Role::Star))?;
            let (_, _, _, op) =
                quantifier_of(star).ok_or("the repeated part is not a quantifier")?;
            let NodeKind::Quantifier { child, .. } = &strip(star).kind else {
                unreachable!()
            };
            if !class_only(child) {
                return Err("the repeated body is not built from character classes only".into());
            }
            let new = class_text(ctx, &chars(child)) + text(ctx.src, op);
            Ok(vec![cand(
                splice(ctx.src, vec![(star.span, new.clone())]),
                note,
                format!("Replace the repetition with the superset `{new}`."),
            )])
        }
        FindingKind::Star2 => {
            let star = node_at(ctx, f.span_of(Role::Star))?;
            let alts = alternatives(star).ok_or("the repeated body is not an alternation")?;
            let composite = f
                .span_of(Role::Composite)
                .ok_or("missing composite alternative")?;
            let kept: Vec<&Node> = alts.iter().filter(|a| a.span != composite).collect();
            Ok(vec![cand(
                rebuild_alternation(ctx.src, alts, &kept),
                note,
                format!("Delete the composite alternative `{}`; the remaining options already produce it.", text(ctx.src, composite)),
            )])
        }
        _ => Err("not an IA anti-pattern".into()),
    }
}

// ---- F4 ----

fn bounded_op(min: u32, max: Option<u32>, lazy: bool, k: u32) -> Option<String> {
    if max.is_some() {
        return None;
    }
    let op = if min == 0 {
        format!("{{,{k}}}")
    } else {
        format!("{{{min},{}}}", k.max(min))
    };
    Some(op + if lazy { "?" } else { "" })
}

/// Bounds the quantifiers at `targets`, lowering the bound until the result
/// fits the expansion cap.
fn bound_all(ctx: &Ctx, targets: &[&Node]) -> Option<String> {
    for k in (1..=ctx.fix.bound).rev() {
        let edits: Vec<(Span, String)> = targets
            .iter()
            .filter_map(|n| {
                let (min, max, lazy, op) = quantifier_of(n)?;
                Some((op, bounded_op(min, max, lazy, k)?))
            })
            .collect();
        if edits.is_empty() {
            return None;
        }
        let out = splice(ctx.src, edits);
        if prepare(&out, MatchMode::Full, ctx.parse).is_ok() {
            return Some(out);
        }
    }
    None
}

fn unbounded_in<'a>(n: &'a Node, out: &mut Vec<&'a Node>) {
    n.walk(&mut |x| {
        if x.is_unbounded() {
            out.push(x);
        }
    });
}

fn f4(ctx: &Ctx, f: &Finding) -> Candidates {
    let note = SemanticNote::Narrowing;
    let mut targets: Vec<&Node> = Vec::new();
    match f.kind {
        FindingKind::Concat1 | FindingKind::Concat2 | FindingKind::Concat3 => {
            targets.push(node_at(ctx, f.span_of(Role::P))?);
            targets.push(node_at(ctx, f.span_of(Role::Q))?);
        }
        FindingKind::Star1 | FindingKind::Star2 => {
            targets.push(node_at(ctx, f.span_of(Role::Star))?)
        }
        FindingKind::Star3 => unbounded_in(node_at(ctx, f.span_of(Role::Star))?, &mut targets),
        _ => return Err("not an IA anti-pattern".into()),
    }
    let k = ctx.fix.bound;
    let mut out = Vec::new();
    if let Some(r) = bound_all(ctx, &targets) {
        out.push(cand(
            r,
            note,
            format!("Bound the repetitions involved to at most {k} iterations."),
        ));
    }
    let mut all = Vec::new();
    unbounded_in(ctx.ast, &mut all);
    if let Some(r) = bound_all(ctx, &all) {
        out.push(cand(
            r,
            note,
            "Bound every unbounded repetition in the pattern.".into(),
        ));
    }
    if out.is_empty() {
        return Err("the repetitions cannot be bounded within the expansion cap".into());
    }
    Ok(out)
}

/// F4 over the whole pattern: every unbounded repetition gets an upper bound.
pub(crate) fn bound_everything(ctx: &Ctx) -> Option<String> {
    let mut all = Vec::new();
    unbounded_in(ctx.ast, &mut all);
    bound_all(ctx, &all)
}

// ---- F5 ----

fn f5(ctx: &Ctx, f: &Finding) -> Candidates {
    let advice = |explanation: String| Candidate {
        regex: None,
        note: SemanticNote::AdvisoryOnly,
        explanation,
    };
    let part = |role| {
        f.span_of(role)
            .map(|s| text(ctx.src, s).to_string())
            .unwrap_or_default()
    };
    match f.kind {
        FindingKind::Concat1 | FindingKind::Concat2 | FindingKind::Concat3 => {
            let q = f.span_of(Role::Q).ok_or("missing second quantified part")?;
            let rest = &ctx.src[f.span_of(Role::S).map_or(q.start, |s| s.start)..];
            Ok(vec![advice(format!(
                "Remove `{}` and add code that consumes the input it was meant to match, stopping at characters `{}` accepts; then match the remainder with `{rest}`.",
                part(Role::P),
                part(Role::Q)
            ))])
        }
        FindingKind::Star1 | FindingKind::Star2 => {
            let star = node_at(ctx, f.span_of(Role::Star))?;
            let alts = alternatives(star).ok_or("the repeated body is not an alternation")?;
            let (_, _, _, op) = quantifier_of(star).ok_or("the repeated part is not a quantifier")?;
            let op = if f.kind == FindingKind::Star1 { text(ctx.src, op).to_string() } else { "+".into() };
            let pieces: Vec<String> = alts
                .iter()
                .map(|a| {
                    let t = text(ctx.src, a.span);
                    let atomic = matches!(a.kind, NodeKind::Literal(_) | NodeKind::Group { .. });
                    if atomic { format!("{t}{op}") } else { format!("({t}){op}") }
                })
                .collect();
            let mut joined = pieces.join("|");
            if star.span != Span::new(0, ctx.src.len()) {
                joined = format!("(?:{joined})");
            }
            Ok(vec![
                cand(
                    splice(ctx.src, vec![(star.span, joined.clone())]),
                    SemanticNote::Restructuring,
                    format!("Repeat each alternative on its own instead of mixing them: `{joined}`."),
                ),
                advice(format!("Restructure `{}` so that no alternative can match what the others match, and handle mixed input in code.", part(Role::Star))),
            ])
        }
        FindingKind::Star3 => Ok(vec![advice(format!(
            "Rewrite `{}` so its body no longer contains the nested quantifier `{}`, for example by splitting the input in code and matching each piece separately.",
            part(Role::Star),
            part(Role::P)
        ))]),
        _ => Err("not an IA anti-pattern".into()),
    }
}
