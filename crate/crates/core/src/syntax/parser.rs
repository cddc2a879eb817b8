//! Recursive-descent parser for the Kleene-regular subset of PCRE syntax.

use serde::{Deserialize, Serialize};

use super::ast::{Node, NodeKind, Span};
use super::charset::{self, Alphabet, CharSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseOptions {
    pub alphabet: Alphabet,
    /// Largest bound accepted in `{m,n}` before the regex is skipped.
    pub rep_cap: u32,
    /// `.` also matches `\n`.
    pub dotall: bool,
}

impl Default for ParseOptions {
    fn default() -> ParseOptions {
        ParseOptions {
            alphabet: Alphabet::Ascii,
            rep_cap: 100,
            dotall: false,
        }
    }
}

/// Parses `source` into a span-annotated tree.
pub fn parse(source: &str, options: &ParseOptions) -> Result<Node> {
    let mut p = Parser {
        src: source,
        pos: 0,
        opts: *options,
        depth: 0,
    };
    let node = p.parse_alternation()?;
    if p.pos < source.len() {
        // only a stray ')' can stop the top-level alternation early
        return Err(Error::syntax(Span::new(p.pos, p.pos + 1), "unmatched ')'"));
    }
    check_anchors(&node)?;
    Ok(node)
}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
    opts: ParseOptions,
    depth: usize,
}

/// Group nesting beyond this is rejected to keep recursion bounded.
const MAX_NESTING: usize = 250;

impl<'s> Parser<'s> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(offset)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn parse_alternation(&mut self) -> Result<Node> {
        let start = self.pos;
        let mut items = vec![self.parse_concat()?];
        while self.eat('|') {
            items.push(self.parse_concat()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().unwrap());
        }
        Ok(Node::new(
            NodeKind::Alternation(items),
            Span::new(start, self.pos),
        ))
    }

    fn parse_concat(&mut self) -> Result<Node> {
        let start = self.pos;
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let atom = self.parse_atom()?;
            let atom = self.parse_quantifiers(atom)?;
            items.push(atom);
        }
        Ok(match items.len() {
            0 => Node::empty(Span::empty_at(start)),
            1 => items.pop().unwrap(),
            _ => Node::new(NodeKind::Concat(items), Span::new(start, self.pos)),
        })
    }

    /// Tries to read `{m}`, `{m,}`, `{m,n}` or `{,n}` at the cursor.
    fn try_counted(&mut self) -> Result<Option<(u32, Option<u32>)>> {
        let rest = &self.src[self.pos..];
        let Some(close) = rest.find('}') else {
            return Ok(None);
        };
        let body = &rest[1..close];
        let valid = !body.is_empty()
            && body.chars().all(|c| c.is_ascii_digit() || c == ',')
            && body.matches(',').count() <= 1
            && body != ",";
        if !valid {
            return Ok(None);
        }
        let span = Span::new(self.pos, self.pos + close + 1);
        let num = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| Error::syntax(span, "repetition count too large"))
        };
        let (min, max) = match body.split_once(',') {
            None => {
                let n = num(body)?;
                (n, Some(n))
            }
            Some((lo, hi)) => {
                let lo = if lo.is_empty() { 0 } else { num(lo)? };
                let hi = if hi.is_empty() { None } else { Some(num(hi)?) };
                (lo, hi)
            }
        };
        if let Some(hi) = max {
            if min > hi {
                return Err(Error::syntax(span, "repetition range out of order"));
            }
        }
        self.pos += close + 1;
        Ok(Some((min, max)))
    }

    fn parse_quantifiers(&mut self, atom: Node) -> Result<Node> {
        let op_start = self.pos;
        let (min, max) = match self.peek() {
            Some('*') => {
                self.bump();
                (0, None)
            }
            Some('+') => {
                self.bump();
                (1, None)
            }
            Some('?') => {
                self.bump();
                (0, Some(1))
            }
            Some('{') => match self.try_counted()? {
                Some(q) => q,
                None => return Ok(atom),
            },
            _ => return Ok(atom),
        };
        if matches!(atom.kind, NodeKind::AnchorStart | NodeKind::AnchorEnd) {
            return Err(Error::syntax(
                Span::new(op_start, self.pos),
                "quantifier applied to an anchor",
            ));
        }
        let lazy = self.eat('?');
        if self.peek() == Some('+') {
            let s = Span::new(self.pos, self.pos + 1);
            return Err(Error::unsupported(s, "possessive quantifier"));
        }
        let op = Span::new(op_start, self.pos);
        let span = Span::new(atom.span.start, self.pos);
        match self.peek() {
            Some('*') | Some('+') | Some('?') => {
                return Err(Error::syntax(
                    Span::new(self.pos, self.pos + 1),
                    "nothing to repeat",
                ));
            }
            Some('{') => {
                let save = self.pos;
                if self.try_counted()?.is_some() {
                    return Err(Error::syntax(
                        Span::new(save, self.pos),
                        "nothing to repeat",
                    ));
                }
            }
            _ => {}
        }
        Ok(Node::new(
            NodeKind::Quantifier {
                child: Box::new(atom),
                min,
                max,
                lazy,
                op,
            },
            span,
        ))
    }

    fn literal_char(&self, c: char, span: Span) -> Result<Node> {
        if !self.opts.alphabet.contains(c) {
            return Err(Error::unsupported(
                span,
                format!("character {c:?} outside the alphabet"),
            ));
        }
        Ok(Node::literal(CharSet::single(c), span))
    }

    fn parse_atom(&mut self) -> Result<Node> {
        let start = self.pos;
        let c = self.bump().expect("caller checked for input");
        let span = Span::new(start, self.pos);
        match c {
            '*' | '+' | '?' => Err(Error::syntax(span, "nothing to repeat")),
            '{' => {
                self.pos = start;
                if self.try_counted()?.is_some() {
                    return Err(Error::syntax(
                        Span::new(start, self.pos),
                        "nothing to repeat",
                    ));
                }
                self.pos = start + 1;
                self.literal_char('{', span)
            }
            '^' => Ok(Node::new(NodeKind::AnchorStart, span)),
            '$' => Ok(Node::new(NodeKind::AnchorEnd, span)),
            '.' => Ok(Node::literal(
                charset::dot(self.opts.alphabet, self.opts.dotall),
                span,
            )),
            '(' => self.parse_group(start),
            '[' => self.parse_class(start),
            '\\' => self.parse_escape(start, false).and_then(|item| match item {
                Escape::Set(set) => Ok(Node::literal(set, Span::new(start, self.pos))),
                Escape::Char(ch) => self.literal_char(ch, Span::new(start, self.pos)),
            }),
            c => self.literal_char(c, span),
        }
    }

    fn parse_group(&mut self, start: usize) -> Result<Node> {
        let mut capturing = true;
        if self.peek() == Some('?') {
            let unsupported = |feature: &str, len: usize| {
                Err(Error::unsupported(
                    Span::new(start, start + 1 + len),
                    feature,
                ))
            };
            if self.rest_starts_with("?:") {
                self.pos += 2;
                capturing = false;
            } else if self.rest_starts_with("?=") || self.rest_starts_with("?!") {
                return unsupported("lookahead", 2);
            } else if self.rest_starts_with("?<=") || self.rest_starts_with("?<!") {
                return unsupported("lookbehind", 3);
            } else if self.rest_starts_with("?>") {
                return unsupported("atomic group", 2);
            } else if self.rest_starts_with("?P=")
                || self.rest_starts_with("?P>")
                || self.rest_starts_with("?&")
            {
                return unsupported("backreference or subroutine call", 3);
            } else if self.rest_starts_with("?<")
                || self.rest_starts_with("?P<")
                || self.rest_starts_with("?'")
            {
                // named capture: accepted; a later \k backreference is rejected on its own
                let close = if self.rest_starts_with("?'") {
                    '\''
                } else {
                    '>'
                };
                let Some(end) = self.src[self.pos..].find(close).filter(|&e| e > 1) else {
                    return Err(Error::syntax(
                        Span::new(start, self.src.len()),
                        "unterminated group name",
                    ));
                };
                let name_start = self.pos + if self.rest_starts_with("?P<") { 3 } else { 2 };
                let name = &self.src[name_start..self.pos + end];
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::syntax(
                        Span::new(start, self.pos + end + 1),
                        "invalid group name",
                    ));
                }
                self.pos += end + 1;
            } else if self.rest_starts_with("?#") {
                return unsupported("comment group", 2);
            } else if self.rest_starts_with("?|") {
                return unsupported("branch reset group", 2);
            } else if self.rest_starts_with("?R")
                || self.peek_at(1).is_some_and(|c| c.is_ascii_digit())
            {
                return unsupported("recursion", 2);
            } else {
                return unsupported("inline flags or unknown group syntax", 2);
            }
        }
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(Error::budget(format!(
                "group nesting deeper than {MAX_NESTING}"
            )));
        }
        let child = self.parse_alternation()?;
        self.depth -= 1;
        if !self.eat(')') {
            return Err(Error::syntax(Span::new(start, self.pos), "missing ')'"));
        }
        Ok(Node::new(
            NodeKind::Group {
                child: Box::new(child),
                capturing,
            },
            Span::new(start, self.pos),
        ))
    }

    fn parse_hex(&mut self, start: usize, digits: usize) -> Result<char> {
        let text = self.src.get(self.pos..self.pos + digits).unwrap_or("");
        let value = (text.len() == digits && text.chars().all(|c| c.is_ascii_hexdigit()))
            .then(|| u32::from_str_radix(text, 16).ok())
            .flatten()
            .and_then(char::from_u32);
        match value {
            Some(c) => {
                self.pos += digits;
                Ok(c)
            }
            None => Err(Error::syntax(
                Span::new(start, self.pos),
                "invalid hexadecimal escape",
            )),
        }
    }

    /// Parses the escape after a consumed backslash.
    fn parse_escape(&mut self, start: usize, in_class: bool) -> Result<Escape> {
        let Some(c) = self.bump() else {
            return Err(Error::syntax(
                Span::new(start, self.pos),
                "trailing backslash",
            ));
        };
        let span = Span::new(start, self.pos);
        let alphabet = self.opts.alphabet;
        let item = match c {
            'w' => Escape::Set(charset::word()),
            'd' => Escape::Set(charset::digit()),
            's' => Escape::Set(charset::space()),
            'W' => Escape::Set(charset::word().complement(alphabet)),
            'D' => Escape::Set(charset::digit().complement(alphabet)),
            'S' => Escape::Set(charset::space().complement(alphabet)),
            'n' => Escape::Char('\n'),
            't' => Escape::Char('\t'),
            'r' => Escape::Char('\r'),
            'f' => Escape::Char('\x0c'),
            'v' => Escape::Char('\x0b'),
            'a' => Escape::Char('\x07'),
            'e' => Escape::Char('\x1b'),
            '0' => Escape::Char('\0'),
            'b' if in_class => Escape::Char('\x08'),
            'x' => {
                if self.eat('{') {
                    let end = self.src[self.pos..].find('}').ok_or_else(|| {
                        Error::syntax(Span::new(start, self.pos), "unterminated \\x{...}")
                    })?;
                    let digits = end;
                    if digits == 0 || digits > 6 {
                        return Err(Error::syntax(
                            Span::new(start, self.pos + end + 1),
                            "invalid hexadecimal escape",
                        ));
                    }
                    let ch = self.parse_hex(start, digits)?;
                    self.eat('}');
                    Escape::Char(ch)
                } else {
                    Escape::Char(self.parse_hex(start, 2)?)
                }
            }
            'u' => Escape::Char(self.parse_hex(start, 4)?),
            'b' | 'B' | 'A' | 'z' | 'Z' | 'G' => {
                return Err(Error::unsupported(
                    span,
                    "word boundary or assertion escape",
                ));
            }
            '1'..='9' | 'k' | 'g' => return Err(Error::unsupported(span, "backreference")),
            'p' | 'P' => return Err(Error::unsupported(span, "Unicode property class")),
            'Q' | 'E' => return Err(Error::unsupported(span, "quoted sequence")),
            'c' | 'C' | 'X' | 'R' | 'h' | 'H' | 'V' | 'N' | 'K' => {
                return Err(Error::unsupported(span, format!("escape \\{c}")));
            }
            c if c.is_ascii_alphanumeric() => {
                return Err(Error::syntax(span, format!("unknown escape \\{c}")));
            }
            c => Escape::Char(c),
        };
        if let Escape::Char(ch) = item {
            if !alphabet.contains(ch) {
                return Err(Error::unsupported(
                    span,
                    format!("character {ch:?} outside the alphabet"),
                ));
            }
        }
        Ok(item)
    }

    fn parse_class(&mut self, start: usize) -> Result<Node> {
        let negated = self.eat('^');
        let mut set = CharSet::empty();
        let mut first = true;
        loop {
            let item_start = self.pos;
            let Some(c) = self.bump() else {
                return Err(Error::syntax(Span::new(start, self.pos), "missing ']'"));
            };
            if c == ']' && !first {
                break;
            }
            first = false;
            let lo = match c {
                '[' if self.peek() == Some(':')
                    || self.peek() == Some('=')
                    || self.peek() == Some('.') =>
                {
                    return Err(Error::unsupported(
                        Span::new(item_start, self.pos),
                        "POSIX character class",
                    ));
                }
                '\\' => self.parse_escape(item_start, true)?,
                c => Escape::Char(c),
            };
            let lo = match lo {
                Escape::Set(s) => {
                    if self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c != ']') {
                        return Err(Error::syntax(
                            Span::new(item_start, self.pos + 1),
                            "invalid range endpoint",
                        ));
                    }
                    set = set.union(&s);
                    continue;
                }
                Escape::Char(c) => c,
            };
            if !self.opts.alphabet.contains(lo) {
                return Err(Error::unsupported(
                    Span::new(item_start, self.pos),
                    format!("character {lo:?} outside the alphabet"),
                ));
            }
            if self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c != ']') {
                self.bump();
                let hi_start = self.pos;
                let hi = match self.bump() {
                    Some('\\') => match self.parse_escape(hi_start, true)? {
                        Escape::Char(c) => c,
                        Escape::Set(_) => {
                            return Err(Error::syntax(
                                Span::new(item_start, self.pos),
                                "invalid range endpoint",
                            ));
                        }
                    },
                    Some('[') if self.peek() == Some(':') => {
                        return Err(Error::unsupported(
                            Span::new(hi_start, self.pos),
                            "POSIX character class",
                        ));
                    }
                    Some(c) => c,
                    None => return Err(Error::syntax(Span::new(start, self.pos), "missing ']'")),
                };
                if hi < lo {
                    return Err(Error::syntax(
                        Span::new(item_start, self.pos),
                        "character range out of order",
                    ));
                }
                if !self.opts.alphabet.contains(hi) {
                    return Err(Error::unsupported(
                        Span::new(item_start, self.pos),
                        format!("character {hi:?} outside the alphabet"),
                    ));
                }
                set = set.union(&CharSet::range(lo as u32, hi as u32));
            } else {
                set = set.union(&CharSet::single(lo));
            }
        }
        let span = Span::new(start, self.pos);
        let set = if negated {
            set.complement(self.opts.alphabet)
        } else {
            set
        };
        if set.is_empty() {
            return Err(Error::unsupported(span, "class matching no character"));
        }
        Ok(Node::literal(set, span))
    }
}

enum Escape {
    Char(char),
    Set(CharSet),
}

/// Anchors are accepted only at the extremities of the whole pattern.
fn check_anchors(root: &Node) -> Result<()> {
    let (allowed_start, allowed_end): (Option<&Node>, Option<&Node>) = match &root.kind {
        NodeKind::Concat(items) => (items.first(), items.last()),
        NodeKind::AnchorStart | NodeKind::AnchorEnd => (Some(root), Some(root)),
        _ => (None, None),
    };
    let mut bad = None;
    root.walk(&mut |n| {
        if bad.is_some() {
            return;
        }
        match n.kind {
            NodeKind::AnchorStart if !allowed_start.is_some_and(|a| std::ptr::eq(a, n)) => {
                bad = Some(n.span)
            }
            NodeKind::AnchorEnd if !allowed_end.is_some_and(|a| std::ptr::eq(a, n)) => {
                bad = Some(n.span)
            }
            _ => {}
        }
    });
    match bad {
        Some(span) => Err(Error::unsupported(span, "mid-pattern anchor")),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Result<Node> {
        parse(s, &ParseOptions::default())
    }

    #[test]
    fn word_then_digit_stars() {
        let n = p(r"\w*\d*").unwrap();
        let NodeKind::Concat(items) = &n.kind else {
            panic!("{n:?}")
        };
        assert_eq!(items.len(), 2);
        match (&items[0].kind, &items[1].kind) {
            (
                NodeKind::Quantifier {
                    child: a,
                    min: 0,
                    max: None,
                    ..
                },
                NodeKind::Quantifier {
                    child: b,
                    min: 0,
                    max: None,
                    ..
                },
            ) => {
                assert_eq!(a.kind, NodeKind::Literal(charset::word()));
                assert_eq!(b.kind, NodeKind::Literal(charset::digit()));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(items[0].span, Span::new(0, 3));
        assert_eq!(items[1].span, Span::new(3, 6));
    }

    #[test]
    fn empty_pattern() {
        assert_eq!(p("").unwrap().kind, NodeKind::Empty);
    }

    #[test]
    fn rejects_lookaround() {
        assert!(
            matches!(p("a(?=b)"), Err(Error::Unsupported { ref feature, .. }) if feature == "lookahead")
        );
        assert!(matches!(p("(?<=a)b"), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn rejects_non_regular_features() {
        for s in [
            r"(a)\1",
            r"(?<x>a)\k<x>",
            "a*+",
            r"\bfoo",
            r"\p{L}",
            "[[:alpha:]]",
            "a^b",
            "(^a)",
            "a$b",
            "^a|b$",
        ] {
            assert!(matches!(p(s), Err(Error::Unsupported { .. })), "{s}");
        }
    }

    #[test]
    fn syntax_errors() {
        for s in [
            "(", ")", "a)", "*a", "a**", "[a", "[z-a]", "a{3,2}", "\\", r"\y", "a{2}{3}",
        ] {
            assert!(matches!(p(s), Err(Error::Syntax { .. })), "{s}: {:?}", p(s));
        }
    }

    #[test]
    fn quantifier_forms() {
        let cases = [
            ("a{3}", 3, Some(3)),
            ("a{2,}", 2, None),
            ("a{2,5}", 2, Some(5)),
            ("a{,10}", 0, Some(10)),
        ];
        for (src, lo, hi) in cases {
            match p(src).unwrap().kind {
                NodeKind::Quantifier { min, max, .. } => assert_eq!((min, max), (lo, hi), "{src}"),
                k => panic!("{k:?}"),
            }
        }
        // not a counted repetition: literal brace
        assert!(matches!(p("a{x}").unwrap().kind, NodeKind::Concat(_)));
        match p("a+?").unwrap().kind {
            NodeKind::Quantifier { lazy, op, .. } => {
                assert!(lazy);
                assert_eq!(op, Span::new(1, 3));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn classes() {
        let n = p("[^a-c]").unwrap();
        let NodeKind::Literal(set) = n.kind else {
            panic!()
        };
        assert!(!set.contains_char('b'));
        assert!(set.contains_char('d'));
        let n = p(r"[\d_-]").unwrap();
        let NodeKind::Literal(set) = n.kind else {
            panic!()
        };
        assert!(set.contains_char('-') && set.contains_char('7') && set.contains_char('_'));
        let n = p("[]a]").unwrap();
        let NodeKind::Literal(set) = n.kind else {
            panic!()
        };
        assert!(set.contains_char(']'));
    }

    #[test]
    fn anchors_at_extremities() {
        assert!(p("^a+$").is_ok());
        assert!(p("^(a|b)$").is_ok());
        assert!(p("^").is_ok());
    }

    #[test]
    fn alphabet_bound() {
        assert!(matches!(p("é"), Err(Error::Unsupported { .. })));
        let latin = ParseOptions {
            alphabet: Alphabet::Latin1,
            ..ParseOptions::default()
        };
        assert!(parse("é", &latin).is_ok());
    }

    #[test]
    fn named_groups_accepted() {
        assert!(p("(?<year>\\d{4})-(?P<m>\\d\\d)").is_ok());
    }
}
