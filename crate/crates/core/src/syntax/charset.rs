//! Character sets as sorted, disjoint, non-adjacent inclusive code-point intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Upper bound of the analyzed alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    /// Code points 0..=127.
    #[default]
    Ascii,
    /// Code points 0..=255.
    Latin1,
}

impl Alphabet {
    pub fn max(self) -> u32 {
        match self {
            Alphabet::Ascii => 0x7f,
            Alphabet::Latin1 => 0xff,
        }
    }

    pub fn full(self) -> CharSet {
        CharSet::range(0, self.max())
    }

    pub fn contains(self, c: char) -> bool {
        (c as u32) <= self.max()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CharSet {
    ranges: Vec<(u32, u32)>,
}

impl CharSet {
    pub fn empty() -> CharSet {
        CharSet { ranges: Vec::new() }
    }

    pub fn single(c: char) -> CharSet {
        CharSet::range(c as u32, c as u32)
    }

    pub fn range(lo: u32, hi: u32) -> CharSet {
        if lo > hi {
            return CharSet::empty();
        }
        CharSet {
            ranges: vec![(lo, hi)],
        }
    }

    /// Builds a set from arbitrary (possibly overlapping, unsorted) intervals.
    pub fn from_ranges<I: IntoIterator<Item = (u32, u32)>>(iter: I) -> CharSet {
        let mut v: Vec<(u32, u32)> = iter.into_iter().filter(|(a, b)| a <= b).collect();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            match out.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => {
                    last.1 = last.1.max(hi);
                }
                _ => out.push((lo, hi)),
            }
        }
        CharSet { ranges: out }
    }

    pub fn ranges(&self) -> &[(u32, u32)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.ranges.iter().map(|&(a, b)| (b - a) as u64 + 1).sum()
    }

    pub fn first(&self) -> Option<u32> {
        self.ranges.first().map(|r| r.0)
    }

    pub fn contains(&self, c: u32) -> bool {
        self.ranges
            .binary_search_by(|&(lo, hi)| {
                if hi < c {
                    std::cmp::Ordering::Less
                } else if lo > c {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    pub fn contains_char(&self, c: char) -> bool {
        self.contains(c as u32)
    }

    pub fn union(&self, other: &CharSet) -> CharSet {
        CharSet::from_ranges(self.ranges.iter().chain(other.ranges.iter()).copied())
    }

    pub fn intersect(&self, other: &CharSet) -> CharSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a0, a1) = self.ranges[i];
            let (b0, b1) = other.ranges[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        CharSet { ranges: out }
    }

    /// Complement with respect to `alphabet`.
    pub fn complement(&self, alphabet: Alphabet) -> CharSet {
        let max = alphabet.max();
        let mut out = Vec::new();
        let mut next = 0u32;
        for &(lo, hi) in &self.ranges {
            if lo > max {
                break;
            }
            if lo > next {
                out.push((next, lo - 1));
            }
            next = hi.saturating_add(1);
        }
        if next <= max {
            out.push((next, max));
        }
        CharSet { ranges: out }
    }

    pub fn difference(&self, other: &CharSet) -> CharSet {
        // complement over the widest range we can represent, then intersect
        let max = self.ranges.last().map(|r| r.1).unwrap_or(0);
        let mut comp = Vec::new();
        let mut next = 0u32;
        for &(lo, hi) in &other.ranges {
            if lo > next {
                comp.push((next, lo - 1));
            }
            next = hi.saturating_add(1);
        }
        if next <= max {
            comp.push((next, max));
        }
        self.intersect(&CharSet { ranges: comp })
    }

    pub fn is_subset(&self, other: &CharSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn overlaps(&self, other: &CharSet) -> bool {
        !self.intersect(other).is_empty()
    }

    pub fn chars(&self) -> impl Iterator<Item = char> + '_ {
        self.ranges
            .iter()
            .flat_map(|&(lo, hi)| (lo..=hi).filter_map(char::from_u32))
    }
}

/// `\d`
pub fn digit() -> CharSet {
    CharSet::range('0' as u32, '9' as u32)
}

/// `\w`
pub fn word() -> CharSet {
    CharSet::from_ranges([
        ('0' as u32, '9' as u32),
        ('A' as u32, 'Z' as u32),
        ('_' as u32, '_' as u32),
        ('a' as u32, 'z' as u32),
    ])
}

/// `\s`: space, \t, \n, \v, \f, \r
pub fn space() -> CharSet {
    CharSet::from_ranges([(0x09, 0x0d), (0x20, 0x20)])
}

/// `.`: everything but `\n` unless `dotall`.
pub fn dot(alphabet: Alphabet, dotall: bool) -> CharSet {
    if dotall {
        alphabet.full()
    } else {
        CharSet::single('\n').complement(alphabet)
    }
}

impl fmt::Debug for CharSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_class(self, Alphabet::Latin1, false))
    }
}

const CLASS_SPECIAL: &[char] = &['\\', ']', '[', '^', '-'];
const META: &[char] = &[
    '\\', '.', '+', '*', '?', '(', ')', '|', '[', ']', '{', '}', '^', '$',
];

/// Escapes one character for use outside a bracket class.
pub fn escape_char(c: char) -> String {
    if META.contains(&c) {
        format!("\\{c}")
    } else {
        escape_nonprintable(c).unwrap_or_else(|| c.to_string())
    }
}

fn escape_class_char(c: char) -> String {
    if CLASS_SPECIAL.contains(&c) {
        format!("\\{c}")
    } else {
        escape_nonprintable(c).unwrap_or_else(|| c.to_string())
    }
}

fn escape_nonprintable(c: char) -> Option<String> {
    match c {
        '\n' => Some("\\n".into()),
        '\t' => Some("\\t".into()),
        '\r' => Some("\\r".into()),
        '\x0b' => Some("\\v".into()),
        '\x0c' => Some("\\f".into()),
        c if (c as u32) < 0x20
            || (c as u32) == 0x7f
            || ((c as u32) >= 0x80 && (c as u32) <= 0xa0) =>
        {
            Some(format!("\\x{:02X}", c as u32))
        }
        _ => None,
    }
}

/// Renders a set as regex source: a single char, a shorthand (`\w`, `\d`, `\s`,
/// `.`, and their negations), or a bracket class. Inside a bracket class,
/// letter ranges come first (lowercase then uppercase), then digits, then the rest.
pub fn render_class(set: &CharSet, alphabet: Alphabet, dotall: bool) -> String {
    if set.len() == 1 {
        return escape_char(char::from_u32(set.ranges[0].0).unwrap_or('\u{fffd}'));
    }
    let shorthands = [
        (word(), "\\w"),
        (digit(), "\\d"),
        (space(), "\\s"),
        (dot(alphabet, dotall), "."),
        (word().complement(alphabet), "\\W"),
        (digit().complement(alphabet), "\\D"),
        (space().complement(alphabet), "\\S"),
    ];
    for (s, name) in &shorthands {
        if s == set {
            return (*name).to_string();
        }
    }
    let buckets = [
        CharSet::range('a' as u32, 'z' as u32),
        CharSet::range('A' as u32, 'Z' as u32),
        CharSet::range('0' as u32, '9' as u32),
    ];
    let mut rest = set.clone();
    let mut parts: Vec<CharSet> = Vec::new();
    for b in &buckets {
        let piece = rest.intersect(b);
        if !piece.is_empty() {
            rest = rest.difference(&piece);
            parts.push(piece);
        }
    }
    parts.push(rest);
    let mut out = String::from("[");
    for part in parts {
        for &(lo, hi) in part.ranges() {
            let lo_c = char::from_u32(lo).unwrap_or('\u{fffd}');
            let hi_c = char::from_u32(hi).unwrap_or('\u{fffd}');
            out.push_str(&escape_class_char(lo_c));
            if hi > lo + 1 {
                out.push('-');
            }
            if hi > lo {
                out.push_str(&escape_class_char(hi_c));
            }
        }
    }
    out.push(']');
    out
}
