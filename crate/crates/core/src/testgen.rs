//! Seeded random K-regexes for property tests and self-evaluation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Atoms the generator draws from, already in regex syntax.
    pub atoms: Vec<String>,
    pub max_depth: u32,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        let atoms = ["a", "b", "0", "[ab]", "[a0]", "[ab0]"];
        GenConfig {
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            max_depth: 6,
        }
    }
}

impl GenConfig {
    /// Atoms over `{a,b}` only.
    pub fn binary(max_depth: u32) -> GenConfig {
        GenConfig {
            atoms: vec!["a".into(), "b".into(), "[ab]".into()],
            max_depth,
        }
    }
}

pub struct RegexGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl RegexGen {
    pub fn new(seed: u64, cfg: GenConfig) -> RegexGen {
        RegexGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn generate(&mut self) -> String {
        let d = self.cfg.max_depth;
        self.node(d)
    }

    /// `n` patterns from consecutive draws.
    pub fn take(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.generate()).collect()
    }

    fn atom(&mut self) -> String {
        self.cfg
            .atoms
            .choose(&mut self.rng)
            .cloned()
            .unwrap_or_else(|| "a".into())
    }

    fn node(&mut self, depth: u32) -> String {
        if depth <= 1 || self.rng.gen_bool(0.25) {
            return self.atom();
        }
        match self.rng.gen_range(0..10) {
            0..=3 => {
                let n = self.rng.gen_range(2..=3);
                (0..n).map(|_| self.node(depth - 1)).collect()
            }
            4..=5 => {
                let n = self.rng.gen_range(2..=3);
                let alts: Vec<String> = (0..n).map(|_| self.node(depth - 1)).collect();
                format!("({})", alts.join("|"))
            }
            _ => {
                let inner = self.node(depth - 1);
                let op = ["*", "*", "+", "+", "?", "{1,2}", "{2,}"]
                    .choose(&mut self.rng)
                    .copied()
                    .unwrap_or("*");
                if is_atom(&inner) {
                    format!("{inner}{op}")
                } else {
                    format!("({inner}){op}")
                }
            }
        }
    }
}

fn is_atom(s: &str) -> bool {
    s.chars().count() == 1 || (s.starts_with('[') && s.ends_with(']') && !s[1..].contains('['))
}

/// Convenience: `n` patterns from the default configuration.
pub fn corpus(seed: u64, n: usize) -> Vec<String> {
    RegexGen::new(seed, GenConfig::default()).take(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, ParseOptions};

    #[test]
    fn deterministic_and_parseable() {
        let a = corpus(7, 200);
        assert_eq!(a, corpus(7, 200));
        for p in &a {
            parse(p, &ParseOptions::default()).unwrap_or_else(|e| panic!("{p}: {e}"));
        }
    }
}
