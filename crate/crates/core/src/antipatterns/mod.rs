//! Anti-pattern detectors: the six IA shapes and the three prior-art (SOA)
//! shapes used for comparison.

mod ia;
mod soa;

use serde::{Deserialize, Serialize};

pub use ia::detect_ia_antipatterns;
pub use soa::detect_soa_antipatterns;

use crate::syntax::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FindingKind {
    Concat1,
    Concat2,
    Concat3,
    Star1,
    Star2,
    Star3,
    #[serde(rename = "SOA_QOA")]
    SoaQoa,
    #[serde(rename = "SOA_QOD")]
    SoaQod,
    #[serde(rename = "SOA_StarHeight")]
    SoaStarHeight,
}

impl FindingKind {
    pub const IA: [FindingKind; 6] = [
        FindingKind::Concat1,
        FindingKind::Concat2,
        FindingKind::Concat3,
        FindingKind::Star1,
        FindingKind::Star2,
        FindingKind::Star3,
    ];
    pub const SOA: [FindingKind; 3] = [
        FindingKind::SoaQoa,
        FindingKind::SoaQod,
        FindingKind::SoaStarHeight,
    ];

    pub fn is_ia(self) -> bool {
        !self.is_soa()
    }

    pub fn is_soa(self) -> bool {
        matches!(
            self,
            FindingKind::SoaQoa | FindingKind::SoaQod | FindingKind::SoaStarHeight
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            FindingKind::Concat1 => "Concat1",
            FindingKind::Concat2 => "Concat2",
            FindingKind::Concat3 => "Concat3",
            FindingKind::Star1 => "Star1",
            FindingKind::Star2 => "Star2",
            FindingKind::Star3 => "Star3",
            FindingKind::SoaQoa => "SOA_QOA",
            FindingKind::SoaQod => "SOA_QOD",
            FindingKind::SoaStarHeight => "SOA_StarHeight",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            FindingKind::Concat1 | FindingKind::Concat2 | FindingKind::Concat3 => {
                Severity::Polynomial
            }
            FindingKind::Star1 | FindingKind::Star2 | FindingKind::Star3 => Severity::Exponential,
            _ => Severity::Unknown,
        }
    }
}

impl std::fmt::Display for FindingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FindingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<FindingKind, String> {
        FindingKind::IA
            .iter()
            .chain(FindingKind::SOA.iter())
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown anti-pattern {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Polynomial,
    Exponential,
    /// Prior-art shapes make no claim about the growth rate.
    Unknown,
}

/// Which tree the finding was detected on.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    #[default]
    Written,
    /// The partial-match wrapped form with leading/trailing any-character loops.
    Wrapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// The first pumpable quantifier of a concatenation.
    P,
    /// The bridge between the pumps.
    S,
    /// The second pumpable quantifier.
    Q,
    /// The repeated construct as a whole.
    Star,
    /// The body of the repeated construct.
    Body,
    /// An alternative taking part in an overlap.
    Alternative,
    /// The alternative that other alternatives can compose.
    Composite,
    /// A nested quantifier.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Part {
    pub role: Role,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub parts: Vec<Part>,
    /// Shared string from the emptiness test; absent for prior-art kinds.
    pub witness: Option<String>,
    pub explanation: String,
    pub severity: Severity,
    pub form: Form,
}

impl Finding {
    pub fn new(
        kind: FindingKind,
        parts: Vec<Part>,
        witness: Option<String>,
        explanation: String,
    ) -> Finding {
        Finding {
            kind,
            parts,
            witness,
            explanation,
            severity: kind.severity(),
            form: Form::Written,
        }
    }

    pub fn span_of(&self, role: Role) -> Option<Span> {
        self.parts.iter().find(|p| p.role == role).map(|p| p.span)
    }

    pub fn spans_of(&self, role: Role) -> Vec<Span> {
        self.parts
            .iter()
            .filter(|p| p.role == role)
            .map(|p| p.span)
            .collect()
    }

    /// Key used for deduplication.
    pub fn key(&self) -> (FindingKind, Vec<Part>) {
        let mut parts = self.parts.clone();
        parts.sort();
        (self.kind, parts)
    }
}

/// Removes findings with the same kind and spans, keeping the first.
pub fn dedupe(findings: &mut Vec<Finding>) {
    let mut seen = std::collections::HashSet::new();
    findings.retain(|f| seen.insert(f.key()));
}
