//! Derivation traces: every inference step names the fact it rests on,
//! either a cited source location (by symbolic key) or a named axiom.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Symbolic keys for the cited facts. Keys are stable strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Anchor {
    TwoSeries,
    SkeletonResolution,
    KunnethSequence,
    LandweberFlatness,
    WilsonSurjectivity,
    LowDegreeSurjectivity,
    D3IsSq3,
    BocksteinFactorization,
    EInfinityRule,
    VInjectivity,
    LeadingTerm,
    ConstraintSystem,
    WuFormula,
    EulerIdentity,
    ExtraspecialDescription,
    TorsionShift,
    ObstructionPattern,
    SkeletonCalculation,
    C1Summand,
    FreeCase,
    TorRestriction,
}

impl Anchor {
    pub const ALL: [Anchor; 21] = [
        Anchor::TwoSeries,
        Anchor::SkeletonResolution,
        Anchor::KunnethSequence,
        Anchor::LandweberFlatness,
        Anchor::WilsonSurjectivity,
        Anchor::LowDegreeSurjectivity,
        Anchor::D3IsSq3,
        Anchor::BocksteinFactorization,
        Anchor::EInfinityRule,
        Anchor::VInjectivity,
        Anchor::LeadingTerm,
        Anchor::ConstraintSystem,
        Anchor::WuFormula,
        Anchor::EulerIdentity,
        Anchor::ExtraspecialDescription,
        Anchor::TorsionShift,
        Anchor::ObstructionPattern,
        Anchor::SkeletonCalculation,
        Anchor::C1Summand,
        Anchor::FreeCase,
        Anchor::TorRestriction,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Anchor::TwoSeries => "two-series",
            Anchor::SkeletonResolution => "skeleton-resolution",
            Anchor::KunnethSequence => "kunneth-sequence",
            Anchor::LandweberFlatness => "landweber-flatness",
            Anchor::WilsonSurjectivity => "wilson-surjectivity",
            Anchor::LowDegreeSurjectivity => "low-degree-surjectivity",
            Anchor::D3IsSq3 => "d3-is-sq3",
            Anchor::BocksteinFactorization => "bockstein-factorization",
            Anchor::EInfinityRule => "e-infinity-rule",
            Anchor::VInjectivity => "v-injectivity",
            Anchor::LeadingTerm => "leading-term",
            Anchor::ConstraintSystem => "constraint-system",
            Anchor::WuFormula => "wu-formula",
            Anchor::EulerIdentity => "euler-identity",
            Anchor::ExtraspecialDescription => "extraspecial-description",
            Anchor::TorsionShift => "torsion-shift",
            Anchor::ObstructionPattern => "obstruction-pattern",
            Anchor::SkeletonCalculation => "skeleton-calculation",
            Anchor::C1Summand => "c1-summand",
            Anchor::FreeCase => "free-case",
            Anchor::TorRestriction => "tor-restriction-lemma",
        }
    }
}

impl Serialize for Anchor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.key())
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Facts consumed without computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `H^i(BG; Z)` is elementary abelian for `i` not divisible by 4.
    HOddElementary,
    /// `H^7` of the 7-skeleton has no 4-torsion.
    H7No4Torsion,
    /// The spectral sequence is generated by the top row and `BP*`.
    TopRowGeneration,
    /// Limits over skeleta behave (Mittag-Leffler); windows stand in for completions.
    MittagLeffler,
    /// `H^4(BSO(4); Z)` injects into `H^4(BSU(2) x BSU(2); Z)`.
    H4Injection,
    /// Undetermined torsion orders are modeled as order 4.
    HoleOrders,
}

impl Axiom {
    pub fn key(self) -> &'static str {
        match self {
            Axiom::HOddElementary => "h-odd-elementary",
            Axiom::H7No4Torsion => "h7-no-4torsion",
            Axiom::TopRowGeneration => "top-row-generation",
            Axiom::MittagLeffler => "mittag-leffler",
            Axiom::H4Injection => "h4-injection",
            Axiom::HoleOrders => "hole-orders",
        }
    }
}

impl Serialize for Axiom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.key())
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// The two toggleable integral-cohomology axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    pub h_odd_elementary: bool,
    pub h7_no_4torsion: bool,
}

impl AxiomSet {
    pub const ALL: AxiomSet = AxiomSet {
        h_odd_elementary: true,
        h7_no_4torsion: true,
    };
    pub const NONE: AxiomSet = AxiomSet {
        h_odd_elementary: false,
        h7_no_4torsion: false,
    };

    pub fn contains(&self, a: Axiom) -> bool {
        match a {
            Axiom::HOddElementary => self.h_odd_elementary,
            Axiom::H7No4Torsion => self.h7_no_4torsion,
            _ => true,
        }
    }

    /// `self` has every axiom of `other`.
    pub fn includes(&self, other: &AxiomSet) -> bool {
        (self.h_odd_elementary || !other.h_odd_elementary)
            && (self.h7_no_4torsion || !other.h7_no_4torsion)
    }

    /// All four subsets, smallest first.
    pub fn subsets() -> [AxiomSet; 4] {
        [
            AxiomSet::NONE,
            AxiomSet {
                h_odd_elementary: true,
                h7_no_4torsion: false,
            },
            AxiomSet {
                h_odd_elementary: false,
                h7_no_4torsion: true,
            },
            AxiomSet::ALL,
        ]
    }
}

impl Default for AxiomSet {
    fn default() -> Self {
        Self::ALL
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.h7_no_4torsion {
            parts.push(Axiom::H7No4Torsion.key());
        }
        if self.h_odd_elementary {
            parts.push(Axiom::HOddElementary.key());
        }
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for AxiomSet {
    type Err = Error;

    /// `none`, `all`, or a comma-separated list of axiom keys.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        match s {
            "none" | "" => return Ok(Self::NONE),
            "all" => return Ok(Self::ALL),
            _ => {}
        }
        let mut set = Self::NONE;
        for part in s.split(',') {
            match part.trim() {
                "h7-no-4torsion" => set.h7_no_4torsion = true,
                "h-odd-elementary" => set.h_odd_elementary = true,
                other => return Err(Error::Parse(format!("unknown axiom '{other}'"))),
            }
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "key", rename_all = "lowercase")]
pub enum Citation {
    Anchor(Anchor),
    Axiom(Axiom),
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Citation::Anchor(a) => write!(f, "@{a}"),
            Citation::Axiom(a) => write!(f, "axiom:{a}"),
        }
    }
}

impl From<Anchor> for Citation {
    fn from(a: Anchor) -> Self {
        Citation::Anchor(a)
    }
}

impl From<Axiom> for Citation {
    fn from(a: Axiom) -> Self {
        Citation::Axiom(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub cites: Vec<Citation>,
    pub claim: String,
    /// Concrete linear-algebra evidence.
    pub witness: String,
}

impl TraceStep {
    pub fn new(cites: &[Citation], claim: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            cites: cites.to_vec(),
            claim: claim.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cites: Vec<String> = self.cites.iter().map(ToString::to_string).collect();
        write!(f, "[{}] {}", cites.join(" "), self.claim)?;
        if !self.witness.is_empty() {
            write!(f, " -- {}", self.witness)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    ForcedZero,
    NotForced,
    Nonzero,
    Undecided,
    /// Torsion-free input: there is nothing to obstruct.
    NoObstruction,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ForcedZero => "FORCED_ZERO",
            Status::NotForced => "NOT_FORCED",
            Status::Nonzero => "NONZERO",
            Status::Undecided => "UNDECIDED",
            Status::NoObstruction => "NO_OBSTRUCTION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub trace: Vec<TraceStep>,
    /// Stage at which a decision procedure stopped, when it did not succeed.
    pub failed_stage: Option<u8>,
    pub witness: Option<String>,
    /// Upstream check whose failure made the verdict undecided.
    pub dependency: Option<String>,
}

impl Verdict {
    pub fn new(status: Status, trace: Vec<TraceStep>) -> Self {
        Self {
            status,
            trace,
            failed_stage: None,
            witness: None,
            dependency: None,
        }
    }

    pub fn undecided(dependency: &str, trace: Vec<TraceStep>) -> Self {
        Self {
            dependency: Some(dependency.to_string()),
            ..Self::new(Status::Undecided, trace)
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}\n", self.status);
        if let Some(stage) = self.failed_stage {
            s.push_str(&format!("  failed at stage {stage}\n"));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!("  witness: {w}\n"));
        }
        if let Some(d) = &self.dependency {
            s.push_str(&format!("  failing dependency: {d}\n"));
        }
        for (i, step) in self.trace.iter().enumerate() {
            s.push_str(&format!("  {:>2}. {step}\n", i + 1));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("trace step {index} has no citation: {claim}")]
pub struct UntaggedStep {
    pub index: usize,
    pub claim: String,
}

/// Rejects traces with an untagged step or with no steps at all.
pub fn validate_trace(steps: &[TraceStep]) -> Result<(), UntaggedStep> {
    if steps.is_empty() {
        return Err(UntaggedStep {
            index: 0,
            claim: "(empty trace)".into(),
        });
    }
    match steps.iter().position(|s| s.cites.is_empty()) {
        Some(index) => Err(UntaggedStep {
            index,
            claim: steps[index].claim.clone(),
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_keys_are_distinct() {
        let mut keys: Vec<&str> = Anchor::ALL.iter().map(|a| a.key()).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), Anchor::ALL.len());
    }

    #[test]
    fn axiom_set_parsing() {
        assert_eq!("none".parse::<AxiomSet>().unwrap(), AxiomSet::NONE);
        assert_eq!(
            "h7-no-4torsion,h-odd-elementary"
                .parse::<AxiomSet>()
                .unwrap(),
            AxiomSet::ALL
        );
        let one: AxiomSet = "h-odd-elementary".parse().unwrap();
        assert!(one.h_odd_elementary && !one.h7_no_4torsion);
        assert!("h8".parse::<AxiomSet>().is_err());
        for s in AxiomSet::subsets() {
            assert_eq!(s.to_string().parse::<AxiomSet>().unwrap(), s);
            assert!(AxiomSet::ALL.includes(&s));
        }
    }

    #[test]
    fn validator() {
        let good = vec![TraceStep::new(&[Anchor::LeadingTerm.into()], "x", "")];
        assert!(validate_trace(&good).is_ok());
        let mut bad = good.clone();
        bad.push(TraceStep::new(&[], "unsupported", ""));
        assert_eq!(validate_trace(&bad).unwrap_err().index, 1);
        assert!(validate_trace(&[]).is_err());
    }
}
