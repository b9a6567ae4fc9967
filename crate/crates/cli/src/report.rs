//! Claim records and the report document.

use std::fmt;

use cobord_core::trace::{TraceStep, Verdict};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Assumed, not computed.
    Axiom,
    Skipped,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Pass => "PASS",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Axiom => "AXIOM",
            ClaimStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    /// Anchor or axiom key.
    pub anchor: String,
    pub status: ClaimStatus,
    /// Decision-procedure outcome, when the claim has one.
    pub verdict: Option<String>,
    pub witness: String,
    pub trace: Vec<String>,
    /// Milliseconds; only recorded when timing is enabled.
    pub timing_ms: Option<f64>,
}

impl ClaimRecord {
    pub fn new(id: &str, anchor: &str, passed: bool, witness: impl Into<String>) -> Self {
        let mut witness = witness.into();
        if witness.is_empty() {
            witness = "(no detail)".into();
        }
        Self {
            id: id.into(),
            anchor: anchor.into(),
            status: if passed {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            },
            verdict: None,
            witness,
            trace: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn axiom(id: &str, key: &str, assumed: bool) -> Self {
        Self {
            id: id.into(),
            anchor: key.into(),
            status: if assumed {
                ClaimStatus::Axiom
            } else {
                ClaimStatus::Skipped
            },
            verdict: None,
            witness: key.into(),
            trace: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn failed(id: &str, anchor: &str, err: impl fmt::Display) -> Self {
        Self::new(id, anchor, false, format!("error: {err}"))
    }

    pub fn with_verdict(mut self, v: &Verdict) -> Self {
        self.verdict = Some(v.status.to_string());
        self.trace = render_steps(&v.trace);
        self
    }

    pub fn with_trace(mut self, lines: Vec<String>) -> Self {
        self.trace = lines;
        self
    }
}

pub fn render_steps(steps: &[TraceStep]) -> Vec<String> {
    steps.iter().map(ToString::to_string).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub axiom: usize,
    pub skipped: usize,
    pub ok: bool,
}

impl Summary {
    pub fn of(claims: &[ClaimRecord]) -> Self {
        let count = |s: ClaimStatus| claims.iter().filter(|c| c.status == s).count();
        let fail = count(ClaimStatus::Fail);
        Self {
            pass: count(ClaimStatus::Pass),
            fail,
            axiom: count(ClaimStatus::Axiom),
            skipped: count(ClaimStatus::Skipped),
            ok: fail == 0,
        }
    }
}

/// Keys serialize in field order, which is alphabetical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub claims: Vec<ClaimRecord>,
    pub config: RunConfig,
    pub summary: Summary,
    pub version: String,
}

impl Report {
    pub fn new(claims: Vec<ClaimRecord>, config: RunConfig) -> Self {
        let summary = Summary::of(&claims);
        Self {
            claims,
            config,
            summary,
            version: VERSION.into(),
        }
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            out.push_str(&format!("[{}] {} ({})", c.status, c.id, c.anchor));
            if let Some(v) = &c.verdict {
                out.push_str(&format!(" => {v}"));
            }
            if let Some(t) = c.timing_ms {
                out.push_str(&format!(" [{t:.1} ms]"));
            }
            out.push('\n');
            for line in c.witness.lines() {
                out.push_str(&format!("    {line}\n"));
            }
            for (i, step) in c.trace.iter().enumerate() {
                out.push_str(&format!("    {:>2}. {step}\n", i + 1));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} axiom, {} skipped (cobord {})\n",
            s.pass, s.fail, s.axiom, s.skipped, self.version
        ));
        out
    }
}
