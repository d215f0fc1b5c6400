//! Machine-readable witness reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Checked by exact computation; the certificate can be re-checked.
    Verified,
    /// The computation contradicts the statement.
    Refuted,
    /// Stated on the strength of a published theorem; nothing is computed.
    CitationOnly,
    /// The computation could not reach a verdict (stuck rewriting, low precision).
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub statement: String,
    /// Which published result or construction the statement belongs to.
    pub anchor: String,
    pub verdict: Verdict,
    pub certificate: Value,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WitnessReport {
    pub witness: String,
    pub parameters: Value,
    pub claims: Vec<Claim>,
}

impl WitnessReport {
    pub fn new(witness: &str, parameters: Value) -> Self {
        WitnessReport {
            witness: witness.to_string(),
            parameters,
            claims: Vec::new(),
        }
    }

    pub fn push(&mut self, statement: impl Into<String>, anchor: &str, verdict: Verdict, certificate: Value) {
        self.claims.push(Claim {
            statement: statement.into(),
            anchor: anchor.to_string(),
            verdict,
            certificate,
        });
    }

    /// `Verified` claims check out and `CitationOnly` claims are flagged as such.
    pub fn all_verified(&self) -> bool {
        self.claims
            .iter()
            .all(|c| matches!(c.verdict, Verdict::Verified | Verdict::CitationOnly))
    }

    pub fn verdict_of(&self, prefix: &str) -> Option<Verdict> {
        self.claims.iter().find(|c| c.statement.starts_with(prefix)).map(|c| c.verdict)
    }
}

pub fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Verified
    } else {
        Verdict::Refuted
    }
}
