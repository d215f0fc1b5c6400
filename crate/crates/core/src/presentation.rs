//! Presentations of oriented pro-p right-angled Artin groups.
//!
//! Generators are the vertices. An ordinary pair `{u, w}` contributes the
//! commutator `u w u^-1 w^-1`. A special edge into `w` contributes
//! `w u w^-1 u^-(1+q)`: the head acts on the tail by the unit `1 + q`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::digraph::{Digraph, PairState};
use crate::error::{Error, Result};
use crate::padic::check_prime_power;
use crate::word::GroupWord;

/// `q = p^f`, with `f >= 2` when `p = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub f: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        let q = check_prime_power(p, f).map_err(|e| {
            Error::InvalidParameters(format!("q = p^f needs p prime, f >= 1 and f >= 2 when p = 2 ({e})"))
        })?;
        if q > i64::MAX as u64 / 4 {
            return Err(Error::InvalidParameters(format!("q = {p}^{f} is too large")));
        }
        Ok(PrimePower { p, f, q })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationKind {
    Commute { a: usize, b: usize },
    /// `actor · acted · actor^-1 = acted^(1+q)`.
    Act { actor: usize, acted: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub kind: RelationKind,
    pub word: GroupWord<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Relator>,
    pub params: PrimePower,
}

pub fn present(g: &Digraph, params: PrimePower) -> Presentation {
    let unit = 1 + params.q as i64;
    let relators = g
        .pairs()
        .map(|(a, b, s)| match s {
            PairState::Ordinary => Relator {
                kind: RelationKind::Commute { a, b },
                word: GroupWord::from_syllables([(a, 1), (b, 1), (a, -1), (b, -1)]),
            },
            PairState::SpecialToward(w) => {
                let u = if w == a { b } else { a };
                Relator {
                    kind: RelationKind::Act { actor: w, acted: u },
                    word: GroupWord::from_syllables([(w, 1), (u, 1), (w, -1), (u, -unit)]),
                }
            }
            PairState::None => unreachable!("pairs() skips empty pairs"),
        })
        .collect();
    Presentation {
        generators: g.names().to_vec(),
        relators,
        params,
    }
}

/// The orientation: `1 + q` on sinkholes, `1` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub vertices: Vec<String>,
    pub values: Vec<u64>,
}

pub fn orientation(g: &Digraph, q: u64) -> Orientation {
    Orientation {
        vertices: g.names().to_vec(),
        values: (0..g.len()).map(|v| if g.is_sinkhole(v) { 1 + q } else { 1 }).collect(),
    }
}

impl Orientation {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.vertices
                .iter()
                .zip(&self.values)
                .map(|(v, t)| json!({"vertex": v, "theta": t}))
                .collect(),
        )
    }
}

/// Every assignment `V -> Z/p`, in lexicographic order (first vertex most significant).
pub fn character_space(n: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = p.checked_pow(n as u32).expect("character space size fits in u64");
    (0..total).map(move |mut i| {
        let mut chi = vec![0; n];
        for slot in chi.iter_mut().rev() {
            *slot = i % p;
            i /= p;
        }
        chi
    })
}

impl Presentation {
    /// Image of each relator under the character `chi`, in `Z/p`.
    pub fn character_images(&self, chi: &[u64]) -> Vec<u64> {
        let p = self.params.p as i128;
        self.relators
            .iter()
            .map(|r| {
                let total: i128 = r
                    .word
                    .syllables()
                    .iter()
                    .map(|(g, e)| *e as i128 * chi[*g] as i128)
                    .sum();
                total.rem_euclid(p) as u64
            })
            .collect()
    }

    pub fn render_text(&self, orientation: &Orientation) -> String {
        let PrimePower { p, f, q } = self.params;
        let mut out = String::new();
        let _ = writeln!(out, "generators: {}", self.generators.join(", "));
        let _ = writeln!(out, "p = {p}, f = {f}, q = {q}");
        let _ = writeln!(out, "relators:");
        for r in &self.relators {
            let note = match r.kind {
                RelationKind::Commute { .. } => "commute".to_string(),
                RelationKind::Act { actor, acted } => {
                    format!("{} acts on {} by {}", self.generators[actor], self.generators[acted], 1 + q)
                }
            };
            let _ = writeln!(out, "  {}    # {note}", r.word.render(&self.generators));
        }
        let theta: Vec<String> = orientation
            .vertices
            .iter()
            .zip(&orientation.values)
            .map(|(v, t)| format!("{v} -> {t}"))
            .collect();
        let _ = writeln!(out, "orientation: {}", theta.join(", "));
        out
    }

    pub fn to_json(&self, orientation: &Orientation) -> Value {
        let relators: Vec<Value> = self
            .relators
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r.kind).expect("relation kind serializes");
                v["word"] = json!(r.word.render(&self.generators));
                v["letters"] = json!(r
                    .word
                    .syllables()
                    .iter()
                    .map(|(g, e)| json!([self.generators[*g], e]))
                    .collect::<Vec<_>>());
                v
            })
            .collect();
        json!({
            "generators": self.generators,
            "p": self.params.p,
            "f": self.params.f,
            "q": self.params.q,
            "relators": relators,
            "orientation": orientation.to_json(),
        })
    }

    /// Free-group-quotient script in the syntax shared by GAP-like systems.
    pub fn render_cas(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self.generators.iter().map(|g| format!("\"{g}\"")).collect();
        let _ = writeln!(out, "F := FreeGroup({});;", names.join(", "));
        let words: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                r.word
                    .syllables()
                    .iter()
                    .map(|(g, e)| {
                        if *e == 1 {
                            format!("F.{}", g + 1)
                        } else {
                            format!("F.{}^{}", g + 1, e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        let _ = writeln!(out, "rels := [{}];;", words.join(", "));
        let _ = writeln!(out, "G := F / rels;;");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda() -> Digraph {
        Digraph::new(["x", "y", "z"]).unwrap().with_special(1, 0).with_special(2, 0)
    }

    #[test]
    fn lambda_relators() {
        let pres = present(&lambda(), PrimePower::new(3, 1).unwrap());
        let words: Vec<String> = pres.relators.iter().map(|r| r.word.render(&pres.generators)).collect();
        assert_eq!(words, ["x y x^-1 y^-4", "x z x^-1 z^-4"]);
    }

    #[test]
    fn params_are_validated() {
        assert!(PrimePower::new(2, 1).is_err());
        assert!(PrimePower::new(4, 1).is_err());
        assert!(PrimePower::new(3, 0).is_err());
        assert_eq!(PrimePower::new(2, 2).unwrap().q, 4);
    }

    #[test]
    fn undigraph_relators_ignore_q() {
        let g = Digraph::with_generated_ids(3).unwrap().with_ordinary(0, 1).with_ordinary(1, 2);
        let a = present(&g, PrimePower::new(3, 1).unwrap());
        let b = present(&g, PrimePower::new(5, 2).unwrap());
        assert_eq!(a.relators, b.relators);
        assert_eq!(orientation(&g, 3).values, vec![1, 1, 1]);
    }

    #[test]
    fn characters_kill_relators() {
        let g = lambda().with_ordinary(1, 2);
        let pres = present(&g, PrimePower::new(2, 2).unwrap());
        assert_eq!(character_space(3, 2).count(), 8);
        for chi in character_space(3, 2) {
            assert!(pres.character_images(&chi).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn cas_output() {
        let pres = present(&lambda(), PrimePower::new(3, 1).unwrap());
        let cas = pres.render_cas();
        assert!(cas.contains("rels := [F.1*F.2*F.1^-1*F.2^-4, F.1*F.3*F.1^-1*F.3^-4];;"));
    }
}
