//! Exact group models backing the witness reports.

pub mod heisenberg;
pub mod hnn;
pub mod linear;
pub mod rewrite;
pub mod torsion;
pub mod triangle;

use serde_json::json;

use crate::classify::{witness_matches, ForbiddenWitness, Pattern};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::report::{Verdict, WitnessReport};

/// Citation-only report for the square undigraph, whose group splits as a
/// direct product of two free factors.
pub fn square_report(g: &Digraph) -> Result<WitnessReport> {
    if g.len() != 4 {
        return Err(Error::InvalidInput("the square report needs exactly four vertices".into()));
    }
    let cycle = [[0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3]]
        .into_iter()
        .find(|c| {
            witness_matches(
                g,
                &ForbiddenWitness {
                    pattern: Pattern::Square,
                    vertices: c.to_vec(),
                },
            )
        })
        .ok_or_else(|| Error::InvalidInput("input is not an ordinary 4-cycle without chords".into()))?;
    let name = |i: usize| g.name(cycle[i]).to_string();
    let (a, b) = (format!("<{}, {}>", name(0), name(2)), format!("<{}, {}>", name(1), name(3)));
    let mut report = WitnessReport::new("square", json!({"cycle": (0..4).map(name).collect::<Vec<_>>()}));
    report.push(
        format!("the group is the direct product {a} × {b}"),
        "direct-product criterion",
        Verdict::CitationOnly,
        json!({"reason": "opposite vertices are non-adjacent and every edge is ordinary"}),
    );
    report.push(
        "both factors are 2-generated free pro-p groups, hence not free abelian",
        "direct-product criterion",
        Verdict::CitationOnly,
        json!({"reason": "an edgeless pair of vertices generates a free pro-p group"}),
    );
    report.push(
        "a direct product of non-trivial pro-p groups is Frattini-resistant only if both factors are absolutely torsion-free and one is free abelian; so this group is not",
        "direct-product criterion",
        Verdict::CitationOnly,
        json!({}),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_validation() {
        let sq = Digraph::new(["x", "y", "z", "w"])
            .unwrap()
            .with_ordinary(0, 1)
            .with_ordinary(1, 2)
            .with_ordinary(2, 3)
            .with_ordinary(3, 0);
        let r = square_report(&sq).unwrap();
        assert!(r.claims[0].statement.contains("<x, z> × <y, w>"));
        let path = Digraph::with_generated_ids(4).unwrap().with_ordinary(0, 1).with_ordinary(1, 2).with_ordinary(2, 3);
        assert!(square_report(&path).is_err());
        assert!(square_report(&Digraph::with_generated_ids(3).unwrap()).is_err());
    }
}
