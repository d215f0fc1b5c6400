//! Exhaustive classification of all labeled digraphs on `n` vertices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classify::{elementary_by_patterns, forbidden_triples, is_elementary_type, is_special};
use crate::digraph::{canonical_form, Digraph, DigraphSpace};
use crate::error::{Error, Result};
use crate::par::{map_reduce, Exec};

/// Largest vertex count accepted by [`census`].
pub const MAX_CENSUS: usize = 6;
/// Largest vertex count at which every classifier is run and compared.
pub const MAX_CROSS_CHECK: usize = 5;
/// Largest vertex count for isomorphism-class counting.
pub const MAX_DEDUP: usize = 5;

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub n: usize,
    pub dedup_iso: bool,
    pub exec: Exec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disagreement {
    /// Sinkhole test and forbidden-triple search differ.
    Special,
    /// Deconstruction and forbidden-pattern search differ.
    ElementaryType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusFailure {
    pub index: u64,
    pub which: Disagreement,
    pub digraph: Digraph,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IsoCounts {
    pub classes: u64,
    pub special: u64,
    pub elementary_type: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub total: u64,
    pub special: u64,
    pub elementary_type: u64,
    pub cross_checked: bool,
    pub disagreements: Vec<CensusFailure>,
    pub isomorphism: Option<IsoCounts>,
}

#[derive(Default)]
struct Tally {
    special: u64,
    elementary: u64,
    failures: Vec<(u64, Disagreement)>,
    classes: BTreeMap<u64, (bool, bool)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.special += other.special;
        self.elementary += other.elementary;
        self.failures.extend(other.failures);
        self.classes.extend(other.classes);
        self
    }
}

/// Verdicts of both specialness tests and both elementary-type tests, with
/// the disagreements between them.
pub fn cross_check(g: &Digraph) -> (bool, bool, Vec<Disagreement>) {
    let special = is_special(g);
    let elementary = is_elementary_type(g);
    let mut out = Vec::new();
    if special != forbidden_triples(g).is_empty() {
        out.push(Disagreement::Special);
    }
    if elementary != elementary_by_patterns(g).elementary {
        out.push(Disagreement::ElementaryType);
    }
    (special, elementary, out)
}

pub fn census(opts: CensusOptions) -> Result<CensusReport> {
    if opts.n > MAX_CENSUS {
        return Err(Error::SizeLimit {
            what: "census vertex count",
            actual: opts.n,
            limit: MAX_CENSUS,
        });
    }
    if opts.dedup_iso && opts.n > MAX_DEDUP {
        return Err(Error::SizeLimit {
            what: "isomorphism dedup vertex count",
            actual: opts.n,
            limit: MAX_DEDUP,
        });
    }
    let space = DigraphSpace::new(opts.n)?;
    let compare = opts.n <= MAX_CROSS_CHECK;
    let tally = map_reduce(
        opts.exec,
        space.len(),
        CHUNK,
        |range| {
            let mut t = Tally::default();
            for index in range {
                let g = space.get(index);
                let (special, elementary) = if compare {
                    let (s, e, bad) = cross_check(&g);
                    t.failures.extend(bad.into_iter().map(|d| (index, d)));
                    (s, e)
                } else {
                    (is_special(&g), is_elementary_type(&g))
                };
                t.special += special as u64;
                t.elementary += elementary as u64;
                if opts.dedup_iso {
                    let (code, _) = canonical_form(&g).expect("census sizes are within the isomorphism limit");
                    t.classes.entry(code).or_insert((special, elementary));
                }
            }
            t
        },
        Tally::default,
        Tally::merge,
    );
    let isomorphism = opts.dedup_iso.then(|| IsoCounts {
        classes: tally.classes.len() as u64,
        special: tally.classes.values().filter(|c| c.0).count() as u64,
        elementary_type: tally.classes.values().filter(|c| c.1).count() as u64,
    });
    Ok(CensusReport {
        n: opts.n,
        total: space.len(),
        special: tally.special,
        elementary_type: tally.elementary,
        cross_checked: compare,
        disagreements: tally
            .failures
            .into_iter()
            .map(|(index, which)| CensusFailure {
                index,
                which,
                digraph: space.get(index),
            })
            .collect(),
        isomorphism,
    })
}
