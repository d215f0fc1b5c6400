//! Finite digraphs with ordinary and special edges.
//!
//! Every unordered pair of distinct vertices carries one [`PairState`]: no
//! edge, an ordinary edge (both directions present), or a special edge
//! (exactly one direction present, pointing at the special endpoint). The
//! raw directed edge set is recoverable with [`Digraph::directed_edges`].
//!
//! Internally each vertex keeps three bitmasks (ordinary neighbours, tails
//! of incoming special edges, heads of outgoing special edges), which limits
//! a digraph to [`MAX_VERTICES`] vertices.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// State of an unordered pair `{a, b}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairState {
    None,
    Ordinary,
    /// The directed edge into the given endpoint is present, its reverse is not.
    SpecialToward(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VertexStatus {
    pub special: bool,
    pub sinkhole: bool,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    names: Arc<[String]>,
    ordinary: Vec<u64>,
    incoming: Vec<u64>,
    outgoing: Vec<u64>,
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

/// Iterates the set bits of a mask, lowest first.
/// Indices of the set bits of a vertex mask, in increasing order.
pub fn members_of(mask: u64) -> impl Iterator<Item = usize> {
    members(mask)
}

pub(crate) fn members(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Digraph {
    /// An edgeless digraph on the given vertex ids, kept in input order.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Self::from_shared_names(names.into())
    }

    pub(crate) fn from_shared_names(names: Arc<[String]>) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::SizeLimit {
                what: "vertex count",
                actual: names.len(),
                limit: MAX_VERTICES,
            });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::DuplicateVertex(a.clone()));
            }
        }
        let n = names.len();
        Ok(Digraph {
            names,
            ordinary: vec![0; n],
            incoming: vec![0; n],
            outgoing: vec![0; n],
        })
    }

    /// Edgeless digraph on `v1, ..., vn`.
    pub fn with_generated_ids(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("v{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        let n = self.len();
        for v in [a, b] {
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        if a == b {
            return Err(Error::InvalidInput(format!("loop at vertex `{}`", self.name(a))));
        }
        Ok(())
    }

    /// Overwrites the state of `{a, b}`.
    pub fn set_state(&mut self, a: usize, b: usize, state: PairState) -> Result<()> {
        self.check_pair(a, b)?;
        let (ba, bb) = (bit(a), bit(b));
        self.ordinary[a] &= !bb;
        self.ordinary[b] &= !ba;
        self.incoming[a] &= !bb;
        self.incoming[b] &= !ba;
        self.outgoing[a] &= !bb;
        self.outgoing[b] &= !ba;
        match state {
            PairState::None => {}
            PairState::Ordinary => {
                self.ordinary[a] |= bb;
                self.ordinary[b] |= ba;
            }
            PairState::SpecialToward(head) => {
                let tail = if head == a {
                    b
                } else if head == b {
                    a
                } else {
                    return Err(Error::InvalidInput(format!(
                        "special edge head {head} is not an endpoint of the pair ({a}, {b})"
                    )));
                };
                self.incoming[head] |= bit(tail);
                self.outgoing[tail] |= bit(head);
            }
        }
        Ok(())
    }

    pub fn set_state_by_name(&mut self, a: &str, b: &str, state: NamedState) -> Result<()> {
        let (ia, ib) = (self.vertex(a)?, self.vertex(b)?);
        let state = match state {
            NamedState::None => PairState::None,
            NamedState::Ordinary => PairState::Ordinary,
            NamedState::SpecialToA => PairState::SpecialToward(ia),
            NamedState::SpecialToB => PairState::SpecialToward(ib),
        };
        self.set_state(ia, ib, state)
    }

    /// Builder-style ordinary edge; panics on bad indices.
    pub fn with_ordinary(mut self, a: usize, b: usize) -> Self {
        self.set_state(a, b, PairState::Ordinary).expect("valid pair");
        self
    }

    /// Builder-style special edge `tail -> head`; panics on bad indices.
    pub fn with_special(mut self, tail: usize, head: usize) -> Self {
        self.set_state(tail, head, PairState::SpecialToward(head)).expect("valid pair");
        self
    }

    pub fn state(&self, a: usize, b: usize) -> PairState {
        if a == b {
            return PairState::None;
        }
        if self.ordinary[a] & bit(b) != 0 {
            PairState::Ordinary
        } else if self.incoming[b] & bit(a) != 0 {
            PairState::SpecialToward(b)
        } else if self.incoming[a] & bit(b) != 0 {
            PairState::SpecialToward(a)
        } else {
            PairState::None
        }
    }

    /// Non-`None` pairs `(a, b, state)` with `a < b`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, PairState)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| {
            members(self.adjacency(a) & !full_mask(a + 1)).map(move |b| (a, b, self.state(a, b)))
        })
    }

    pub fn pair_count(&self) -> usize {
        self.pairs().count()
    }

    /// Vertices joined to `v` by any edge.
    #[inline]
    pub fn adjacency(&self, v: usize) -> u64 {
        self.ordinary[v] | self.incoming[v] | self.outgoing[v]
    }

    #[inline]
    pub fn ordinary_neighbors(&self, v: usize) -> u64 {
        self.ordinary[v]
    }

    /// Tails of special edges pointing at `v`.
    #[inline]
    pub fn special_in(&self, v: usize) -> u64 {
        self.incoming[v]
    }

    /// Heads of special edges leaving `v`.
    #[inline]
    pub fn special_out(&self, v: usize) -> u64 {
        self.outgoing[v]
    }

    pub fn is_special_vertex(&self, v: usize) -> bool {
        self.incoming[v] != 0
    }

    pub fn special_mask(&self) -> u64 {
        self.incoming
            .iter()
            .enumerate()
            .filter(|(_, m)| **m != 0)
            .fold(0, |acc, (v, _)| acc | bit(v))
    }

    pub fn is_sinkhole(&self, v: usize) -> bool {
        self.incoming[v] != 0 && self.ordinary[v] == 0 && self.outgoing[v] == 0
    }

    pub fn status(&self, v: usize) -> VertexStatus {
        VertexStatus {
            special: self.is_special_vertex(v),
            sinkhole: self.is_sinkhole(v),
        }
    }

    pub fn statuses(&self) -> Vec<VertexStatus> {
        (0..self.len()).map(|v| self.status(v)).collect()
    }

    /// The raw edge set `E ⊆ V×V`, sorted.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for u in 0..self.len() {
            for w in members(self.ordinary[u] | self.outgoing[u]) {
                edges.push((u, w));
            }
        }
        edges
    }

    /// Rebuilds a digraph from raw directed edges; rejects loops and repeats.
    pub fn from_directed_edges<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let mut g = Self::new(names)?;
        let n = g.len();
        let mut present = vec![0u64; n];
        for &(u, w) in edges {
            g.check_pair(u, w)?;
            if present[u] & bit(w) != 0 {
                return Err(Error::InvalidInput(format!("repeated edge ({u}, {w})")));
            }
            present[u] |= bit(w);
        }
        for u in 0..n {
            for w in members(present[u]) {
                if present[w] & bit(u) != 0 {
                    if u < w {
                        g.set_state(u, w, PairState::Ordinary)?;
                    }
                } else {
                    g.set_state(u, w, PairState::SpecialToward(w))?;
                }
            }
        }
        Ok(g)
    }

    /// Induced subdigraph on `subset` (vertex order follows `subset`).
    pub fn induced(&self, subset: &[usize]) -> Result<Digraph> {
        Ok(self.induced_with_status(subset)?.graph)
    }

    pub fn induced_by_names(&self, subset: &[&str]) -> Result<Digraph> {
        let idx = subset.iter().map(|s| self.vertex(s)).collect::<Result<Vec<_>>>()?;
        self.induced(&idx)
    }

    /// Induced subdigraph together with the statuses its vertices have in `self`.
    pub fn induced_with_status(&self, subset: &[usize]) -> Result<Subdigraph> {
        let mut seen = 0u64;
        for &v in subset {
            if v >= self.len() {
                return Err(Error::VertexOutOfRange(v));
            }
            if seen & bit(v) != 0 {
                return Err(Error::DuplicateVertex(self.name(v).to_string()));
            }
            seen |= bit(v);
        }
        let names: Vec<String> = subset.iter().map(|&v| self.names[v].clone()).collect();
        let mut graph = Digraph::new(names)?;
        let mut special = 0u64;
        for (i, &a) in subset.iter().enumerate() {
            if self.is_special_vertex(a) {
                special |= bit(i);
            }
            for (j, &b) in subset.iter().enumerate().skip(i + 1) {
                let state = match self.state(a, b) {
                    PairState::SpecialToward(h) if h == a => PairState::SpecialToward(i),
                    PairState::SpecialToward(_) => PairState::SpecialToward(j),
                    other => other,
                };
                graph.set_state(i, j, state)?;
            }
        }
        Ok(Subdigraph { graph, special })
    }

    /// Induced subdigraph on a vertex mask, keeping ambient order.
    pub fn induced_mask(&self, mask: u64) -> Digraph {
        let subset: Vec<usize> = members(mask).collect();
        self.induced(&subset).expect("mask within range")
    }

    /// Disjoint union; clashing ids of `other` are renamed, and the renames reported.
    pub fn disjoint_union(&self, other: &Digraph) -> (Digraph, Vec<Rename>) {
        let (sub, renames) = Subdigraph::from(self.clone()).disjoint_union(&Subdigraph::from(other.clone()));
        (sub.graph, renames)
    }

    /// Cone with a fresh ordinary tip joined ordinarily to ordinary vertices and
    /// by special edges to special vertices.
    pub fn cone(&self, tip: &str) -> Result<Digraph> {
        Ok(Subdigraph::from(self.clone()).cone(tip)?.graph)
    }

    /// Connected components (underlying undirected adjacency) of the vertices in `mask`.
    pub fn components(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let mut next = 0;
                for v in members(frontier) {
                    next |= self.adjacency(v);
                }
                next &= mask & !comp;
                comp |= next;
                frontier = next;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    pub fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.full_mask()).len() <= 1
    }

    /// Two-bit code of the pair `(a, b)`, `a < b`: 0 none, 1 ordinary,
    /// 2 special toward `a`, 3 special toward `b`.
    #[inline]
    pub fn pair_code(&self, a: usize, b: usize) -> u8 {
        match self.state(a, b) {
            PairState::None => 0,
            PairState::Ordinary => 1,
            PairState::SpecialToward(h) if h == a.min(b) => 2,
            PairState::SpecialToward(_) => 3,
        }
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph[{}]", self.names.join(","))?;
        write!(f, "{{")?;
        for (i, (a, b, s)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match s {
                PairState::Ordinary => write!(f, "{}-{}", self.names[a], self.names[b])?,
                PairState::SpecialToward(h) => {
                    let t = if h == a { b } else { a };
                    write!(f, "{}->{}", self.names[t], self.names[h])?
                }
                PairState::None => {}
            }
        }
        write!(f, "}}")
    }
}

/// Pair state with endpoints referred to positionally, as in the JSON format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    None,
    Ordinary,
    SpecialToA,
    SpecialToB,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rename {
    pub from: String,
    pub to: String,
}

/// A digraph whose vertices carry the special/ordinary status they had in an
/// ambient digraph. Isolated vertices of an induced subdigraph may be special
/// this way even though nothing inside the subdigraph points at them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdigraph {
    pub graph: Digraph,
    /// Mask over `graph`'s vertex indices.
    pub special: u64,
}

impl From<Digraph> for Subdigraph {
    fn from(graph: Digraph) -> Self {
        let special = graph.special_mask();
        Subdigraph { graph, special }
    }
}

impl Subdigraph {
    pub fn single(name: &str, special: bool) -> Result<Self> {
        Ok(Subdigraph {
            graph: Digraph::new([name])?,
            special: special as u64,
        })
    }

    pub fn is_special(&self, v: usize) -> bool {
        self.special & bit(v) != 0
    }

    pub fn disjoint_union(&self, other: &Subdigraph) -> (Subdigraph, Vec<Rename>) {
        let mut names: Vec<String> = self.graph.names.to_vec();
        let mut renames = Vec::new();
        for name in other.graph.names.iter() {
            let mut fresh = name.clone();
            let mut k = 2;
            while names.contains(&fresh) || (fresh != *name && other.graph.names.contains(&fresh)) {
                fresh = format!("{name}~{k}");
                k += 1;
            }
            if fresh != *name {
                renames.push(Rename {
                    from: name.clone(),
                    to: fresh.clone(),
                });
            }
            names.push(fresh);
        }
        let offset = self.graph.len();
        let mut graph = Digraph::new(names).expect("names are unique by construction");
        for (a, b, s) in self.graph.pairs() {
            graph.set_state(a, b, s).expect("in range");
        }
        for (a, b, s) in other.graph.pairs() {
            let s = match s {
                PairState::SpecialToward(h) => PairState::SpecialToward(h + offset),
                s => s,
            };
            graph.set_state(a + offset, b + offset, s).expect("in range");
        }
        let special = self.special | (other.special << offset);
        (Subdigraph { graph, special }, renames)
    }

    pub fn cone(&self, tip: &str) -> Result<Subdigraph> {
        if self.graph.is_empty() {
            return Err(Error::InvalidInput("cone over an empty digraph".into()));
        }
        if self.graph.index_of(tip).is_some() {
            return Err(Error::DuplicateVertex(tip.to_string()));
        }
        let mut names = self.graph.names.to_vec();
        names.push(tip.to_string());
        let mut graph = Digraph::new(names)?;
        for (a, b, s) in self.graph.pairs() {
            graph.set_state(a, b, s)?;
        }
        let u = self.graph.len();
        for v in 0..u {
            let s = if self.is_special(v) {
                PairState::SpecialToward(v)
            } else {
                PairState::Ordinary
            };
            graph.set_state(u, v, s)?;
        }
        Ok(Subdigraph {
            graph,
            special: self.special,
        })
    }
}

/// All labeled digraphs on `v1..vn`, indexed in lexicographic order of their
/// pair codes (first pair most significant).
#[derive(Clone, Debug)]
pub struct DigraphSpace {
    n: usize,
    names: Arc<[String]>,
    pairs: Vec<(usize, usize)>,
}

pub const MAX_ENUMERATION: usize = 7;

impl DigraphSpace {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_ENUMERATION).contains(&n) {
            return Err(Error::InvalidInput(format!(
                "enumeration needs 1 <= n <= {MAX_ENUMERATION}, got {n}"
            )));
        }
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Ok(DigraphSpace {
            n,
            names: names.into(),
            pairs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        1u64 << (2 * self.pairs.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u64) -> Digraph {
        debug_assert!(index < self.len());
        let mut g = Digraph::from_shared_names(self.names.clone()).expect("generated ids");
        let m = self.pairs.len();
        for (t, &(a, b)) in self.pairs.iter().enumerate() {
            let code = (index >> (2 * (m - 1 - t))) & 3;
            let s = match code {
                0 => continue,
                1 => PairState::Ordinary,
                2 => PairState::SpecialToward(a),
                _ => PairState::SpecialToward(b),
            };
            g.set_state(a, b, s).expect("generated pair");
        }
        g
    }

    /// Inverse of [`get`](Self::get) for digraphs on this space's vertex count.
    pub fn index_of(&self, g: &Digraph) -> u64 {
        self.pairs
            .iter()
            .fold(0u64, |acc, &(a, b)| (acc << 2) | g.pair_code(a, b) as u64)
    }

    pub fn iter(&self) -> impl Iterator<Item = Digraph> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// Streams every labeled digraph on `n` vertices.
pub fn enumerate_digraphs(n: usize) -> Result<impl Iterator<Item = Digraph>> {
    let space = DigraphSpace::new(n)?;
    Ok((0..space.len()).map(move |i| space.get(i)))
}

pub const MAX_ISOMORPHISM: usize = 8;

fn check_iso_size(g: &Digraph) -> Result<()> {
    if g.len() > MAX_ISOMORPHISM {
        return Err(Error::SizeLimit {
            what: "vertex count for isomorphism",
            actual: g.len(),
            limit: MAX_ISOMORPHISM,
        });
    }
    Ok(())
}

/// Encodes `g` relabeled by `perm` (old vertex `v` goes to position `perm[v]`).
fn permuted_code(g: &Digraph, inverse: &[usize]) -> u64 {
    let n = g.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (inverse[i], inverse[j]);
            let c = match g.state(a, b) {
                PairState::None => 0,
                PairState::Ordinary => 1,
                PairState::SpecialToward(h) if h == a => 2,
                PairState::SpecialToward(_) => 3,
            };
            code = (code << 2) | c;
        }
    }
    code
}

/// Canonical form: the minimum pair-code encoding over all relabelings.
/// Returns the code and one minimizing permutation (`perm[v]` = new position of `v`).
pub fn canonical_form(g: &Digraph) -> Result<(u64, Vec<usize>)> {
    use itertools::Itertools;
    check_iso_size(g)?;
    let n = g.len();
    let mut best: Option<(u64, Vec<usize>)> = None;
    for inverse in (0..n).permutations(n) {
        let code = permuted_code(g, &inverse);
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, inverse));
        }
    }
    let (code, inverse) = best.unwrap_or((0, Vec::new()));
    let mut perm = vec![0; n];
    for (pos, &v) in inverse.iter().enumerate() {
        perm[v] = pos;
    }
    Ok((code, perm))
}

/// Checks isomorphism by exhaustive search; the witness maps vertex `v` of
/// `g1` to vertex `witness[v]` of `g2`.
pub fn are_isomorphic(g1: &Digraph, g2: &Digraph) -> Result<Option<Vec<usize>>> {
    check_iso_size(g1)?;
    check_iso_size(g2)?;
    let n = g1.len();
    if n != g2.len() || g1.pair_count() != g2.pair_count() {
        return Ok(None);
    }
    let mut assigned = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend_iso(g1, g2, 0, &mut assigned, &mut used) {
        Ok(Some(assigned))
    } else {
        Ok(None)
    }
}

fn extend_iso(g1: &Digraph, g2: &Digraph, v: usize, map: &mut [usize], used: &mut u64) -> bool {
    let n = g1.len();
    if v == n {
        return true;
    }
    for image in 0..n {
        if *used & bit(image) != 0 {
            continue;
        }
        let consistent = (0..v).all(|u| {
            let mapped = match g1.state(u, v) {
                PairState::SpecialToward(h) if h == u => PairState::SpecialToward(map[u]),
                PairState::SpecialToward(_) => PairState::SpecialToward(image),
                s => s,
            };
            g2.state(map[u], image) == mapped
        });
        if consistent {
            map[v] = image;
            *used |= bit(image);
            if extend_iso(g1, g2, v + 1, map, used) {
                return true;
            }
            *used &= !bit(image);
            map[v] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda() -> Digraph {
        // z -> x <- y
        Digraph::new(["z", "x", "y"]).unwrap().with_special(0, 1).with_special(2, 1)
    }

    #[test]
    fn pair_states_round_trip_through_directed_edges() {
        let g = Digraph::with_generated_ids(4)
            .unwrap()
            .with_special(1, 0)
            .with_ordinary(1, 2)
            .with_special(3, 0)
            .with_ordinary(2, 3);
        let edges = g.directed_edges();
        assert!(edges.iter().all(|(u, w)| u != w));
        assert_eq!(edges.len(), 6);
        let back = Digraph::from_directed_edges(g.names().to_vec(), &edges).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn loops_and_unknown_vertices_are_rejected() {
        let mut g = Digraph::with_generated_ids(2).unwrap();
        assert!(g.set_state(0, 0, PairState::Ordinary).is_err());
        assert!(g.set_state(0, 5, PairState::Ordinary).is_err());
        assert!(g.set_state(0, 1, PairState::SpecialToward(7)).is_err());
        assert!(Digraph::from_directed_edges(["a", "b"], &[(0, 0)]).is_err());
        assert!(Digraph::new(["a", "a"]).is_err());
        assert!(g.induced(&[0, 3]).is_err());
        assert!(g.induced_by_names(&["v1", "nope"]).is_err());
    }

    #[test]
    fn statuses_follow_special_edges() {
        let g = lambda();
        assert_eq!(g.status(1), VertexStatus { special: true, sinkhole: true });
        assert_eq!(g.status(0), VertexStatus::default());
        let h = g.clone().with_ordinary(1, 2);
        assert!(h.is_special_vertex(1));
        assert!(!h.is_sinkhole(1));
    }

    #[test]
    fn induced_keeps_ambient_status() {
        let g = lambda();
        let sub = g.induced_with_status(&[1]).unwrap();
        assert_eq!(sub.graph.len(), 1);
        assert!(!sub.graph.is_special_vertex(0));
        assert!(sub.is_special(0));
        assert_eq!(g.induced(&[0, 1, 2]).unwrap(), g);
    }

    #[test]
    fn union_renames_clashing_ids() {
        let a = Digraph::new(["v1", "v2"]).unwrap().with_ordinary(0, 1);
        let (u, renames) = a.disjoint_union(&a);
        assert_eq!(u.len(), 4);
        assert_eq!(renames.len(), 2);
        assert_eq!(u.names()[2], "v1~2");
        assert_eq!(u.components(u.full_mask()).len(), 2);
        let (same, none) = a.disjoint_union(&Digraph::new(Vec::<String>::new()).unwrap());
        assert_eq!(same, a);
        assert!(none.is_empty());
    }

    #[test]
    fn cone_over_special_leaves() {
        let v1 = Subdigraph::single("v1", true).unwrap();
        let v3 = Subdigraph::single("v3", true).unwrap();
        let (base, _) = v1.disjoint_union(&v3);
        let coned = base.cone("v2").unwrap();
        let g = &coned.graph;
        assert_eq!(g.state(2, 0), PairState::SpecialToward(0));
        assert_eq!(g.state(2, 1), PairState::SpecialToward(1));
        assert_eq!(g.special_mask(), coned.special);
        assert!(coned.cone("v1").is_err());
        let single = Digraph::new(["a"]).unwrap().cone("u").unwrap();
        assert_eq!(single.state(0, 1), PairState::Ordinary);
        assert!(Digraph::new(Vec::<String>::new()).unwrap().cone("u").is_err());
    }

    #[test]
    fn enumeration_sizes_and_index_round_trip() {
        assert_eq!(enumerate_digraphs(2).unwrap().count(), 4);
        let space = DigraphSpace::new(4).unwrap();
        assert_eq!(space.len(), 4096);
        for i in [0u64, 1, 77, 4095] {
            assert_eq!(space.index_of(&space.get(i)), i);
        }
        assert!(DigraphSpace::new(0).is_err());
        assert!(DigraphSpace::new(8).is_err());
    }

    #[test]
    fn three_cycle_rotation_is_isomorphic() {
        let cycle = Digraph::new(["x", "y", "z"]).unwrap().with_special(0, 1).with_special(1, 2).with_special(2, 0);
        let rotated = Digraph::new(["y", "z", "x"]).unwrap().with_special(2, 0).with_special(0, 1).with_special(1, 2);
        let w = are_isomorphic(&cycle, &rotated).unwrap().expect("isomorphic");
        for a in 0..3 {
            for b in 0..3 {
                let mapped = match cycle.state(a, b) {
                    PairState::SpecialToward(h) => PairState::SpecialToward(w[h]),
                    s => s,
                };
                assert_eq!(rotated.state(w[a], w[b]), mapped);
            }
        }
        let path = Digraph::new(["a", "b", "c"]).unwrap().with_ordinary(0, 1).with_ordinary(1, 2);
        assert_eq!(are_isomorphic(&lambda(), &path).unwrap(), None);
        assert!(are_isomorphic(&Digraph::with_generated_ids(9).unwrap(), &path).is_err());
    }
}
