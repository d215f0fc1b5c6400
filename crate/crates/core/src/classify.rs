//! Special and elementary-type recognition.
//!
//! Each property is decided twice, by routes that share nothing beyond the
//! [`Digraph`] accessors:
//!
//! * specialness by the sinkhole condition ([`special_offender`]) and by the
//!   catalogue of forbidden three-vertex patterns ([`forbidden_triples`]);
//! * elementary type by recursive deconstruction into cones and disjoint
//!   unions ([`decompose`]) and by searching for a forbidden induced square,
//!   four-vertex path or Λ ([`elementary_by_patterns`]).

use serde::Serialize;
use serde_json::{json, Value};

use crate::digraph::{bit, members, Digraph, PairState, Subdigraph};
use crate::error::{Error, Result};

/// A special vertex that is not a sinkhole, with one pair that breaks the condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialOffender {
    pub vertex: usize,
    pub other: usize,
    pub state: PairState,
}

pub fn special_offender(g: &Digraph) -> Option<SpecialOffender> {
    (0..g.len()).filter(|&v| g.is_special_vertex(v)).find_map(|v| {
        let bad = g.ordinary_neighbors(v) | g.special_out(v);
        members(bad).next().map(|other| SpecialOffender {
            vertex: v,
            other,
            state: g.state(v, other),
        })
    })
}

pub fn is_special(g: &Digraph) -> bool {
    special_offender(g).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    NonspecialTriple,
    Square,
    Path4,
    Lambda,
}

/// Named induced patterns. The seven triple patterns all have a special
/// vertex `x` with an incoming special edge from `z` and a second edge to
/// `y` that is either special out of `x` (`Chain*`) or ordinary (`Tail*`);
/// the suffix records the state of `{z, y}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    /// z → x → y, z and y not joined.
    Chain,
    /// z → x → y, z -- y ordinary (same type as z → x -- y with y → z).
    ChainOrdinaryChord,
    /// z → x → y and z → y.
    ChainShortcut,
    /// z → x → y → z.
    ChainCycle,
    /// z → x -- y, z and y not joined.
    Tail,
    /// z → x -- y, z -- y ordinary.
    TailOrdinaryChord,
    /// z → x -- y and z → y.
    TailSpecialChord,
    Square,
    Path4,
    Lambda,
}

impl Pattern {
    pub fn kind(self) -> WitnessKind {
        match self {
            Pattern::Square => WitnessKind::Square,
            Pattern::Path4 => WitnessKind::Path4,
            Pattern::Lambda => WitnessKind::Lambda,
            _ => WitnessKind::NonspecialTriple,
        }
    }

    pub const TRIPLES: [Pattern; 7] = [
        Pattern::Chain,
        Pattern::ChainOrdinaryChord,
        Pattern::ChainShortcut,
        Pattern::ChainCycle,
        Pattern::Tail,
        Pattern::TailOrdinaryChord,
        Pattern::TailSpecialChord,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWitness {
    pub pattern: Pattern,
    /// Vertex roles: `(z, x, y)` for triples and Λ, `(x, y, z, w)` for the
    /// square (cyclic order) and the path.
    pub vertices: Vec<usize>,
}

impl ForbiddenWitness {
    pub fn kind(&self) -> WitnessKind {
        self.pattern.kind()
    }

    pub fn to_json(&self, g: &Digraph) -> Value {
        json!({
            "kind": self.kind(),
            "pattern": self.pattern,
            "vertices": self.vertices.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
        })
    }
}

fn triple_role(g: &Digraph, z: usize, x: usize, y: usize) -> Option<Pattern> {
    if g.special_in(x) & bit(z) == 0 {
        return None;
    }
    let chain = if g.special_out(x) & bit(y) != 0 {
        true
    } else if g.ordinary_neighbors(x) & bit(y) != 0 {
        false
    } else {
        return None;
    };
    let pattern = match (chain, g.state(z, y)) {
        (true, PairState::None) => Pattern::Chain,
        (true, PairState::Ordinary) => Pattern::ChainOrdinaryChord,
        (true, PairState::SpecialToward(h)) if h == y => Pattern::ChainShortcut,
        (true, PairState::SpecialToward(_)) => Pattern::ChainCycle,
        (false, PairState::None) => Pattern::Tail,
        (false, PairState::Ordinary) => Pattern::TailOrdinaryChord,
        (false, PairState::SpecialToward(h)) if h == y => Pattern::TailSpecialChord,
        // z → x -- y → z is the ordinary-chord chain read from y.
        (false, PairState::SpecialToward(_)) => Pattern::ChainOrdinaryChord,
    };
    Some(pattern)
}

/// Classifies the triple `{a, b, c}`; chain readings take precedence over tail readings.
pub fn match_triple(g: &Digraph, a: usize, b: usize, c: usize) -> Option<ForbiddenWitness> {
    let orders = [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
    let mut tail: Option<ForbiddenWitness> = None;
    for [z, x, y] in orders {
        match triple_role(g, z, x, y) {
            Some(p @ (Pattern::Tail | Pattern::TailOrdinaryChord | Pattern::TailSpecialChord)) => {
                tail.get_or_insert(ForbiddenWitness { pattern: p, vertices: vec![z, x, y] });
            }
            Some(Pattern::ChainOrdinaryChord) if g.ordinary_neighbors(x) & bit(y) != 0 => {
                // found through the tail reading; the chain reading is (y, z, x)
                return Some(ForbiddenWitness {
                    pattern: Pattern::ChainOrdinaryChord,
                    vertices: vec![y, z, x],
                });
            }
            Some(p) => {
                return Some(ForbiddenWitness { pattern: p, vertices: vec![z, x, y] });
            }
            None => {}
        }
    }
    tail
}

/// Every vertex triple whose induced subdigraph blocks specialness, one witness per triple.
pub fn forbidden_triples(g: &Digraph) -> Vec<ForbiddenWitness> {
    let n = g.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let Some(w) = match_triple(g, a, b, c) {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn first_forbidden_triple(g: &Digraph) -> Option<ForbiddenWitness> {
    let n = g.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if let Some(w) = match_triple(g, a, b, c) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Which universal ordinary vertex becomes the cone tip when several qualify.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TipChoice {
    /// Last qualifying vertex in input order.
    #[default]
    Highest,
    Lowest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionTree {
    Leaf { vertex: usize, special: bool },
    Union(Vec<DecompositionTree>),
    Cone { tip: usize, child: Box<DecompositionTree> },
}

impl DecompositionTree {
    /// The starting vertex set: all leaves.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            DecompositionTree::Leaf { vertex, .. } => out.push(*vertex),
            DecompositionTree::Union(children) => children.iter().for_each(|c| c.collect_leaves(out)),
            DecompositionTree::Cone { child, .. } => child.collect_leaves(out),
        }
    }

    /// Rebuilds the digraph with [`Subdigraph::disjoint_union`] and [`Subdigraph::cone`].
    pub fn replay(&self, g: &Digraph) -> Result<Subdigraph> {
        match self {
            DecompositionTree::Leaf { vertex, special } => Subdigraph::single(g.name(*vertex), *special),
            DecompositionTree::Union(children) => {
                let mut parts = children.iter().map(|c| c.replay(g));
                let first = parts
                    .next()
                    .ok_or_else(|| Error::Internal("union without children".into()))??;
                parts.try_fold(first, |acc, part| {
                    let (joined, renames) = acc.disjoint_union(&part?);
                    if !renames.is_empty() {
                        return Err(Error::Internal("decomposition reuses a vertex".into()));
                    }
                    Ok(joined)
                })
            }
            DecompositionTree::Cone { tip, child } => child.replay(g)?.cone(g.name(*tip)),
        }
    }

    pub fn to_json(&self, g: &Digraph) -> Value {
        match self {
            DecompositionTree::Leaf { vertex, special } => {
                json!({"leaf": g.name(*vertex), "special": special})
            }
            DecompositionTree::Union(children) => {
                json!({"union": children.iter().map(|c| c.to_json(g)).collect::<Vec<_>>()})
            }
            DecompositionTree::Cone { tip, child } => json!({"cone": g.name(*tip), "over": child.to_json(g)}),
        }
    }

    /// Compact text form, e.g. `Cone(v4, Cone(v2, Union(Leaf v1, Leaf v3)))`.
    pub fn render(&self, g: &Digraph) -> String {
        match self {
            DecompositionTree::Leaf { vertex, .. } => format!("Leaf {}", g.name(*vertex)),
            DecompositionTree::Union(children) => {
                let inner: Vec<String> = children.iter().map(|c| c.render(g)).collect();
                format!("Union({})", inner.join(", "))
            }
            DecompositionTree::Cone { tip, child } => format!("Cone({}, {})", g.name(*tip), child.render(g)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `None` only for the empty digraph.
    Elementary(Option<DecompositionTree>),
    NotSpecial(SpecialOffender),
    /// A connected induced subdigraph (vertex mask) with no universal ordinary vertex.
    Stuck(u64),
}

impl Decomposition {
    pub fn is_elementary(&self) -> bool {
        matches!(self, Decomposition::Elementary(_))
    }
}

fn universal_ordinary(g: &Digraph, mask: u64, special: u64, choice: TipChoice) -> Option<usize> {
    let mut candidates = members(mask & !special).filter(|&u| g.adjacency(u) & mask == mask & !bit(u));
    match choice {
        TipChoice::Lowest => candidates.next(),
        TipChoice::Highest => candidates.last(),
    }
}

// In a special digraph a universal ordinary vertex is joined ordinarily to
// ordinary vertices and by special edges into special vertices.
fn assert_cone_edges(g: &Digraph, tip: usize, rest: u64, special: u64) {
    for v in members(rest) {
        let expected = if special & bit(v) != 0 {
            PairState::SpecialToward(v)
        } else {
            PairState::Ordinary
        };
        assert_eq!(g.state(tip, v), expected, "cone tip {tip} has an unexpected edge to {v}");
    }
}

fn decompose_mask(g: &Digraph, mask: u64, special: u64, choice: TipChoice) -> std::result::Result<DecompositionTree, u64> {
    if mask.count_ones() == 1 {
        let v = mask.trailing_zeros() as usize;
        return Ok(DecompositionTree::Leaf {
            vertex: v,
            special: special & bit(v) != 0,
        });
    }
    let comps = g.components(mask);
    if comps.len() > 1 {
        return comps
            .into_iter()
            .map(|c| decompose_mask(g, c, special, choice))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(DecompositionTree::Union);
    }
    let tip = universal_ordinary(g, mask, special, choice).ok_or(mask)?;
    let rest = mask & !bit(tip);
    assert_cone_edges(g, tip, rest, special);
    Ok(DecompositionTree::Cone {
        tip,
        child: Box::new(decompose_mask(g, rest, special, choice)?),
    })
}

/// Deconstructs `g` into cones and disjoint unions, or reports where that fails.
pub fn decompose(g: &Digraph) -> Decomposition {
    decompose_with(g, TipChoice::default())
}

pub fn decompose_with(g: &Digraph, choice: TipChoice) -> Decomposition {
    if let Some(off) = special_offender(g) {
        return Decomposition::NotSpecial(off);
    }
    if g.is_empty() {
        return Decomposition::Elementary(None);
    }
    match decompose_mask(g, g.full_mask(), g.special_mask(), choice) {
        Ok(tree) => Decomposition::Elementary(Some(tree)),
        Err(stuck) => Decomposition::Stuck(stuck),
    }
}

fn elementary_mask(g: &Digraph, mask: u64, special: u64, choice: TipChoice) -> bool {
    if mask.count_ones() <= 1 {
        return true;
    }
    let comps = g.components(mask);
    if comps.len() > 1 {
        return comps.into_iter().all(|c| elementary_mask(g, c, special, choice));
    }
    match universal_ordinary(g, mask, special, choice) {
        Some(tip) => elementary_mask(g, mask & !bit(tip), special, choice),
        None => false,
    }
}

/// Verdict of [`decompose`] without building the tree.
pub fn is_elementary_type(g: &Digraph) -> bool {
    is_elementary_type_with(g, TipChoice::default())
}

pub fn is_elementary_type_with(g: &Digraph, choice: TipChoice) -> bool {
    is_special(g) && elementary_mask(g, g.full_mask(), g.special_mask(), choice)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternVerdict {
    pub elementary: bool,
    pub witness: Option<ForbiddenWitness>,
}

fn find_lambda(g: &Digraph) -> Option<ForbiddenWitness> {
    for x in 0..g.len() {
        let tails = g.special_in(x) & !g.special_mask();
        for z in members(tails) {
            let free = tails & !g.adjacency(z) & !((bit(z) << 1) - 1);
            if let Some(y) = members(free).next() {
                return Some(ForbiddenWitness {
                    pattern: Pattern::Lambda,
                    vertices: vec![z, x, y],
                });
            }
        }
    }
    None
}

fn find_square(g: &Digraph) -> Option<ForbiddenWitness> {
    let ordinary = !g.special_mask() & g.full_mask();
    for x in members(ordinary) {
        let above = !((bit(x) << 1) - 1);
        let nbrs = g.ordinary_neighbors(x) & ordinary & above;
        for y in members(nbrs) {
            let ws = nbrs & !((bit(y) << 1) - 1) & !g.adjacency(y);
            for w in members(ws) {
                let zs = g.ordinary_neighbors(y) & g.ordinary_neighbors(w) & ordinary & above & !g.adjacency(x);
                if let Some(z) = members(zs & !bit(x)).next() {
                    return Some(ForbiddenWitness {
                        pattern: Pattern::Square,
                        vertices: vec![x, y, z, w],
                    });
                }
            }
        }
    }
    None
}

fn find_path4(g: &Digraph) -> Option<ForbiddenWitness> {
    let ordinary = !g.special_mask() & g.full_mask();
    for y in members(ordinary) {
        for z in members(g.ordinary_neighbors(y) & ordinary) {
            // (y, x) ∈ E and (z, w) ∈ E, each edge ordinary or special
            let xs = (g.ordinary_neighbors(y) | g.special_out(y)) & !g.adjacency(z) & !bit(z);
            let ws = (g.ordinary_neighbors(z) | g.special_out(z)) & !g.adjacency(y) & !bit(y);
            for x in members(xs) {
                if let Some(w) = members(ws & !g.adjacency(x) & !bit(x)).next() {
                    // each path is found from both ends; report the one with y < z
                    let vertices = if y < z { vec![x, y, z, w] } else { vec![w, z, y, x] };
                    return Some(ForbiddenWitness {
                        pattern: Pattern::Path4,
                        vertices,
                    });
                }
            }
        }
    }
    None
}

/// Elementary type via forbidden induced subdigraphs (Λ, then square, then path).
pub fn elementary_by_patterns(g: &Digraph) -> PatternVerdict {
    if !is_special(g) {
        return PatternVerdict {
            elementary: false,
            witness: first_forbidden_triple(g),
        };
    }
    let witness = find_lambda(g).or_else(|| find_square(g)).or_else(|| find_path4(g));
    PatternVerdict {
        elementary: witness.is_none(),
        witness,
    }
}

/// Checks that the induced subdigraph on a witness matches its pattern exactly.
pub fn witness_matches(g: &Digraph, w: &ForbiddenWitness) -> bool {
    let v = &w.vertices;
    let special = |i: usize| g.is_special_vertex(v[i]);
    let st = |i: usize, j: usize| g.state(v[i], v[j]);
    let toward = |i: usize| PairState::SpecialToward(v[i]);
    match w.pattern {
        Pattern::Lambda => {
            v.len() == 3
                && st(0, 1) == toward(1)
                && st(2, 1) == toward(1)
                && st(0, 2) == PairState::None
                && special(1)
                && !special(0)
                && !special(2)
        }
        Pattern::Square => {
            v.len() == 4
                && (0..4).all(|i| !special(i) && st(i, (i + 1) % 4) == PairState::Ordinary)
                && st(0, 2) == PairState::None
                && st(1, 3) == PairState::None
        }
        Pattern::Path4 => {
            v.len() == 4
                && !special(1)
                && !special(2)
                && st(1, 2) == PairState::Ordinary
                && matches!(st(0, 1), PairState::Ordinary) | (st(0, 1) == toward(0))
                && matches!(st(2, 3), PairState::Ordinary) | (st(2, 3) == toward(3))
                && st(0, 2) == PairState::None
                && st(0, 3) == PairState::None
                && st(1, 3) == PairState::None
        }
        p => v.len() == 3 && triple_role(g, v[0], v[1], v[2]) == Some(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // v2 → v1, v3 → v1, v4 → v1, v2 -- v3, v3 -- v4
    fn four_vertex_sinkhole() -> Digraph {
        Digraph::with_generated_ids(4)
            .unwrap()
            .with_special(1, 0)
            .with_special(2, 0)
            .with_special(3, 0)
            .with_ordinary(1, 2)
            .with_ordinary(2, 3)
    }

    // v2 → v1, v2 → v3, v4 → v1, v4 → v3, v2 -- v4
    fn double_cone() -> Digraph {
        Digraph::with_generated_ids(4)
            .unwrap()
            .with_special(1, 0)
            .with_special(1, 2)
            .with_special(3, 0)
            .with_special(3, 2)
            .with_ordinary(1, 3)
    }

    // v4 → v1 with v1 -- v2, v2 -- v3, v3 -- v4, v2 -- v4
    fn non_sinkhole() -> Digraph {
        Digraph::with_generated_ids(4)
            .unwrap()
            .with_ordinary(0, 1)
            .with_ordinary(1, 2)
            .with_special(3, 0)
            .with_ordinary(3, 2)
            .with_ordinary(3, 1)
    }

    #[test]
    fn sinkhole_example_is_special_but_not_elementary() {
        let g = four_vertex_sinkhole();
        assert!(is_special(&g));
        assert!(forbidden_triples(&g).is_empty());
        assert_eq!(decompose(&g), Decomposition::Stuck(0b1011));
        let v = elementary_by_patterns(&g);
        assert!(!v.elementary);
        let w = v.witness.unwrap();
        assert_eq!(w.pattern, Pattern::Lambda);
        assert_eq!(w.vertices, vec![1, 0, 3]);
        assert!(witness_matches(&g, &w));
    }

    #[test]
    fn non_sinkhole_offender() {
        let g = non_sinkhole();
        let off = special_offender(&g).unwrap();
        assert_eq!(off.vertex, 0);
        assert_eq!(off.state, PairState::Ordinary);
        let triples = forbidden_triples(&g);
        assert!(!triples.is_empty());
        assert!(triples.iter().any(|w| w.vertices.contains(&0) && w.vertices.contains(&3)));
        assert!(triples.iter().all(|w| witness_matches(&g, w)));
    }

    #[test]
    fn double_cone_tree_and_replay() {
        let g = double_cone();
        let Decomposition::Elementary(Some(tree)) = decompose(&g) else {
            panic!("expected elementary type");
        };
        assert_eq!(tree.render(&g), "Cone(v4, Cone(v2, Union(Leaf v1, Leaf v3)))");
        let rebuilt = tree.replay(&g).unwrap();
        assert_eq!(rebuilt.graph.induced_by_names(&["v1", "v2", "v3", "v4"]).unwrap(), g);
        let lowest = decompose_with(&g, TipChoice::Lowest);
        let Decomposition::Elementary(Some(other)) = lowest else { panic!() };
        assert_eq!(other.render(&g), "Cone(v2, Cone(v4, Union(Leaf v1, Leaf v3)))");
    }

    #[test]
    fn undigraphs_are_special_and_squares_are_caught() {
        let square = Digraph::with_generated_ids(4)
            .unwrap()
            .with_ordinary(0, 1)
            .with_ordinary(1, 2)
            .with_ordinary(2, 3)
            .with_ordinary(3, 0);
        assert!(is_special(&square));
        let v = elementary_by_patterns(&square);
        assert_eq!(v.witness.as_ref().unwrap().pattern, Pattern::Square);
        assert!(witness_matches(&square, v.witness.as_ref().unwrap()));
        assert!(!is_elementary_type(&square));

        let path = Digraph::with_generated_ids(4)
            .unwrap()
            .with_ordinary(0, 1)
            .with_ordinary(1, 2)
            .with_ordinary(2, 3);
        let v = elementary_by_patterns(&path);
        assert_eq!(v.witness.as_ref().unwrap().pattern, Pattern::Path4);
        assert_eq!(v.witness.as_ref().unwrap().vertices, vec![0, 1, 2, 3]);
        assert!(!is_elementary_type(&path));
    }

    #[test]
    fn trivial_digraphs_are_elementary() {
        let single = Digraph::new(["a"]).unwrap();
        assert!(elementary_by_patterns(&single).elementary);
        assert!(is_elementary_type(&single));
        let empty = Digraph::new(Vec::<String>::new()).unwrap();
        assert_eq!(decompose(&empty), Decomposition::Elementary(None));
        assert!(elementary_by_patterns(&empty).elementary);
    }

    #[test]
    fn cycle_coincidence_is_reported_once() {
        // z → x, x -- y, y → z is the ordinary-chord chain read from y
        let g = Digraph::new(["z", "x", "y"]).unwrap().with_special(0, 1).with_ordinary(1, 2).with_special(2, 0);
        let w = forbidden_triples(&g);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].pattern, Pattern::ChainOrdinaryChord);
        assert_eq!(w[0].vertices, vec![2, 0, 1]);
        assert!(witness_matches(&g, &w[0]));
    }
}
