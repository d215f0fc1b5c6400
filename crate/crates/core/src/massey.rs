//! Unitriangular representations over `Z/p` and the triple Massey product tests.
//!
//! A triple `(α1, α2, α3)` of characters is *defined* when some homomorphism
//! to `U_4 / Z(U_4)` has superdiagonal `(α1, α2, α3)`, and *vanishes* when such
//! a homomorphism to `U_4` exists. The scan looks for defined triples that do
//! not vanish.

use serde::Serialize;
use serde_json::{json, Value};

use crate::digraph::{Digraph, PairState};
use crate::error::{Error, Result};
use crate::par::{map_reduce, Exec};
use crate::presentation::{character_space, PrimePower};

pub const DEFAULT_BUDGET: u64 = 20_000;

/// Upper unitriangular `n × n` matrix over `Z/p`, `n ∈ {3, 4}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UniTri {
    n: usize,
    p: u64,
    /// Entries above the diagonal, row-major in a 4×4 array.
    a: [[u64; 4]; 4],
}

impl UniTri {
    pub fn identity(n: usize, p: u64) -> Self {
        assert!(n == 3 || n == 4, "only U_3 and U_4 are supported");
        UniTri { n, p, a: [[0; 4]; 4] }
    }

    /// Matrix with the given `((i, j), value)` entries, 0-based, `i < j`.
    pub fn from_entries(n: usize, p: u64, entries: &[((usize, usize), u64)]) -> Self {
        let mut m = Self::identity(n, p);
        for &((i, j), v) in entries {
            m.set(i, j, v);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        if i == j {
            1
        } else if i < j {
            self.a[i][j]
        } else {
            0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        assert!(i < j && j < self.n, "entry ({i}, {j}) is not strictly upper");
        self.a[i][j] = v % self.p;
    }

    pub fn is_identity(&self) -> bool {
        self.a == [[0; 4]; 4]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert!(self.n == o.n && self.p == o.p, "mismatched unitriangular shapes");
        let mut out = Self::identity(self.n, self.p);
        for i in 0..self.n {
            for j in i + 1..self.n {
                let s: u64 = (i..=j).map(|k| self.get(i, k) * o.get(k, j)).sum();
                out.a[i][j] = s % self.p;
            }
        }
        out
    }

    /// `(I + N)^-1 = I - N + N^2 - N^3`.
    pub fn inverse(&self) -> Self {
        let nil = *self;
        let mut term = *self;
        let mut out = Self::identity(self.n, self.p);
        let p = self.p;
        for sign in [p - 1, 1, p - 1] {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    out.a[i][j] = (out.a[i][j] + sign * term.a[i][j]) % p;
                }
            }
            // next power of the strictly upper part
            let mut next = [[0u64; 4]; 4];
            for i in 0..self.n {
                for j in i + 1..self.n {
                    next[i][j] = (i + 1..j).map(|k| term.a[i][k] * nil.a[k][j]).sum::<u64>() % p;
                }
            }
            term.a = next;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.n, self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    /// Drops the top-right corner: the image in `U_4 / Z(U_4)`.
    pub fn mod_center(&self) -> Self {
        let mut m = *self;
        m.a[0][self.n - 1] = 0;
        m
    }

    pub fn superdiagonal(&self) -> Vec<u64> {
        (0..self.n - 1).map(|i| self.a[i][i + 1]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }
}

impl std::fmt::Debug for UniTri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "U{}{:?}", self.n, self.rows())
    }
}

impl Serialize for UniTri {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// Where the homomorphism lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    U3,
    U4,
    /// `U_4 / Z(U_4)`; matrices are kept with a zero top-right corner.
    U4ModCenter,
}

impl Target {
    fn n(self) -> usize {
        match self {
            Target::U3 => 3,
            _ => 4,
        }
    }

    fn free_entries(self) -> &'static [(usize, usize)] {
        match self {
            Target::U3 => &[(0, 2)],
            Target::U4 => &[(0, 2), (0, 3), (1, 3)],
            Target::U4ModCenter => &[(0, 2), (1, 3)],
        }
    }

    fn normalize(self, m: UniTri) -> UniTri {
        match self {
            Target::U4ModCenter => m.mod_center(),
            _ => m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Commute,
    /// `M_actor M_acted M_actor^-1 = M_acted^(1+q)`.
    Act { actor_is_later: bool },
}

/// Relations between `v` and earlier vertices, for incremental checking.
fn relations_by_vertex(g: &Digraph) -> Vec<Vec<(usize, Rel)>> {
    let mut out = vec![Vec::new(); g.len()];
    for (a, b, s) in g.pairs() {
        // a < b, so b is the later vertex
        let rel = match s {
            PairState::Ordinary => Rel::Commute,
            PairState::SpecialToward(w) => Rel::Act { actor_is_later: w == b },
            PairState::None => continue,
        };
        out[b].push((a, rel));
    }
    out
}

fn relation_holds(target: Target, rel: Rel, earlier: &UniTri, later: &UniTri, q: u64) -> bool {
    let norm = |m: UniTri| target.normalize(m);
    match rel {
        Rel::Commute => norm(earlier.mul(later)) == norm(later.mul(earlier)),
        Rel::Act { actor_is_later } => {
            let (actor, acted) = if actor_is_later { (later, earlier) } else { (earlier, later) };
            norm(actor.mul(acted).mul(&actor.inverse())) == norm(acted.pow(q + 1))
        }
    }
}

/// Checks every relator of `g` on an assignment, from scratch.
pub fn relator_holds(assignment: &[UniTri], g: &Digraph, q: u64) -> bool {
    relator_holds_in(Target::U4, assignment, g, q)
}

fn relator_holds_in(target: Target, assignment: &[UniTri], g: &Digraph, q: u64) -> bool {
    g.pairs().all(|(a, b, s)| {
        let (ma, mb) = (&assignment[a], &assignment[b]);
        match s {
            PairState::Ordinary => target.normalize(ma.mul(mb)) == target.normalize(mb.mul(ma)),
            PairState::SpecialToward(w) => {
                let (actor, acted) = if w == a { (ma, mb) } else { (mb, ma) };
                target.normalize(actor.mul(acted).mul(&actor.inverse())) == target.normalize(acted.pow(q + 1))
            }
            PairState::None => true,
        }
    })
}

/// Backtracking search for a homomorphism with prescribed superdiagonal.
/// `superdiag[i][v]` is the `(i, i+1)` entry for vertex `v`.
#[derive(Clone, Debug)]
pub struct HomSearch<'a> {
    g: &'a Digraph,
    p: u64,
    q: u64,
    target: Target,
    superdiag: Vec<Vec<u64>>,
    relations: Vec<Vec<(usize, Rel)>>,
}

impl<'a> HomSearch<'a> {
    pub fn new(g: &'a Digraph, params: PrimePower, target: Target, superdiag: Vec<Vec<u64>>) -> Result<Self> {
        if superdiag.len() != target.n() - 1 || superdiag.iter().any(|c| c.len() != g.len()) {
            return Err(Error::InvalidInput(format!(
                "need {} characters with one value per vertex",
                target.n() - 1
            )));
        }
        let p = params.p;
        Ok(HomSearch {
            g,
            p,
            q: params.q,
            target,
            superdiag: superdiag.into_iter().map(|c| c.into_iter().map(|v| v % p).collect()).collect(),
            relations: relations_by_vertex(g),
        })
    }

    /// Number of candidate matrices per vertex.
    pub fn choices(&self) -> u64 {
        self.p.pow(self.target.free_entries().len() as u32)
    }

    fn candidate(&self, v: usize, index: u64) -> UniTri {
        let n = self.target.n();
        let mut m = UniTri::identity(n, self.p);
        for i in 0..n - 1 {
            m.set(i, i + 1, self.superdiag[i][v]);
        }
        let free = self.target.free_entries();
        let mut rest = index;
        for &(i, j) in free.iter().rev() {
            m.set(i, j, rest % self.p);
            rest /= self.p;
        }
        m
    }

    fn extend(&self, v: usize, partial: &mut Vec<UniTri>) -> bool {
        if v == self.g.len() {
            return true;
        }
        for c in 0..self.choices() {
            let m = self.candidate(v, c);
            let ok = self.relations[v]
                .iter()
                .all(|&(u, rel)| relation_holds(self.target, rel, &partial[u], &m, self.q));
            if ok {
                partial.push(m);
                if self.extend(v + 1, partial) {
                    return true;
                }
                partial.pop();
            }
        }
        false
    }

    /// Lexicographically least solution whose first vertex uses a choice in `first`.
    pub fn find_in(&self, first: std::ops::Range<u64>) -> Option<Vec<UniTri>> {
        if self.g.is_empty() {
            return Some(Vec::new());
        }
        for c in first {
            let mut partial = vec![self.candidate(0, c)];
            if self.extend(1, &mut partial) {
                return Some(partial);
            }
        }
        None
    }

    pub fn find(&self) -> Option<Vec<UniTri>> {
        self.find_in(0..self.choices())
    }

    /// Same answer as [`find`](Self::find), with the first vertex's choices split across workers.
    pub fn find_with(&self, exec: Exec) -> Option<Vec<UniTri>> {
        if self.g.is_empty() {
            return Some(Vec::new());
        }
        map_reduce(exec, self.choices(), 1, |r| self.find_in(r), || None, |a, b| a.or(b))
    }

    /// Independent check of a found assignment.
    pub fn verify(&self, assignment: &[UniTri]) -> bool {
        assignment.len() == self.g.len()
            && assignment.iter().enumerate().all(|(v, m)| {
                m.n() == self.target.n() && (0..m.n() - 1).all(|i| m.get(i, i + 1) == self.superdiag[i][v])
            })
            && relator_holds_in(self.target, assignment, self.g, self.q)
    }
}

pub fn find_hom_u3(g: &Digraph, params: PrimePower, alpha: &[u64], beta: &[u64]) -> Result<Option<Vec<UniTri>>> {
    Ok(HomSearch::new(g, params, Target::U3, vec![alpha.to_vec(), beta.to_vec()])?.find())
}

pub fn find_hom_u4(g: &Digraph, params: PrimePower, alphas: [&[u64]; 3]) -> Result<Option<Vec<UniTri>>> {
    Ok(HomSearch::new(g, params, Target::U4, alphas.iter().map(|a| a.to_vec()).collect())?.find())
}

pub fn find_hom_u4_mod_center(g: &Digraph, params: PrimePower, alphas: [&[u64]; 3]) -> Result<Option<Vec<UniTri>>> {
    Ok(HomSearch::new(g, params, Target::U4ModCenter, alphas.iter().map(|a| a.to_vec()).collect())?.find())
}

/// Verdicts for one character triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    pub alpha: [Vec<u64>; 3],
    pub defined: bool,
    pub vanishes: bool,
    /// A pair of `U_3` lifts exists for `(α1, α2)` and for `(α2, α3)`.
    pub pair_criterion: bool,
    pub witness_u4: Option<Vec<UniTri>>,
    pub witness_mod_center: Option<Vec<UniTri>>,
    pub reverified: bool,
}

pub fn lift(g: &Digraph, params: PrimePower, alpha: [Vec<u64>; 3]) -> Result<LiftReport> {
    let sd = alpha.to_vec();
    let u4 = HomSearch::new(g, params, Target::U4, sd.clone())?;
    let quo = HomSearch::new(g, params, Target::U4ModCenter, sd)?;
    let tau = HomSearch::new(g, params, Target::U3, vec![alpha[0].clone(), alpha[1].clone()])?;
    let tau2 = HomSearch::new(g, params, Target::U3, vec![alpha[1].clone(), alpha[2].clone()])?;
    let w4 = u4.find();
    let wq = quo.find();
    let (t1, t2) = (tau.find(), tau2.find());
    let reverified = w4.as_ref().is_none_or(|w| u4.verify(w))
        && wq.as_ref().is_none_or(|w| quo.verify(w))
        && t1.as_ref().is_none_or(|w| tau.verify(w))
        && t2.as_ref().is_none_or(|w| tau2.verify(w));
    Ok(LiftReport {
        alpha,
        defined: wq.is_some(),
        vanishes: w4.is_some(),
        pair_criterion: t1.is_some() && t2.is_some(),
        witness_u4: w4,
        witness_mod_center: wq,
        reverified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub q: u64,
    pub vertices: usize,
    pub triples: u64,
    pub defined: u64,
    pub vanishes: u64,
    /// Triples that are defined but do not vanish.
    pub violations: Vec<[Vec<u64>; 3]>,
    /// Triples where the `U_4 / Z` search and the pair-of-`U_3` criterion disagree.
    pub pair_mismatches: Vec<[Vec<u64>; 3]>,
    /// A triple that vanishes without being defined (never expected).
    pub monotonicity_failures: u64,
    pub reverified: bool,
}

#[derive(Default)]
struct ScanTally {
    defined: u64,
    vanishes: u64,
    violations: Vec<u64>,
    mismatches: Vec<u64>,
    monotonicity: u64,
    reverified: bool,
}

fn triple_of(index: u64, n: usize, p: u64) -> [Vec<u64>; 3] {
    let per = p.pow(n as u32);
    let digits = |mut i: u64| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = i % p;
            i /= p;
        }
        v
    };
    [digits(index / (per * per)), digits((index / per) % per), digits(index % per)]
}

/// Work estimate for a scan: the number of character triples.
pub fn scan_cost(g: &Digraph, p: u64) -> Option<u64> {
    p.checked_pow(3 * g.len() as u32)
}

pub fn massey_scan(g: &Digraph, params: PrimePower, budget: u64, exec: Exec) -> Result<ScanReport> {
    let p = params.p;
    let triples = scan_cost(g, p).unwrap_or(u64::MAX);
    if triples > budget {
        return Err(Error::BudgetExceeded {
            required: triples,
            budget,
        });
    }
    let n = g.len();
    let tally = map_reduce(
        exec,
        triples,
        64,
        |range| {
            let mut t = ScanTally {
                reverified: true,
                ..Default::default()
            };
            for idx in range {
                let alpha = triple_of(idx, n, p);
                let r = lift(g, params, alpha).expect("triple has the right shape");
                t.defined += r.defined as u64;
                t.vanishes += r.vanishes as u64;
                if r.defined && !r.vanishes {
                    t.violations.push(idx);
                }
                if r.defined != r.pair_criterion {
                    t.mismatches.push(idx);
                }
                if r.vanishes && !r.defined {
                    t.monotonicity += 1;
                }
                t.reverified &= r.reverified;
            }
            t
        },
        || ScanTally {
            reverified: true,
            ..Default::default()
        },
        |mut a, b| {
            a.defined += b.defined;
            a.vanishes += b.vanishes;
            a.violations.extend(b.violations);
            a.mismatches.extend(b.mismatches);
            a.monotonicity += b.monotonicity;
            a.reverified &= b.reverified;
            a
        },
    );
    Ok(ScanReport {
        p,
        q: params.q,
        vertices: n,
        triples,
        defined: tally.defined,
        vanishes: tally.vanishes,
        violations: tally.violations.into_iter().map(|i| triple_of(i, n, p)).collect(),
        pair_mismatches: tally.mismatches.into_iter().map(|i| triple_of(i, n, p)).collect(),
        monotonicity_failures: tally.monotonicity,
        reverified: tally.reverified,
    })
}

/// Relations of the mod-`p` Heisenberg presentation of `U_3` on the standard generators.
pub fn heisenberg_relations(p: u64) -> Value {
    let a = UniTri::from_entries(3, p, &[((0, 1), 1)]);
    let b = UniTri::from_entries(3, p, &[((1, 2), 1)]);
    let c = UniTri::from_entries(3, p, &[((0, 2), 1)]);
    let i = UniTri::identity(3, p);
    json!({
        "[A,B] = C": a.commutator(&b) == c,
        "A^p = I": a.pow(p) == i,
        "B^p = I": b.pow(p) == i,
        "[A,C] = I": a.commutator(&c) == i,
        "[B,C] = I": b.commutator(&c) == i,
    })
}

/// Every character on a digraph with `n` vertices, exposed for exhaustive checks.
pub fn characters(n: usize, p: u64) -> Vec<Vec<u64>> {
    character_space(n, p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p: u64, f: u32) -> PrimePower {
        PrimePower::new(p, f).unwrap()
    }

    #[test]
    fn heisenberg_relations_hold() {
        for p in [2, 3, 5] {
            let r = heisenberg_relations(p);
            assert!(r.as_object().unwrap().values().all(|v| v == true), "{p}: {r}");
        }
    }

    #[test]
    fn a_b_product_shape() {
        let p = 5;
        let a = UniTri::from_entries(3, p, &[((0, 1), 1)]);
        let b = UniTri::from_entries(3, p, &[((1, 2), 1)]);
        let m = a.pow(2).mul(&b.pow(3));
        assert_eq!(m.rows(), vec![vec![1, 2, 1], vec![0, 1, 3], vec![0, 0, 1]]);
    }

    #[test]
    fn trivial_searches() {
        let single = Digraph::new(["v"]).unwrap();
        let pp = params(2, 2);
        assert!(find_hom_u4(&single, pp, [&[1], &[1], &[1]]).unwrap().is_some());
        let edgeless = Digraph::with_generated_ids(3).unwrap();
        assert!(find_hom_u3(&edgeless, pp, &[1, 0, 1], &[0, 1, 1]).unwrap().is_some());
        let lambda = Digraph::new(["x", "y", "z"]).unwrap().with_special(1, 0).with_special(2, 0);
        let zero = [0u64; 3];
        assert!(find_hom_u4(&lambda, pp, [&zero, &zero, &zero]).unwrap().is_some());
        assert!(find_hom_u4_mod_center(&lambda, pp, [&zero, &zero, &zero]).unwrap().is_some());
        let ids = vec![UniTri::identity(4, 2); 3];
        assert!(relator_holds(&ids, &lambda, 4));
        assert!(HomSearch::new(&lambda, pp, Target::U4, vec![vec![0; 3]; 2]).is_err());
    }

    // Reference: full enumeration of all assignments without pruning.
    fn brute_force(g: &Digraph, pp: PrimePower, target: Target, sd: Vec<Vec<u64>>) -> bool {
        let s = HomSearch::new(g, pp, target, sd).unwrap();
        let per = s.choices();
        let total = per.pow(g.len() as u32);
        (0..total).any(|mut idx| {
            let assignment: Vec<UniTri> = (0..g.len())
                .rev()
                .map(|v| {
                    let c = idx % per;
                    idx /= per;
                    s.candidate(v, c)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            relator_holds_in(target, &assignment, g, pp.q)
        })
    }

    #[test]
    fn ordinary_edge_triples_match_brute_force() {
        let g = Digraph::with_generated_ids(2).unwrap().with_ordinary(0, 1);
        let pp = params(2, 2);
        let chars = characters(2, 2);
        let mut vanishing = 0;
        for a in &chars {
            for b in &chars {
                for c in &chars {
                    let sd = vec![a.clone(), b.clone(), c.clone()];
                    let found = find_hom_u4(&g, pp, [a, b, c]).unwrap().is_some();
                    assert_eq!(found, brute_force(&g, pp, Target::U4, sd));
                    vanishing += found as u32;
                }
            }
        }
        assert_eq!(vanishing, 28);
        let scan = massey_scan(&g, pp, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        assert_eq!((scan.triples, scan.defined, scan.vanishes), (64, 28, 28));
    }

    #[test]
    fn lambda_u3_matches_brute_force() {
        let lambda = Digraph::new(["x", "y", "z"]).unwrap().with_special(1, 0).with_special(2, 0);
        let pp = params(2, 2);
        for a in characters(3, 2) {
            for b in characters(3, 2) {
                let found = find_hom_u3(&lambda, pp, &a, &b).unwrap().is_some();
                assert_eq!(found, brute_force(&lambda, pp, Target::U3, vec![a.clone(), b.clone()]));
            }
        }
    }

    #[test]
    fn parallel_search_agrees() {
        let g = Digraph::with_generated_ids(3).unwrap().with_special(0, 1).with_ordinary(1, 2);
        let pp = params(3, 1);
        for a in characters(3, 3).into_iter().step_by(5) {
            let s = HomSearch::new(&g, pp, Target::U4, vec![a.clone(), a.clone(), a.clone()]).unwrap();
            assert_eq!(s.find(), s.find_with(Exec::Parallel));
        }
    }

    #[test]
    fn scan_budget_and_modes() {
        let g = Digraph::with_generated_ids(3).unwrap().with_ordinary(0, 1).with_special(1, 2);
        let pp = params(2, 2);
        let a = massey_scan(&g, pp, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        let b = massey_scan(&g, pp, DEFAULT_BUDGET, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.violations.is_empty() && a.pair_mismatches.is_empty() && a.reverified);
        assert!(matches!(
            massey_scan(&g, params(3, 1), 1000, Exec::Sequential),
            Err(Error::BudgetExceeded { required: 19683, budget: 1000 })
        ));
    }

    proptest! {
        #[test]
        fn group_laws(e in prop::array::uniform6(0u64..5), f in prop::array::uniform6(0u64..5)) {
            let pos = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let m = UniTri::from_entries(4, 5, &pos.iter().copied().zip(e).collect::<Vec<_>>());
            let k = UniTri::from_entries(4, 5, &pos.iter().copied().zip(f).collect::<Vec<_>>());
            prop_assert!(m.mul(&m.inverse()).is_identity());
            prop_assert!(m.inverse().mul(&m).is_identity());
            prop_assert_eq!(m.mul(&k).mod_center(), m.mod_center().mul(&k.mod_center()).mod_center());
            prop_assert_eq!(m.pow(5), UniTri::identity(4, 5));
        }
    }
}
