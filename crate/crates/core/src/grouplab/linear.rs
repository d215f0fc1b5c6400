//! Linear systems over `Z/p^k` via Smith normal form.

use crate::padic::{PAdicRing, TruncatedPAdic, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Solvable(Vec<TruncatedPAdic>),
    /// A row vector `y` with `y A = 0` and `y b != 0`.
    Unsolvable(Vec<TruncatedPAdic>),
}

pub fn mat_vec(a: &[Vec<TruncatedPAdic>], x: &[TruncatedPAdic], ring: &PAdicRing) -> Vec<TruncatedPAdic> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(ring.zero(), |acc, (r, v)| acc + *r * *v))
        .collect()
}

pub fn vec_mat(y: &[TruncatedPAdic], a: &[Vec<TruncatedPAdic>], cols: usize, ring: &PAdicRing) -> Vec<TruncatedPAdic> {
    (0..cols)
        .map(|j| y.iter().zip(a).fold(ring.zero(), |acc, (c, row)| acc + *c * row[j]))
        .collect()
}

fn dot(y: &[TruncatedPAdic], b: &[TruncatedPAdic], ring: &PAdicRing) -> TruncatedPAdic {
    y.iter().zip(b).fold(ring.zero(), |acc, (u, v)| acc + *u * *v)
}

/// Solves `A x = b` over `Z/p^k`. Every answer is checked by direct
/// multiplication before it is returned.
pub fn solve(a: &[Vec<TruncatedPAdic>], b: &[TruncatedPAdic], ring: &PAdicRing) -> LinearSolution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let k = ring.precision();
    let mut d: Vec<Vec<TruncatedPAdic>> = a.to_vec();
    // left and right transforms: left * A * right = d
    let mut left: Vec<Vec<TruncatedPAdic>> = (0..rows)
        .map(|i| (0..rows).map(|j| ring.from_int((i == j) as i128)).collect())
        .collect();
    let mut right: Vec<Vec<TruncatedPAdic>> = (0..cols)
        .map(|i| (0..cols).map(|j| ring.from_int((i == j) as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    for r in 0..rows.min(cols) {
        let best = (r..rows)
            .flat_map(|i| (r..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !d[i][j].is_zero())
            .min_by_key(|&(i, j)| (d[i][j].valuation().lower_bound(), i, j));
        let Some((pi, pj)) = best else { break };
        d.swap(r, pi);
        left.swap(r, pi);
        for row in d.iter_mut() {
            row.swap(r, pj);
        }
        for row in right.iter_mut() {
            row.swap(r, pj);
        }
        // scale column r so the pivot is exactly p^e
        let e = d[r][r].valuation().lower_bound();
        let unit = ring
            .from_int((d[r][r].value() / ring.p().pow(e)) as i128)
            .inv()
            .expect("pivot cofactor is a unit");
        for row in d.iter_mut() {
            row[r] = row[r] * unit;
        }
        for row in right.iter_mut() {
            row[r] = row[r] * unit;
        }
        let pe = ring.p().pow(e);
        for i in 0..rows {
            if i != r && !d[i][r].is_zero() {
                let factor = ring.from_int((d[i][r].value() / pe) as i128);
                for j in 0..cols {
                    let delta = factor * d[r][j];
                    d[i][j] = d[i][j] - delta;
                }
                for j in 0..rows {
                    let delta = factor * left[r][j];
                    left[i][j] = left[i][j] - delta;
                }
            }
        }
        for j in 0..cols {
            if j != r && !d[r][j].is_zero() {
                let factor = ring.from_int((d[r][j].value() / pe) as i128);
                for i in 0..rows {
                    let delta = factor * d[i][r];
                    d[i][j] = d[i][j] - delta;
                }
                for row in right.iter_mut() {
                    let delta = factor * row[r];
                    row[j] = row[j] - delta;
                }
            }
        }
        pivots.push(e);
    }
    let lb = mat_vec(&left, b, ring);
    let mut y = vec![ring.zero(); cols];
    for i in 0..rows {
        let e = pivots.get(i).copied().unwrap_or(k);
        let c = lb[i];
        if c.valuation().lower_bound() < e {
            let scale = ring.p_power(k - e);
            let cert: Vec<TruncatedPAdic> = left[i].iter().map(|v| *v * scale).collect();
            debug_assert!(vec_mat(&cert, a, cols, ring).iter().all(TruncatedPAdic::is_zero));
            debug_assert!(!dot(&cert, b, ring).is_zero());
            return LinearSolution::Unsolvable(cert);
        }
        if i < pivots.len() {
            y[i] = ring.from_int((c.value() / ring.p().pow(e)) as i128);
        }
    }
    let x = mat_vec(&right, &y, ring);
    debug_assert_eq!(mat_vec(a, &x, ring), b);
    LinearSolution::Solvable(x)
}

/// Re-checks a solution or certificate against the original system.
pub fn verify(a: &[Vec<TruncatedPAdic>], b: &[TruncatedPAdic], ring: &PAdicRing, sol: &LinearSolution) -> bool {
    let cols = a.first().map_or(0, Vec::len);
    match sol {
        LinearSolution::Solvable(x) => mat_vec(a, x, ring) == b,
        LinearSolution::Unsolvable(y) => {
            vec_mat(y, a, cols, ring).iter().all(TruncatedPAdic::is_zero) && !dot(y, b, ring).is_zero()
        }
    }
}

/// Smallest valuation among the entries of a vector.
pub fn min_valuation(v: &[TruncatedPAdic]) -> Valuation {
    v.iter()
        .map(TruncatedPAdic::valuation)
        .min()
        .unwrap_or(Valuation::AtLeast(0))
}
