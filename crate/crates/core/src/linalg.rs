//! Exact rational linear algebra plus a few floating point helpers.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::Q;

pub type QMatrix = Vec<Vec<Q>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve(a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Solves a consistent system `a x = b` whose matrix has full column rank.
pub fn solve_full_column(a: &QMatrix, b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != cols || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().take(cols).map(|r| r[cols].clone()).collect())
}

pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let mut aug: QMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right null space.
pub fn nullspace(a: &QMatrix, cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.clone();
    let piv = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(a: &QMatrix, x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |s, (u, v)| s + u * v))
        .collect()
}

/// Outcome of the exact PSD test.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    /// Smallest pivot used (zero if the matrix is singular).
    pub min_pivot: Q,
    pub rank: usize,
}

/// Exact PSD test by `L D Lᵀ` with symmetric diagonal pivoting.
///
/// At each step the largest remaining diagonal entry is the pivot. When all
/// remaining diagonal entries vanish the remaining block must be zero.
pub fn ldlt_psd(a: &QMatrix) -> PsdReport {
    let n = a.len();
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut min_pivot: Option<Q> = None;
    let mut rank = 0;
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|x, y| m[*x.1][*x.1].cmp(&m[*y.1][*y.1]))
            .unwrap();
        let d = m[p][p].clone();
        if d.is_negative() {
            return PsdReport { psd: false, min_pivot: d, rank };
        }
        if d.is_zero() {
            let clean = active.iter().all(|&i| active.iter().all(|&j| m[i][j].is_zero()));
            return PsdReport { psd: clean, min_pivot: Q::zero(), rank };
        }
        active.remove(pos);
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let f = &m[i][p] / &d;
            for &j in &active {
                let t = &f * &m[p][j];
                m[i][j] -= t;
            }
        }
        rank += 1;
        min_pivot = Some(match min_pivot {
            Some(x) if x < d => x,
            _ => d,
        });
    }
    PsdReport { psd: true, min_pivot: min_pivot.unwrap_or_else(Q::zero), rank }
}

/// Row echelon form over sparse vectors keyed by `K`; the pivot of a row is
/// its largest key.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, BTreeMap<K, Q>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: BTreeMap<K, Q>) -> BTreeMap<K, Q> {
        let mut out: BTreeMap<K, Q> = BTreeMap::new();
        while let Some((k, c)) = v.pop_last() {
            if let Some(row) = self.rows.get(&k) {
                for (rk, rc) in row.iter() {
                    if *rk == k {
                        continue;
                    }
                    let t = rc * &c;
                    let e = v.entry(rk.clone()).or_insert_with(Q::zero);
                    *e -= t;
                    if e.is_zero() {
                        v.remove(rk);
                    }
                }
            } else {
                out.insert(k, c);
            }
        }
        out
    }

    /// Inserts `v` if independent; returns whether it was.
    pub fn insert(&mut self, v: BTreeMap<K, Q>) -> bool {
        // reduce only until a new pivot appears
        let mut v = v;
        v.retain(|_, c| !c.is_zero());
        loop {
            let Some((k, c)) = v.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
                return false;
            };
            match self.rows.get(&k) {
                Some(row) => {
                    for (rk, rc) in row.iter() {
                        let t = rc * &c;
                        let e = v.entry(rk.clone()).or_insert_with(Q::zero);
                        *e -= t;
                        if e.is_zero() {
                            v.remove(rk);
                        }
                    }
                }
                None => {
                    let inv = c.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    self.rows.insert(k, v);
                    return true;
                }
            }
        }
    }

    pub fn contains(&self, v: BTreeMap<K, Q>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending and eigenvectors as columns of `v`.
pub fn sym_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[i][j] * m[i][j];
                }
            }
        }
        let scale: f64 = m.iter().enumerate().map(|(i, r)| r[i] * r[i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = idx.iter().map(|&i| m[i][i]).collect();
    let vecs = (0..n).map(|r| idx.iter().map(|&i| v[r][i]).collect()).collect();
    (vals, vecs)
}

pub fn min_eigenvalue(a: &[Vec<f64>]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    sym_eigen(a).0[0]
}

/// Projection onto `{X ⪰ floor·I}` in the Frobenius norm.
pub fn psd_clip(a: &[Vec<f64>], floor: f64) -> Vec<Vec<f64>> {
    let n = a.len();
    let (vals, vecs) = sym_eigen(a);
    let mut out = vec![vec![0.0; n]; n];
    for (k, &l) in vals.iter().enumerate() {
        let l = if l < floor { floor } else { l };
        for i in 0..n {
            for j in 0..n {
                out[i][j] += l * vecs[i][k] * vecs[j][k];
            }
        }
    }
    out
}

/// Numerical rank by Householder QR with column pivoting; a diagonal entry
/// counts when it exceeds `tol` times the largest one.
pub fn numeric_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = rows.len();
    let n = rows[0].len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut top = 0.0f64;
    let mut rank = 0;
    for k in 0..m.min(n) {
        // pivot column with the largest remaining norm
        let norms: Vec<f64> = (k..n).map(|j| (k..m).map(|i| a[i][j] * a[i][j]).sum::<f64>()).collect();
        let (off, &best) = norms
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).unwrap_or(core::cmp::Ordering::Equal))
            .unwrap();
        let p = k + off;
        for row in a.iter_mut() {
            row.swap(k, p);
        }
        let alpha = libm::sqrt(best);
        if k == 0 {
            top = alpha;
        }
        if alpha <= tol * top || alpha == 0.0 {
            break;
        }
        rank += 1;
        let sign = if a[k][k] >= 0.0 { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = (k..m).map(|i| a[i][k]).collect();
        v[0] += sign * alpha;
        let vn: f64 = v.iter().map(|x| x * x).sum();
        if vn == 0.0 {
            continue;
        }
        for j in k..n {
            let s: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum::<f64>() * 2.0 / vn;
            for i in k..m {
                a[i][j] -= s * v[i - k];
            }
        }
    }
    rank
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fraction convergents).
pub fn rationalize(x: f64, max_den: u64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    let neg = x < 0.0;
    let mut r = libm::fabs(x);
    let (mut p0, mut q0, mut p1, mut q1): (u128, u128, u128, u128) = (0, 1, 1, 0);
    for _ in 0..64 {
        let a = libm::floor(r);
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = r - a as f64;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return Q::zero();
    }
    let v = Q::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -v
    } else {
        v
    }
}
