//! `Δ`, the space of `G`-harmonic polynomials spanned by its partial
//! derivatives, and the Jacobian identity `Δ = c·det(∂ψ_i/∂X_j)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{Family, FundamentalBasis, ReflectionGroup};
use crate::linalg::SparseEchelon;
use crate::poly::{Monomial, Poly, Q};

/// Product of the linear forms of all reflecting hyperplanes, normalised to
/// a positive leading coefficient.
pub fn delta(g: &ReflectionGroup) -> Poly {
    let n = g.n();
    let x = |i: usize| Poly::var(n, i);
    let mut p = Poly::one(n);
    if g.family() == Family::B {
        for i in 0..n {
            p = &p * &x(i);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let f = match g.family() {
                Family::S => &x(i) - &x(j),
                _ => &(&x(i) * &x(i)) - &(&x(j) * &x(j)),
            };
            p = &p * &f;
        }
    }
    p.primitive().0
}

#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    pub group: ReflectionGroup,
    pub delta: Poly,
    /// Linearly independent derivatives of `Δ`, grouped by degree descending.
    pub basis: Vec<Poly>,
    /// `graded[k]` is the dimension of the degree-`k` slice.
    pub graded: Vec<usize>,
}

impl HarmonicSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn as_row(p: &Poly) -> BTreeMap<Monomial, Q> {
    p.term_map().clone()
}

/// Derivative span of `Δ`, computed degree by degree. Fails once the
/// dimension passes `cap`.
pub fn harmonic_basis(g: &ReflectionGroup, cap: usize) -> Result<HarmonicSpace> {
    let d = delta(g);
    let top = d.degree().unwrap_or(0) as usize;
    let n = g.n();
    let mut graded = vec![0usize; top + 1];
    let mut basis = Vec::new();
    let mut level = vec![d.clone()];
    let mut total = 0usize;
    for k in (0..=top).rev() {
        graded[k] = level.len();
        total += level.len();
        if total > cap {
            return Err(Error::Budget { what: String::from("harmonic space dimension"), limit: cap, reached: total });
        }
        let mut next = Vec::new();
        if k > 0 {
            let mut ech: SparseEchelon<Monomial> = SparseEchelon::new();
            for p in &level {
                for i in 0..n {
                    let q = p.derivative(i);
                    if !q.is_zero() && ech.insert(as_row(&q)) {
                        next.push(q.primitive().0);
                    }
                }
            }
        }
        basis.extend(level);
        level = next;
    }
    Ok(HarmonicSpace { group: g.clone(), delta: d, basis, graded })
}

/// Coefficients of `Π (1 + t + … + t^{d_i−1})`.
pub fn coinvariant_hilbert_series(g: &ReflectionGroup) -> Vec<u128> {
    let mut c: Vec<u128> = vec![1];
    for &d in g.degrees() {
        let mut next = vec![0u128; c.len() + d as usize - 1];
        for (i, &a) in c.iter().enumerate() {
            for j in 0..d as usize {
                next[i + j] += a;
            }
        }
        c = next;
    }
    c
}

/// Heap's algorithm: all permutations of `0..n` with their signs.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![(a.clone(), 1i8)];
    let mut c = vec![0usize; n];
    let mut sign = 1i8;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Determinant of a polynomial matrix by the Leibniz formula.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let nv = m.first().and_then(|r| r.first()).map_or(0, Poly::nvars);
    let mut det = Poly::zero(nv);
    for (perm, sign) in permutations_with_sign(n) {
        let mut term = Poly::one(nv);
        for (i, &j) in perm.iter().enumerate() {
            term = &term * &m[i][j];
            if term.is_zero() {
                break;
            }
        }
        det.add_scaled(&term, &Q::from_integer(sign.into()));
    }
    det
}

/// The constant `c` with `Δ = c·det(∂ψ_i/∂X_j)`.
pub fn jacobian_check(g: &ReflectionGroup, basis: &FundamentalBasis) -> Result<Q> {
    let n = g.n();
    let jac: Vec<Vec<Poly>> = basis
        .psis
        .iter()
        .map(|psi| (0..n).map(|j| psi.derivative(j)).collect())
        .collect();
    let det = poly_det(&jac);
    let d = delta(g);
    let (dl, dc) = d.leading().ok_or_else(|| Error::Internal(String::from("Δ is zero")))?;
    let jc = det.coeff(dl.exps());
    if jc.is_zero() {
        return Err(Error::Internal(String::from("Jacobian does not share the leading term of Δ")));
    }
    let c = dc / &jc;
    if det.scale(&c) != d {
        return Err(Error::Internal(format!("Δ / Jac is not constant for {}", g)));
    }
    Ok(c)
}
