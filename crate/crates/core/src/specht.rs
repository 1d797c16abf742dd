//! Higher Specht polynomials and the generator catalog of the coinvariant
//! algebra.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::groups::{Family, ReflectionGroup};
use crate::poly::{Poly, Q};
use crate::tableaux::{
    enumerate_multipartitions, enumerate_partitions, enumerate_syt_charge_at_most, first_syt, index_and_charge,
    MultiPartition, Tableau,
};

/// Isotype of an irreducible module: a (multi)partition and, for `D_n`
/// shapes `(λ,λ)`, the sign of the split.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsotypeLabel {
    pub shape: MultiPartition,
    pub dn_sign: Option<i8>,
}

impl IsotypeLabel {
    pub fn plain(shape: MultiPartition) -> Self {
        IsotypeLabel { shape, dn_sign: None }
    }

    /// Dimension of the irreducible module.
    pub fn dim(&self) -> u128 {
        let d = self.shape.num_syt();
        if self.dn_sign.is_some() {
            d / 2
        } else {
            d
        }
    }

    pub fn render(&self, family: Family) -> String {
        let base = if family == Family::S {
            format!("{}", self.shape.first)
        } else {
            format!("{}", self.shape)
        };
        match self.dn_sign {
            Some(s) if s > 0 => format!("{}+", base),
            Some(_) => format!("{}-", base),
            None => base,
        }
    }
}

/// Isotype labels of `G`; for `D_n` one orientation per merged pair
/// (`|λ| ≥ |μ|`, ties broken by `λ > μ`) and two signs for `(λ,λ)`.
pub fn isotype_labels(g: &ReflectionGroup) -> Vec<IsotypeLabel> {
    let n = g.n();
    match g.family() {
        Family::S => enumerate_partitions(n)
            .into_iter()
            .map(|p| IsotypeLabel::plain(MultiPartition::single(p)))
            .collect(),
        Family::B => enumerate_multipartitions(n).into_iter().map(IsotypeLabel::plain).collect(),
        Family::D => {
            let mut out = Vec::new();
            for mp in enumerate_multipartitions(n) {
                let (a, b) = (&mp.first, &mp.second);
                if a == b {
                    out.push(IsotypeLabel { shape: mp.clone(), dn_sign: Some(1) });
                    out.push(IsotypeLabel { shape: mp, dn_sign: Some(-1) });
                } else if a.size() > b.size() || (a.size() == b.size() && a > b) {
                    out.push(IsotypeLabel::plain(mp));
                }
            }
            out
        }
    }
}

/// Applies `Σ_{σ ∈ S(letters)} sign^σ σ` using the factorisation into
/// transposition sums `C_2 C_3 ⋯ C_k`.
fn symmetrize(p: &Poly, letters: &[usize], negate: bool) -> Poly {
    let n = p.nvars();
    let c = if negate { -Q::one() } else { Q::one() };
    let mut cur = p.clone();
    for j in (1..letters.len()).rev() {
        let mut next = cur.clone();
        for &a in &letters[..j] {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(a, letters[j]);
            next.add_scaled(&cur.relabel(&perm, &alloc::vec![1; n]), &c);
        }
        cur = next;
    }
    cur
}

fn columns(rows: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let w = rows.first().map_or(0, Vec::len);
    (0..w)
        .map(|j| rows.iter().filter_map(|r| r.get(j).copied()).collect())
        .collect()
}

/// `ε_T p`: row symmetrisation, then column antisymmetrisation, scaled by
/// `f^λ/|λ|!` per component.
pub fn epsilon_apply(t: &Tableau, p: &Poly) -> Result<Poly> {
    if p.nvars() != t.n() {
        return Err(Error::Dimension { expected: t.n(), got: p.nvars() });
    }
    let mut cur = p.clone();
    let mut scale = Q::one();
    for comp in [&t.rows, &t.rows2] {
        if comp.is_empty() {
            continue;
        }
        for r in comp.iter() {
            let letters: Vec<usize> = r.iter().map(|v| v - 1).collect();
            cur = symmetrize(&cur, &letters, false);
        }
    }
    for comp in [&t.rows, &t.rows2] {
        if comp.is_empty() {
            continue;
        }
        for c in columns(comp) {
            let letters: Vec<usize> = c.iter().map(|v| v - 1).collect();
            cur = symmetrize(&cur, &letters, true);
        }
        let shape = crate::tableaux::Partition::new(comp.iter().map(Vec::len).collect())?;
        let size = shape.size() as u128;
        scale *= Q::new(shape.num_syt().into(), (1..=size).product::<u128>().into());
    }
    Ok(cur.scale(&scale))
}

/// `X_T^S = Π_p X_{w(T)_p}^{i(w(S))_p}`.
pub fn monomial_xts(t: &Tableau, s: &Tableau) -> Result<Poly> {
    if t.shape() != s.shape() {
        return Err(Error::InvalidLabel(format!("{} and {} differ in shape", t, s)));
    }
    let n = t.n();
    let wt = t.word();
    let idx = index_and_charge(&s.word()).index;
    let mut e = alloc::vec![0u32; n];
    for (p, &v) in wt.iter().enumerate() {
        e[v - 1] = idx[p];
    }
    Ok(Poly::monomial(n, e, Q::one()))
}

/// `F_T^S = ε_T X_T^S`, unnormalised.
pub fn specht_f(t: &Tableau, s: &Tableau) -> Result<Poly> {
    epsilon_apply(t, &monomial_xts(t, s)?)
}

/// `F_T^S(X²)·Π_{j ∈ T²} X_j`, unnormalised.
pub fn specht_hat(t: &Tableau, s: &Tableau) -> Result<Poly> {
    let n = t.n();
    let f = specht_f(t, s)?.substitute_squares();
    let mut e = alloc::vec![0u32; n];
    for &j in t.rows2.iter().flatten() {
        e[j - 1] = 1;
    }
    Ok(&f * &Poly::monomial(n, e, Q::one()))
}

/// A pair `(T, S)` with an isotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpechtLabel {
    pub iso: IsotypeLabel,
    pub t: Tableau,
    pub s: Tableau,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HigherSpecht {
    pub label: SpechtLabel,
    /// primitive, positive leading coefficient
    pub poly: Poly,
    /// `raw = scale · poly`
    pub scale: Q,
    pub degree: u32,
}

impl fmt::Display for HigherSpecht {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T={} S={} deg {}: {}", self.label.t, self.label.s, self.degree, self.poly)
    }
}

/// Degree of the generator attached to `S` under the family's convention.
pub fn specht_degree(family: Family, s: &Tableau) -> u32 {
    match family {
        Family::S => s.charge(),
        _ => 2 * s.charge() + s.rows2.iter().map(Vec::len).sum::<usize>() as u32,
    }
}

/// Unnormalised higher Specht polynomial for `(T, S)` under `G`.
pub fn higher_specht_raw(g: &ReflectionGroup, iso: &IsotypeLabel, t: &Tableau, s: &Tableau) -> Result<Poly> {
    if t.n() != g.n() || t.shape() != s.shape() {
        return Err(Error::InvalidLabel(format!("inconsistent pair {} / {}", t, s)));
    }
    match (g.family(), iso.dn_sign) {
        (Family::S, None) if t.rows2.is_empty() => specht_f(t, s),
        (Family::B, None) => specht_hat(t, s),
        (Family::D, None) if iso.shape.first != iso.shape.second => specht_hat(t, s),
        (Family::D, Some(sign)) if iso.shape.first == iso.shape.second => {
            let a = specht_hat(t, s)?;
            let b = specht_hat(&t.swapped(), s)?;
            Ok(if sign > 0 { &a + &b } else { &a - &b })
        }
        _ => Err(Error::InvalidLabel(format!("label {:?} does not fit {}", iso, g))),
    }
}

/// Normalised higher Specht polynomial.
pub fn higher_specht(g: &ReflectionGroup, label: &SpechtLabel) -> Result<HigherSpecht> {
    let raw = higher_specht_raw(g, &label.iso, &label.t, &label.s)?;
    if raw.is_zero() {
        return Err(Error::Internal(format!("vanishing higher Specht polynomial for {}", label.s)));
    }
    let (poly, scale) = raw.primitive();
    Ok(HigherSpecht {
        label: label.clone(),
        poly,
        scale,
        degree: specht_degree(g.family(), &label.s),
    })
}

/// The tableaux `S` attached to an isotype, with their degrees, up to `max_degree`.
///
/// For `D_n` shapes `(λ,λ)` only `S` with `1` in the first component are used.
pub fn specht_indices(g: &ReflectionGroup, iso: &IsotypeLabel, max_degree: u32) -> Vec<(Tableau, u32)> {
    let mu = iso.shape.second.size() as u32;
    let bound = match g.family() {
        Family::S => max_degree,
        _ => {
            if max_degree < mu {
                return Vec::new();
            }
            (max_degree - mu) / 2
        }
    };
    enumerate_syt_charge_at_most(&iso.shape, bound)
        .into_iter()
        .filter(|(s, _)| iso.dn_sign.is_none() || s.rows.iter().flatten().any(|&v| v == 1))
        .map(|(s, _)| {
            let d = specht_degree(g.family(), &s);
            (s, d)
        })
        .collect()
}

/// `h_k^Λ` for `k ≤ max_degree`.
pub fn h_counts(g: &ReflectionGroup, iso: &IsotypeLabel, max_degree: u32) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for (_, d) in specht_indices(g, iso, max_degree) {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub group: ReflectionGroup,
    pub max_degree: Option<u32>,
    pub entries: Vec<HigherSpecht>,
    pub counts: BTreeMap<IsotypeLabel, BTreeMap<u32, usize>>,
}

impl Catalog {
    /// `Σ_Λ Σ_k h_k^Λ · dim S^Λ`.
    pub fn weighted_size(&self) -> u128 {
        self.counts
            .iter()
            .map(|(l, h)| l.dim() * h.values().map(|&c| c as u128).sum::<u128>())
            .sum()
    }
}

/// Higher Specht polynomials with a fixed first tableau `T`, one per `S`.
/// With `max_degree = Some(d)` only degrees `k ≤ d` with `N_G(d−k) > 0` are kept.
pub fn coinvariant_catalog(g: &ReflectionGroup, max_degree: Option<u32>) -> Result<Catalog> {
    let mut entries = Vec::new();
    let mut counts = BTreeMap::new();
    let cap = max_degree.unwrap_or(u32::MAX / 4);
    for iso in isotype_labels(g) {
        let t = first_syt(&iso.shape);
        let mut h = BTreeMap::new();
        for (s, k) in specht_indices(g, &iso, cap) {
            if let Some(d) = max_degree {
                if g.n_g(d - k) == 0 {
                    continue;
                }
            }
            let label = SpechtLabel { iso: iso.clone(), t: t.clone(), s };
            entries.push(higher_specht(g, &label)?);
            *h.entry(k).or_insert(0usize) += 1;
        }
        if !h.is_empty() {
            counts.insert(iso, h);
        }
    }
    Ok(Catalog { group: g.clone(), max_degree, entries, counts })
}
