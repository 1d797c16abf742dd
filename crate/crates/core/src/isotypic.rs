//! Symmetry-adapted bases of `H_{n,d}`, multiplicities and the block
//! matrices `B^Λ` of symmetrised products.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::groups::{Coords, Family, FundamentalBasis, InvariantSpace, ReflectionGroup};
use crate::linalg::SparseEchelon;
use crate::poly::{binomial, Monomial, Poly, Q};
use crate::specht::{higher_specht_raw, isotype_labels, specht_degree, specht_indices, IsotypeLabel};
use crate::tableaux::{
    enumerate_partitions, enumerate_syt_charge_at_most, first_syt, in_pi_set, rho_step, MultiPartition, Partition,
    Tableau,
};

/// `q_d^Λ = Σ_k N_G(d−k)·h_k^Λ`; for `D_n` obtained by restriction from
/// `B_n`, so merged pairs count both orientations.
pub fn multiplicity(g: &ReflectionGroup, iso: &IsotypeLabel, d: u32) -> usize {
    if g.family() != Family::D {
        return specht_indices(g, iso, d).iter().map(|(_, k)| g.n_g(d - k)).sum();
    }
    let b = match ReflectionGroup::new(Family::B, g.n()) {
        Ok(b) => b,
        Err(_) => return 0,
    };
    let count = |shape: MultiPartition| -> usize {
        specht_indices(&b, &IsotypeLabel::plain(shape), d)
            .iter()
            .map(|(_, k)| b.n_g(d - k))
            .sum()
    };
    if iso.dn_sign.is_some() {
        count(iso.shape.clone())
    } else {
        count(iso.shape.clone()) + count(iso.shape.swapped())
    }
}

/// One slot of a block: invariant monomial `z` times a higher Specht polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    /// degree of the Specht factor
    pub k: u32,
    /// `0` for `T`, `1` for the swapped tableau (merged `D_n` pairs)
    pub orientation: u8,
    pub t: Tableau,
    pub s: Tableau,
    pub z: Vec<u32>,
    /// primitive Specht factor
    pub specht: Poly,
    pub poly: Poly,
}

#[derive(Clone, Debug)]
pub struct IsotypeBlock {
    pub label: IsotypeLabel,
    pub generators: Vec<Generator>,
    /// `b[u][v]` holds the coordinates of `R_G(s_u s_v)` in the degree-`2d`
    /// invariant monomial basis.
    pub b: Vec<Vec<Vec<Q>>>,
}

impl IsotypeBlock {
    pub fn size(&self) -> usize {
        self.generators.len()
    }

    /// `B^Λ` with entries as polynomials in the fundamental symbols.
    pub fn b_as_z(&self, space: &InvariantSpace) -> Vec<Vec<Poly>> {
        self.b
            .iter()
            .map(|row| row.iter().map(|c| space.to_z(c)).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub group: ReflectionGroup,
    pub degree: u32,
    pub basis: FundamentalBasis,
    pub blocks: Vec<IsotypeBlock>,
    /// `H^G_{n,2d}` with cached rewriting data, filled by [`block_matrices`]
    pub space2d: Option<InvariantSpace>,
}

impl Decomposition {
    /// `Σ_Λ q_d^Λ · dim S^Λ` from the realised block sizes.
    pub fn weighted_dim(&self) -> u128 {
        self.blocks.iter().map(|b| b.size() as u128 * b.label.dim()).sum()
    }

    /// `dim H_{n,d} = C(n+d−1, d)`.
    pub fn ambient_dim(&self) -> u128 {
        let n = self.group.n() as u64;
        binomial(n + self.degree as u64 - 1, self.degree as u64)
    }

    pub fn block(&self, label: &IsotypeLabel) -> Option<&IsotypeBlock> {
        self.blocks.iter().find(|b| &b.label == label)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(IsotypeBlock::size).collect()
    }
}

struct Candidate {
    k: u32,
    orientation: u8,
    s_index: usize,
    t: Tableau,
    s: Tableau,
    specht: Poly,
}

fn candidates(g: &ReflectionGroup, iso: &IsotypeLabel, d: u32) -> Result<Vec<Candidate>> {
    let t = first_syt(&iso.shape);
    let mut out = Vec::new();
    let mut push = |orientation: u8, t: &Tableau, list: Vec<(Tableau, u32)>| -> Result<()> {
        for (i, (s, k)) in list.into_iter().enumerate() {
            if g.n_g(d - k) == 0 {
                continue;
            }
            let raw = higher_specht_raw(g, iso, t, &s)?;
            if raw.is_zero() {
                continue;
            }
            out.push(Candidate { k, orientation, s_index: i, t: t.clone(), s, specht: raw.primitive().0 });
        }
        Ok(())
    };
    let family = g.family();
    match (family, iso.dn_sign) {
        (Family::D, Some(_)) => {
            let bound = (d.saturating_sub(iso.shape.second.size() as u32)) / 2;
            let list = if d < iso.shape.second.size() as u32 {
                Vec::new()
            } else {
                enumerate_syt_charge_at_most(&iso.shape, bound)
                    .into_iter()
                    .map(|(s, _)| {
                        let k = specht_degree(family, &s);
                        (s, k)
                    })
                    .collect()
            };
            push(0, &t, list)?;
        }
        (Family::D, None) => {
            push(0, &t, specht_indices(g, iso, d))?;
            let swapped = IsotypeLabel::plain(iso.shape.swapped());
            let ts = t.swapped();
            let list = specht_indices(g, &swapped, d);
            for (i, (s, k)) in list.into_iter().enumerate() {
                if g.n_g(d - k) == 0 {
                    continue;
                }
                let raw = higher_specht_raw(g, &swapped, &ts, &s)?;
                if raw.is_zero() {
                    continue;
                }
                out.push(Candidate { k, orientation: 1, s_index: i, t: ts.clone(), s, specht: raw.primitive().0 });
            }
        }
        _ => push(0, &t, specht_indices(g, iso, d))?,
    }
    out.sort_by_key(|c| (c.k, c.orientation, c.s_index));
    Ok(out)
}

/// Symmetry-adapted basis of `H_{n,d}`: per isotype, products of invariant
/// monomials with higher Specht polynomials for a fixed `T`, reduced to a
/// linearly independent family.
pub fn symmetry_adapted_basis(g: &ReflectionGroup, d: u32, coords: Coords) -> Result<Decomposition> {
    let basis = FundamentalBasis::new(g, coords)?;
    let mut powers: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    let mut blocks = Vec::new();
    for iso in isotype_labels(g) {
        let cands = candidates(g, &iso, d)?;
        if cands.is_empty() {
            continue;
        }
        let mut ech: SparseEchelon<Monomial> = SparseEchelon::new();
        let mut gens = Vec::new();
        for c in cands {
            for z in basis.invariant_monomials(d - c.k) {
                let m = powers.entry(z.clone()).or_insert_with(|| basis.expand_monomial(&z)).clone();
                let poly = &m * &c.specht;
                if ech.insert(poly.term_map().clone()) {
                    gens.push(Generator {
                        k: c.k,
                        orientation: c.orientation,
                        t: c.t.clone(),
                        s: c.s.clone(),
                        z,
                        specht: c.specht.clone(),
                        poly,
                    });
                }
            }
        }
        if !gens.is_empty() {
            blocks.push(IsotypeBlock { label: iso, generators: gens, b: Vec::new() });
        }
    }
    let dec = Decomposition { group: g.clone(), degree: d, basis, blocks, space2d: None };
    if dec.weighted_dim() != dec.ambient_dim() {
        return Err(Error::Internal(format!(
            "isotypic dimensions {} do not add up to {}",
            dec.weighted_dim(),
            dec.ambient_dim()
        )));
    }
    Ok(dec)
}

/// `R_G(s_u s_v)` in the coordinates of `space` for arbitrary `s_u`.
pub fn symmetrized_products(g: &ReflectionGroup, space: &InvariantSpace, gens: &[Poly]) -> Result<Vec<Vec<Vec<Q>>>> {
    let m = gens.len();
    let mut b = vec![vec![Vec::new(); m]; m];
    for u in 0..m {
        for v in u..m {
            let prod = &gens[u] * &gens[v];
            let c = space.coords_from_orbit(&g.reynolds_orbit(&prod))?;
            b[u][v] = c.clone();
            b[v][u] = c;
        }
    }
    Ok(b)
}

/// Fills `B^Λ_{u,v} = R_G(s_u s_v)` in fundamental coordinates.
pub fn block_matrices(dec: &mut Decomposition) -> Result<()> {
    let space = InvariantSpace::new(&dec.group, &dec.basis, 2 * dec.degree)?;
    for block in dec.blocks.iter_mut() {
        let gens: Vec<Poly> = block.generators.iter().map(|g| g.poly.clone()).collect();
        block.b = symmetrized_products(&dec.group, &space, &gens)?;
    }
    dec.space2d = Some(space);
    Ok(())
}

/// Symmetry-adapted basis with blocks filled.
pub fn decompose(g: &ReflectionGroup, d: u32, coords: Coords) -> Result<Decomposition> {
    let mut dec = symmetry_adapted_basis(g, d, coords)?;
    block_matrices(&mut dec)?;
    Ok(dec)
}

/// Pairs of generators from different blocks whose symmetrised product is
/// nonzero.
pub fn schur_violations(dec: &Decomposition) -> Vec<(usize, usize, usize, usize)> {
    let mut bad = Vec::new();
    for (i, a) in dec.blocks.iter().enumerate() {
        for (j, b) in dec.blocks.iter().enumerate().skip(i + 1) {
            for (u, ga) in a.generators.iter().enumerate() {
                for (v, gb) in b.generators.iter().enumerate() {
                    let prod = &ga.poly * &gb.poly;
                    if !dec.group.reynolds_orbit(&prod).is_empty() {
                        bad.push((i, u, j, v));
                    }
                }
            }
        }
    }
    bad
}

/// Label with the first row of `λ` removed, independent of `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TailLabel {
    pub tail: Vec<usize>,
    pub second: Vec<usize>,
    pub dn_sign: Option<i8>,
}

impl TailLabel {
    pub fn render(&self, family: Family) -> String {
        let mut s = format!("(n-{}", self.tail.iter().sum::<usize>() + self.second.iter().sum::<usize>());
        for t in &self.tail {
            s.push_str(&format!(",{}", t));
        }
        s.push(')');
        if family != Family::S {
            s.push_str(&format!("|{:?}", self.second));
        }
        if let Some(sign) = self.dn_sign {
            s.push(if sign > 0 { '+' } else { '-' });
        }
        s
    }
}

/// Isotype labels of `G` whose first row has length at least `n − d`.
pub fn labels_near_trivial(g: &ReflectionGroup, d: u32) -> Vec<IsotypeLabel> {
    let n = g.n();
    let d = d as usize;
    let mut out = Vec::new();
    for size in 0..=d.min(n) {
        for mu_size in 0..=size {
            if g.family() == Family::S && mu_size > 0 {
                continue;
            }
            for tail in enumerate_partitions(size - mu_size) {
                let first_len = n - size;
                if tail.parts().first().map_or(false, |&t| t > first_len) {
                    continue;
                }
                for mu in enumerate_partitions(mu_size) {
                    let mut parts = Vec::new();
                    if first_len > 0 {
                        parts.push(first_len);
                    }
                    parts.extend_from_slice(tail.parts());
                    let lam = match Partition::new(parts) {
                        Ok(l) => l,
                        Err(_) => continue,
                    };
                    let mp = MultiPartition::new(lam, mu.clone());
                    for l in isotype_labels_for(g, mp) {
                        out.push(l);
                    }
                }
            }
        }
    }
    out
}

fn isotype_labels_for(g: &ReflectionGroup, mp: MultiPartition) -> Vec<IsotypeLabel> {
    match g.family() {
        Family::D if mp.first == mp.second => vec![
            IsotypeLabel { shape: mp.clone(), dn_sign: Some(1) },
            IsotypeLabel { shape: mp, dn_sign: Some(-1) },
        ],
        Family::D => {
            let (a, b) = (&mp.first, &mp.second);
            if a.size() > b.size() || (a.size() == b.size() && a > b) {
                vec![IsotypeLabel::plain(mp)]
            } else {
                Vec::new()
            }
        }
        _ => vec![IsotypeLabel::plain(mp)],
    }
}

pub fn tail_of(label: &IsotypeLabel) -> TailLabel {
    TailLabel {
        tail: label.shape.first.parts().iter().skip(1).copied().collect(),
        second: label.shape.second.parts().to_vec(),
        dn_sign: label.dn_sign,
    }
}

/// Nonzero multiplicities in degree `d`, keyed by tail label.
pub fn multiplicity_table(g: &ReflectionGroup, d: u32) -> BTreeMap<TailLabel, usize> {
    let mut t = BTreeMap::new();
    for l in labels_near_trivial(g, d) {
        let q = multiplicity(g, &l, d);
        if q > 0 {
            t.insert(tail_of(&l), q);
        }
    }
    t
}

/// Audit of the stabilisation map for one label between `n` and `n+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoAudit {
    pub n: usize,
    pub label: TailLabel,
    pub k: usize,
    pub relevant: usize,
    pub relevant_next: usize,
    pub in_pi: bool,
    pub charge_preserved: bool,
    pub bijective: bool,
}

#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub family: Family,
    pub degree: u32,
    pub rows: Vec<(usize, BTreeMap<TailLabel, usize>)>,
    pub constant: bool,
    pub audits: Vec<RhoAudit>,
}

impl StabilizationReport {
    pub fn audits_pass(&self) -> bool {
        self.audits.iter().all(|a| a.in_pi && a.charge_preserved && a.bijective)
    }
}

fn relevant_tableaux(g: &ReflectionGroup, label: &IsotypeLabel, d: u32) -> Vec<(Tableau, u32)> {
    specht_indices(g, label, d)
        .into_iter()
        .filter(|(_, k)| g.n_g(d - k) > 0)
        .map(|(s, _)| {
            let c = s.charge();
            (s, c)
        })
        .collect()
}

/// Multiplicity tables for `n` in `ns` and the `ρ` audit between
/// consecutive `n`.
pub fn stabilization_report(family: Family, d: u32, ns: &[usize]) -> Result<StabilizationReport> {
    let mut rows = Vec::new();
    let mut audits = Vec::new();
    for &n in ns {
        let g = ReflectionGroup::new(family, n)?;
        rows.push((n, multiplicity_table(&g, d)));
    }
    for w in ns.windows(2) {
        let (n, m) = (w[0], w[1]);
        if m != n + 1 {
            continue;
        }
        let g = ReflectionGroup::new(family, n)?;
        let h = ReflectionGroup::new(family, m)?;
        for label in labels_near_trivial(&g, d) {
            let src = relevant_tableaux(&g, &label, d);
            if src.is_empty() {
                continue;
            }
            let next = IsotypeLabel { shape: label.shape.plus_one(), dn_sign: label.dn_sign };
            let dst = relevant_tableaux(&h, &next, d);
            let k = n.saturating_sub(d as usize);
            let in_pi = src.iter().all(|(s, _)| in_pi_set(s, k));
            let mut charge_preserved = true;
            let mut images = Vec::new();
            for (s, c) in &src {
                match rho_step(s, 0) {
                    Ok(img) => {
                        if img.charge() != *c {
                            charge_preserved = false;
                        }
                        images.push(img);
                    }
                    Err(_) => charge_preserved = false,
                }
            }
            images.sort();
            images.dedup();
            let mut targets: Vec<Tableau> = dst.iter().map(|(s, _)| s.clone()).collect();
            targets.sort();
            let bijective = images.len() == src.len() && images == targets;
            audits.push(RhoAudit {
                n,
                label: tail_of(&label),
                k,
                relevant: src.len(),
                relevant_next: dst.len(),
                in_pi,
                charge_preserved,
                bijective,
            });
        }
    }
    let constant = rows.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(StabilizationReport { family, degree: d, rows, constant, audits })
}
