//! Moment functionals on `H^G_{n,2d}`, dual-cone membership through the
//! blocks `ℓ(B^Λ)`, kernels `W_ℓ` and `W^⟨2⟩`, extremality, and test-set
//! nonnegativity for binary restrictions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{Coords, Family, InvariantSpace, ReflectionGroup};
use crate::isotypic::{decompose, Decomposition};
use crate::linalg::{ldlt_psd, min_eigenvalue, nullspace, numeric_rank, psd_clip, rank, solve, sym_eigen, QMatrix};
use crate::poly::{q, q_to_f64, qi, Point, Poly, Q};
use crate::sos::{from_decomposition, solve_small, SolveOptions};
use crate::specht::IsotypeLabel;

/// Values of `ℓ` on the invariant monomial basis of degree `2d`.
#[derive(Clone, Debug, PartialEq)]
pub enum Moments {
    Exact(Vec<Q>),
    Float(Vec<f64>),
}

impl Moments {
    pub fn len(&self) -> usize {
        match self {
            Moments::Exact(v) => v.len(),
            Moments::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Moments::Exact(v) => v.iter().map(q_to_f64).collect(),
            Moments::Float(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentFunctional {
    pub group: ReflectionGroup,
    /// `2d`
    pub degree: u32,
    pub values: Moments,
}

impl MomentFunctional {
    pub fn new(space: &InvariantSpace, values: Moments) -> Result<Self> {
        if values.len() != space.dim() {
            return Err(Error::Dimension { expected: space.dim(), got: values.len() });
        }
        Ok(MomentFunctional { group: space.group.clone(), degree: space.degree, values })
    }

    pub fn zero(space: &InvariantSpace) -> Self {
        MomentFunctional {
            group: space.group.clone(),
            degree: space.degree,
            values: Moments::Exact(vec![Q::zero(); space.dim()]),
        }
    }

    /// `ev_a`: values of the basis elements at `a`.
    pub fn from_point(space: &InvariantSpace, a: &Point) -> Result<Self> {
        if a.len() != space.group.n() {
            return Err(Error::Dimension { expected: space.group.n(), got: a.len() });
        }
        let values = match a {
            Point::Exact(v) => Moments::Exact(space.eval_basis_exact(v)?),
            Point::Float(v) => Moments::Float(space.eval_basis_f64(v)?),
        };
        Ok(MomentFunctional { group: space.group.clone(), degree: space.degree, values })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, Moments::Exact(_))
    }

    /// `Σ c_i ℓ_i`; exact when every input and weight is exact.
    pub fn combine(terms: &[(Q, &MomentFunctional)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Precondition(String::from("empty combination")))?.1;
        let len = first.values.len();
        if terms.iter().any(|(_, l)| l.values.len() != len || l.degree != first.degree) {
            return Err(Error::Precondition(String::from("functionals of different spaces")));
        }
        let values = if terms.iter().all(|(_, l)| l.is_exact()) {
            let mut v = vec![Q::zero(); len];
            for (c, l) in terms {
                if let Moments::Exact(x) = &l.values {
                    for (a, b) in v.iter_mut().zip(x) {
                        *a += c * b;
                    }
                }
            }
            Moments::Exact(v)
        } else {
            let mut v = vec![0.0; len];
            for (c, l) in terms {
                let cf = q_to_f64(c);
                for (a, b) in v.iter_mut().zip(l.values.to_f64()) {
                    *a += cf * b;
                }
            }
            Moments::Float(v)
        };
        Ok(MomentFunctional { group: first.group.clone(), degree: first.degree, values })
    }

    /// `ℓ(f)` for coordinates of `f` in the invariant basis.
    pub fn apply(&self, coords: &[Q]) -> f64 {
        self.values.to_f64().iter().zip(coords).map(|(l, c)| l * q_to_f64(c)).sum()
    }

    pub fn apply_exact(&self, coords: &[Q]) -> Option<Q> {
        match &self.values {
            Moments::Exact(v) => Some(v.iter().zip(coords).fold(Q::zero(), |s, (l, c)| s + l * c)),
            Moments::Float(_) => None,
        }
    }
}

fn space2d(dec: &Decomposition) -> Result<&InvariantSpace> {
    dec.space2d
        .as_ref()
        .ok_or_else(|| Error::Precondition(String::from("decomposition has no block matrices")))
}

fn check_degree(ell: &MomentFunctional, dec: &Decomposition) -> Result<()> {
    let space = space2d(dec)?;
    if ell.degree != 2 * dec.degree || ell.values.len() != space.dim() {
        return Err(Error::Dimension { expected: space.dim(), got: ell.values.len() });
    }
    Ok(())
}

/// `ℓ(B^Λ)` in floating point, one matrix per block.
pub fn ell_blocks(ell: &MomentFunctional, dec: &Decomposition) -> Result<Vec<Vec<Vec<f64>>>> {
    check_degree(ell, dec)?;
    let l = ell.values.to_f64();
    Ok(dec
        .blocks
        .iter()
        .map(|b| {
            b.b.iter()
                .map(|r| r.iter().map(|c| c.iter().zip(&l).map(|(x, y)| q_to_f64(x) * y).sum()).collect())
                .collect()
        })
        .collect())
}

/// `ℓ(B^Λ)` exactly, when `ℓ` is rational.
pub fn ell_blocks_exact(ell: &MomentFunctional, dec: &Decomposition) -> Result<Option<Vec<QMatrix>>> {
    check_degree(ell, dec)?;
    let l = match &ell.values {
        Moments::Exact(v) => v,
        Moments::Float(_) => return Ok(None),
    };
    Ok(Some(
        dec.blocks
            .iter()
            .map(|b| {
                b.b.iter()
                    .map(|r| r.iter().map(|c| c.iter().zip(l).fold(Q::zero(), |s, (x, y)| s + x * y)).collect())
                    .collect()
            })
            .collect(),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// least pivot (exact) or least eigenvalue (float) over all blocks
    pub margin: f64,
    pub exact: bool,
    pub block_margins: Vec<f64>,
}

/// PSD test of every `ℓ(B^Λ)`: exact `LDLᵀ` for rational `ℓ`, otherwise
/// eigenvalues `≥ −tol`.
pub fn in_dual_cone(ell: &MomentFunctional, dec: &Decomposition, tol: f64) -> Result<Membership> {
    if let Some(blocks) = ell_blocks_exact(ell, dec)? {
        let mut member = true;
        let mut margins = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let r = ldlt_psd(b);
            member &= r.psd;
            margins.push(q_to_f64(&r.min_pivot));
        }
        let margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
        return Ok(Membership { member, margin, exact: true, block_margins: margins });
    }
    let margins: Vec<f64> = ell_blocks(ell, dec)?.iter().map(|b| min_eigenvalue(b)).collect();
    let margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Membership { member: margin >= -tol, margin, exact: false, block_margins: margins })
}

/// Kernel vectors of one block, as coefficients over its generators.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelVectors {
    Exact(Vec<Vec<Q>>),
    Float(Vec<Vec<f64>>),
}

impl KernelVectors {
    pub fn len(&self) -> usize {
        match self {
            KernelVectors::Exact(v) => v.len(),
            KernelVectors::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct KernelModule {
    pub blocks: Vec<(IsotypeLabel, KernelVectors)>,
    /// spanning vectors of `W^⟨2⟩` in the degree-`2d` invariant basis
    pub w2_rows: KernelVectors,
    pub w2_dim: usize,
    /// `N_G(2d)`
    pub ambient: usize,
}

impl KernelModule {
    /// `dim W_ℓ = Σ_Λ dim ker ℓ(B^Λ) · dim S^Λ`.
    pub fn w_dim(&self) -> u128 {
        self.blocks.iter().map(|(l, k)| k.len() as u128 * l.dim()).sum()
    }

    /// Polynomial generators of `W_ℓ` (exact kernels only).
    pub fn generators(&self, dec: &Decomposition) -> Vec<Poly> {
        let mut out = Vec::new();
        for ((_, k), blk) in self.blocks.iter().zip(&dec.blocks) {
            if let KernelVectors::Exact(vs) = k {
                for v in vs {
                    let mut p = Poly::zero(dec.group.n());
                    for (c, g) in v.iter().zip(&blk.generators) {
                        p.add_scaled(&g.poly, c);
                    }
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Relative threshold for float kernels and ranks.
pub const RANK_TOL: f64 = 1e-8;

/// `W_ℓ` blockwise and `W^⟨2⟩ = span{Σ_u v_u B^Λ[u][w]}`.
pub fn kernel_module(ell: &MomentFunctional, dec: &Decomposition, tol: f64) -> Result<KernelModule> {
    let mem = in_dual_cone(ell, dec, tol)?;
    if !mem.member {
        return Err(Error::Precondition(format!("functional outside the dual cone (margin {:e})", mem.margin)));
    }
    let ambient = space2d(dec)?.dim();
    if let Some(blocks) = ell_blocks_exact(ell, dec)? {
        let mut kernels = Vec::new();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (blk, m) in dec.blocks.iter().zip(&blocks) {
            let ker = nullspace(m, blk.size());
            for v in &ker {
                for w in 0..blk.size() {
                    let mut r = vec![Q::zero(); ambient];
                    for (u, c) in v.iter().enumerate() {
                        if !c.is_zero() {
                            for (x, y) in r.iter_mut().zip(&blk.b[u][w]) {
                                *x += c * y;
                            }
                        }
                    }
                    rows.push(r);
                }
            }
            kernels.push((blk.label.clone(), KernelVectors::Exact(ker)));
        }
        let w2_dim = if rows.is_empty() { 0 } else { rank(&rows) };
        return Ok(KernelModule { blocks: kernels, w2_rows: KernelVectors::Exact(rows), w2_dim, ambient });
    }
    let blocks = ell_blocks(ell, dec)?;
    let scale = blocks
        .iter()
        .flat_map(|b| b.iter().flatten())
        .map(|x| libm::fabs(*x))
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut kernels = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (blk, m) in dec.blocks.iter().zip(&blocks) {
        let (vals, vecs) = sym_eigen(m);
        let mut ker = Vec::new();
        for (k, &l) in vals.iter().enumerate() {
            if l <= RANK_TOL * scale {
                ker.push(vecs.iter().map(|r| r[k]).collect::<Vec<f64>>());
            }
        }
        for v in &ker {
            for w in 0..blk.size() {
                let mut r = vec![0.0; ambient];
                for (u, c) in v.iter().enumerate() {
                    for (x, y) in r.iter_mut().zip(&blk.b[u][w]) {
                        *x += c * q_to_f64(y);
                    }
                }
                rows.push(r);
            }
        }
        kernels.push((blk.label.clone(), KernelVectors::Float(ker)));
    }
    // columns scaled to unit norm before the rank decision
    let mut cs = vec![0.0f64; ambient];
    for r in &rows {
        for (c, x) in cs.iter_mut().zip(r) {
            *c = c.max(libm::fabs(*x));
        }
    }
    let scaled: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&cs).map(|(x, c)| if *c > 0.0 { x / c } else { 0.0 }).collect())
        .collect();
    let w2_dim = numeric_rank(&scaled, RANK_TOL);
    Ok(KernelModule { blocks: kernels, w2_rows: KernelVectors::Float(rows), w2_dim, ambient })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extremality {
    pub extremal: bool,
    pub w2_dim: usize,
    /// `N_G(2d) − dim W^⟨2⟩`
    pub codim: usize,
}

/// Extremal iff `W^⟨2⟩` is a hyperplane of `H^G_{n,2d}`.
pub fn extremality_check(ell: &MomentFunctional, dec: &Decomposition, tol: f64) -> Result<Extremality> {
    let km = kernel_module(ell, dec, tol)?;
    Ok(Extremality {
        extremal: km.w2_dim + 1 == km.ambient,
        w2_dim: km.w2_dim,
        codim: km.ambient - km.w2_dim,
    })
}

/// One named assertion of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Check { name: String::from(name), passed, detail }
    }
}

/// Per-point record of a dual-cone grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    pub family: String,
    pub param: f64,
    pub point: Vec<f64>,
    pub margin: f64,
    pub member: bool,
    pub generic: bool,
    pub w2_dim: usize,
    pub extremal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub case: String,
    pub checks: Vec<Check>,
    pub samples: Vec<SampleRecord>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyCase {
    B3Octics,
    D4Quartics,
    BnOctics(usize),
}

impl core::str::FromStr for FamilyCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b3-octics" | "b3_octics" => Ok(FamilyCase::B3Octics),
            "d4-quartics" | "d4_quartics" => Ok(FamilyCase::D4Quartics),
            _ => {
                let rest = s.strip_prefix("bn-octics:").or_else(|| s.strip_prefix("bn_octics:"));
                match rest.and_then(|r| r.parse::<usize>().ok()) {
                    Some(n) => Ok(FamilyCase::BnOctics(n)),
                    None => Err(Error::InvalidLabel(format!("unknown case '{}'", s))),
                }
            }
        }
    }
}

/// Membership tolerance for float functionals.
pub const PSD_TOL: f64 = 1e-9;

/// Runs the verification for one of the classified cases. `samples` is the
/// grid size (B_3) or the number of random dual points (D_4).
pub fn verify_family(case: FamilyCase, samples: usize, seed: u64) -> Result<FamilyReport> {
    match case {
        FamilyCase::B3Octics => verify_b3_octics(samples),
        FamilyCase::D4Quartics => verify_d4_quartics(samples, seed),
        FamilyCase::BnOctics(n) => crate::octics::verify_bn_octics(n),
    }
}

/// Points `(a, √(1−a²), 0)`, `a ∈ [½,1]` and `(b, c, c)`, `c = √((1−b²)/2)`,
/// `b ∈ [0,1]`, each on `grid` equally spaced parameters.
pub fn b3_dual_families(grid: usize) -> Vec<(String, f64, Vec<f64>, bool)> {
    let mut out = Vec::new();
    let step = |i: usize| if grid > 1 { i as f64 / (grid - 1) as f64 } else { 0.0 };
    for i in 0..grid {
        let a = 0.5 + 0.5 * step(i);
        let generic = i != 0 && i + 1 != grid;
        out.push((String::from("a"), a, vec![a, libm::sqrt((1.0 - a * a).max(0.0)), 0.0], generic));
    }
    for i in 0..grid {
        let b = step(i);
        let c = libm::sqrt(((1.0 - b * b) / 2.0).max(0.0));
        let generic = i != 0 && i + 1 != grid;
        out.push((String::from("b"), b, vec![b, c, c], generic));
    }
    out
}

fn verify_b3_octics(grid: usize) -> Result<FamilyReport> {
    let g = ReflectionGroup::new(Family::B, 3)?;
    let dec = decompose(&g, 4, Coords::ElementarySq)?;
    let space = space2d(&dec)?.clone();
    let mut samples = Vec::new();
    for (fam, param, pt, generic) in b3_dual_families(grid) {
        let ell = MomentFunctional::from_point(&space, &Point::Float(pt.clone()))?;
        let mem = in_dual_cone(&ell, &dec, PSD_TOL)?;
        let (w2_dim, extremal) = if mem.member {
            let e = extremality_check(&ell, &dec, PSD_TOL)?;
            (e.w2_dim, e.extremal)
        } else {
            (0, false)
        };
        samples.push(SampleRecord {
            family: fam,
            param,
            point: pt,
            margin: mem.margin,
            member: mem.member,
            generic,
            w2_dim,
            extremal,
        });
    }
    let mut checks = Vec::new();
    let worst = samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "membership",
        samples.iter().all(|s| s.member),
        format!("{} points, least eigenvalue {:e}", samples.len(), worst),
    ));
    let generic: Vec<&SampleRecord> = samples.iter().filter(|s| s.generic).collect();
    let bad: Vec<String> = generic
        .iter()
        .filter(|s| !s.extremal)
        .map(|s| format!("{}={:.6} (dim W2 = {})", s.family, s.param, s.w2_dim))
        .collect();
    checks.push(Check::new(
        "extremality",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} interior points with dim W2 = {}", generic.len(), space.dim() - 1)
        } else {
            format!("not extremal at {}", bad.join(", "))
        },
    ));
    // ev_(1,0,0): only e1^4 survives
    let e = MomentFunctional::from_point(&space, &Point::from_ints(&[1, 0, 0]))?;
    let vals = e.values.to_f64();
    let lead = space.monomials.iter().position(|m| m == &vec![4, 0, 0]);
    let ok = lead.is_some_and(|i| vals.iter().enumerate().all(|(j, v)| (j == i) == (*v != 0.0)));
    checks.push(Check::new("endpoint a=1", ok, format!("moments {:?}", vals)));
    Ok(FamilyReport { case: String::from("b3-octics"), checks, samples })
}

/// The three extremal evaluations of the `D_4` quartic dual cone.
pub fn d4_generators() -> [[i64; 4]; 3] {
    [[1, 0, 0, 0], [1, 1, 1, -1], [1, 1, 1, 1]]
}

/// `4p₄ − p₂²`, `p₂² − p₄ + 12e₄`, `p₂² − p₄ − 12e₄`; each vanishes at
/// exactly two points of [`d4_generators`].
pub fn d4_primal_generators() -> [Poly; 3] {
    use crate::groups::{elementary, power_sum};
    let p2 = power_sum(4, 2);
    let p4 = power_sum(4, 4);
    let e4 = elementary(4, 4);
    let p22 = &p2 * &p2;
    let a = &p4.scale(&qi(4)) - &p22;
    let b = &(&p22 - &p4) + &e4.scale(&qi(12));
    let c = &(&p22 - &p4) - &e4.scale(&qi(12));
    [a, b, c]
}

/// Coordinates of `ℓ` over the three evaluations (3×3 solve).
pub fn d4_cone_coordinates(space: &InvariantSpace, ell: &[Q]) -> Result<Vec<Q>> {
    let cols: Vec<Vec<Q>> = d4_generators()
        .iter()
        .map(|p| space.eval_basis_exact(&p.iter().map(|&x| qi(x)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let m: QMatrix = (0..space.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    solve(&m, ell).ok_or_else(|| Error::Internal(String::from("evaluation vectors are dependent")))
}

fn random_q<R: Rng>(rng: &mut R, span: i64) -> Q {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=8))
}

fn verify_d4_quartics(samples: usize, seed: u64) -> Result<FamilyReport> {
    let g = ReflectionGroup::new(Family::D, 4)?;
    let dec = decompose(&g, 2, Coords::PowerSums)?;
    let space = space2d(&dec)?.clone();
    let mut checks = Vec::new();
    let evs: Vec<MomentFunctional> = d4_generators()
        .iter()
        .map(|p| MomentFunctional::from_point(&space, &Point::from_ints(p)))
        .collect::<Result<_>>()?;
    let mut dims = Vec::new();
    let mut all_ext = true;
    let mut kernels = Vec::new();
    for ev in &evs {
        let km = kernel_module(ev, &dec, 0.0)?;
        all_ext &= km.w2_dim == 2 && km.w2_dim + 1 == km.ambient;
        dims.push(km.w2_dim);
        kernels.push(km);
    }
    checks.push(Check::new("extremal evaluations", all_ext, format!("dim W2 = {:?}", dims)));
    // the primal generators: certified SOS, and each vanishes on two evaluations
    let prim = d4_primal_generators();
    let mut certified = true;
    let mut in_kernels = true;
    let mut detail = String::new();
    for (i, f) in prim.iter().enumerate() {
        let prog = from_decomposition(&dec, f)?;
        let exact = matches!(solve_small(&prog, &SolveOptions::default())?, crate::sos::SolveOutcome::Exact(_));
        certified &= exact;
        let c = space.coords(f)?;
        let mut zeros = Vec::new();
        for (j, (ev, km)) in evs.iter().zip(&kernels).enumerate() {
            let v = ev.apply_exact(&c).unwrap_or_else(Q::zero);
            if v.is_zero() {
                // f lies in ker ev_j = W2_j
                let mut rows = match &km.w2_rows {
                    KernelVectors::Exact(r) => r.clone(),
                    KernelVectors::Float(_) => Vec::new(),
                };
                let r0 = rank(&rows);
                rows.push(c.clone());
                in_kernels &= rank(&rows) == r0;
                zeros.push(j);
            } else if v.is_negative() {
                in_kernels = false;
            }
        }
        in_kernels &= zeros.len() == 2;
        detail.push_str(&format!("f{} vanishes at {:?}; ", i + 1, zeros));
    }
    checks.push(Check::new("primal generators certified", certified, String::from("exact certificates")));
    checks.push(Check::new("primal generators in kernels", in_kernels, detail));
    // random dual members: conic combinations of evaluations at random points
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Q::zero();
    let mut ok = true;
    let mut worst_res = 0.0f64;
    for _ in 0..samples {
        let k = rng.gen_range(1..=4);
        let mut terms = Vec::new();
        let mut pts = Vec::new();
        for _ in 0..k {
            let p: Vec<Q> = (0..4).map(|_| random_q(&mut rng, 6)).collect();
            pts.push(MomentFunctional::from_point(&space, &Point::Exact(p))?);
        }
        for p in &pts {
            terms.push((q(rng.gen_range(1..=5), rng.gen_range(1..=5)), p));
        }
        let ell = MomentFunctional::combine(&terms)?;
        let vals = match &ell.values {
            Moments::Exact(v) => v.clone(),
            Moments::Float(_) => return Err(Error::Internal(String::from("exact combination expected"))),
        };
        let c = d4_cone_coordinates(&space, &vals)?;
        let back: Vec<f64> = (0..space.dim())
            .map(|i| {
                evs.iter()
                    .zip(&c)
                    .map(|(e, ci)| q_to_f64(ci) * e.values.to_f64()[i])
                    .sum::<f64>()
            })
            .collect();
        let res = back
            .iter()
            .zip(&vals)
            .map(|(a, b)| libm::fabs(a - q_to_f64(b)))
            .fold(0.0, f64::max);
        worst_res = worst_res.max(res / vals.iter().map(|v| libm::fabs(q_to_f64(v))).fold(1.0, f64::max));
        for ci in &c {
            if ci.is_negative() {
                ok = false;
                if *ci < worst {
                    worst = ci.clone();
                }
            }
        }
    }
    checks.push(Check::new(
        "dual decomposition",
        ok && worst_res < 1e-10,
        format!("{} dual points, least coordinate {}, relative residual {:e}", samples, worst, worst_res),
    ));
    Ok(FamilyReport { case: String::from("d4-quartics"), checks, samples: Vec::new() })
}

/// Restriction modes for [`testset_nonneg`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestSetMode {
    /// `f^λ(x, y)` for every `λ ⊢ n` of length 2
    SymmetricQuartic,
    /// `f(a, a, b)` and `f(0, a, b)`
    B3Octic,
}

/// Coefficients of a binary form of degree `2m`, `c[s]` on `x^{2m−s} y^s`.
pub fn binary_coefficients(p: &Poly, deg: u32) -> Result<Vec<Q>> {
    if p.nvars() != 2 {
        return Err(Error::Dimension { expected: 2, got: p.nvars() });
    }
    if !p.is_zero() && !p.is_homogeneous_of(deg) {
        return Err(Error::NotHomogeneous { degree: deg });
    }
    Ok((0..=deg).map(|s| p.coeff(&[deg - s, s])).collect())
}

/// Gram feasibility for a binary form of even degree: alternating
/// projections between the PSD cone and the affine coefficient constraints.
/// Returns the least eigenvalue and residual reached.
pub fn binary_gram(c: &[f64]) -> (bool, f64, f64) {
    let m = (c.len() - 1) / 2;
    let size = m + 1;
    let scale = c.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max);
    if scale == 0.0 {
        return (true, 0.0, 0.0);
    }
    let c: Vec<f64> = c.iter().map(|x| x / scale).collect();
    let project = |x: &mut Vec<Vec<f64>>| -> f64 {
        let mut res = 0.0f64;
        for (s, &cs) in c.iter().enumerate() {
            let cells: Vec<(usize, usize)> = (0..size)
                .filter_map(|i| if s >= i && s - i < size { Some((i, s - i)) } else { None })
                .collect();
            let sum: f64 = cells.iter().map(|&(i, j)| x[i][j]).sum();
            res = res.max(libm::fabs(sum - cs));
            let adj = (cs - sum) / cells.len() as f64;
            for &(i, j) in &cells {
                x[i][j] += adj;
            }
        }
        res
    };
    let mut x = vec![vec![0.0; size]; size];
    let mut best = (f64::NEG_INFINITY, f64::INFINITY);
    for &delta in &[1e-3, 1e-6, 0.0] {
        let mut res = project(&mut x);
        let mut me = min_eigenvalue(&x);
        for _ in 0..20000 {
            if me >= -1e-12 && res < 1e-12 {
                break;
            }
            x = psd_clip(&x, delta);
            res = project(&mut x);
            me = min_eigenvalue(&x);
        }
        if me > best.0 {
            best = (me, res);
        }
        if me >= -1e-10 {
            return (true, me, res);
        }
    }
    (false, best.0, best.1)
}

/// Least value of a binary form on the unit circle, sampled.
pub fn binary_min_on_circle(c: &[f64], samples: usize) -> f64 {
    let deg = c.len() - 1;
    (0..samples)
        .map(|k| {
            let t = core::f64::consts::PI * k as f64 / samples as f64;
            let (x, y) = (libm::cos(t), libm::sin(t));
            c.iter()
                .enumerate()
                .map(|(s, v)| v * libm::pow(x, (deg - s) as f64) * libm::pow(y, s as f64))
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Restrictions used by a test-set mode.
pub fn testset_restrictions(g: &ReflectionGroup, f: &Poly, mode: TestSetMode) -> Result<Vec<Poly>> {
    let n = g.n();
    if f.nvars() != n {
        return Err(Error::Dimension { expected: n, got: f.nvars() });
    }
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    match mode {
        TestSetMode::SymmetricQuartic => {
            if g.family() != Family::S {
                return Err(Error::InvalidGroup(format!("symmetric quartic mode needs S_n, got {}", g)));
            }
            if !f.is_zero() && !f.is_homogeneous_of(4) {
                return Err(Error::NotHomogeneous { degree: 4 });
            }
            if !g.is_invariant(f) {
                return Err(Error::NotInvariant { group: g.label() });
            }
            let mut out = vec![f.compose(&vec![x.clone(); n])?];
            for l1 in (n + 1) / 2..n {
                let images: Vec<Poly> = (0..n).map(|i| if i < l1 { x.clone() } else { y.clone() }).collect();
                out.push(f.compose(&images)?);
            }
            Ok(out)
        }
        TestSetMode::B3Octic => {
            if g.family() != Family::B || n != 3 {
                return Err(Error::InvalidGroup(format!("B_3 octic mode needs B_3, got {}", g)));
            }
            if !f.is_zero() && !f.is_homogeneous_of(8) {
                return Err(Error::NotHomogeneous { degree: 8 });
            }
            if !g.is_invariant(f) {
                return Err(Error::NotInvariant { group: g.label() });
            }
            let zero = Poly::zero(2);
            Ok(vec![
                f.compose(&[x.clone(), x.clone(), y.clone()])?,
                f.compose(&[zero, x.clone(), y.clone()])?,
            ])
        }
    }
}

/// Nonnegativity of `f` decided on its binary restrictions.
pub fn testset_nonneg(g: &ReflectionGroup, f: &Poly, mode: TestSetMode) -> Result<bool> {
    let deg = match mode {
        TestSetMode::SymmetricQuartic => 4,
        TestSetMode::B3Octic => 8,
    };
    for r in testset_restrictions(g, f, mode)? {
        let c: Vec<f64> = binary_coefficients(&r, deg)?.iter().map(q_to_f64).collect();
        let (feasible, _, _) = binary_gram(&c);
        if !feasible {
            // boundary forms: accept only when no negative value is seen
            let scale = c.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max);
            if binary_min_on_circle(&c, 20000) < -1e-12 * scale.max(1.0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
