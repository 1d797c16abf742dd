//! Block-diagonal SOS programs for invariant forms: assembly, a small
//! alternating-projection solver, exact certificate verification and SDPA
//! data.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groups::{Coords, InvariantSpace, ReflectionGroup};
use crate::isotypic::{decompose, Decomposition};
use crate::linalg::{
    inverse, ldlt_psd, mat_vec, min_eigenvalue, nullspace, psd_clip, rationalize, rref, PsdReport, QMatrix,
};
use crate::poly::{monomials_of_degree, q_to_f64, Monomial, Poly, Q};
use crate::specht::IsotypeLabel;

/// One PSD block: label and the coefficient vectors of `B^Λ`.
#[derive(Clone, Debug)]
pub struct ProgramBlock {
    pub label: IsotypeLabel,
    /// `b[u][v][j]`: coefficient of invariant basis element `j`
    pub b: Vec<Vec<Vec<Q>>>,
}

impl ProgramBlock {
    pub fn size(&self) -> usize {
        self.b.len()
    }
}

/// `Σ_Λ Tr(A_Λ B^Λ) = f` in fundamental coordinates.
#[derive(Clone, Debug)]
pub struct SosProgram {
    pub group: ReflectionGroup,
    pub d: u32,
    pub space: InvariantSpace,
    pub target: Vec<Q>,
    pub blocks: Vec<ProgramBlock>,
}

pub type Certificate = Vec<QMatrix>;

/// Builds the program for `f ∈ H^G_{n,2d}`.
pub fn assemble(g: &ReflectionGroup, f: &Poly, d: u32, coords: Coords) -> Result<SosProgram> {
    if !f.is_zero() {
        match f.homogeneous_degree() {
            Some(deg) if deg % 2 == 1 => return Err(Error::OddDegree(deg)),
            Some(deg) if deg == 2 * d => {}
            _ => return Err(Error::NotHomogeneous { degree: 2 * d }),
        }
    }
    let dec = decompose(g, d, coords)?;
    from_decomposition(&dec, f)
}

/// Builds the program from an existing decomposition with blocks filled.
pub fn from_decomposition(dec: &Decomposition, f: &Poly) -> Result<SosProgram> {
    let space = dec
        .space2d
        .clone()
        .ok_or_else(|| Error::Precondition(String::from("decomposition has no block matrices")))?;
    let target = space.coords(f)?;
    Ok(program_with_target(dec, space, target))
}

/// Program with target given directly by coordinates.
pub fn program_with_target(dec: &Decomposition, space: InvariantSpace, target: Vec<Q>) -> SosProgram {
    SosProgram {
        group: dec.group.clone(),
        d: dec.degree,
        space,
        target,
        blocks: dec
            .blocks
            .iter()
            .map(|b| ProgramBlock { label: b.label.clone(), b: b.b.clone() })
            .collect(),
    }
}

impl SosProgram {
    pub fn num_constraints(&self) -> usize {
        self.target.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(ProgramBlock::size).collect()
    }

    /// Constraint matrix over the upper-triangle variables (row-major per block).
    pub fn constraint_matrix(&self) -> QMatrix {
        let m = self.num_constraints();
        let mut rows = vec![Vec::new(); m];
        for blk in &self.blocks {
            let s = blk.size();
            for u in 0..s {
                for v in u..s {
                    let w = if u == v { Q::one() } else { Q::from_integer(2.into()) };
                    for (j, row) in rows.iter_mut().enumerate() {
                        row.push(&blk.b[u][v][j] * &w);
                    }
                }
            }
        }
        rows
    }

    /// `Σ_Λ Tr(A_Λ B^Λ)` in coordinates.
    pub fn apply(&self, cert: &[QMatrix]) -> Result<Vec<Q>> {
        if cert.len() != self.blocks.len() {
            return Err(Error::Dimension { expected: self.blocks.len(), got: cert.len() });
        }
        let mut out = vec![Q::zero(); self.num_constraints()];
        for (blk, a) in self.blocks.iter().zip(cert) {
            let s = blk.size();
            if a.len() != s || a.iter().any(|r| r.len() != s) {
                return Err(Error::Dimension { expected: s, got: a.len() });
            }
            for u in 0..s {
                for v in 0..s {
                    if a[u][v].is_zero() {
                        continue;
                    }
                    for (j, o) in out.iter_mut().enumerate() {
                        *o += &a[u][v] * &blk.b[u][v][j];
                    }
                }
            }
        }
        Ok(out)
    }

    fn apply_f64(&self, x: &[Vec<Vec<f64>>], cf: &[Vec<Vec<Vec<f64>>>]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_constraints()];
        for (k, a) in x.iter().enumerate() {
            for u in 0..a.len() {
                for v in 0..a.len() {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o += a[u][v] * cf[k][u][v][j];
                    }
                }
            }
        }
        out
    }

    /// Gram matrix `⟨C_i, C_j⟩` of the constraint matrices.
    pub fn gram(&self) -> QMatrix {
        let m = self.num_constraints();
        let mut g = vec![vec![Q::zero(); m]; m];
        for blk in &self.blocks {
            let s = blk.size();
            for u in 0..s {
                for v in 0..s {
                    let c = &blk.b[u][v];
                    for i in 0..m {
                        if c[i].is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            g[i][j] += &c[i] * &c[j];
                        }
                    }
                }
            }
        }
        g
    }

    /// The target as a polynomial in the original variables.
    pub fn target_poly(&self) -> Poly {
        self.space.expand(&self.target)
    }

    /// Same program with another target.
    pub fn with_target(&self, target: Vec<Q>) -> SosProgram {
        SosProgram { target, ..self.clone() }
    }
}

/// Exact verification outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    /// `Σ Tr(A B) − f` in coordinates
    pub residual: Vec<Q>,
    pub psd: Vec<PsdReport>,
}

impl Verdict {
    pub fn identity_ok(&self) -> bool {
        self.residual.iter().all(Zero::is_zero)
    }

    pub fn psd_ok(&self) -> bool {
        self.psd.iter().all(|r| r.psd)
    }

    pub fn verified(&self) -> bool {
        self.identity_ok() && self.psd_ok()
    }
}

/// Exact check of `Σ Tr(A_Λ B^Λ) = f` and `A_Λ ⪰ 0`.
pub fn verify_certificate(prog: &SosProgram, cert: &[QMatrix]) -> Result<Verdict> {
    let lhs = prog.apply(cert)?;
    for a in cert {
        for (i, r) in a.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if *x != a[j][i] {
                    return Err(Error::Precondition(String::from("certificate block is not symmetric")));
                }
            }
        }
    }
    let residual = lhs.iter().zip(&prog.target).map(|(a, b)| a - b).collect();
    let psd = cert.iter().map(ldlt_psd).collect();
    Ok(Verdict { residual, psd })
}

/// Numeric check at tolerance `tol` (max residual, min eigenvalue).
pub fn verify_numeric(prog: &SosProgram, cert: &[Vec<Vec<f64>>], tol: f64) -> (bool, f64, f64) {
    let cf = coeffs_f64(prog);
    let lhs = prog.apply_f64(cert, &cf);
    let scale = prog.target.iter().map(|x| libm::fabs(q_to_f64(x))).fold(1.0, f64::max);
    let res = lhs
        .iter()
        .zip(&prog.target)
        .map(|(a, b)| libm::fabs(a - q_to_f64(b)))
        .fold(0.0, f64::max)
        / scale;
    let me = cert.iter().map(|a| min_eigenvalue(a)).fold(f64::INFINITY, f64::min);
    let me = if me.is_finite() { me / scale } else { 0.0 };
    (res <= tol && me >= -tol, res, me)
}

fn coeffs_f64(prog: &SosProgram) -> Vec<Vec<Vec<Vec<f64>>>> {
    prog.blocks
        .iter()
        .map(|b| {
            b.b.iter()
                .map(|r| r.iter().map(|c| c.iter().map(q_to_f64).collect()).collect())
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub max_den: u64,
    pub tol: f64,
    pub shifts: Vec<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iter: 4000, max_den: 1_000_000, tol: 1e-9, shifts: vec![1e-2, 1e-4, 1e-6, 0.0] }
    }
}

/// How a separating functional was found.
#[derive(Clone, Debug, PartialEq)]
pub enum SeparationKind {
    /// evaluation at a point with `f(a) < 0`
    Point(Vec<Q>),
    /// functional from the dual projection, verified exactly
    DualExact,
    /// functional from the dual projection, verified in floating point
    DualNumeric,
}

/// Linear functional `ℓ` with `ℓ(B^Λ) ⪰ 0` for all blocks and `ℓ(f) < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Separation {
    pub kind: SeparationKind,
    pub values: Vec<f64>,
    pub value_at_target: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Exact(Certificate),
    Numeric { blocks: Vec<Vec<Vec<f64>>>, residual: f64, min_eig: f64 },
    Infeasible(Separation),
    Undetermined { residual: f64, min_eig: f64 },
}

impl SolveOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveOutcome::Exact(_) | SolveOutcome::Numeric { .. })
    }
}

struct Projector {
    cf: Vec<Vec<Vec<Vec<f64>>>>,
    ginv: Vec<Vec<f64>>,
    target: Vec<f64>,
}

impl Projector {
    fn inner(&self, x: &[Vec<Vec<f64>>]) -> Vec<f64> {
        let m = self.target.len();
        let mut out = vec![0.0; m];
        for (k, a) in x.iter().enumerate() {
            for u in 0..a.len() {
                for v in 0..a.len() {
                    for (j, o) in out.iter_mut().enumerate() {
                        *o += a[u][v] * self.cf[k][u][v][j];
                    }
                }
            }
        }
        out
    }

    fn affine(&self, x: &mut [Vec<Vec<f64>>]) -> f64 {
        let cur = self.inner(x);
        let r: Vec<f64> = cur.iter().zip(&self.target).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = self.ginv.iter().map(|row| row.iter().zip(&r).map(|(a, b)| a * b).sum()).collect();
        for (k, a) in x.iter_mut().enumerate() {
            for u in 0..a.len() {
                for v in 0..a.len() {
                    let s: f64 = y.iter().zip(&self.cf[k][u][v]).map(|(a, b)| a * b).sum();
                    a[u][v] -= s;
                }
            }
        }
        r.iter().map(|v| libm::fabs(*v)).fold(0.0, f64::max)
    }
}

fn to_f64_matrix(m: &QMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(q_to_f64).collect()).collect()
}

/// Exact correction of a rational guess onto the affine constraint set.
fn exact_affine(prog: &SosProgram, ginv: &QMatrix, x: &mut [QMatrix]) -> Result<()> {
    let cur = prog.apply(x)?;
    let r: Vec<Q> = cur.iter().zip(&prog.target).map(|(a, b)| a - b).collect();
    let y = mat_vec(ginv, &r);
    for (blk, a) in prog.blocks.iter().zip(x.iter_mut()) {
        for u in 0..blk.size() {
            for v in 0..blk.size() {
                let mut s = Q::zero();
                for (yj, c) in y.iter().zip(&blk.b[u][v]) {
                    if !c.is_zero() {
                        s += yj * c;
                    }
                }
                a[u][v] -= s;
            }
        }
    }
    Ok(())
}

fn rationalize_blocks(x: &[Vec<Vec<f64>>], max_den: u64) -> Vec<QMatrix> {
    x.iter()
        .map(|a| {
            let n = a.len();
            let mut m = vec![vec![Q::zero(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = rationalize(0.5 * (a[i][j] + a[j][i]), max_den);
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
            m
        })
        .collect()
}

/// Feasibility by alternating projections, then rationalisation and exact
/// verification; if no certificate is found, searches for a separating
/// functional.
pub fn solve_small(prog: &SosProgram, opts: &SolveOptions) -> Result<SolveOutcome> {
    if prog.target.iter().all(Zero::is_zero) {
        return Ok(SolveOutcome::Exact(prog.block_sizes().iter().map(|&s| vec![vec![Q::zero(); s]; s]).collect()));
    }
    if let Some(out) = solve_on_zero_face(prog, opts)? {
        return Ok(out);
    }
    let (found, res, me) = solve_direct(prog, opts)?;
    if let Some(out) = found {
        return Ok(out);
    }
    if let Some(sep) = separate(prog, opts)? {
        return Ok(SolveOutcome::Infeasible(sep));
    }
    Ok(SolveOutcome::Undetermined { residual: res, min_eig: me })
}

/// Alternating projections with exact and numeric verification; needs
/// linearly independent constraints.
fn solve_direct(prog: &SosProgram, opts: &SolveOptions) -> Result<(Option<SolveOutcome>, f64, f64)> {
    let sizes = prog.block_sizes();
    let g = prog.gram();
    let ginv = inverse(&g).ok_or_else(|| Error::Internal(String::from("constraint matrices are dependent")))?;
    // normalise the target to unit max-norm
    let scale = prog.target.iter().map(|x| x.abs()).max().unwrap_or_else(Q::one);
    let tnorm: Vec<Q> = prog.target.iter().map(|x| x / &scale).collect();
    let nprog = prog.with_target(tnorm.clone());
    let proj = Projector { cf: coeffs_f64(prog), ginv: to_f64_matrix(&ginv), target: tnorm.iter().map(q_to_f64).collect() };
    let mut x: Vec<Vec<Vec<f64>>> = sizes.iter().map(|&s| vec![vec![0.0; s]; s]).collect();
    let mut best: Option<(Vec<Vec<Vec<f64>>>, f64, f64)> = None;
    for &delta in &opts.shifts {
        let mut res = proj.affine(&mut x);
        let mut me = x.iter().map(|a| min_eigenvalue(a)).fold(f64::INFINITY, f64::min);
        for _ in 0..opts.max_iter {
            let goal = if delta > 0.0 { 0.5 * delta } else { -1e-13 };
            if me >= goal {
                break;
            }
            for a in x.iter_mut() {
                *a = psd_clip(a, delta);
            }
            res = proj.affine(&mut x);
            me = x.iter().map(|a| min_eigenvalue(a)).fold(f64::INFINITY, f64::min);
        }
        // exact attempt
        let mut xq = rationalize_blocks(&x, opts.max_den);
        exact_affine(&nprog, &ginv, &mut xq)?;
        let verdict = verify_certificate(&nprog, &xq)?;
        if verdict.verified() {
            let cert = xq
                .into_iter()
                .map(|a| a.into_iter().map(|r| r.into_iter().map(|v| v * &scale).collect()).collect())
                .collect();
            return Ok((Some(SolveOutcome::Exact(cert)), 0.0, 0.0));
        }
        if best.as_ref().map_or(true, |b| me > b.2) {
            best = Some((x.clone(), res, me));
        }
    }
    let (bx, _, _) = best.unwrap_or_else(|| (x.clone(), f64::INFINITY, f64::NEG_INFINITY));
    let sf = q_to_f64(&scale);
    let scaled: Vec<Vec<Vec<f64>>> = bx
        .iter()
        .map(|a| a.iter().map(|r| r.iter().map(|v| v * sf).collect()).collect())
        .collect();
    let (ok, res, me) = verify_numeric(prog, &scaled, opts.tol);
    if ok {
        return Ok((Some(SolveOutcome::Numeric { blocks: scaled, residual: res, min_eig: me }), res, me));
    }
    Ok((None, res, me))
}

/// Facial reduction from rational zeros of the target: if `f(a) = 0` then
/// every certificate block annihilates `ev_a(B^Λ)`. Returns row bases of the
/// surviving subspaces.
fn zero_face(prog: &SosProgram) -> Result<Vec<QMatrix>> {
    let mut ws: Vec<QMatrix> = prog
        .block_sizes()
        .iter()
        .map(|&s| (0..s).map(|i| (0..s).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect())
        .collect();
    for pt in probe_points(prog.group.n(), 0) {
        if pt.iter().all(|&x| x == 0) {
            continue;
        }
        let a: Vec<Q> = pt.iter().map(|&x| Q::from_integer(x.into())).collect();
        let ev = prog.space.eval_basis_exact(&a)?;
        if !dot(&ev, &prog.target).is_zero() {
            continue;
        }
        for (w, e) in ws.iter_mut().zip(ell_blocks_exact(prog, &ev)) {
            let r = w.len();
            if r == 0 {
                continue;
            }
            let m = congruence(w, &e);
            if m.iter().flatten().all(Zero::is_zero) {
                continue;
            }
            let null = nullspace(&m, r);
            *w = null
                .iter()
                .map(|v| {
                    let mut row = vec![Q::zero(); w[0].len()];
                    for (c, wr) in v.iter().zip(w.iter()) {
                        if !c.is_zero() {
                            for (x, y) in row.iter_mut().zip(wr) {
                                *x += c * y;
                            }
                        }
                    }
                    row
                })
                .collect();
        }
    }
    Ok(ws)
}

/// `W E Wᵀ`.
fn congruence(w: &QMatrix, e: &QMatrix) -> QMatrix {
    let r = w.len();
    let s = e.len();
    let we: QMatrix = w.iter().map(|wr| (0..s).map(|v| (0..s).fold(Q::zero(), |acc, u| acc + &wr[u] * &e[u][v])).collect()).collect();
    (0..r).map(|i| (0..r).map(|j| dot(&we[i], &w[j])).collect()).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x * y)
}

/// Solves on the face cut out by [`zero_face`] when it is proper, keeping only
/// independent constraints.
fn solve_on_zero_face(prog: &SosProgram, opts: &SolveOptions) -> Result<Option<SolveOutcome>> {
    let ws = zero_face(prog)?;
    if ws.iter().zip(prog.block_sizes()).all(|(w, s)| w.len() == s) {
        return Ok(None);
    }
    let m = prog.num_constraints();
    let mut kept = Vec::new();
    let mut blocks = Vec::new();
    for (k, (blk, w)) in prog.blocks.iter().zip(&ws).enumerate() {
        if w.is_empty() {
            continue;
        }
        let r = w.len();
        let b: Vec<Vec<Vec<Q>>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..m)
                            .map(|c| {
                                let e: QMatrix = blk.b.iter().map(|row| row.iter().map(|v| v[c].clone()).collect()).collect();
                                let we: Vec<Q> = (0..blk.size()).map(|v| (0..blk.size()).fold(Q::zero(), |acc, u| acc + &w[i][u] * &e[u][v])).collect();
                                dot(&we, &w[j])
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        kept.push(k);
        blocks.push(ProgramBlock { label: blk.label.clone(), b });
    }
    // independent constraints, and consistency of the rest
    let mut aug: QMatrix = (0..m)
        .map(|c| {
            let mut row = Vec::new();
            for blk in &blocks {
                for u in 0..blk.size() {
                    for v in u..blk.size() {
                        row.push(blk.b[u][v][c].clone());
                    }
                }
            }
            row.push(prog.target[c].clone());
            row
        })
        .collect();
    let p = aug.first().map_or(0, |r| r.len() - 1);
    let mut tr: QMatrix = (0..=p).map(|j| aug.iter().map(|r| r[j].clone()).collect()).collect();
    tr.truncate(p);
    let rows = rref(&mut tr);
    if rref(&mut aug).contains(&p) || blocks.is_empty() {
        return Ok(None);
    }
    let red = SosProgram {
        group: prog.group.clone(),
        d: prog.d,
        space: prog.space.clone(),
        target: rows.iter().map(|&c| prog.target[c].clone()).collect(),
        blocks: blocks
            .into_iter()
            .map(|blk| ProgramBlock {
                label: blk.label,
                b: blk.b.into_iter().map(|row| row.into_iter().map(|v| rows.iter().map(|&c| v[c].clone()).collect()).collect()).collect(),
            })
            .collect(),
    };
    let (found, _, _) = solve_direct(&red, opts)?;
    let lift = |k: usize| -> Option<usize> { kept.iter().position(|&x| x == k) };
    match found {
        Some(SolveOutcome::Exact(ms)) => {
            let cert: Certificate = (0..prog.blocks.len())
                .map(|k| {
                    let s = prog.blocks[k].size();
                    match lift(k) {
                        None => vec![vec![Q::zero(); s]; s],
                        Some(i) => {
                            let wt: QMatrix = (0..s).map(|u| ws[k].iter().map(|row| row[u].clone()).collect()).collect();
                            congruence(&wt, &ms[i])
                        }
                    }
                })
                .collect();
            Ok(verify_certificate(prog, &cert)?.verified().then_some(SolveOutcome::Exact(cert)))
        }
        Some(SolveOutcome::Numeric { blocks, .. }) => {
            let lifted: Vec<Vec<Vec<f64>>> = (0..prog.blocks.len())
                .map(|k| {
                    let s = prog.blocks[k].size();
                    let mut a = vec![vec![0.0; s]; s];
                    if let Some(i) = lift(k) {
                        let w = &ws[k];
                        for (x, wx) in w.iter().enumerate() {
                            for (y, wy) in w.iter().enumerate() {
                                let mxy = blocks[i][x][y];
                                for u in 0..s {
                                    for v in 0..s {
                                        a[u][v] += q_to_f64(&wx[u]) * mxy * q_to_f64(&wy[v]);
                                    }
                                }
                            }
                        }
                    }
                    a
                })
                .collect();
            let (ok, res, me) = verify_numeric(prog, &lifted, opts.tol);
            Ok(ok.then_some(SolveOutcome::Numeric { blocks: lifted, residual: res, min_eig: me }))
        }
        _ => Ok(None),
    }
}

/// Candidate points for point-evaluation separation.
pub fn probe_points(n: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut pts = Vec::new();
    let mut e1 = vec![0; n];
    e1[0] = 1;
    pts.push(e1);
    pts.push(vec![1; n]);
    let mut alt = vec![1; n];
    alt[n - 1] = -1;
    pts.push(alt);
    for k in 2..n {
        let mut p = vec![0; n];
        for x in p.iter_mut().take(k) {
            *x = 1;
        }
        pts.push(p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        pts.push((0..n).map(|_| rng.gen_range(-3..=3)).collect());
    }
    pts
}

/// `ℓ(B^Λ)` for a functional given by its values on the invariant basis.
pub fn ell_blocks_f64(prog: &SosProgram, ell: &[f64]) -> Vec<Vec<Vec<f64>>> {
    prog.blocks
        .iter()
        .map(|b| {
            b.b.iter()
                .map(|r| r.iter().map(|c| c.iter().zip(ell).map(|(x, l)| q_to_f64(x) * l).sum()).collect())
                .collect()
        })
        .collect()
}

pub fn ell_blocks_exact(prog: &SosProgram, ell: &[Q]) -> Vec<QMatrix> {
    prog.blocks
        .iter()
        .map(|b| {
            b.b.iter()
                .map(|r| {
                    r.iter()
                        .map(|c| c.iter().zip(ell).fold(Q::zero(), |s, (x, l)| s + x * l))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Looks for `ℓ` in the dual cone with `ℓ(f) < 0`.
pub fn separate(prog: &SosProgram, opts: &SolveOptions) -> Result<Option<Separation>> {
    let f = prog.target_poly();
    let n = prog.group.n();
    for p in probe_points(n, 7) {
        let a: Vec<Q> = p.iter().map(|&v| Q::from_integer(v.into())).collect();
        let v = f.eval_exact(&a)?;
        if v.is_negative() {
            let ell = prog.space.eval_basis_exact(&a)?;
            return Ok(Some(Separation {
                kind: SeparationKind::Point(a),
                values: ell.iter().map(q_to_f64).collect(),
                value_at_target: q_to_f64(&v),
            }));
        }
    }
    Ok(dual_projection(prog, opts))
}

/// Alternating projection between `{ℓ(B) : ℓ(f) = −1}` and the PSD cone.
fn dual_projection(prog: &SosProgram, opts: &SolveOptions) -> Option<Separation> {
    let m = prog.num_constraints();
    let gq = prog.gram();
    let ginv = to_f64_matrix(&inverse(&gq)?);
    let cf = coeffs_f64(prog);
    let f: Vec<f64> = prog.target.iter().map(q_to_f64).collect();
    let gf: Vec<f64> = ginv.iter().map(|r| r.iter().zip(&f).map(|(a, b)| a * b).sum()).collect();
    let fgf: f64 = f.iter().zip(&gf).map(|(a, b)| a * b).sum();
    if fgf <= 0.0 {
        return None;
    }
    let build = |ell: &[f64]| -> Vec<Vec<Vec<f64>>> {
        cf.iter()
            .map(|blk| {
                blk.iter()
                    .map(|r| r.iter().map(|c| c.iter().zip(ell).map(|(x, l)| x * l).sum()).collect())
                    .collect()
            })
            .collect()
    };
    let project = |mats: &[Vec<Vec<f64>>]| -> Vec<f64> {
        let mut b = vec![0.0; m];
        for (k, a) in mats.iter().enumerate() {
            for u in 0..a.len() {
                for v in 0..a.len() {
                    for (j, bj) in b.iter_mut().enumerate() {
                        *bj += a[u][v] * cf[k][u][v][j];
                    }
                }
            }
        }
        let gb: Vec<f64> = ginv.iter().map(|r| r.iter().zip(&b).map(|(a, c)| a * c).sum()).collect();
        let lam = (f.iter().zip(&gb).map(|(a, c)| a * c).sum::<f64>() + 1.0) / fgf;
        gb.iter().zip(&gf).map(|(a, c)| a - lam * c).collect()
    };
    let mut ell = project(&build(&vec![0.0; m]));
    for _ in 0..opts.max_iter {
        let mats = build(&ell);
        let me = mats.iter().map(|a| min_eigenvalue(a)).fold(f64::INFINITY, f64::min);
        if me >= 0.0 {
            break;
        }
        let clipped: Vec<Vec<Vec<f64>>> = mats.iter().map(|a| psd_clip(a, 0.0)).collect();
        ell = project(&clipped);
    }
    // exact attempt
    let eq: Vec<Q> = ell.iter().map(|&v| rationalize(v, opts.max_den)).collect();
    let val: Q = eq.iter().zip(&prog.target).fold(Q::zero(), |s, (a, b)| s + a * b);
    if val.is_negative() && ell_blocks_exact(prog, &eq).iter().all(|b| ldlt_psd(b).psd) {
        return Some(Separation {
            kind: SeparationKind::DualExact,
            values: eq.iter().map(q_to_f64).collect(),
            value_at_target: q_to_f64(&val),
        });
    }
    let mats = build(&ell);
    let me = mats.iter().map(|a| min_eigenvalue(a)).fold(f64::INFINITY, f64::min);
    let v: f64 = ell.iter().zip(&f).map(|(a, b)| a * b).sum();
    if me >= -opts.tol && v < -0.5 {
        return Some(Separation { kind: SeparationKind::DualNumeric, values: ell, value_at_target: v });
    }
    None
}

/// `f = R_G(Σ g_i²)` for `m` random forms of degree `d` with integer
/// coefficients in `[−3, 3]`.
pub fn sos_sample(g: &ReflectionGroup, d: u32, m: usize, seed: u64) -> Result<(Poly, Vec<Poly>)> {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials_of_degree(n, d);
    let mut squares = Vec::with_capacity(m);
    let mut sum = Poly::zero(n);
    for _ in 0..m {
        let mut p = Poly::zero(n);
        for e in &monos {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                p.add_term(Monomial::new(e.clone()), Q::from_integer(c.into()));
            }
        }
        sum = &sum + &(&p * &p);
        squares.push(p);
    }
    Ok((g.reynolds(&sum)?, squares))
}

/// SDPA sparse data (`.dat-s`) for the dual-form feasibility problem
/// `⟨F_j, Y⟩ = c_j, Y ⪰ 0`, scaled to integers by a common denominator.
pub fn sdpa_string(prog: &SosProgram) -> String {
    let mut den = BigInt::one();
    for x in &prog.target {
        den = den.lcm(x.denom());
    }
    for blk in &prog.blocks {
        for r in &blk.b {
            for c in r {
                for x in c {
                    den = den.lcm(x.denom());
                }
            }
        }
    }
    let dq = Q::from_integer(den.clone());
    let int = |x: &Q| -> BigInt { (x * &dq).to_integer() };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "\"invariant SOS feasibility for {} degree {}, data scaled by denominator {}\"",
        prog.group,
        2 * prog.d,
        den
    );
    let _ = writeln!(s, "{}", prog.num_constraints());
    let _ = writeln!(s, "{}", prog.blocks.len());
    let sizes: Vec<String> = prog.block_sizes().iter().map(|x| format!("{}", x)).collect();
    let _ = writeln!(s, "{}", sizes.join(" "));
    let c: Vec<String> = prog.target.iter().map(|x| format!("{}", int(x))).collect();
    let _ = writeln!(s, "{}", c.join(" "));
    for j in 0..prog.num_constraints() {
        for (bi, blk) in prog.blocks.iter().enumerate() {
            for u in 0..blk.size() {
                for v in u..blk.size() {
                    let x = &blk.b[u][v][j];
                    if !x.is_zero() {
                        let _ = writeln!(s, "{} {} {} {} {}", j + 1, bi + 1, u + 1, v + 1, int(x));
                    }
                }
            }
        }
    }
    s
}
