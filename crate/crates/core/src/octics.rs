//! Even symmetric octics: reference block matrices, congruence and
//! change-of-basis comparison with computed blocks, and a combinatorial
//! Reynolds operator for power-mean blocks at large `n`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::dualcone::{Check, FamilyReport};
use crate::error::{Error, Result};
use crate::groups::{power_sum, Coords, Family, InvariantSpace, ReflectionGroup};
use crate::isotypic::{decompose, symmetrized_products, Decomposition};
use crate::linalg::{solve_full_column, QMatrix};
use crate::poly::{q, q_to_f64, qi, Monomial, Poly, Q};
use crate::specht::IsotypeLabel;
use crate::tableaux::{MultiPartition, Partition};

/// A block matrix with entries in the fundamental symbols.
pub type PolyMatrix = Vec<Vec<Poly>>;

fn label(a: &[usize], b: &[usize]) -> Result<IsotypeLabel> {
    let strip = |v: &[usize]| v.iter().copied().filter(|&x| x > 0).collect::<Vec<_>>();
    Ok(IsotypeLabel::plain(MultiPartition::new(Partition::new(strip(a))?, Partition::new(strip(b))?)))
}

/// `𝔭_2^a 𝔭_4^b 𝔭_6^c 𝔭_8^d` in the four symbols `(𝔭2, 𝔭4, 𝔭6, 𝔭8)`.
pub fn pm(a: u32, b: u32, c: u32, d: u32) -> Poly {
    Poly::monomial(4, vec![a, b, c, d], Q::one())
}

fn lin(terms: &[(Q, Poly)]) -> Poly {
    let mut p = Poly::zero(terms[0].1.nvars());
    for (c, t) in terms {
        p.add_scaled(t, c);
    }
    p
}

fn sym2(a: Poly, b: Poly, d: Poly) -> PolyMatrix {
    vec![vec![a, b.clone()], vec![b, d]]
}

/// The seven blocks of even symmetric `n`-ary octics in power means, in the
/// order `((n)), ((n−1,1)), ((n−2,2)), ((n−2),(2)), ((n−2),(1,1)),
/// ((n−4),(4)), ((n−3,1),(2))`.
pub fn bn_reference_blocks(n: usize) -> Result<Vec<(IsotypeLabel, PolyMatrix)>> {
    if n < 4 {
        return Err(Error::Precondition(format!("needs n ≥ 4, got {}", n)));
    }
    let ni = n as i64;
    let (p2222, p422, p44, p62, p8) = (pm(4, 0, 0, 0), pm(2, 1, 0, 0), pm(0, 2, 0, 0), pm(1, 0, 1, 0), pm(0, 0, 0, 1));
    let one = Q::one;
    let m1 = || -Q::one();
    Ok(vec![
        (label(&[n], &[])?, sym2(p44.clone(), p422.clone(), p2222.clone())),
        (
            label(&[n - 1, 1], &[])?,
            sym2(
                lin(&[(one(), p422.clone()), (m1(), p2222.clone())]),
                lin(&[(one(), p62.clone()), (m1(), p422.clone())]),
                lin(&[(one(), p8.clone()), (m1(), p44.clone())]),
            ),
        ),
        (
            label(&[n - 2, 2], &[])?,
            vec![vec![lin(&[
                (q(1 - ni, ni * ni), p8.clone()),
                (q(4 * ni - 4, ni * ni), p62.clone()),
                (q(ni * ni - 3 * ni + 3, ni * ni), p44.clone()),
                (qi(-2), p422.clone()),
                (one(), p2222.clone()),
            ])]],
        ),
        (
            label(&[n - 2], &[2])?,
            sym2(
                lin(&[(one(), p2222.clone()), (q(-1, ni), p422.clone())]),
                lin(&[(qi(2), p422.clone()), (q(-2, ni), p62.clone())]),
                lin(&[(qi(2), p62.clone()), (qi(2), p44.clone()), (q(-4, ni), p8.clone())]),
            ),
        ),
        (label(&[n - 2], &[1, 1])?, vec![vec![lin(&[(one(), p62.clone()), (m1(), p44.clone())])]]),
        (
            label(&[n - 4], &[4])?,
            vec![vec![lin(&[
                (one(), p2222.clone()),
                (q(-6, ni), p422.clone()),
                (q(3, ni * ni), p44.clone()),
                (q(8, ni * ni), p62.clone()),
                (q(-6, ni * ni * ni), p8.clone()),
            ])]],
        ),
        (
            label(&[n - 3, 1], &[2])?,
            vec![vec![lin(&[
                (q(2, ni * ni), p8),
                (q(-2 * ni - 2, ni * ni), p62),
                (q(-1, ni), p44),
                (q(ni + 3, ni), p422),
                (m1(), p2222),
            ])]],
        ),
    ])
}

/// Limits of [`bn_reference_blocks`] as `n → ∞`, same order.
pub fn bn_limit_blocks() -> Vec<PolyMatrix> {
    let (p2222, p422, p44, p62, p8) = (pm(4, 0, 0, 0), pm(2, 1, 0, 0), pm(0, 2, 0, 0), pm(1, 0, 1, 0), pm(0, 0, 0, 1));
    let one = Q::one;
    let m1 = || -Q::one();
    vec![
        sym2(p44.clone(), p422.clone(), p2222.clone()),
        sym2(
            lin(&[(one(), p422.clone()), (m1(), p2222.clone())]),
            lin(&[(one(), p62.clone()), (m1(), p422.clone())]),
            lin(&[(one(), p8.clone()), (m1(), p44.clone())]),
        ),
        vec![vec![lin(&[(one(), p44.clone()), (qi(-2), p422.clone()), (one(), p2222.clone())])]],
        sym2(p2222.clone(), p422.scale(&qi(2)), lin(&[(qi(2), p62.clone()), (qi(2), p44.clone())])),
        vec![vec![lin(&[(one(), p62), (m1(), p44.clone())])]],
        vec![vec![p2222.clone()]],
        vec![vec![lin(&[(one(), p422), (m1(), p2222)])]],
    ]
}

/// Number of variables of a generator template: four power means followed
/// by four distinguished variables `Y_0..Y_3`.
pub const TEMPLATE_VARS: usize = 8;

fn tp(k: usize) -> Poly {
    Poly::var(TEMPLATE_VARS, k)
}

fn ty(j: usize) -> Poly {
    Poly::var(TEMPLATE_VARS, 4 + j)
}

fn sq(p: &Poly) -> Poly {
    p * p
}

/// Generator templates of the reference basis, same order as
/// [`bn_reference_blocks`], with the positions of `Y_0..Y_3` (1-based,
/// `0` for unused) as written in the reference and as aligned with the
/// first standard tableau used by [`crate::isotypic`].
#[derive(Clone, Debug)]
pub struct Template {
    pub gens: Vec<Poly>,
    pub slots: fn(usize) -> [usize; 4],
    pub aligned: fn(usize) -> [usize; 4],
}

pub fn bn_templates() -> Vec<Template> {
    let (p2, p4) = (tp(0), tp(1));
    let y = ty;
    vec![
        Template { gens: vec![p4.clone(), sq(&p2)], slots: |_| [0; 4], aligned: |_| [0; 4] },
        Template {
            gens: vec![&(&sq(&y(1)) - &sq(&y(0))) * &p2, &sq(&sq(&y(1))) - &sq(&sq(&y(0)))],
            slots: |n| [1, n, 0, 0],
            aligned: |n| [1, n, 0, 0],
        },
        Template {
            gens: vec![&(&sq(&y(0)) - &sq(&y(2))) * &(&sq(&y(1)) - &sq(&y(3)))],
            slots: |_| [1, 2, 3, 4],
            aligned: |n| [1, 2, n - 1, n],
        },
        Template {
            gens: vec![&(&y(0) * &y(1)) * &p2, &(&sq(&y(0)) + &sq(&y(1))) * &(&y(0) * &y(1))],
            slots: |n| [n - 1, n, 0, 0],
            aligned: |n| [n - 1, n, 0, 0],
        },
        Template {
            gens: vec![&(&sq(&y(1)) - &sq(&y(0))) * &(&y(0) * &y(1))],
            slots: |n| [n - 1, n, 0, 0],
            aligned: |n| [n - 1, n, 0, 0],
        },
        Template {
            gens: vec![&(&y(0) * &y(1)) * &(&y(2) * &y(3))],
            slots: |_| [1, 2, 3, 4],
            aligned: |n| [n - 3, n - 2, n - 1, n],
        },
        Template {
            gens: vec![&(&sq(&y(3)) - &sq(&y(0))) * &(&y(1) * &y(2))],
            slots: |n| [1, n - 2, n - 1, n],
            aligned: |n| [1, n - 1, n, n - 2],
        },
    ]
}

/// Substitutes `𝔭_{2k} = p_{2k}/n` and `Y_j = X_{slots[j]}`.
pub fn instantiate(t: &Poly, n: usize, slots: [usize; 4]) -> Result<Poly> {
    let mut images = Vec::with_capacity(TEMPLATE_VARS);
    for k in 1..=4u32 {
        images.push(power_sum(n, 2 * k).scale(&q(1, n as i64)));
    }
    for &s in &slots {
        images.push(if s == 0 { Poly::zero(n) } else { Poly::var(n, s - 1) });
    }
    t.compose(&images)
}

/// Set partitions of `0..l` as block lists.
pub fn set_partitions(l: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, l: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == l {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, l, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, l, cur, out);
        cur.pop();
    }
    rec(0, l, &mut cur, &mut out);
    out
}

fn nq(n: u64) -> Q {
    Q::from_integer(n.into())
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// `R_{B_n}(Y^a)` in power means: `(1/(n)_l) Σ_π μ(π) n^{|π|} Π_B 𝔭_{a_B}`
/// over set partitions of the `l` nonzero exponents, `μ(π) = Π (−1)^{|B|−1}(|B|−1)!`.
pub fn reynolds_power_means(exps: &[u32], n: u64) -> Result<Poly> {
    if exps.iter().any(|e| e % 2 == 1) {
        return Ok(Poly::zero(4));
    }
    let a: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
    let l = a.len();
    if l as u64 > n {
        return Err(Error::Precondition(format!("{} distinguished variables but n = {}", l, n)));
    }
    let ni = nq(n);
    let mut falling = Q::one();
    for i in 0..l as u64 {
        falling *= nq(n - i);
    }
    let mut out = Poly::zero(4);
    for pi in set_partitions(l) {
        let mut c = Q::one();
        let mut e = vec![0u32; 4];
        for b in &pi {
            let k = b.len();
            let mu = if k % 2 == 1 { factorial(k - 1) } else { -factorial(k - 1) };
            c *= qi(mu);
            c *= &ni;
            let s: u32 = b.iter().map(|&i| a[i]).sum();
            if !(2..=8).contains(&s) {
                return Err(Error::Precondition(format!("power mean 𝔭{} outside degree 8", s)));
            }
            e[(s / 2 - 1) as usize] += 1;
        }
        out.add_term(Monomial::new(e), c / &falling);
    }
    Ok(out)
}

/// `R_{B_n}` of a template polynomial, in power means.
pub fn reynolds_template(t: &Poly, n: u64) -> Result<Poly> {
    let mut out = Poly::zero(4);
    for (m, c) in t.terms() {
        let e = m.exps();
        let r = reynolds_power_means(&e[4..], n)?;
        let lift = Poly::monomial(4, e[..4].to_vec(), c.clone());
        out = &out + &(&lift * &r);
    }
    Ok(out)
}

/// Blocks of the reference basis at `n` by the combinatorial Reynolds operator.
pub fn bn_template_blocks(n: u64) -> Result<Vec<PolyMatrix>> {
    bn_templates()
        .iter()
        .map(|t| {
            let m = t.gens.len();
            let mut b = vec![vec![Poly::zero(4); m]; m];
            for u in 0..m {
                for v in u..m {
                    let r = reynolds_template(&(&t.gens[u] * &t.gens[v]), n)?;
                    b[u][v] = r.clone();
                    b[v][u] = r;
                }
            }
            Ok(b)
        })
        .collect()
}

/// `B = D P R Pᵀ D` with `P` a permutation and `D` diagonal; `d2` holds the
/// squares `D_ii²` and `signs` the signs of `D_ii`.
#[derive(Clone, Debug, PartialEq)]
pub struct Congruence {
    pub perm: Vec<usize>,
    pub d2: Vec<Q>,
    pub signs: Vec<i8>,
}

fn ratio(a: &Poly, b: &Poly) -> Option<Q> {
    if b.is_zero() {
        return if a.is_zero() { Some(Q::zero()) } else { None };
    }
    let (m, c) = b.leading()?;
    let r = a.coeff(m.exps()) / c;
    if &b.scale(&r) == a {
        Some(r)
    } else {
        None
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    crate::harmonics::permutations_with_sign(m).into_iter().map(|(p, _)| p).collect()
}

/// Finds a diagonal congruence (with reordering) taking `reference` to `computed`.
pub fn find_congruence(computed: &PolyMatrix, reference: &PolyMatrix) -> Option<Congruence> {
    let m = computed.len();
    if reference.len() != m {
        return None;
    }
    'perm: for perm in permutations(m) {
        let mut d2 = Vec::with_capacity(m);
        for i in 0..m {
            match ratio(&computed[i][i], &reference[perm[i]][perm[i]]) {
                Some(r) if r.is_positive() => d2.push(r),
                _ => continue 'perm,
            }
        }
        let mut signs = vec![0i8; m];
        signs[0] = 1;
        for i in 0..m {
            for j in i + 1..m {
                let Some(t) = ratio(&computed[i][j], &reference[perm[i]][perm[j]]) else {
                    continue 'perm;
                };
                if t.is_zero() {
                    if !computed[i][j].is_zero() {
                        continue 'perm;
                    }
                    continue;
                }
                if &t * &t != &d2[i] * &d2[j] {
                    continue 'perm;
                }
                let s = if t.is_positive() { 1 } else { -1 };
                if signs[j] == 0 {
                    signs[j] = signs[i] * s;
                } else if signs[j] != signs[i] * s {
                    continue 'perm;
                }
            }
        }
        for s in signs.iter_mut() {
            if *s == 0 {
                *s = 1;
            }
        }
        return Some(Congruence { perm, d2, signs });
    }
    None
}

/// `z`-polynomial entries of a block in the four power-mean symbols.
fn to_pm(p: &Poly) -> Result<Poly> {
    let mut out = Poly::zero(4);
    for (m, c) in p.terms() {
        let e = m.exps();
        if e.iter().skip(4).any(|&x| x > 0) {
            return Err(Error::Internal(String::from("power mean beyond 𝔭8 in degree 8")));
        }
        out.add_term(Monomial::new(e[..4].to_vec()), c.clone());
    }
    Ok(out)
}

fn coords_to_pm(space: &InvariantSpace, b: &[Vec<Vec<Q>>]) -> Result<PolyMatrix> {
    b.iter().map(|r| r.iter().map(|c| to_pm(&space.to_z(c))).collect()).collect()
}

/// `P` with `target_u = Σ_v P_uv source_v`, if it exists.
pub fn change_of_basis(target: &[Poly], source: &[Poly]) -> Option<QMatrix> {
    let mut keys: Vec<Monomial> = Vec::new();
    for p in source.iter().chain(target) {
        for (m, _) in p.terms() {
            if !keys.contains(m) {
                keys.push(m.clone());
            }
        }
    }
    let a: QMatrix = keys.iter().map(|k| source.iter().map(|s| s.coeff(k.exps())).collect()).collect();
    target
        .iter()
        .map(|t| {
            let b: Vec<Q> = keys.iter().map(|k| t.coeff(k.exps())).collect();
            solve_full_column(&a, &b, source.len())
        })
        .collect()
}

/// `P R Pᵀ` entrywise on coordinate vectors.
pub fn congruent_coords(p: &QMatrix, r: &[Vec<Vec<Q>>]) -> Vec<Vec<Vec<Q>>> {
    let m = p.len();
    let k = r.len();
    let len = r.first().and_then(|x| x.first()).map_or(0, Vec::len);
    let mut out = vec![vec![vec![Q::zero(); len]; m]; m];
    for u in 0..m {
        for v in 0..m {
            for a in 0..k {
                for b in 0..k {
                    let w = &p[u][a] * &p[v][b];
                    if w.is_zero() {
                        continue;
                    }
                    for (o, x) in out[u][v].iter_mut().zip(&r[a][b]) {
                        *o += &w * x;
                    }
                }
            }
        }
    }
    out
}

fn render_matrix(m: &PolyMatrix, names: &[&str]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .map(|p| {
                    let mut s = String::new();
                    let _ = p.write_with(&mut s, &|i| String::from(names[i]));
                    s
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

const PM_NAMES: [&str; 4] = ["p2", "p4", "p6", "p8"];

/// Golden comparison for `B_n` octics: reference basis against the reference
/// matrices (diagonal congruence), then the computed basis against the
/// reference basis (exact change of basis).
pub fn verify_bn_octics(n: usize) -> Result<FamilyReport> {
    let g = ReflectionGroup::new(Family::B, n)?;
    let dec = decompose(&g, 4, Coords::PowerMeans)?;
    verify_bn_octics_with(&dec)
}

pub fn verify_bn_octics_with(dec: &Decomposition) -> Result<FamilyReport> {
    let g = &dec.group;
    let n = g.n();
    if g.family() != Family::B || dec.degree != 4 || dec.basis.coords != Coords::PowerMeans {
        return Err(Error::Precondition(String::from("needs the power-mean decomposition of H_{n,4} under B_n")));
    }
    let space = dec
        .space2d
        .as_ref()
        .ok_or_else(|| Error::Precondition(String::from("decomposition has no block matrices")))?;
    let reference = bn_reference_blocks(n)?;
    let templates = bn_templates();
    let mut checks = Vec::new();
    let ours: Vec<String> = dec.blocks.iter().map(|b| b.label.render(Family::B)).collect();
    let expected: Vec<String> = reference.iter().map(|(l, _)| l.render(Family::B)).collect();
    let mut sorted_ours = ours.clone();
    sorted_ours.sort();
    let mut sorted_exp = expected.clone();
    sorted_exp.sort();
    checks.push(Check::new(
        "isotypes",
        sorted_ours == sorted_exp,
        format!("computed {:?}", ours),
    ));
    for ((lab, refm), t) in reference.iter().zip(&templates) {
        let name = lab.render(Family::B);
        let gens: Vec<Poly> = t.gens.iter().map(|p| instantiate(p, n, (t.slots)(n))).collect::<Result<_>>()?;
        let bpg = symmetrized_products(g, space, &gens)?;
        let bpm = coords_to_pm(space, &bpg)?;
        let cong = find_congruence(&bpm, refm);
        checks.push(Check::new(
            &format!("reference basis {}", name),
            cong.is_some(),
            match &cong {
                Some(c) => format!("D² = {:?}, signs {:?}", c.d2.iter().map(|x| format!("{}", x)).collect::<Vec<_>>(), c.signs),
                None => format!("computed {} vs reference {}", render_matrix(&bpm, &PM_NAMES), render_matrix(refm, &PM_NAMES)),
            },
        ));
        let Some(block) = dec.block(lab) else {
            checks.push(Check::new(&format!("change of basis {}", name), false, String::from("isotype missing")));
            continue;
        };
        let aligned: Vec<Poly> = t.gens.iter().map(|p| instantiate(p, n, (t.aligned)(n))).collect::<Result<_>>()?;
        let balign = symmetrized_products(g, space, &aligned)?;
        let ourgens: Vec<Poly> = block.generators.iter().map(|x| x.poly.clone()).collect();
        let (ok, detail) = match change_of_basis(&ourgens, &aligned) {
            Some(p) => {
                let moved = congruent_coords(&p, &balign);
                let same = moved == block.b && balign == bpg;
                let pr: Vec<Vec<String>> = p.iter().map(|r| r.iter().map(|x| format!("{}", x)).collect()).collect();
                (same, format!("P = {:?}", pr))
            }
            None => (false, String::from("computed generators outside the span of the reference basis")),
        };
        checks.push(Check::new(&format!("change of basis {}", name), ok, detail));
    }
    Ok(FamilyReport { case: format!("bn-octics:{}", n), checks, samples: Vec::new() })
}

/// The degree-8 power-mean basis: `p2⁴, p4p2², p4², p6p2, p8`.
pub fn pm_degree8_basis() -> [Poly; 5] {
    [pm(4, 0, 0, 0), pm(2, 1, 0, 0), pm(0, 2, 0, 0), pm(1, 0, 1, 0), pm(0, 0, 0, 1)]
}

/// Distance of the intrinsically normalised blocks at `n` from the limits.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub n: u64,
    pub diff: f64,
    pub per_block: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// `max n · diff(n)`
    pub c: f64,
    pub monotone: bool,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.rows.iter().all(|r| r.diff <= self.c / r.n as f64 + 1e-15)
    }
}

/// Scales diagonal entry `i` so that the coefficient of the largest limit
/// coefficient agrees, and off-diagonal entries by the geometric mean.
fn normalised_diff(b: &PolyMatrix, lim: &PolyMatrix) -> f64 {
    let m = b.len();
    let basis = pm_degree8_basis();
    let mut s = vec![1.0f64; m];
    for i in 0..m {
        let mut e = basis[0].leading().unwrap().0.exps().to_vec();
        let mut best = Q::zero();
        for mono in &basis {
            let x = mono.leading().unwrap().0.exps();
            let c = lim[i][i].coeff(x).abs();
            if c > best {
                best = c;
                e = x.to_vec();
            }
        }
        let num = lim[i][i].coeff(&e);
        let den = b[i][i].coeff(&e);
        s[i] = if den.is_zero() { 0.0 } else { q_to_f64(&(num / den)) };
    }
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let f = libm::sqrt((s[i] * s[j]).max(0.0));
            for mono in &basis {
                let e = mono.leading().unwrap().0.exps();
                let d = q_to_f64(&b[i][j].coeff(e)) * f - q_to_f64(&lim[i][j].coeff(e));
                worst = worst.max(libm::fabs(d));
            }
        }
    }
    worst
}

/// Limit check over the given `n` using only the combinatorial Reynolds operator.
pub fn limit_report(ns: &[u64]) -> Result<LimitReport> {
    let lim = bn_limit_blocks();
    let mut rows = Vec::new();
    for &n in ns {
        let blocks = bn_template_blocks(n)?;
        let per_block: Vec<f64> = blocks.iter().zip(&lim).map(|(b, l)| normalised_diff(b, l)).collect();
        let diff = per_block.iter().cloned().fold(0.0, f64::max);
        rows.push(LimitRow { n, diff, per_block });
    }
    let c = rows.iter().map(|r| r.n as f64 * r.diff).fold(0.0, f64::max);
    let monotone = rows.windows(2).all(|w| w[1].diff <= w[0].diff);
    Ok(LimitReport { rows, c, monotone })
}

/// The four blocks of even symmetric ternary octics in the symbols
/// `e1, e2, e3` of the squared variables.
pub fn b3_reference_blocks() -> Result<Vec<(IsotypeLabel, PolyMatrix)>> {
    let e = |a: u32, b: u32, c: u32| Poly::monomial(3, vec![a, b, c], Q::one());
    let (e1111, e13, e112, e22) = (e(4, 0, 0), e(1, 0, 1), e(2, 1, 0), e(0, 2, 0));
    Ok(vec![
        (label(&[3], &[])?, sym2(e1111.clone(), e112.clone(), e22.clone())),
        (
            label(&[2, 1], &[])?,
            sym2(
                lin(&[(q(2, 3), e1111.clone()), (qi(-2), e112.clone())]),
                lin(&[(qi(-3), e13.clone()), (q(1, 3), e112.clone())]),
                lin(&[(q(2, 3), e22.clone()), (qi(-2), e13.clone())]),
            ),
        ),
        (label(&[1], &[2])?, sym2(e112.scale(&q(1, 3)), e13.clone(), e13.scale(&q(1, 3)))),
        (
            label(&[1], &[1, 1])?,
            vec![vec![lin(&[(Q::one(), e13), (q(-4, 3), e22), (q(1, 3), e112)])]],
        ),
    ])
}

/// Golden comparison of the computed `B_3` octic blocks.
pub fn verify_b3_blocks(dec: &Decomposition) -> Result<FamilyReport> {
    let g = &dec.group;
    if g.family() != Family::B || g.n() != 3 || dec.degree != 4 || dec.basis.coords != Coords::ElementarySq {
        return Err(Error::Precondition(String::from("needs the e-basis decomposition of H_{3,4} under B_3")));
    }
    let space = dec
        .space2d
        .as_ref()
        .ok_or_else(|| Error::Precondition(String::from("decomposition has no block matrices")))?;
    let names = ["e1", "e2", "e3"];
    let mut checks = Vec::new();
    checks.push(Check::new("block count", dec.blocks.len() == 4, format!("sizes {:?}", dec.sizes())));
    for (lab, refm) in b3_reference_blocks()? {
        let name = lab.render(Family::B);
        let Some(block) = dec.block(&lab) else {
            checks.push(Check::new(&name, false, String::from("isotype missing")));
            continue;
        };
        let comp = block.b_as_z(space);
        let cong = find_congruence(&comp, &refm);
        checks.push(Check::new(
            &name,
            cong.is_some(),
            match &cong {
                Some(c) => format!(
                    "{} with D² = {:?}, signs {:?}",
                    render_matrix(&comp, &names),
                    c.d2.iter().map(|x| format!("{}", x)).collect::<Vec<_>>(),
                    c.signs
                ),
                None => format!("computed {} vs reference {}", render_matrix(&comp, &names), render_matrix(&refm, &names)),
            },
        ));
    }
    Ok(FamilyReport { case: String::from("b3-blocks"), checks, samples: Vec::new() })
}
