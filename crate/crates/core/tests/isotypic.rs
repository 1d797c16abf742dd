use std::collections::BTreeSet;

use num_traits::Zero;
use reflsos_core::groups::{Coords, Family, FundamentalBasis, InvariantSpace, ReflectionGroup, SignedPermutation};
use reflsos_core::isotypic::{
    block_matrices, decompose, multiplicity, schur_violations, stabilization_report, symmetry_adapted_basis,
};
use reflsos_core::linalg::{rank, QMatrix};
use reflsos_core::poly::{binomial, q, qi};
use reflsos_core::specht::{isotype_labels, IsotypeLabel};
use reflsos_core::tableaux::{enumerate_partitions, MultiPartition};
use reflsos_core::{Poly, Q};

fn grp(f: Family, n: usize) -> ReflectionGroup {
    ReflectionGroup::new(f, n).unwrap()
}

fn label(a: &[usize], b: &[usize]) -> IsotypeLabel {
    IsotypeLabel::plain(MultiPartition::from_parts(a, b).unwrap())
}

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i - 1)
}

fn sq(n: usize, i: usize) -> Poly {
    x(n, i).pow(2)
}

fn rows_of(ps: &[Poly]) -> QMatrix {
    let mons: BTreeSet<Vec<u32>> = ps.iter().flat_map(|p| p.terms().map(|(m, _)| m.exps().to_vec())).collect();
    ps.iter().map(|p| mons.iter().map(|m| p.coeff(m)).collect()).collect()
}

fn same_span(a: &[Poly], b: &[Poly]) -> bool {
    let ra = rank(&rows_of(a));
    let rb = rank(&rows_of(b));
    let all: Vec<Poly> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&rows_of(&all)) == ra
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

// all elements, by filtering the full hyperoctahedral group
fn elements(g: &ReflectionGroup) -> Vec<SignedPermutation> {
    let n = g.n();
    let mut out = Vec::new();
    for p in permutations(n) {
        for mask in 0..(1u32 << n) {
            let signs: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let e = SignedPermutation::new(p.clone(), signs).unwrap();
            if g.contains(&e) {
                out.push(e);
            }
        }
    }
    assert_eq!(out.len() as u128, g.order());
    out
}

fn group_average(els: &[SignedPermutation], p: &Poly) -> Poly {
    let mut acc = Poly::zero(p.nvars());
    for e in els {
        acc = &acc + &e.act(p).unwrap();
    }
    acc.scale(&Q::new(1.into(), (els.len() as i64).into()))
}

// Murnaghan-Nakayama on beta sets
fn chi(lambda: &[usize], mu: &[usize]) -> i64 {
    let l = lambda.len();
    let beta: BTreeSet<usize> = lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    chi_beta(&beta, mu)
}

fn chi_beta(beta: &BTreeSet<usize>, mu: &[usize]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else { return 1 };
    let mut total = 0;
    for &b in beta {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.range(b - r + 1..b).count();
        let mut next = beta.clone();
        next.remove(&b);
        next.insert(b - r);
        let s = if between % 2 == 0 { 1 } else { -1 };
        total += s * chi_beta(&next, rest);
    }
    total
}

fn z_mu(mu: &[usize]) -> u128 {
    let mut z: u128 = 1;
    let mut counts = std::collections::BTreeMap::new();
    for &m in mu {
        *counts.entry(m).or_insert(0u32) += 1;
        z *= m as u128;
    }
    for (_, c) in counts {
        z *= (1..=c as u128).product::<u128>();
    }
    z
}

// [t^d] Π 1/(1 − t^{μ_i})
fn trace_on_degree(mu: &[usize], d: usize) -> i64 {
    let mut c = vec![0i64; d + 1];
    c[0] = 1;
    for &m in mu {
        for s in m..=d {
            c[s] += c[s - m];
        }
    }
    c[d]
}

fn sym_multiplicity_oracle(lambda: &[usize], n: usize, d: usize) -> Q {
    let mut acc = Q::zero();
    for mu in enumerate_partitions(n) {
        let mu = mu.parts().to_vec();
        let term = chi(lambda, &mu) * trace_on_degree(&mu, d);
        acc += Q::new(term.into(), (z_mu(&mu) as i64).into());
    }
    acc
}

#[test]
fn symmetric_multiplicities_against_character_oracle() {
    for n in 1..=6 {
        let g = grp(Family::S, n);
        for d in 0..=6u32 {
            for lam in enumerate_partitions(n) {
                let want = sym_multiplicity_oracle(lam.parts(), n, d as usize);
                let iso = IsotypeLabel::plain(MultiPartition::single(lam.clone()));
                assert_eq!(qi(multiplicity(&g, &iso, d) as i64), want, "S{} d={} {:?}", n, d, lam);
            }
        }
    }
}

#[test]
fn b3_quartic_multiplicities() {
    let g = grp(Family::B, 3);
    let want = [
        (label(&[3], &[]), 2),
        (label(&[2, 1], &[]), 2),
        (label(&[1], &[2]), 2),
        (label(&[1], &[1, 1]), 1),
    ];
    for iso in isotype_labels(&g) {
        let q = want.iter().find(|(l, _)| *l == iso).map_or(0, |(_, q)| *q);
        assert_eq!(multiplicity(&g, &iso, 4), q, "{:?}", iso);
    }
    assert_eq!(multiplicity(&g, &label(&[3], &[]), 0), 1);
}

#[test]
fn b3_quartic_decomposition() {
    let g = grp(Family::B, 3);
    let dec = symmetry_adapted_basis(&g, 4, Coords::ElementarySq).unwrap();
    assert_eq!(dec.weighted_dim(), 15);
    assert_eq!(dec.ambient_dim(), 15);
    let n = 3;
    let e1 = &(&sq(n, 1) + &sq(n, 2)) + &sq(n, 3);
    let e2 = &(&(&sq(n, 1) * &sq(n, 2)) + &(&sq(n, 1) * &sq(n, 3))) + &(&sq(n, 2) * &sq(n, 3));
    let x23 = &x(n, 2) * &x(n, 3);
    let expect: Vec<(IsotypeLabel, Vec<Poly>)> = vec![
        (label(&[3], &[]), vec![e1.pow(2), e2.clone()]),
        (
            label(&[2, 1], &[]),
            vec![&e1 * &(&sq(n, 3) - &sq(n, 1)), &(&sq(n, 2) * &sq(n, 3)) - &(&sq(n, 1) * &sq(n, 2))],
        ),
        (label(&[1], &[2]), vec![&e1 * &x23, &sq(n, 1) * &x23]),
        (label(&[1], &[1, 1]), vec![&(&sq(n, 3) - &sq(n, 2)) * &x23]),
    ];
    assert_eq!(dec.blocks.len(), expect.len());
    for (iso, polys) in &expect {
        let block = dec.block(iso).unwrap_or_else(|| panic!("missing {:?}", iso));
        assert_eq!(block.size(), polys.len());
        // the generators realise the same copies up to the choice of tableau,
        // so compare the modules they generate
        let els = elements(&g);
        let orbit = |ps: &[Poly]| -> Vec<Poly> {
            ps.iter().flat_map(|p| els.iter().map(move |e| e.act(p).unwrap())).collect()
        };
        let ours: Vec<Poly> = block.generators.iter().map(|s| s.poly.clone()).collect();
        assert!(same_span(&orbit(&ours), &orbit(polys)), "{:?}", iso);
    }
}

#[test]
fn d4_quadratic_decomposition() {
    let g = grp(Family::D, 4);
    let dec = decompose(&g, 2, Coords::PowerSums).unwrap();
    assert_eq!(dec.weighted_dim(), 10);
    assert_eq!(dec.sizes(), vec![1, 1, 1, 1]);
    let n = 4;
    let p2 = (1..=n).map(|i| sq(n, i)).fold(Poly::zero(n), |a, b| &a + &b);
    let x12 = &x(n, 1) * &x(n, 2);
    let x34 = &x(n, 3) * &x(n, 4);
    let expected = [p2.clone(), &sq(n, 4) - &sq(n, 1), &x12 + &x34, &x12 - &x34];
    let ours: Vec<Poly> = dec.blocks.iter().map(|b| b.generators[0].poly.clone()).collect();
    // trivial block and the two split blocks match up to scalars
    for p in [&expected[0], &expected[2], &expected[3]] {
        assert!(ours.iter().any(|o| same_span(&[o.clone()], &[p.clone()])), "{}", p);
    }
    // B^Λ entries: p2², (2/3)p4 − (1/6)p2², (1/6)p2² − (1/6)p4 ± 2e4, up to positive scalars
    let p4 = (1..=n).map(|i| x(n, i).pow(4)).fold(Poly::zero(n), |a, b| &a + &b);
    let e4 = &x12 * &x34;
    let p22 = p2.pow(2);
    let refs = [
        p22.clone(),
        &p4.scale(&q(2, 3)) - &p22.scale(&q(1, 6)),
        &(&p22.scale(&q(1, 6)) - &p4.scale(&q(1, 6))) + &e4.scale(&qi(2)),
        &(&p22.scale(&q(1, 6)) - &p4.scale(&q(1, 6))) - &e4.scale(&qi(2)),
    ];
    let space = dec.space2d.as_ref().unwrap();
    let got: Vec<Poly> = dec.blocks.iter().map(|b| space.expand(&b.b[0][0])).collect();
    for r in &refs {
        let hit = got.iter().any(|b| {
            let (lb, cb) = (b.leading().unwrap(), r.leading().unwrap());
            let s = cb.1 / lb.1;
            s > Q::zero() && b.scale(&s) == *r
        });
        assert!(hit, "{}", r);
    }
}

#[test]
fn bn_quartic_block_sizes() {
    for n in 4..=6 {
        let g = grp(Family::B, n);
        let dec = symmetry_adapted_basis(&g, 4, Coords::PowerMeans).unwrap();
        let mut sizes: Vec<(IsotypeLabel, usize)> = dec.blocks.iter().map(|b| (b.label.clone(), b.size())).collect();
        sizes.sort();
        let mut want = vec![
            (label(&[n], &[]), 2),
            (label(&[n - 1, 1], &[]), 2),
            (label(&[n - 2, 2], &[]), 1),
            (label(&[n - 2], &[2]), 2),
            (label(&[n - 2], &[1, 1]), 1),
            (label(&[n - 3, 1], &[2]), 1),
        ];
        want.push(if n == 4 { (label(&[], &[4]), 1) } else { (label(&[n - 4], &[4]), 1) });
        want.sort();
        assert_eq!(sizes, want, "B{}", n);
    }
}

#[test]
fn dimension_identity_sweep() {
    let cases: &[(Family, &[usize], u32)] = &[
        (Family::S, &[2, 3, 4, 5], 4),
        (Family::B, &[2, 3, 4], 4),
        (Family::D, &[2, 3, 4], 4),
        (Family::B, &[5], 3),
        (Family::D, &[5], 3),
    ];
    for &(f, ns, dmax) in cases {
        for &n in ns {
            let g = grp(f, n);
            for d in 1..=dmax {
                let dec = symmetry_adapted_basis(&g, d, Coords::PowerSums).unwrap();
                let want = binomial(n as u64 + d as u64 - 1, d as u64);
                assert_eq!(dec.weighted_dim(), want, "{}{} d={}", f.letter(), n, d);
                for b in &dec.blocks {
                    assert_eq!(b.size(), multiplicity(&g, &b.label, d), "{}{} d={} {:?}", f.letter(), n, d, b.label);
                }
            }
        }
    }
}

#[test]
fn d_multiplicity_matches_blocks() {
    for n in 2..=6 {
        let g = grp(Family::D, n);
        let dmax = if n >= 5 { 4 } else { 6 };
        for d in 1..=dmax {
            let dec = symmetry_adapted_basis(&g, d, Coords::PowerSums).unwrap();
            for iso in isotype_labels(&g) {
                let realised = dec.block(&iso).map_or(0, |b| b.size());
                assert_eq!(multiplicity(&g, &iso, d), realised, "D{} d={} {:?}", n, d, iso);
            }
        }
    }
}

#[test]
fn generators_are_homogeneous_and_irreducible() {
    for (f, n, d) in [(Family::B, 3, 4), (Family::D, 4, 2), (Family::D, 4, 3), (Family::S, 4, 3)] {
        let g = grp(f, n);
        let els = elements(&g);
        let dec = symmetry_adapted_basis(&g, d, Coords::PowerSums).unwrap();
        for b in &dec.blocks {
            for s in &b.generators {
                assert!(s.poly.is_homogeneous_of(d));
                let orbit: Vec<Poly> = els.iter().map(|e| e.act(&s.poly).unwrap()).collect();
                assert_eq!(rank(&rows_of(&orbit)) as u128, b.label.dim(), "{}{} {:?}", f.letter(), n, b.label);
            }
        }
    }
}

#[test]
fn block_entries_are_group_averages() {
    for (f, n, d) in [(Family::B, 3, 4), (Family::D, 4, 2), (Family::S, 4, 2), (Family::D, 3, 3)] {
        let g = grp(f, n);
        let els = elements(&g);
        let dec = decompose(&g, d, Coords::PowerSums).unwrap();
        let space = dec.space2d.as_ref().unwrap();
        for b in &dec.blocks {
            for (u, su) in b.generators.iter().enumerate() {
                for (v, sv) in b.generators.iter().enumerate() {
                    let want = group_average(&els, &(&su.poly * &sv.poly));
                    assert_eq!(space.expand(&b.b[u][v]), want, "{}{} {:?} ({},{})", f.letter(), n, b.label, u, v);
                    assert_eq!(b.b[u][v], b.b[v][u]);
                }
            }
        }
        assert!(schur_violations(&dec).is_empty());
    }
}

#[test]
fn block_matrices_fill_space() {
    let g = grp(Family::B, 3);
    let mut dec = symmetry_adapted_basis(&g, 4, Coords::ElementarySq).unwrap();
    assert!(dec.space2d.is_none());
    block_matrices(&mut dec).unwrap();
    let basis = FundamentalBasis::new(&g, Coords::ElementarySq).unwrap();
    let space = InvariantSpace::new(&g, &basis, 8).unwrap();
    assert_eq!(dec.space2d.as_ref().unwrap().dim(), space.dim());
    for b in &dec.blocks {
        for row in &b.b {
            for c in row {
                assert_eq!(c.len(), space.dim());
            }
        }
    }
}

#[test]
fn stabilization_tables() {
    for (f, ns) in [(Family::S, 8..=11), (Family::B, 8..=11), (Family::D, 9..=11)] {
        let ns: Vec<usize> = ns.collect();
        let rep = stabilization_report(f, 4, &ns).unwrap();
        assert!(rep.constant, "{:?}", f);
        assert!(rep.audits_pass(), "{:?}", f);
        assert_eq!(rep.rows.len(), ns.len());
    }
}

#[test]
fn stabilization_fails_below_range() {
    // the first two D rows differ: n = d has an extra invariant of degree n
    let rep = stabilization_report(Family::D, 4, &[4, 5]).unwrap();
    assert!(!rep.constant);
}

#[test]
fn symmetric_counterexample() {
    let (g4, g5) = (grp(Family::S, 4), grp(Family::S, 5));
    let a = multiplicity(&g4, &label(&[2, 2], &[]), 4);
    let b = multiplicity(&g5, &label(&[3, 2], &[]), 4);
    assert_eq!(qi(a as i64), sym_multiplicity_oracle(&[2, 2], 4, 4));
    assert_eq!(qi(b as i64), sym_multiplicity_oracle(&[3, 2], 5, 4));
    assert!(a < b);
}
