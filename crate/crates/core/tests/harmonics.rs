use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflsos_core::groups::{Coords, Family, FundamentalBasis, ReflectionGroup};
use reflsos_core::harmonics::{coinvariant_hilbert_series, delta, harmonic_basis, jacobian_check};
use reflsos_core::linalg::{rank, QMatrix};
use reflsos_core::poly::{monomials_of_degree, qi};
use reflsos_core::{Error, Poly};

fn grp(f: Family, n: usize) -> ReflectionGroup {
    ReflectionGroup::new(f, n).unwrap()
}

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, i - 1)
}

fn rows_of(ps: &[Poly]) -> QMatrix {
    let mons: BTreeSet<Vec<u32>> = ps.iter().flat_map(|p| p.terms().map(|(m, _)| m.exps().to_vec())).collect();
    ps.iter().map(|p| mons.iter().map(|m| p.coeff(m)).collect()).collect()
}

fn reflection_count(f: Family, n: usize) -> u32 {
    let n = n as u32;
    match f {
        Family::S => n * (n - 1) / 2,
        Family::B => n * n,
        Family::D => n * (n - 1),
    }
}

// coefficients of prod_i (1 + t + ... + t^{d_i - 1}) by brute force over exponent tuples
fn poincare_oracle(degs: &[u32]) -> Vec<u128> {
    let top: u32 = degs.iter().map(|d| d - 1).sum();
    let mut c = vec![0u128; top as usize + 1];
    let mut idx = vec![0u32; degs.len()];
    loop {
        c[idx.iter().sum::<u32>() as usize] += 1;
        let mut i = 0;
        loop {
            if i == degs.len() {
                return c;
            }
            idx[i] += 1;
            if idx[i] < degs[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn delta_examples() {
    let v = &(&(&x(3, 1) - &x(3, 2)) * &(&x(3, 1) - &x(3, 3))) * &(&x(3, 2) - &x(3, 3));
    let d = delta(&grp(Family::S, 3));
    assert!(d == v || d == -&v);
    let b = &(&x(2, 1) * &x(2, 2)) * &(&x(2, 1).pow(2) - &x(2, 2).pow(2));
    let db = delta(&grp(Family::B, 2));
    assert!(db == b || db == -&b);
    assert_eq!(db.homogeneous_degree(), Some(4));
    for f in [Family::S, Family::B, Family::D] {
        for n in 2..=5 {
            let g = grp(f, n);
            assert_eq!(delta(&g).homogeneous_degree(), Some(reflection_count(f, n)));
            assert_eq!(g.num_reflections(), reflection_count(f, n));
        }
    }
}

#[test]
fn harmonic_dimensions() {
    let cases = [
        (Family::S, 2),
        (Family::S, 3),
        (Family::S, 4),
        (Family::S, 5),
        (Family::B, 2),
        (Family::B, 3),
        (Family::D, 3),
        (Family::D, 4),
    ];
    for (f, n) in cases {
        let g = grp(f, n);
        let h = harmonic_basis(&g, 10_000).unwrap();
        assert_eq!(h.dim() as u128, g.order(), "{}", g);
        let graded: Vec<u128> = h.graded.iter().map(|&k| k as u128).collect();
        assert_eq!(graded, poincare_oracle(g.degrees()), "{}", g);
        assert_eq!(coinvariant_hilbert_series(&g), poincare_oracle(g.degrees()));
        assert_eq!(h.graded[0], 1);
        assert!(h.basis.iter().any(|p| p.homogeneous_degree() == Some(0) && !p.is_zero()));
    }
    assert_eq!(harmonic_basis(&grp(Family::S, 3), 100).unwrap().dim(), 6);
    assert_eq!(harmonic_basis(&grp(Family::B, 3), 100).unwrap().dim(), 48);
}

#[test]
fn harmonic_basis_is_independent() {
    for (f, n) in [(Family::S, 3), (Family::S, 4), (Family::B, 2), (Family::B, 3)] {
        let g = grp(f, n);
        let h = harmonic_basis(&g, 1000).unwrap();
        assert_eq!(rank(&rows_of(&h.basis)), h.dim());
    }
}

#[test]
fn harmonics_are_orthogonal_to_invariant_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (f, n) in [(Family::S, 3), (Family::S, 4), (Family::B, 2), (Family::B, 3), (Family::D, 4)] {
        let g = grp(f, n);
        let basis = FundamentalBasis::new(&g, Coords::PowerSums).unwrap();
        let h = harmonic_basis(&g, 1000).unwrap();
        for hp in h.basis.iter().step_by(3) {
            let dh = hp.homogeneous_degree().unwrap();
            for psi in &basis.psis {
                let dp = psi.homogeneous_degree().unwrap();
                if dp > dh {
                    continue;
                }
                let mut qpoly = Poly::zero(n);
                for m in monomials_of_degree(n, dh - dp) {
                    qpoly = &qpoly + &Poly::monomial(n, m, qi(rng.gen_range(-3..4)));
                }
                assert_eq!((psi * &qpoly).diff_pairing(hp).unwrap(), qi(0), "{}", g);
            }
        }
    }
}

#[test]
fn harmonic_budget() {
    match harmonic_basis(&grp(Family::B, 3), 10) {
        Err(Error::Budget { limit, reached, .. }) => {
            assert_eq!(limit, 10);
            assert!(reached > 10);
        }
        other => panic!("expected budget error, got {:?}", other.map(|h| h.dim())),
    }
}

#[test]
fn jacobian_constants() {
    let s3 = grp(Family::S, 3);
    let basis = FundamentalBasis::new(&s3, Coords::PowerSums).unwrap();
    let c = jacobian_check(&s3, &basis).unwrap();
    assert_ne!(c, qi(0));
    let mut scaled = basis.clone();
    scaled.psis[0] = scaled.psis[0].scale(&qi(2));
    assert_eq!(jacobian_check(&s3, &scaled).unwrap(), &c / qi(2));
    // B_2 with e(X^2): det [[2X1, 2X2], [2X1X2^2, 2X1^2X2]] = 4 X1 X2 (X1^2 - X2^2)
    let b2 = grp(Family::B, 2);
    let esq = FundamentalBasis::new(&b2, Coords::ElementarySq).unwrap();
    let d = delta(&b2);
    let want = &(&x(2, 1) * &x(2, 2)) * &(&x(2, 1).pow(2) - &x(2, 2).pow(2));
    let c2 = jacobian_check(&b2, &esq).unwrap();
    assert_eq!(c2.clone() * qi(4), if d == want { qi(1) } else { qi(-1) });
    for (f, n) in [(Family::S, 4), (Family::B, 3), (Family::D, 4)] {
        let g = grp(f, n);
        for coords in [Coords::PowerSums, Coords::PowerMeans] {
            let b = FundamentalBasis::new(&g, coords).unwrap();
            assert_ne!(jacobian_check(&g, &b).unwrap(), qi(0));
        }
    }
}
