use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflsos_core::dualcone::{
    b3_dual_families, binary_coefficients, d4_cone_coordinates, d4_generators, d4_primal_generators,
    extremality_check, in_dual_cone, kernel_module, testset_nonneg, testset_restrictions, verify_family,
    FamilyCase, KernelVectors, MomentFunctional, Moments, TestSetMode,
};
use reflsos_core::groups::{elementary, power_sum, Coords, Family, ReflectionGroup};
use reflsos_core::isotypic::{decompose, Decomposition};
use reflsos_core::linalg::{rank, QMatrix};
use reflsos_core::poly::{q, qi};
use reflsos_core::sos::{from_decomposition, solve_small, sos_sample, SolveOptions, SolveOutcome};
use reflsos_core::{Point, Poly, Q};

fn grp(f: Family, n: usize) -> ReflectionGroup {
    ReflectionGroup::new(f, n).unwrap()
}

fn d4_dec() -> Decomposition {
    decompose(&grp(Family::D, 4), 2, Coords::PowerSums).unwrap()
}

fn b3_dec() -> Decomposition {
    decompose(&grp(Family::B, 3), 4, Coords::ElementarySq).unwrap()
}

fn rand_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect()
}

fn exact_values(l: &MomentFunctional) -> Vec<Q> {
    match &l.values {
        Moments::Exact(v) => v.clone(),
        Moments::Float(_) => panic!("float functional"),
    }
}

fn unit(k: usize, len: usize) -> Vec<Q> {
    (0..len).map(|i| if i == k { qi(1) } else { Q::zero() }).collect()
}

#[test]
fn point_evaluation_values() {
    // each moment is the basis element evaluated at the point
    for (dec, pts) in [
        (b3_dec(), vec![vec![qi(1), qi(1), qi(1)], vec![qi(2), q(-1, 3), qi(0)]]),
        (d4_dec(), vec![vec![qi(1), qi(1), qi(0), qi(0)], vec![qi(1), qi(-2), qi(3), q(1, 2)]]),
    ] {
        let space = dec.space2d.as_ref().unwrap();
        for a in pts {
            let l = MomentFunctional::from_point(space, &Point::Exact(a.clone())).unwrap();
            let v = exact_values(&l);
            for (k, x) in v.iter().enumerate() {
                assert_eq!(*x, space.expand(&unit(k, space.dim())).eval_exact(&a).unwrap());
            }
        }
    }
    // B3 at (1,1,1): e1⁴ = 81, e1²e2 = 27, e1e3 = 3, e2² = 9 in some order
    let dec = b3_dec();
    let space = dec.space2d.as_ref().unwrap();
    let l = MomentFunctional::from_point(space, &Point::from_ints(&[1, 1, 1])).unwrap();
    let mut v = exact_values(&l);
    v.sort();
    assert_eq!(v, vec![qi(3), qi(9), qi(27), qi(81)]);
    assert!(MomentFunctional::from_point(space, &Point::from_ints(&[1, 1])).is_err());
}

#[test]
fn point_evaluations_are_in_the_dual_cone() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (dec, n) in [(d4_dec(), 4), (b3_dec(), 3)] {
        let space = dec.space2d.clone().unwrap();
        for _ in 0..250 {
            let a = rand_point(&mut rng, n);
            let l = MomentFunctional::from_point(&space, &Point::Exact(a)).unwrap();
            let m = in_dual_cone(&l, &dec, 0.0).unwrap();
            assert!(m.exact && m.member);
        }
    }
}

#[test]
fn zero_and_negative_functionals() {
    let dec = b3_dec();
    let space = dec.space2d.clone().unwrap();
    let z = MomentFunctional::zero(&space);
    assert!(in_dual_cone(&z, &dec, 0.0).unwrap().member);
    let km = kernel_module(&z, &dec, 0.0).unwrap();
    assert_eq!(km.w_dim(), 15);
    assert_eq!(km.w2_dim, km.ambient);
    let ev = MomentFunctional::from_point(&space, &Point::from_ints(&[1, 2, 0])).unwrap();
    let neg = MomentFunctional::combine(&[(qi(-1), &ev)]).unwrap();
    assert!(!in_dual_cone(&neg, &dec, 0.0).unwrap().member);
    assert!(kernel_module(&neg, &dec, 0.0).is_err());
    // perturbing one moment of ev_(1,1,1) downwards leaves the cone
    let one = MomentFunctional::from_point(&space, &Point::from_ints(&[1, 1, 1])).unwrap();
    let mut vals = exact_values(&one);
    let dims: Vec<usize> = (0..vals.len()).collect();
    let mut left = false;
    for k in dims {
        let mut v = vals.clone();
        v[k] -= qi(1);
        let l = MomentFunctional::new(&space, Moments::Exact(v)).unwrap();
        left |= !in_dual_cone(&l, &dec, 0.0).unwrap().member;
    }
    assert!(left);
    vals.pop();
    assert!(MomentFunctional::new(&space, Moments::Exact(vals)).is_err());
}

#[test]
fn duality_pairs_certificates_with_functionals() {
    // ℓ(f) = Σ Tr(A_Λ ℓ(B^Λ)) ≥ 0 for ℓ in the dual cone and certified f
    let dec = b3_dec();
    let space = dec.space2d.clone().unwrap();
    let g = dec.group.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for seed in 0..6 {
        let (f, _) = sos_sample(&g, 4, 2, seed).unwrap();
        let prog = from_decomposition(&dec, &f).unwrap();
        let cert = match solve_small(&prog, &SolveOptions::default()).unwrap() {
            SolveOutcome::Exact(c) => c,
            _ => continue,
        };
        let c = space.coords(&f).unwrap();
        for _ in 0..10 {
            let a = rand_point(&mut rng, 3);
            let b = rand_point(&mut rng, 3);
            let la = MomentFunctional::from_point(&space, &Point::Exact(a)).unwrap();
            let lb = MomentFunctional::from_point(&space, &Point::Exact(b)).unwrap();
            let l = MomentFunctional::combine(&[(q(1, 2), &la), (qi(3), &lb)]).unwrap();
            let val = l.apply_exact(&c).unwrap();
            let blocks = reflsos_core::dualcone::ell_blocks_exact(&l, &dec).unwrap().unwrap();
            let mut tr = Q::zero();
            for (a, m) in cert.iter().zip(&blocks) {
                for i in 0..a.len() {
                    for j in 0..a.len() {
                        tr += &a[i][j] * &m[j][i];
                    }
                }
            }
            assert_eq!(val, tr);
            assert!(!val.is_negative());
        }
    }
}

#[test]
fn w2_lies_in_the_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (dec, n) in [(d4_dec(), 4), (b3_dec(), 3)] {
        let space = dec.space2d.clone().unwrap();
        for _ in 0..20 {
            let a = rand_point(&mut rng, n);
            let l = MomentFunctional::from_point(&space, &Point::Exact(a)).unwrap();
            let km = kernel_module(&l, &dec, 0.0).unwrap();
            let rows = match &km.w2_rows {
                KernelVectors::Exact(r) => r.clone(),
                KernelVectors::Float(_) => panic!(),
            };
            for r in &rows {
                assert!(l.apply_exact(r).unwrap().is_zero());
            }
            assert!(km.w2_dim < km.ambient);
        }
    }
}

#[test]
fn d4_first_evaluation_kernel() {
    let dec = d4_dec();
    let space = dec.space2d.clone().unwrap();
    let l = MomentFunctional::from_point(&space, &Point::from_ints(&[1, 0, 0, 0])).unwrap();
    let km = kernel_module(&l, &dec, 0.0).unwrap();
    assert_eq!(km.w2_dim, 2);
    let rows = match km.w2_rows {
        KernelVectors::Exact(r) => r,
        KernelVectors::Float(_) => panic!(),
    };
    let p22 = power_sum(4, 2).pow(2);
    let want = [space.coords(&elementary(4, 4)).unwrap(), space.coords(&(&p22 - &power_sum(4, 4))).unwrap()];
    let mut all: QMatrix = rows.clone();
    all.extend(want.iter().cloned());
    assert_eq!(rank(&all), 2);
    assert_eq!(rank(&want.to_vec()), 2);
}

#[test]
fn d4_generators_are_extremal() {
    let dec = d4_dec();
    let space = dec.space2d.clone().unwrap();
    for p in d4_generators() {
        let l = MomentFunctional::from_point(&space, &Point::from_ints(&p)).unwrap();
        let e = extremality_check(&l, &dec, 0.0).unwrap();
        assert!(e.extremal, "{:?}", p);
        assert_eq!(e.w2_dim, 2);
        assert_eq!(e.codim, 1);
    }
    // each primal generator vanishes at exactly two of them and is positive at the third
    for f in d4_primal_generators() {
        let vals: Vec<Q> = d4_generators()
            .iter()
            .map(|p| f.eval_exact(&p.iter().map(|&x| qi(x)).collect::<Vec<_>>()).unwrap())
            .collect();
        assert_eq!(vals.iter().filter(|v| v.is_zero()).count(), 2);
        assert!(vals.iter().all(|v| !v.is_negative()));
    }
}

#[test]
fn sum_of_two_evaluations_is_not_extremal() {
    let dec = b3_dec();
    let space = dec.space2d.clone().unwrap();
    let a = MomentFunctional::from_point(&space, &Point::from_ints(&[2, 1, 0])).unwrap();
    let b = MomentFunctional::from_point(&space, &Point::from_ints(&[3, 1, 1])).unwrap();
    let s = MomentFunctional::combine(&[(qi(1), &a), (qi(1), &b)]).unwrap();
    let e = extremality_check(&s, &dec, 0.0).unwrap();
    assert!(!e.extremal);
    assert!(e.codim >= 2);
}

#[test]
fn b3_family_points_are_extremal_evaluations() {
    let dec = b3_dec();
    let space = dec.space2d.clone().unwrap();
    for (_, _, pt, generic) in b3_dual_families(9) {
        let l = MomentFunctional::from_point(&space, &Point::Float(pt.clone())).unwrap();
        assert!(in_dual_cone(&l, &dec, 1e-9).unwrap().member);
        if generic {
            let e = extremality_check(&l, &dec, 1e-9).unwrap();
            assert!(e.extremal, "{:?} w2 {}", pt, e.w2_dim);
            assert_eq!(e.w2_dim, 3);
        }
    }
    // the exact point (1,1,0)/√2 family member: W2 = ker ev, and the moments are proportional to ev
    let l = MomentFunctional::from_point(&space, &Point::from_ints(&[1, 1, 0])).unwrap();
    let km = kernel_module(&l, &dec, 0.0).unwrap();
    assert_eq!(km.w2_dim, 3);
    let mut rows = match km.w2_rows {
        KernelVectors::Exact(r) => r,
        KernelVectors::Float(_) => panic!(),
    };
    // the unique functional vanishing on W2 is ev itself
    let ns = reflsos_core::linalg::nullspace(&rows, space.dim());
    assert_eq!(ns.len(), 1);
    let v = exact_values(&l);
    rows.clear();
    rows.push(ns[0].clone());
    rows.push(v);
    assert_eq!(rank(&rows), 1);
}

#[test]
fn d4_cone_is_simplicial() {
    // functionals as random combinations of the three generators: member iff coefficients are nonnegative
    let dec = d4_dec();
    let space = dec.space2d.clone().unwrap();
    let gens: Vec<MomentFunctional> = d4_generators()
        .iter()
        .map(|p| MomentFunctional::from_point(&space, &Point::from_ints(p)).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut inside, mut outside) = (0, 0);
    for _ in 0..500 {
        let c: Vec<Q> = (0..3).map(|_| q(rng.gen_range(-6..=20), rng.gen_range(1..=6))).collect();
        let terms: Vec<(Q, &MomentFunctional)> = c.iter().cloned().zip(gens.iter()).collect();
        let l = MomentFunctional::combine(&terms).unwrap();
        let vals = exact_values(&l);
        let member = in_dual_cone(&l, &dec, 0.0).unwrap().member;
        let coords = d4_cone_coordinates(&space, &vals).unwrap();
        assert_eq!(member, coords.iter().all(|x| !x.is_negative()), "{:?}", c);
        assert_eq!(member, c.iter().all(|x| !x.is_negative()), "{:?}", c);
        if member {
            inside += 1;
        } else {
            outside += 1;
        }
    }
    assert!(inside > 10 && outside > 10);
}

#[test]
fn verify_family_cases() {
    let r = verify_family(FamilyCase::D4Quartics, 50, 1).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    let r = verify_family(FamilyCase::B3Octics, 8, 0).unwrap();
    assert!(r.passed(), "{:?}", r.checks);
    assert_eq!(r.samples.len(), 16);
    assert_eq!("bn-octics:5".parse::<FamilyCase>().unwrap(), FamilyCase::BnOctics(5));
    assert!("octics".parse::<FamilyCase>().is_err());
}

#[test]
fn testset_examples() {
    let b3 = grp(Family::B, 3);
    let p2 = power_sum(3, 2);
    let e1e3 = &p2 * &elementary(3, 3).pow(2);
    assert!(testset_nonneg(&b3, &p2.pow(4), TestSetMode::B3Octic).unwrap());
    assert!(testset_nonneg(&b3, &e1e3, TestSetMode::B3Octic).unwrap());
    let bad = &e1e3 - &p2.pow(4).scale(&q(1, 100));
    assert!(!testset_nonneg(&b3, &bad, TestSetMode::B3Octic).unwrap());

    let s4 = grp(Family::S, 4);
    assert!(!testset_nonneg(&s4, &-&power_sum(4, 4), TestSetMode::SymmetricQuartic).unwrap());
    assert!(testset_nonneg(&s4, &power_sum(4, 2).pow(2), TestSetMode::SymmetricQuartic).unwrap());
    // S4 restrictions: diagonal, (3,1), (2,2)
    let r = testset_restrictions(&s4, &power_sum(4, 4), TestSetMode::SymmetricQuartic).unwrap();
    assert_eq!(r.len(), 3);
    assert_eq!(binary_coefficients(&r[0], 4).unwrap(), vec![qi(4), qi(0), qi(0), qi(0), qi(0)]);
    assert!(testset_restrictions(&b3, &power_sum(3, 4), TestSetMode::SymmetricQuartic).is_err());
    assert!(testset_restrictions(&s4, &Poly::var(4, 0).pow(4), TestSetMode::SymmetricQuartic).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    // a form the test set accepts has no negative value at random points
    #[test]
    fn testset_accepts_only_nonnegative(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4, seed in 0u64..1000) {
        let n = 4;
        let g = grp(Family::S, n);
        let p1 = power_sum(n, 1);
        let f = &(&(&power_sum(n, 4).scale(&qi(a)) + &power_sum(n, 2).pow(2).scale(&qi(b)))
            + &(&power_sum(n, 3) * &p1).scale(&qi(c)))
            + &(&power_sum(n, 2) * &p1.pow(2)).scale(&qi(d));
        let accepted = testset_nonneg(&g, &f, TestSetMode::SymmetricQuartic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut least = f64::INFINITY;
        for _ in 0..400 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            least = least.min(f.eval_f64(&x).unwrap());
        }
        if accepted {
            prop_assert!(least >= -1e-9, "accepted but f = {} somewhere", least);
        }
    }
}
