use std::collections::BTreeSet;

use proptest::prelude::*;
use reflsos_core::tableaux::{
    enumerate_multipartitions, enumerate_partitions, enumerate_syt, in_pi_set, index_and_charge, is_injective_on,
    pi_set, rho_step, MultiPartition, Partition, Tableau,
};

fn shape(a: &[usize], b: &[usize]) -> MultiPartition {
    MultiPartition::from_parts(a, b).unwrap()
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

// brute force: every placement of 1..n in the diagram, filtered for standardness
fn brute_force_syt(sh: &MultiPartition) -> BTreeSet<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let cells: Vec<(usize, usize, usize)> = [sh.first.parts(), sh.second.parts()]
        .iter()
        .enumerate()
        .flat_map(|(c, p)| p.iter().enumerate().flat_map(move |(i, &r)| (0..r).map(move |j| (c, i, j))))
        .collect();
    let n = cells.len();
    let mut out = BTreeSet::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut comps = [
            sh.first.parts().iter().map(|&r| vec![0; r]).collect::<Vec<_>>(),
            sh.second.parts().iter().map(|&r| vec![0; r]).collect::<Vec<_>>(),
        ];
        for (k, &(c, i, j)) in cells.iter().enumerate() {
            comps[c][i][j] = p[k];
        }
        let ok = comps.iter().all(|rows| {
            rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
                && rows.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(a, b)| a > b))
        });
        if ok {
            let [a, b] = comps;
            out.insert((a, b));
        }
    });
    out
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

// columns left to right, each read bottom to top; first component then second
fn oracle_word(t: &Tableau) -> Vec<usize> {
    let mut w = Vec::new();
    for rows in [&t.rows, &t.rows2] {
        let width = rows.first().map_or(0, Vec::len);
        for j in 0..width {
            for r in rows.iter().rev() {
                if let Some(&v) = r.get(j) {
                    w.push(v);
                }
            }
        }
    }
    w
}

#[test]
fn partition_counts() {
    assert_eq!(enumerate_partitions(1).len(), 1);
    assert_eq!(enumerate_partitions(1)[0].parts(), &[1]);
    // oracle: p(n) via the recurrence over largest part
    fn p(n: usize, max: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=n.min(max)).map(|k| p(n - k, k)).sum()
    }
    for n in 1..=9 {
        let ps = enumerate_partitions(n);
        assert_eq!(ps.len(), p(n, n));
        let set: BTreeSet<Vec<usize>> = ps.iter().map(|q| q.parts().to_vec()).collect();
        assert_eq!(set.len(), ps.len());
        // reverse lexicographic
        for w in ps.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
    }
    assert_eq!(enumerate_partitions(4).len(), 5);
    assert_eq!(enumerate_partitions(5).len(), 7);
}

#[test]
fn invalid_partition() {
    assert!(Partition::new(vec![1, 2]).is_err());
    assert!(Partition::new(vec![2, 0]).is_err());
}

#[test]
fn syt_match_brute_force() {
    for n in 1..=6 {
        for sh in enumerate_multipartitions(n) {
            if sh.size() > 6 {
                continue;
            }
            let got: BTreeSet<_> = enumerate_syt(&sh).into_iter().map(|t| (t.rows, t.rows2)).collect();
            let want = brute_force_syt(&sh);
            assert_eq!(got, want, "shape {}", sh);
            assert_eq!(got.len() as u128, sh.num_syt());
        }
    }
}

#[test]
fn syt_examples() {
    let two_two = enumerate_syt(&shape(&[2, 2], &[]));
    assert_eq!(two_two.len(), 2);
    let mut charges: Vec<u32> = two_two.iter().map(Tableau::charge).collect();
    charges.sort();
    assert_eq!(charges, vec![2, 4]);
    assert_eq!(enumerate_syt(&shape(&[1], &[2])).len(), 3);
    for n in 1..6 {
        assert_eq!(enumerate_syt(&shape(&[n], &[])).len(), 1);
    }
    // order: lexicographic in row reading words
    let all = enumerate_syt(&shape(&[3, 2], &[]));
    for w in all.windows(2) {
        assert!(w[0].row_word() < w[1].row_word());
    }
}

#[test]
fn regular_representation_counts() {
    for n in 1..=7u128 {
        let s: u128 = enumerate_partitions(n as usize).iter().map(|p| p.num_syt().pow(2)).sum();
        assert_eq!(s, factorial(n));
    }
    for n in 1..=5u128 {
        let s: u128 = enumerate_multipartitions(n as usize).iter().map(|p| p.num_syt().pow(2)).sum();
        assert_eq!(s, (1u128 << n) * factorial(n));
    }
}

#[test]
fn words_and_indices() {
    let t = Tableau::new(vec![vec![1, 2], vec![4]], vec![vec![3]]).unwrap();
    let s = Tableau::new(vec![vec![1, 4], vec![2]], vec![vec![3]]).unwrap();
    assert_eq!(t.word(), vec![4, 1, 2, 3]);
    assert_eq!(s.word(), vec![2, 1, 4, 3]);
    let cs = index_and_charge(&s.word());
    assert_eq!(cs.index, vec![1, 0, 2, 1]);
    assert_eq!(cs.charge, 4);
    let ct = index_and_charge(&t.word());
    assert_eq!(ct.index, vec![1, 0, 0, 0]);
    assert_eq!(ct.charge, 1);
    let id: Vec<usize> = (1..=6).collect();
    let row = Tableau::single(vec![id.clone()]).unwrap();
    assert_eq!(row.word(), id);
    assert_eq!(index_and_charge(&id).charge, 0);
    assert!(Tableau::single(vec![vec![2, 1]]).is_err());
}

#[test]
fn words_match_oracle_and_charge_zero_iff_identity() {
    for n in 1..=6 {
        for sh in enumerate_multipartitions(n) {
            for t in enumerate_syt(&sh) {
                let w = t.word();
                assert_eq!(w, oracle_word(&t));
                let id: Vec<usize> = (1..=n).collect();
                assert_eq!(t.charge() == 0, w == id, "{}", t);
                let cd = index_and_charge(&w);
                assert_eq!(cd.charge, cd.index.iter().sum::<u32>());
            }
        }
    }
}

#[test]
fn pi_sets() {
    let sh = shape(&[3, 2], &[]);
    assert_eq!(pi_set(&sh, 1).len(), 5);
    let two: Vec<Tableau> = enumerate_syt(&sh).into_iter().filter(|t| t.rows[0][..2] == [1, 2]).collect();
    assert_eq!(pi_set(&sh, 2), two);
    let row = shape(&[5], &[]);
    assert_eq!(pi_set(&row, 5).len(), 1);
    assert!(pi_set(&sh, 4).is_empty());
}

#[test]
fn rho_examples() {
    let t = Tableau::single(vec![vec![1, 2, 3]]).unwrap();
    let r = rho_step(&t, 3).unwrap();
    assert_eq!(r.rows, vec![vec![1, 2, 3, 4]]);
    assert_eq!(r.charge(), 0);
    let sh = shape(&[4, 2], &[]);
    let pi = pi_set(&sh, 4);
    assert!(!pi.is_empty());
    for t in &pi {
        let r = rho_step(t, 4).unwrap();
        assert_eq!(r.shape(), shape(&[5, 2], &[]));
        assert_eq!(r.charge(), t.charge());
        assert!(in_pi_set(&r, 5));
    }
    assert!(is_injective_on(&pi, 4));
    let outside = Tableau::single(vec![vec![1, 3], vec![2]]).unwrap();
    assert!(rho_step(&outside, 2).is_err());
}

// multiset of nonzero index entries
fn nonzero_index(t: &Tableau) -> Vec<u32> {
    let mut v: Vec<u32> = index_and_charge(&t.word()).index.into_iter().filter(|&x| x > 0).collect();
    v.sort();
    v
}

#[test]
fn rho_exhaustive() {
    for n in 1..=7 {
        for sh in enumerate_multipartitions(n) {
            let w = sh.first.parts().first().copied().unwrap_or(0);
            for k in 1..=w {
                let pi = pi_set(&sh, k);
                let mut images = BTreeSet::new();
                for t in &pi {
                    let r = rho_step(t, k).unwrap();
                    assert_eq!(r.shape(), sh.plus_one());
                    assert_eq!(r.charge(), t.charge(), "{} k={}", t, k);
                    assert_eq!(nonzero_index(&r), nonzero_index(t));
                    images.insert((r.rows, r.rows2));
                }
                assert_eq!(images.len(), pi.len());
            }
        }
    }
}

#[test]
fn low_charge_needs_initial_row() {
    for total in 2..=8 {
        for k in 1..total {
            let d = (total - k) as u32;
            for p in enumerate_partitions(total) {
                if p.parts()[0] < k {
                    continue;
                }
                let sh = MultiPartition::single(p);
                for t in enumerate_syt(&sh) {
                    let starts: Vec<usize> = (1..=k).collect();
                    if t.rows[0][..k] != starts[..] {
                        assert!(t.charge() > d, "{} with k={} d={}", t, k, d);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn index_rule(perm in Just((1..=7usize).collect::<Vec<_>>()).prop_shuffle()) {
        let cd = index_and_charge(&perm);
        let pos = |v: usize| perm.iter().position(|&x| x == v).unwrap();
        let idx = |v: usize| cd.index[pos(v)];
        prop_assert_eq!(idx(1), 0);
        for k in 1..7 {
            let step = if pos(k + 1) > pos(k) { 0 } else { 1 };
            prop_assert_eq!(idx(k + 1), idx(k) + step);
        }
    }
}
