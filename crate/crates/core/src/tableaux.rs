//! Partitions, multipartitions and standard Young tableaux with the
//! word / index / charge statistics and the stabilization maps.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Non-increasing list of positive parts; may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidLabel(alloc::format!("not a partition: {:?}", parts)));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(λ₁+1, λ₂, …)`; the empty partition becomes `(1)`.
    pub fn plus_one(&self) -> Partition {
        let mut p = self.0.clone();
        if p.is_empty() {
            p.push(1);
        } else {
            p[0] += 1;
        }
        Partition(p)
    }

    pub fn conjugate(&self) -> Partition {
        let mut c = Vec::new();
        if let Some(&w) = self.0.first() {
            for j in 0..w {
                c.push(self.0.iter().filter(|&&r| r > j).count());
            }
        }
        Partition(c)
    }

    /// Number of standard fillings, by the hook length formula.
    pub fn num_syt(&self) -> u128 {
        let n = self.size() as u128;
        let conj = self.conjugate();
        let mut num: u128 = 1;
        let mut hooks: Vec<u128> = Vec::new();
        for (i, &r) in self.0.iter().enumerate() {
            for j in 0..r {
                hooks.push((r - j - 1 + conj.0[j] - i - 1 + 1) as u128);
            }
        }
        // multiply n! progressively, dividing by hooks when possible
        let mut pending = hooks;
        for k in 2..=n {
            num *= k;
            pending.retain(|&h| {
                if num % h == 0 {
                    num /= h;
                    false
                } else {
                    true
                }
            });
        }
        for h in pending {
            num /= h;
        }
        num
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p)?;
        }
        f.write_str(")")
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=left.min(max)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Pair `(λ, μ)`; a plain partition is `(λ, ∅)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPartition {
    pub first: Partition,
    pub second: Partition,
}

impl MultiPartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        MultiPartition { first, second }
    }

    pub fn single(p: Partition) -> Self {
        MultiPartition { first: p, second: Partition::empty() }
    }

    pub fn from_parts(a: &[usize], b: &[usize]) -> Result<Self> {
        Ok(MultiPartition { first: Partition::new(a.to_vec())?, second: Partition::new(b.to_vec())? })
    }

    pub fn size(&self) -> usize {
        self.first.size() + self.second.size()
    }

    pub fn swapped(&self) -> MultiPartition {
        MultiPartition { first: self.second.clone(), second: self.first.clone() }
    }

    pub fn plus_one(&self) -> MultiPartition {
        MultiPartition { first: self.first.plus_one(), second: self.second.clone() }
    }

    /// `C(n, |λ|)·f^λ·f^μ`.
    pub fn num_syt(&self) -> u128 {
        crate::poly::binomial(self.size() as u64, self.first.size() as u64)
            * self.first.num_syt()
            * self.second.num_syt()
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// All multipartitions of `n`, ordered by `|μ|` ascending then reverse-lex.
pub fn enumerate_multipartitions(n: usize) -> Vec<MultiPartition> {
    let mut out = Vec::new();
    for m in 0..=n {
        for a in enumerate_partitions(n - m) {
            for b in enumerate_partitions(m) {
                out.push(MultiPartition { first: a.clone(), second: b });
            }
        }
    }
    out
}

/// Filling of a (multi)partition shape; entries are `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    pub rows: Vec<Vec<usize>>,
    pub rows2: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>, rows2: Vec<Vec<usize>>) -> Result<Self> {
        let t = Tableau { rows, rows2 };
        t.validate()?;
        Ok(t)
    }

    pub fn single(rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(rows, Vec::new())
    }

    pub fn shape(&self) -> MultiPartition {
        MultiPartition {
            first: Partition(self.rows.iter().map(Vec::len).collect()),
            second: Partition(self.rows2.iter().map(Vec::len).collect()),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.iter().chain(&self.rows2).map(Vec::len).sum()
    }

    pub fn component(&self, c: usize) -> &[Vec<usize>] {
        if c == 0 {
            &self.rows
        } else {
            &self.rows2
        }
    }

    /// Entries of one component in increasing order.
    pub fn letters(&self, c: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.component(c).iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Checks standardness: shapes are partitions, rows and columns increase,
    /// entries are exactly `1..=n`.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidLabel(alloc::format!("{}: {:?}", m, self)));
        for comp in [&self.rows, &self.rows2] {
            if comp.iter().any(Vec::is_empty) || comp.windows(2).any(|w| w[0].len() < w[1].len()) {
                return bad("shape is not a partition");
            }
            for r in comp.iter() {
                if r.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("row not increasing");
                }
            }
            for i in 1..comp.len() {
                for j in 0..comp[i].len() {
                    if comp[i][j] <= comp[i - 1][j] {
                        return bad("column not increasing");
                    }
                }
            }
        }
        let mut all: Vec<usize> = self.rows.iter().chain(&self.rows2).flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &v)| v != i + 1) {
            return bad("entries are not 1..n");
        }
        Ok(())
    }

    /// Reading word: columns bottom to top, left to right; first component then second.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.n());
        for comp in [&self.rows, &self.rows2] {
            let width = comp.first().map_or(0, Vec::len);
            for j in 0..width {
                for i in (0..comp.len()).rev() {
                    if j < comp[i].len() {
                        w.push(comp[i][j]);
                    }
                }
            }
        }
        w
    }

    /// Row reading word (rows top to bottom, first component then second).
    pub fn row_word(&self) -> Vec<usize> {
        self.rows.iter().chain(&self.rows2).flatten().copied().collect()
    }

    pub fn charge(&self) -> u32 {
        index_and_charge(&self.word()).charge
    }

    /// The tableau with its two components exchanged.
    pub fn swapped(&self) -> Tableau {
        Tableau { rows: self.rows2.clone(), rows2: self.rows.clone() }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comp = |f: &mut fmt::Formatter<'_>, c: &[Vec<usize>]| -> fmt::Result {
            if c.is_empty() {
                return f.write_str("∅");
            }
            for (i, r) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str("/")?;
                }
                for v in r {
                    write!(f, "{}", v)?;
                    if c.iter().flatten().any(|&x| x > 9) {
                        f.write_str(".")?;
                    }
                }
            }
            Ok(())
        };
        f.write_str("(")?;
        comp(f, &self.rows)?;
        f.write_str(",")?;
        comp(f, &self.rows2)?;
        f.write_str(")")
    }
}

/// Word, index and charge of a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeData {
    pub word: Vec<usize>,
    /// `index[p]` is the index of the value at position `p` of the word.
    pub index: Vec<u32>,
    pub charge: u32,
}

/// Index and charge: `index(1)=0`, `index(k+1)=index(k)` if `k+1` is right
/// of `k` in `w`, else `index(k)+1`.
pub fn index_and_charge(w: &[usize]) -> ChargeData {
    let n = w.len();
    let mut pos = vec![0usize; n + 1];
    for (p, &v) in w.iter().enumerate() {
        pos[v] = p;
    }
    let mut by_value = vec![0u32; n + 1];
    for v in 2..=n {
        by_value[v] = by_value[v - 1] + u32::from(pos[v] < pos[v - 1]);
    }
    let index: Vec<u32> = w.iter().map(|&v| by_value[v]).collect();
    let charge = index.iter().sum();
    ChargeData { word: w.to_vec(), index, charge }
}

/// Growing state for tableau enumeration.
struct Builder<'a> {
    shape: &'a MultiPartition,
    comps: [Vec<Vec<usize>>; 2],
    n: usize,
    /// word position key of each placed value: (component, column, -row)
    keys: Vec<(usize, usize, isize)>,
    max_charge: u32,
    out: Vec<(Tableau, u32)>,
}

impl<'a> Builder<'a> {
    fn target(&self, c: usize) -> &'a [usize] {
        if c == 0 {
            self.shape.first.parts()
        } else {
            self.shape.second.parts()
        }
    }

    fn run(&mut self, v: usize, charge: u32) {
        if v > self.n {
            self.out.push((Tableau { rows: self.comps[0].clone(), rows2: self.comps[1].clone() }, charge));
            return;
        }
        for c in 0..2 {
            let target = self.target(c);
            for i in 0..target.len() {
                let len = self.comps[c].get(i).map_or(0, Vec::len);
                if len >= target[i] {
                    continue;
                }
                if i > 0 && self.comps[c].get(i - 1).map_or(0, Vec::len) <= len {
                    continue;
                }
                let key = (c, len, -(i as isize));
                let mut ch = charge;
                if v > 1 && key < self.keys[v - 2] {
                    ch += (self.n - (v - 1)) as u32;
                    if ch > self.max_charge {
                        continue;
                    }
                }
                if self.comps[c].len() == i {
                    self.comps[c].push(Vec::new());
                }
                self.comps[c][i].push(v);
                self.keys.push(key);
                self.run(v + 1, ch);
                self.keys.pop();
                self.comps[c][i].pop();
                if self.comps[c][i].is_empty() {
                    self.comps[c].pop();
                }
            }
        }
    }
}

/// Standard tableaux of `shape` with charge at most `max_charge`, together
/// with their charges, ordered lexicographically by row reading word.
pub fn enumerate_syt_charge_at_most(shape: &MultiPartition, max_charge: u32) -> Vec<(Tableau, u32)> {
    let mut b = Builder {
        shape,
        comps: [Vec::new(), Vec::new()],
        n: shape.size(),
        keys: Vec::new(),
        max_charge,
        out: Vec::new(),
    };
    b.run(1, 0);
    let mut out = b.out;
    out.sort_by_cached_key(|(t, _)| t.row_word());
    out
}

/// All standard tableaux of `shape`, lexicographic on row reading words.
pub fn enumerate_syt(shape: &MultiPartition) -> Vec<Tableau> {
    enumerate_syt_charge_at_most(shape, u32::MAX)
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

/// The first standard tableau in enumeration order: rows filled in reading order.
pub fn first_syt(shape: &MultiPartition) -> Tableau {
    let mut v = 0;
    let mut fill = |p: &Partition| -> Vec<Vec<usize>> {
        p.parts()
            .iter()
            .map(|&r| {
                (0..r)
                    .map(|_| {
                        v += 1;
                        v
                    })
                    .collect()
            })
            .collect()
    };
    let rows = fill(&shape.first);
    let rows2 = fill(&shape.second);
    Tableau { rows, rows2 }
}

/// Whether the first row of the first component begins with the `k`
/// smallest entries of that component.
pub fn in_pi_set(t: &Tableau, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let letters = t.letters(0);
    match t.rows.first() {
        Some(r) => r.len() >= k && r[..k] == letters[..k],
        None => false,
    }
}

/// `Π_k` of a shape: standard tableaux whose first row starts with the `k`
/// smallest entries of the first component.
pub fn pi_set(shape: &MultiPartition, k: usize) -> Vec<Tableau> {
    if shape.first.parts().first().copied().unwrap_or(0) < k {
        return Vec::new();
    }
    enumerate_syt(shape).into_iter().filter(|t| in_pi_set(t, k)).collect()
}

/// The stabilization map `Π_k^Λ → Π_{k+1}^{Λ+1}`.
///
/// With `i` the first column where the first row differs from `1,2,…`, all
/// entries `≥ i` are raised by one and `i` is inserted at column `i` of the
/// first row.
pub fn rho_step(t: &Tableau, k: usize) -> Result<Tableau> {
    t.validate()?;
    if !in_pi_set(t, k) {
        return Err(Error::Precondition(alloc::format!("{} is not in Π_{}", t, k)));
    }
    let first = t.rows.first().cloned().unwrap_or_default();
    let i = first
        .iter()
        .enumerate()
        .find(|(j, &v)| v != j + 1)
        .map_or(first.len() + 1, |(j, _)| j + 1);
    let bump = |v: usize| if v >= i { v + 1 } else { v };
    let mut rows: Vec<Vec<usize>> = t.rows.iter().map(|r| r.iter().map(|&v| bump(v)).collect()).collect();
    let rows2: Vec<Vec<usize>> = t.rows2.iter().map(|r| r.iter().map(|&v| bump(v)).collect()).collect();
    if rows.is_empty() {
        rows.push(Vec::new());
    }
    rows[0].insert(i - 1, i);
    let out = Tableau { rows, rows2 };
    out.validate()?;
    Ok(out)
}

/// Distinct images check used by the stabilization audit.
pub fn is_injective_on(ts: &[Tableau], k: usize) -> bool {
    let mut seen = BTreeSet::new();
    for t in ts {
        match rho_step(t, k) {
            Ok(img) => {
                if !seen.insert(img) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Renders a shape for messages.
pub fn shape_name(shape: &MultiPartition, multi: bool) -> String {
    if multi {
        alloc::format!("{}", shape)
    } else {
        alloc::format!("{}", shape.first)
    }
}
