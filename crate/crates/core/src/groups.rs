//! The reflection groups `S_n`, `B_n`, `D_n` acting by signed permutations,
//! orbit-form Reynolds operator, fundamental invariants and rewriting of
//! invariant forms in fundamental coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{inverse, QMatrix};
use crate::poly::{binomial, qi, Monomial, Poly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    S,
    B,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::S => 'S',
            Family::B => 'B',
            Family::D => 'D',
        }
    }

    /// Whether isotypes are labelled by multipartitions.
    pub fn is_signed(self) -> bool {
        self != Family::S
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReflectionGroup {
    family: Family,
    n: usize,
    degrees: Vec<u32>,
    order: u128,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl ReflectionGroup {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let min = if family == Family::D { 2 } else { 1 };
        if n < min {
            return Err(Error::InvalidGroup(format!("{}:{}", family.letter(), n)));
        }
        let (degrees, order): (Vec<u32>, u128) = match family {
            Family::S => ((1..=n as u32).collect(), factorial(n)),
            Family::B => ((1..=n as u32).map(|k| 2 * k).collect(), factorial(n) << n),
            Family::D => {
                let mut d: Vec<u32> = (1..n as u32).map(|k| 2 * k).collect();
                d.push(n as u32);
                (d, factorial(n) << (n - 1))
            }
        };
        Ok(ReflectionGroup { family, n, degrees, order })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// Number of reflections, the degree of `Δ`.
    pub fn num_reflections(&self) -> u32 {
        self.degrees.iter().map(|d| d - 1).sum()
    }

    /// `N_G(k)`: number of `α ∈ ℕ₀ⁿ` with `Σ α_i d_i = k`.
    pub fn n_g(&self, k: u32) -> usize {
        let k = k as usize;
        let mut ways = vec![0usize; k + 1];
        ways[0] = 1;
        for &d in &self.degrees {
            let d = d as usize;
            for s in d..=k {
                ways[s] += ways[s - d];
            }
        }
        ways[k]
    }

    pub fn contains(&self, g: &SignedPermutation) -> bool {
        if g.perm.len() != self.n {
            return false;
        }
        match self.family {
            Family::S => g.signs.iter().all(|&s| s > 0),
            Family::B => true,
            Family::D => g.signs.iter().filter(|&&s| s < 0).count() % 2 == 0,
        }
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> SignedPermutation {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut signs = vec![1i8; n];
        if self.family != Family::S {
            for s in signs.iter_mut() {
                if rng.gen::<bool>() {
                    *s = -1;
                }
            }
            if self.family == Family::D && signs.iter().filter(|&&s| s < 0).count() % 2 == 1 {
                signs[n - 1] = -signs[n - 1];
            }
        }
        SignedPermutation { perm, signs }
    }

    /// Generating reflections.
    pub fn generators(&self) -> Vec<SignedPermutation> {
        let n = self.n;
        let mut gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            gens.push(SignedPermutation { perm, signs: vec![1; n] });
        }
        match self.family {
            Family::S => {}
            Family::B => {
                let mut signs = vec![1; n];
                signs[0] = -1;
                gens.push(SignedPermutation { perm: (0..n).collect(), signs });
            }
            Family::D => {
                if n >= 2 {
                    let mut signs = vec![1; n];
                    signs[0] = -1;
                    signs[1] = -1;
                    gens.push(SignedPermutation { perm: (0..n).collect(), signs });
                }
            }
        }
        gens
    }

    /// Exact invariance test: every term's coefficient agrees with its
    /// orbit representative and whole orbits are present.
    pub fn is_invariant(&self, p: &Poly) -> bool {
        if p.nvars() != self.n {
            return false;
        }
        let mut count: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (m, c) in p.terms() {
            if !self.key_survives(m.exps()) {
                return false;
            }
            let key = orbit_key(m.exps());
            if p.coeff(&key) != *c {
                return false;
            }
            *count.entry(key).or_insert(0) += 1;
        }
        count.iter().all(|(k, &c)| c as u128 == orbit_size(k))
    }

    /// Whether the Reynolds image of monomials with these exponents is nonzero.
    pub fn key_survives(&self, exps: &[u32]) -> bool {
        match self.family {
            Family::S => true,
            Family::B => exps.iter().all(|e| e % 2 == 0),
            Family::D => exps.iter().all(|e| e % 2 == 0) || exps.iter().all(|e| e % 2 == 1),
        }
    }

    /// Reynolds image in orbit form: map from sorted (descending) exponent
    /// key to the coefficient of the corresponding orbit sum.
    pub fn reynolds_orbit(&self, p: &Poly) -> BTreeMap<Vec<u32>, Q> {
        let mut sums: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (m, c) in p.terms() {
            if !self.key_survives(m.exps()) {
                continue;
            }
            let e = sums.entry(orbit_key(m.exps())).or_insert_with(Q::zero);
            *e += c;
        }
        sums.retain(|_, c| !c.is_zero());
        for (k, c) in sums.iter_mut() {
            *c /= qi(orbit_size(k) as i64);
        }
        sums
    }

    /// `R_G(p)`, computed by orbit averaging.
    pub fn reynolds(&self, p: &Poly) -> Result<Poly> {
        if p.nvars() != self.n {
            return Err(Error::Dimension { expected: self.n, got: p.nvars() });
        }
        let mut out = Poly::zero(self.n);
        for (k, c) in self.reynolds_orbit(p) {
            for e in distinct_permutations(&k) {
                out.add_term(Monomial::new(e), c.clone());
            }
        }
        Ok(out)
    }

    /// Sorted exponent keys of degree `d` whose orbit sums span `H^G_{n,d}`.
    pub fn orbit_keys(&self, d: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let n = self.n;
        fn rec(left: u32, max: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == n {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for e in (0..=left.min(max)).rev() {
                cur.push(e);
                rec(left - e, e, n, cur, out);
                cur.pop();
            }
        }
        rec(d, d, n, &mut Vec::new(), &mut out);
        out.retain(|k| self.key_survives(k));
        out
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.family.letter(), self.n)
    }
}

impl fmt::Display for ReflectionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family.letter(), self.n)
    }
}

impl FromStr for ReflectionGroup {
    type Err = Error;

    /// Parses `S:n`, `B:n` or `D:n`; the colon may be omitted.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(String::from(s));
        let t = s.trim();
        let (f, n) = match t.split_once(':') {
            Some(p) => p,
            None if t.is_char_boundary(1) && t.len() > 1 => t.split_at(1),
            None => return Err(bad()),
        };
        let family = match f.trim() {
            "S" | "s" | "A" => Family::S,
            "B" | "b" => Family::B,
            "D" | "d" => Family::D,
            _ => return Err(bad()),
        };
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        ReflectionGroup::new(family, n)
    }
}

/// Exponents sorted descending.
pub fn orbit_key(exps: &[u32]) -> Vec<u32> {
    let mut k = exps.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

/// Number of distinct permutations of an exponent vector.
pub fn orbit_size(exps: &[u32]) -> u128 {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in exps {
        *counts.entry(e).or_insert(0) += 1;
    }
    let mut left = exps.len() as u64;
    let mut out: u128 = 1;
    for &c in counts.values() {
        out *= binomial(left, c as u64);
        left -= c as u64;
    }
    out
}

/// All distinct permutations of `k`, in descending lexicographic order.
pub fn distinct_permutations(k: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = k.to_vec();
    cur.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![cur.clone()];
    // previous permutation in lex order
    loop {
        let n = cur.len();
        if n < 2 {
            return out;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] <= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while cur[j] >= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Signed permutation acting by `X_i ↦ s_i X_{π(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    /// zero-based images
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { perm: (0..n).collect(), signs: vec![1; n] }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidLabel(format!("not a permutation: {:?}", perm)));
            }
            seen[p] = true;
        }
        if signs.len() != n || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidLabel(format!("bad signs: {:?}", signs)));
        }
        Ok(SignedPermutation { perm, signs })
    }

    /// Transposition of `X_i` and `X_j` (one-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut g = Self::identity(n);
        g.perm.swap(i - 1, j - 1);
        g
    }

    /// Sign change of `X_i` (one-based).
    pub fn sign_flip(n: usize, i: usize) -> Self {
        let mut g = Self::identity(n);
        g.signs[i - 1] = -1;
        g
    }

    /// `self ∘ other` as substitutions: apply `other`, then `self`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        SignedPermutation { perm, signs }
    }

    pub fn act(&self, p: &Poly) -> Result<Poly> {
        if p.nvars() != self.perm.len() {
            return Err(Error::Dimension { expected: self.perm.len(), got: p.nvars() });
        }
        Ok(p.relabel(&self.perm, &self.signs))
    }
}

/// Choice of fundamental invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coords {
    /// `p_k = Σ X_i^k` (and `e_n` for `D_n`)
    PowerSums,
    /// `p_k / n`
    PowerMeans,
    /// `e_k(X²)`, for `B_n`
    ElementarySq,
}

impl Coords {
    pub fn tag(self) -> &'static str {
        match self {
            Coords::PowerSums => "psum",
            Coords::PowerMeans => "pmean",
            Coords::ElementarySq => "esq",
        }
    }
}

impl FromStr for Coords {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psum" | "power_sums" => Ok(Coords::PowerSums),
            "pmean" | "power_means" => Ok(Coords::PowerMeans),
            "esq" | "elementary_sq" => Ok(Coords::ElementarySq),
            _ => Err(Error::InvalidNaming { naming: String::from(s), family: String::from("?") }),
        }
    }
}

/// Power sum `Σ X_i^k`.
pub fn power_sum(n: usize, k: u32) -> Poly {
    let mut p = Poly::zero(n);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = k;
        p.add_term(Monomial::new(e), Q::one());
    }
    p
}

/// Elementary symmetric polynomial `e_k(X)`.
pub fn elementary(n: usize, k: usize) -> Poly {
    let mut p = Poly::zero(n);
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return p;
    }
    loop {
        let mut e = vec![0; n];
        for &i in &idx {
            e[i] = 1;
        }
        p.add_term(Monomial::new(e), Q::one());
        let mut t = k;
        loop {
            if t == 0 {
                return p;
            }
            t -= 1;
            if idx[t] < n - k + t {
                idx[t] += 1;
                for u in t + 1..k {
                    idx[u] = idx[u - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `ψ_1, …, ψ_n` with names and degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalBasis {
    pub coords: Coords,
    pub psis: Vec<Poly>,
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
}

impl FundamentalBasis {
    pub fn new(g: &ReflectionGroup, coords: Coords) -> Result<Self> {
        let n = g.n();
        let invalid = || Error::InvalidNaming {
            naming: String::from(coords.tag()),
            family: String::from(g.family().letter()),
        };
        let mean = |p: Poly, name: String| -> (Poly, String) {
            match coords {
                Coords::PowerMeans => (p.scale(&Q::new(1.into(), (n as i64).into())), format!("{}^({})", name, n)),
                _ => (p, name),
            }
        };
        let mut psis = Vec::new();
        let mut names = Vec::new();
        match (g.family(), coords) {
            (_, Coords::ElementarySq) if g.family() != Family::B => return Err(invalid()),
            (Family::B, Coords::ElementarySq) => {
                for k in 1..=n {
                    psis.push(elementary(n, k).substitute_squares());
                    names.push(format!("e{}", k));
                }
            }
            (Family::D, _) => {
                for k in 1..n {
                    let (p, s) = mean(power_sum(n, 2 * k as u32), format!("p{}", 2 * k));
                    psis.push(p);
                    names.push(s);
                }
                psis.push(elementary(n, n));
                names.push(format!("e{}", n));
            }
            (f, _) => {
                for &d in g.degrees() {
                    let (p, s) = mean(power_sum(n, d), format!("p{}", d));
                    psis.push(p);
                    names.push(s);
                }
                debug_assert!(f != Family::D);
            }
        }
        Ok(FundamentalBasis { coords, psis, names, degrees: g.degrees().to_vec() })
    }

    pub fn len(&self) -> usize {
        self.psis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psis.is_empty()
    }

    /// Renders a polynomial in `z` using the invariant names.
    pub fn format(&self, z: &Poly) -> String {
        let mut s = String::new();
        let _ = z.write_with(&mut s, &|i| self.names[i].clone());
        s
    }

    /// `Π ψ_i^{z_i}` expanded.
    pub fn expand_monomial(&self, z: &[u32]) -> Poly {
        let n = self.psis.first().map_or(0, Poly::nvars);
        let mut p = Poly::one(n);
        for (i, &e) in z.iter().enumerate() {
            if e > 0 {
                p = &p * &self.psis[i].pow(e);
            }
        }
        p
    }

    /// Substitutes `ψ_i` for `z_i`.
    pub fn substitute(&self, z: &Poly) -> Result<Poly> {
        z.compose(&self.psis)
    }

    /// Exponent vectors `z` with `Σ z_i d_i = d`, lexicographically descending.
    pub fn invariant_monomials(&self, d: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        fn rec(i: usize, left: u32, degs: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == degs.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for e in (0..=left / degs[i]).rev() {
                cur.push(e);
                rec(i + 1, left - e * degs[i], degs, cur, out);
                cur.pop();
            }
        }
        rec(0, d, &self.degrees, &mut Vec::new(), &mut out);
        out
    }
}

/// `H^G_{n,d}` with its invariant monomial basis and a cached inverse of
/// the coefficient system on orbit representatives.
#[derive(Clone, Debug)]
pub struct InvariantSpace {
    pub group: ReflectionGroup,
    pub basis: FundamentalBasis,
    pub degree: u32,
    pub monomials: Vec<Vec<u32>>,
    pub expanded: Vec<Poly>,
    pub keys: Vec<Vec<u32>>,
    inv: QMatrix,
}

impl InvariantSpace {
    pub fn new(group: &ReflectionGroup, basis: &FundamentalBasis, d: u32) -> Result<Self> {
        let monomials = basis.invariant_monomials(d);
        let keys = group.orbit_keys(d);
        if monomials.len() != keys.len() {
            return Err(Error::Internal(format!(
                "{} invariant monomials but {} orbit keys in degree {}",
                monomials.len(),
                keys.len(),
                d
            )));
        }
        let expanded: Vec<Poly> = monomials.iter().map(|z| basis.expand_monomial(z)).collect();
        let m: QMatrix = keys
            .iter()
            .map(|k| expanded.iter().map(|p| p.coeff(k)).collect())
            .collect();
        let inv = inverse(&m).ok_or_else(|| Error::Internal(format!("singular invariant system in degree {}", d)))?;
        Ok(InvariantSpace { group: group.clone(), basis: basis.clone(), degree: d, monomials, expanded, keys, inv })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Coordinates from orbit-form coefficients (orbit sums with the given
    /// coefficient on each representative).
    pub fn coords_from_orbit(&self, orbit: &BTreeMap<Vec<u32>, Q>) -> Result<Vec<Q>> {
        if let Some(k) = orbit.keys().find(|k| !self.keys.contains(k)) {
            return Err(Error::Internal(format!("orbit key {:?} outside degree {}", k, self.degree)));
        }
        let c: Vec<Q> = self.keys.iter().map(|k| orbit.get(k).cloned().unwrap_or_else(Q::zero)).collect();
        Ok(crate::linalg::mat_vec(&self.inv, &c))
    }

    /// Coordinates of an invariant form of this degree.
    pub fn coords(&self, f: &Poly) -> Result<Vec<Q>> {
        if f.nvars() != self.group.n() {
            return Err(Error::Dimension { expected: self.group.n(), got: f.nvars() });
        }
        if !f.is_zero() && !f.is_homogeneous_of(self.degree) {
            return Err(Error::NotHomogeneous { degree: self.degree });
        }
        if !self.group.is_invariant(f) {
            return Err(Error::NotInvariant { group: self.group.label() });
        }
        let c: Vec<Q> = self.keys.iter().map(|k| f.coeff(k)).collect();
        Ok(crate::linalg::mat_vec(&self.inv, &c))
    }

    /// Coordinates as a polynomial in the symbols `z_i`.
    pub fn to_z(&self, coords: &[Q]) -> Poly {
        let mut z = Poly::zero(self.basis.len());
        for (m, c) in self.monomials.iter().zip(coords) {
            z.add_term(Monomial::new(m.clone()), c.clone());
        }
        z
    }

    /// Coordinates of a `z`-polynomial of this degree.
    pub fn from_z(&self, z: &Poly) -> Vec<Q> {
        self.monomials.iter().map(|m| z.coeff(m)).collect()
    }

    pub fn expand(&self, coords: &[Q]) -> Poly {
        let mut p = Poly::zero(self.group.n());
        for (e, c) in self.expanded.iter().zip(coords) {
            if !c.is_zero() {
                p.add_scaled(e, c);
            }
        }
        p
    }

    /// Evaluations of the basis elements at a point.
    pub fn eval_basis_f64(&self, a: &[f64]) -> Result<Vec<f64>> {
        let psi: Vec<f64> = self.basis.psis.iter().map(|p| p.eval_f64(a)).collect::<Result<_>>()?;
        Ok(self.monomials.iter().map(|m| eval_z_f64(m, &psi)).collect())
    }

    pub fn eval_basis_exact(&self, a: &[Q]) -> Result<Vec<Q>> {
        let psi: Vec<Q> = self.basis.psis.iter().map(|p| p.eval_exact(a)).collect::<Result<_>>()?;
        Ok(self
            .monomials
            .iter()
            .map(|m| {
                let mut v = Q::one();
                for (x, &e) in psi.iter().zip(m) {
                    for _ in 0..e {
                        v *= x;
                    }
                }
                v
            })
            .collect())
    }
}

fn eval_z_f64(m: &[u32], psi: &[f64]) -> f64 {
    m.iter().zip(psi).map(|(&e, x)| libm::pow(*x, e as f64)).product()
}

/// Rewrites an invariant form in fundamental coordinates.
pub fn rewrite_in_fundamentals(g: &ReflectionGroup, basis: &FundamentalBasis, f: &Poly) -> Result<Poly> {
    let d = match f.homogeneous_degree() {
        Some(d) => d,
        None if f.is_zero() => return Ok(Poly::zero(basis.len())),
        None => return Err(Error::NotHomogeneous { degree: f.degree().unwrap_or(0) }),
    };
    let space = InvariantSpace::new(g, basis, d)?;
    let c = space.coords(f)?;
    Ok(space.to_z(&c))
}
