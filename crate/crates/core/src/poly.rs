//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose order is graded
//! lexicographic with `X1 > X2 > ... > Xn`. Iteration in descending order
//! gives the canonical term order used for printing and serialization.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Shorthand for the rational `p/q`.
pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

/// Shorthand for an integer as a rational.
pub fn qi(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

/// Converts a rational to the nearest double.
pub fn q_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // scale down huge numerators and denominators together
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let a = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let b = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            a / b
        }
    }
}

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The variable `X_{i+1}` (zero based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exps(self) -> Vec<u32> {
        self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Π α_i!` as an integer.
    pub fn factorial_weight(&self) -> BigInt {
        let mut w = BigInt::one();
        for &e in &self.0 {
            for k in 2..=e {
                w *= BigInt::from(k);
            }
        }
        w
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point at which polynomials are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Exact(Vec<Q>),
    Float(Vec<f64>),
}

impl Point {
    pub fn len(&self) -> usize {
        match self {
            Point::Exact(v) => v.len(),
            Point::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Point::Exact(v.iter().map(|&x| qi(x)).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Point::Exact(v) => v.iter().map(q_to_f64).collect(),
            Point::Float(v) => v.clone(),
        }
    }
}

/// Result of an evaluation: exact for rational points.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Q),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => q_to_f64(x),
            Value::Float(x) => *x,
        }
    }
}

/// Sparse polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The variable `X_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, i).0, Q::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exps), c);
        }
        Poly { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Q)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Dimension { expected: nvars, got: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter().rev()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree if every term has the same total degree (zero counts as any).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = match it.next() {
            Some(m) => m.degree(),
            None => return Some(0),
        };
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// Adds `c·X^m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::Dimension { expected: self.nvars, got: other.nvars })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly { nvars: self.nvars, terms: acc })
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// In-place `self += c·other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        assert_eq!(self.nvars, other.nvars, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, a: &[Q]) -> Result<Q> {
        if a.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: a.len() });
        }
        let mut powers: Vec<Vec<Q>> = a.iter().map(|x| vec![Q::one(), x.clone()]).collect();
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &a[i];
                    pw.push(next);
                }
                t *= &pw[e as usize];
            }
            total += t;
        }
        Ok(total)
    }

    /// Floating point evaluation.
    pub fn eval_f64(&self, a: &[f64]) -> Result<f64> {
        if a.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: a.len() });
        }
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = q_to_f64(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= a[i];
                }
            }
            total += t;
        }
        Ok(total)
    }

    pub fn evaluate(&self, a: &Point) -> Result<Value> {
        match a {
            Point::Exact(v) => self.eval_exact(v).map(Value::Exact),
            Point::Float(v) => self.eval_f64(v).map(Value::Float),
        }
    }

    /// Replaces every `X_i` by `X_i^2`.
    pub fn substitute_squares(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0.iter().map(|e| 2 * e).collect()), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `images[i]` for the variable `z_{i+1}`.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: images.len() });
        }
        let target = match images.first() {
            Some(p) => p.nvars,
            None => return Ok(Poly::constant(0, self.coeff(&[]))),
        };
        for p in images {
            if p.nvars != target {
                return Err(Error::Dimension { expected: target, got: p.nvars });
            }
        }
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &images[i];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            out.add_scaled(&t, &Q::one());
        }
        Ok(out)
    }

    /// Signed relabelling `X_i -> signs[i]·X_{perm[i]}`.
    pub fn relabel(&self, perm: &[usize], signs: &[i8]) -> Poly {
        let n = self.nvars;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            let mut neg = false;
            for i in 0..n {
                e[perm[i]] = m.0[i];
                if signs[i] < 0 && m.0[i] % 2 == 1 {
                    neg = !neg;
                }
            }
            terms.insert(Monomial(e), if neg { -c.clone() } else { c.clone() });
        }
        Poly { nvars: n, terms }
    }

    /// Partial derivative with respect to `X_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ne = m.0.clone();
            ne[i] -= 1;
            r.add_term(Monomial(ne), c * Q::from_integer(BigInt::from(e)));
        }
        r
    }

    /// `∂^α g` for a multi-index `α`.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Poly {
        let mut r = Poly::zero(self.nvars);
        'terms: for (m, c) in &self.terms {
            let mut ne = m.0.clone();
            let mut coef = c.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if ne[i] < a {
                    continue 'terms;
                }
                for k in 0..a {
                    coef *= Q::from_integer(BigInt::from(ne[i] - k));
                }
                ne[i] -= a;
            }
            r.add_term(Monomial(ne), coef);
        }
        r
    }

    /// The polynomial `self(∂) g`.
    pub fn apply_as_operator(&self, g: &Poly) -> Result<Poly> {
        self.check(g)?;
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            r.add_scaled(&g.derivative_multi(&m.0), c);
        }
        Ok(r)
    }

    /// Constant term of `self(∂) g`, computed as `Σ f_α g_α α!`.
    pub fn diff_pairing(&self, g: &Poly) -> Result<Q> {
        self.check(g)?;
        let (small, big) = if self.len() <= g.len() { (self, g) } else { (g, self) };
        let mut s = Q::zero();
        for (m, c) in &small.terms {
            if let Some(d) = big.terms.get(m) {
                s += c * d * Q::from_integer(m.factorial_weight());
            }
        }
        Ok(s)
    }

    /// Returns `(p, c)` with `self = c·p`, `p` having coprime integer
    /// coefficients and positive leading coefficient.
    pub fn primitive(&self) -> (Poly, Q) {
        if self.is_zero() {
            return (self.clone(), Q::one());
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den / c.denom());
            g = g.gcd(&v);
        }
        let mut scale = Q::new(g, den);
        if self.leading().unwrap().1.is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        (self.scale(&inv), scale)
    }

    /// Keeps only the terms whose exponent vectors satisfy `keep`.
    pub fn filter_terms<F: Fn(&[u32]) -> bool>(&self, keep: F) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(&m.0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Writes the polynomial with custom variable names.
    pub fn write_with(&self, f: &mut dyn fmt::Write, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            write_rational(f, &c.abs())?;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                write!(f, "*{}", names(i))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }

    /// Renders with variable names `name1, name2, ...`.
    pub fn to_string_with_prefix(&self, prefix: &str) -> String {
        let mut s = String::new();
        let _ = self.write_with(&mut s, &|i| alloc::format!("{}{}", prefix, i + 1));
        s
    }
}

fn write_rational(f: &mut dyn fmt::Write, c: &Q) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Text form `c*x<i>^<e>*...` with terms in descending graded-lex order.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|i| alloc::format!("x{}", i + 1))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

/// All exponent vectors of total degree `d` in `n` variables, descending graded-lex.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d, &mut vec![0; n], &mut out);
    out
}

/// Binomial coefficient as u128.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}
