//! Polynomial text format.
//!
//! Sums and products of rationals (`3`, `-2/5`, `1.25`), variables `x1..xn`,
//! power sums `p<k>`, elementary symmetric polynomials `e<k>`, parentheses and
//! nonnegative integer powers `^k`. Juxtaposition multiplies; `/` divides by a
//! nonzero constant.

use reflsos_core::groups::{elementary, power_sum};
use reflsos_core::{Poly, Q};

use crate::error::{CliError, Result};

pub fn parse_poly(text: &str, n: usize) -> Result<Poly> {
    let chars: Vec<char> = text
        .chars()
        .map(|c| match c {
            '−' => '-',
            '·' | '×' => '*',
            c => c,
        })
        .collect();
    let mut p = Parser { s: chars, i: 0, n };
    let out = p.expr()?;
    p.skip_ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser {
    s: Vec<char>,
    i: usize,
    n: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> CliError {
        CliError::Parse { pos: self.i, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.i += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.i += 1;
                    self.skip_ws();
                    let pos = self.i;
                    let d = self.unary()?;
                    if d.degree() != Some(0) {
                        return Err(CliError::Parse { pos, msg: String::from("divisor must be a nonzero constant") });
                    }
                    let c = d.coeff(&vec![0; self.n]);
                    acc = acc.scale(&(Q::from_integer(1.into()) / c));
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '.' => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.i += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.i += 1;
            self.skip_ws();
            let k = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let k: u32 = k.parse().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        (self.i > start).then(|| self.s[start..self.i].iter().collect())
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Poly::constant(self.n, self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Q> {
        let int = self.digits().unwrap_or_default();
        if self.i < self.s.len() && self.s[self.i] == '.' {
            self.i += 1;
            let frac = self.digits().unwrap_or_default();
            if int.is_empty() && frac.is_empty() {
                return Err(self.err("malformed number"));
            }
            let num: Q = format!("{}{}", if int.is_empty() { "0" } else { &int }, frac)
                .parse()
                .map_err(|_| self.err("malformed number"))?;
            let den: Q = format!("1{}", "0".repeat(frac.len())).parse().map_err(|_| self.err("malformed number"))?;
            return Ok(num / den);
        }
        let mut v: Q = int.parse().map_err(|_| self.err("malformed number"))?;
        // `a/b` literal
        if self.i + 1 < self.s.len() && self.s[self.i] == '/' && self.s[self.i + 1].is_ascii_digit() {
            self.i += 1;
            let pos = self.i;
            let d: Q = self.digits().unwrap_or_default().parse().map_err(|_| self.err("malformed number"))?;
            if num_traits::Zero::is_zero(&d) {
                return Err(CliError::Parse { pos, msg: String::from("zero denominator") });
            }
            v /= d;
        }
        Ok(v)
    }

    fn ident(&mut self) -> Result<Poly> {
        let start = self.i;
        let kind = self.s[self.i];
        self.i += 1;
        if self.i < self.s.len() && self.s[self.i] == '_' {
            self.i += 1;
        }
        let k: usize = match self.digits() {
            Some(d) => d.parse().map_err(|_| self.err("index too large"))?,
            None => {
                self.i = start;
                return Err(self.err("expected an index after the symbol"));
            }
        };
        match kind {
            'x' | 'X' => {
                if k == 0 || k > self.n {
                    self.i = start;
                    return Err(self.err(&format!("variable x{} outside 1..{}", k, self.n)));
                }
                Ok(Poly::var(self.n, k - 1))
            }
            'p' => Ok(power_sum(self.n, k as u32)),
            'e' => {
                if k > self.n {
                    return Ok(Poly::zero(self.n));
                }
                Ok(elementary(self.n, k))
            }
            _ => {
                self.i = start;
                Err(self.err(&format!("unknown symbol '{}'", kind)))
            }
        }
    }
}
