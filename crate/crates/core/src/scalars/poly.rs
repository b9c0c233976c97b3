//! Polynomials in `q` with arbitrary-precision integer coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Sparse polynomial: sorted `(exponent, coefficient)` pairs, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(u32, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    pub fn monomial(c: BigInt, e: u32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(e, c)] }
        }
    }

    /// `q^e`.
    pub fn q_pow(e: u32) -> Self {
        Self::monomial(BigInt::one(), e)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (u32, BigInt)>>(it: I) -> Self {
        let mut v: Vec<(u32, BigInt)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { terms: out }
    }

    /// Coefficients from low to high degree.
    pub fn from_coeffs(cs: &[i64]) -> Self {
        Self::from_terms(cs.iter().enumerate().map(|(i, c)| (i as u32, BigInt::from(*c))))
    }

    pub fn terms(&self) -> &[(u32, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0)
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn coeff(&self, e: u32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: u32) -> Self {
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e + k, x.clone())).collect(),
        }
    }

    /// Divides by `q^k`; the caller guarantees `k <= low_degree`.
    pub fn shift_down(&self, k: u32) -> Self {
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e - k, x.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e, x / c)).collect(),
        }
    }

    /// Content removed, leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead_coeff().map(|l| l.is_negative()).unwrap_or(false) {
            c = -c;
        }
        self.div_exact_int(&c)
    }

    fn to_dense(&self) -> Vec<BigInt> {
        let n = self.degree().map(|d| d as usize + 1).unwrap_or(0);
        let mut v = vec![BigInt::zero(); n];
        for (e, c) in &self.terms {
            v[*e as usize] = c.clone();
        }
        v
    }

    fn from_dense(v: Vec<BigInt>) -> Self {
        Poly {
            terms: v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c))
                .collect(),
        }
    }

    /// Pseudo-remainder of `self` by `d` (d nonzero).
    pub fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.to_dense();
        let n = dd.len() - 1;
        let lc = &dd[n];
        let mut r = self.to_dense();
        while r.len() > n && !r.is_empty() {
            let m = r.len() - 1;
            let lr = r[m].clone();
            if lr.is_zero() {
                r.pop();
                continue;
            }
            for x in r.iter_mut() {
                *x *= lc;
            }
            let shift = m - n;
            for (i, c) in dd.iter().enumerate() {
                r[i + shift] -= &lr * c;
            }
            r.pop();
        }
        Self::from_dense(r)
    }

    /// Exact division over the integers; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.is_monomial() {
            let (de, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                if *e < *de {
                    return None;
                }
                let (qt, rm) = c.div_rem(dc);
                if !rm.is_zero() {
                    return None;
                }
                out.push((*e - *de, qt));
            }
            return Some(Poly { terms: out });
        }
        let dd = d.to_dense();
        let n = dd.len() - 1;
        let lc = &dd[n];
        let mut r = self.to_dense();
        if r.len() < dd.len() {
            return None;
        }
        let mut quot = vec![BigInt::zero(); r.len() - n];
        while r.len() > n {
            let m = r.len() - 1;
            if r[m].is_zero() {
                r.pop();
                continue;
            }
            let (qc, rm) = r[m].div_rem(lc);
            if !rm.is_zero() {
                return None;
            }
            let shift = m - n;
            for (i, c) in dd.iter().enumerate() {
                r[i + shift] -= &qc * c;
            }
            quot[shift] = qc;
            r.pop();
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(quot))
    }

    /// Greatest common divisor over `Z[q]`, normalized with positive leading coefficient.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.normalize_sign();
        }
        if b.is_zero() {
            return a.normalize_sign();
        }
        let k = a.low_degree().unwrap().min(b.low_degree().unwrap());
        let c = a.content().gcd(&b.content());
        if a.is_monomial() || b.is_monomial() {
            return Poly::monomial(c, k);
        }
        let a0 = a.shift_down(a.low_degree().unwrap()).primitive_part();
        let b0 = b.shift_down(b.low_degree().unwrap()).primitive_part();
        if a0.is_constant() || b0.is_constant() {
            return Poly::monomial(c, k);
        }
        let (mut x, mut y) = if a0.degree() >= b0.degree() { (a0, b0) } else { (b0, a0) };
        while !y.is_zero() {
            let r = x.pseudo_rem(&y);
            x = y;
            y = if r.is_zero() { r } else { r.primitive_part() };
            if y.is_constant() && !y.is_zero() {
                return Poly::monomial(c, k);
            }
        }
        x.primitive_part().scale(&c).shift_up(k)
    }

    fn normalize_sign(&self) -> Poly {
        if self.lead_coeff().map(|l| l.is_negative()).unwrap_or(false) {
            -self
        } else {
            self.clone()
        }
    }

    /// Value at `q = x` modulo the prime `p`.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc: u128 = 0;
        let mut last: u32 = 0;
        let mut pw: u128 = 1;
        for (e, c) in &self.terms {
            pw = pw * pow_mod(x, (*e - last) as u64, p) as u128 % p as u128;
            last = *e;
            let cm = c.mod_floor(&pb);
            let cm: u64 = cm.try_into().unwrap_or(0);
            acc = (acc + pw * cm as u128) % p as u128;
        }
        acc as u64
    }
}

pub(crate) fn pow_mod(b: u64, e: u64, p: u64) -> u64 {
    let mut r: u128 = 1;
    let mut b = b as u128 % p as u128;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

fn merge(a: &Poly, b: &Poly, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let take_a = j >= b.terms.len() || (i < a.terms.len() && a.terms[i].0 < b.terms[j].0);
        let take_b = i >= a.terms.len() || (j < b.terms.len() && b.terms[j].0 < a.terms[i].0);
        if take_a {
            out.push(a.terms[i].clone());
            i += 1;
        } else if take_b {
            let (e, c) = &b.terms[j];
            out.push((*e, if negate_b { -c } else { c.clone() }));
            j += 1;
        } else {
            let c = if negate_b { &a.terms[i].1 - &b.terms[j].1 } else { &a.terms[i].1 + &b.terms[j].1 };
            if !c.is_zero() {
                out.push((a.terms[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    Poly { terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(self, rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_monomial() {
            let (e, c) = &rhs.terms[0];
            return Poly {
                terms: self.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
            };
        }
        if self.is_monomial() {
            return rhs * self;
        }
        let n = (self.degree().unwrap() + rhs.degree().unwrap()) as usize + 1;
        let mut v = vec![BigInt::zero(); n];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                v[(e1 + e2) as usize] += c1 * c2;
            }
        }
        Poly::from_dense(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{}*q", a)?,
                (_, true) => write!(f, "q^{}", e)?,
                (_, false) => write!(f, "{}*q^{}", a, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Poly {
    type Err = Error;

    /// Parses sums of terms `c`, `q`, `c*q`, `q^e`, `c*q^e`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        let mut terms = Vec::new();
        for p in pieces {
            let (neg, body) = match p.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, p.strip_prefix('+').unwrap_or(&p)),
            };
            let bad = || Error::Parse(format!("bad polynomial term '{}'", p));
            let (coef, exp) = if let Some(idx) = body.find('q') {
                let cpart = &body[..idx];
                let c = if cpart.is_empty() {
                    BigInt::one()
                } else {
                    let cs = cpart.strip_suffix('*').ok_or_else(bad)?;
                    BigInt::from_str(cs).map_err(|_| bad())?
                };
                let rest = &body[idx + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    let es = rest.strip_prefix('^').ok_or_else(bad)?;
                    es.parse::<u32>().map_err(|_| bad())?
                };
                (c, e)
            } else {
                (BigInt::from_str(body).map_err(|_| bad())?, 0)
            };
            terms.push((exp, if neg { -coef } else { coef }));
        }
        Ok(Poly::from_terms(terms))
    }
}

/// `1 + base + ... + base^(n-1)`; zero for `n = 0`.
pub fn q_int(n: u32, base: &Poly) -> Poly {
    let mut acc = Poly::zero();
    let mut p = Poly::one();
    for _ in 0..n {
        acc = &acc + &p;
        p = &p * base;
    }
    acc
}

/// Product of `q_int(k, base)` for `k = 1..=n`.
pub fn q_factorial(n: u32, base: &Poly) -> Poly {
    let mut acc = Poly::one();
    for k in 1..=n {
        acc = &acc * &q_int(k, base);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "1", "-1+q^2", "q", "-q", "2*q^3", "3-2*q+q^5"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("q^2 - 1").to_string(), "-1+q^2");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&p("1+q") * &p("1-q"), p("1-q^2"));
        assert_eq!(&p("1+q") - &p("1+q"), Poly::zero());
        assert_eq!(p("1+q").pow(3), p("1+3*q+3*q^2+q^3"));
    }

    #[test]
    fn gcds() {
        assert_eq!(Poly::gcd(&p("q^2-1"), &p("q-1")), p("-1+q"));
        assert_eq!(Poly::gcd(&p("2*q"), &p("4")), p("2"));
        assert_eq!(Poly::gcd(&p("q^3+q^5"), &p("q^2+q^4")), p("q^2+q^4"));
        assert_eq!(Poly::gcd(&p("1+q"), &p("1+q^2")), Poly::one());
        assert_eq!(Poly::gcd(&p("6+6*q"), &p("4+8*q+4*q^2")), p("2+2*q"));
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("q^3-1").div_exact(&p("q-1")), Some(p("1+q+q^2")));
        assert_eq!(p("q^3+1").div_exact(&p("q-1")), None);
        assert_eq!(p("2*q^3").div_exact(&p("q")), Some(p("2*q^2")));
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_int(2, &Poly::q()), p("1+q"));
        assert_eq!(q_int(1, &Poly::q()), Poly::one());
        assert_eq!(q_int(0, &Poly::q()), Poly::zero());
        assert_eq!(q_int(3, &Poly::q_pow(2)), p("1+q^2+q^4"));
        assert_eq!(q_factorial(3, &Poly::q()), &p("1+q") * &p("1+q+q^2"));
        assert_eq!(q_factorial(0, &Poly::q()), Poly::one());
        assert_eq!(q_factorial(2, &Poly::q_pow(2)), p("1+q^2"));
    }

    #[test]
    fn factorial_recurrence() {
        for base in [Poly::q(), Poly::q_pow(2), p("2+q")] {
            for n in 0..=20u32 {
                assert_eq!(&q_factorial(n, &base) * &q_int(n + 1, &base), q_factorial(n + 1, &base));
            }
        }
    }

    #[test]
    fn modular_evaluation() {
        let f = p("3-2*q+q^5");
        let x = 7u64;
        let pr = 1_000_000_007u64;
        let direct = (3i128 - 14 + 16807).rem_euclid(pr as i128) as u64;
        assert_eq!(f.eval_mod(x, pr), direct);
    }
}
