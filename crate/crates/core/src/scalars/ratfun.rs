//! Reduced rational functions in `q`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{pow_mod, Poly};
use crate::error::{Error, Result};

/// `num/den` with coprime numerator and denominator and a positive leading
/// denominator coefficient, so equal values have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl Default for RatFun {
    fn default() -> Self {
        Self::zero()
    }
}

impl RatFun {
    /// Reduced representative of `num/den`.
    pub fn normalize(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_one() {
            return RatFun { num, den };
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if d.lead_coeff().map(|c| c.is_negative()).unwrap_or(false) {
            n = -n;
            d = -d;
        }
        RatFun { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFun { num: Poly::from_int(c), den: Poly::one() }
    }

    pub fn from_bigint(c: BigInt) -> Self {
        RatFun { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            RatFun { num: Poly::q_pow(e as u32), den: Poly::one() }
        } else {
            RatFun { num: Poly::one(), den: Poly::q_pow((-e) as u32) }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True when the value is `c*q^e` for an integer `c` and integer `e`.
    pub fn is_laurent_monomial(&self) -> bool {
        self.num.is_monomial() && self.den.is_monomial() && self.den.terms()[0].1.is_one()
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> RatFun {
        if e >= 0 {
            RatFun { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
        } else {
            self.inv().expect("negative power of zero").pow(-e)
        }
    }

    /// Value at `q = x` modulo the prime `p`; `None` if the denominator vanishes there.
    pub fn eval_mod(&self, x: u64, p: u64) -> Option<u64> {
        let d = self.den.eval_mod(x, p);
        if d == 0 {
            return None;
        }
        let n = self.num.eval_mod(x, p);
        Some((n as u128 * pow_mod(d, p - 2, p) as u128 % p as u128) as u64)
    }

    /// Integer-valued sign of the leading numerator coefficient (for display).
    pub fn leading_sign_negative(&self) -> bool {
        self.num.lead_coeff().map(|c| c.is_negative()).unwrap_or(false)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFun::reduce(n, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = rhs.den.div_exact(&g).unwrap();
        let n = &(&self.num * &d2) + &(&rhs.num * &d1);
        RatFun::reduce(n, &(&d1 * &d2) * &g)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun { num: &self.num * &rhs.num, den: Poly::one() };
        }
        // cross-cancel before multiplying to keep sizes small
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), rhs.den.div_exact(&g1).unwrap())
        };
        let (n2, d1) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        let mut n = &n1 * &n2;
        let mut d = &d1 * &d2;
        if d.lead_coeff().map(|c| c.is_negative()).unwrap_or(false) {
            n = -n;
            d = -d;
        }
        RatFun { num: n, den: d }
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -self.num, den: self.den }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
        impl $tr<RatFun> for &RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                self.$m(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
by_value!(Div, div);

impl AddAssign<&RatFun> for RatFun {
    fn add_assign(&mut self, rhs: &RatFun) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RatFun> for RatFun {
    fn sub_assign(&mut self, rhs: &RatFun) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&RatFun> for RatFun {
    fn mul_assign(&mut self, rhs: &RatFun) {
        *self = &*self * rhs;
    }
}

impl From<i64> for RatFun {
    fn from(c: i64) -> Self {
        RatFun::from_int(c)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for RatFun {
    type Err = Error;

    /// Accepts `p` or `(p)/(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unbalanced '{}'", s)))?;
            let num: Poly = rest[..close].parse()?;
            let after = rest[close + 1..].trim();
            if after.is_empty() {
                return RatFun::normalize(num, Poly::one());
            }
            let den_s = after
                .strip_prefix('/')
                .map(str::trim)
                .and_then(|d| d.strip_prefix('('))
                .and_then(|d| d.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad rational function '{}'", s)))?;
            let den: Poly = den_s.parse()?;
            RatFun::normalize(num, den)
        } else {
            Ok(RatFun::from_poly(t.parse()?))
        }
    }
}

impl serde::Serialize for RatFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatFun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::one()
    }
}
