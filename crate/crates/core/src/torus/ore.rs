//! Right fractions `a b^{-1}` over a skew polynomial algebra.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use super::{reorder_exponent, Monomial, SkewMatrix, TorusElement};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::RatFun;

pub const DEFAULT_ORE_CAP: usize = 8;

static ORE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ORE_CAP);

thread_local! {
    static LOCAL_CAP: Cell<Option<usize>> = const { Cell::new(None) };
}

/// Degree cap used by fraction arithmetic on this thread.
pub fn ore_cap() -> usize {
    LOCAL_CAP.with(|c| c.get()).unwrap_or_else(|| ORE_CAP.load(Ordering::Relaxed))
}

/// Sets the process-wide cap.
pub fn set_ore_cap(cap: usize) {
    ORE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Runs `f` with the cap overridden on the current thread.
pub fn with_ore_cap<T>(cap: usize, f: impl FnOnce() -> T) -> T {
    struct Restore(Option<usize>);
    impl Drop for Restore {
        fn drop(&mut self) {
            LOCAL_CAP.with(|c| c.set(self.0));
        }
    }
    let _restore = Restore(LOCAL_CAP.with(|c| c.replace(Some(cap.max(1)))));
    f()
}

/// Splits a Laurent element as `p · t^{-n}` with `p` polynomial; returns `(p, n)`.
fn clear_negative(x: &TorusElement) -> (TorusElement, Monomial) {
    let m = x.nvars();
    let mut n = vec![0i64; m];
    for a in x.terms().keys() {
        for k in 0..m {
            n[k] = n[k].max(-a[k]);
        }
    }
    if n.iter().all(|v| *v == 0) {
        return (x.clone(), n);
    }
    let tn = TorusElement::monomial(x.skew(), n.clone(), RatFun::one());
    (x.mul(&tn), n)
}

/// Nonzero `(u1, u2)` with `b·u1 = d·u2`, searching total degrees up to `cap`.
pub fn ore_resolve(b: &TorusElement, d: &TorusElement, cap: usize) -> Result<(TorusElement, TorusElement)> {
    if b.is_zero() || d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let skew = b.skew().clone();
    if let Some((c, a)) = d.as_monomial() {
        // b t^a = t^a b', so b t^a = (c t^a)(c^{-1} b')
        let u1 = TorusElement::monomial(&skew, a.clone(), RatFun::one());
        let u2 = b.conjugate_past(&a).scale(&c.inv()?);
        return Ok((u1, u2));
    }
    if let Some((c, a)) = b.as_monomial() {
        let u2 = TorusElement::monomial(&skew, a.clone(), RatFun::one());
        let u1 = d.conjugate_past(&a).scale(&c.inv()?);
        return Ok((u1, u2));
    }
    if let Some(ratio) = scalar_ratio(b, d) {
        // b = ratio·d
        return Ok((TorusElement::one(&skew), TorusElement::scalar(&skew, ratio)));
    }
    let (bp, nb) = clear_negative(b);
    let (dp, nd) = clear_negative(d);
    let (v1, v2) = resolve_polynomial(&bp, &dp, cap)?;
    let u1 = TorusElement::monomial(&skew, nb, RatFun::one()).mul(&v1);
    let u2 = TorusElement::monomial(&skew, nd, RatFun::one()).mul(&v2);
    Ok(normalize_pair(u1, u2))
}

fn scalar_ratio(b: &TorusElement, d: &TorusElement) -> Option<RatFun> {
    let (a, c) = d.leading()?;
    let r = &b.coeff(a) / c;
    (!r.is_zero() && d.scale(&r) == *b).then_some(r)
}

fn normalize_pair(u1: TorusElement, u2: TorusElement) -> (TorusElement, TorusElement) {
    let c = u1.leading().map(|(_, c)| c.clone()).unwrap_or_else(RatFun::one);
    let inv = c.inv().expect("nonzero leading coefficient");
    (u1.scale(&inv), u2.scale(&inv))
}

fn monomials_in(vars: &[usize], m: usize, deg: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; m];
    fn rec(vars: &[usize], i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if i + 1 == vars.len() {
            cur[vars[i]] = left;
            out.push(cur.clone());
            cur[vars[i]] = 0;
            return;
        }
        for v in (0..=left).rev() {
            cur[vars[i]] = v;
            rec(vars, i + 1, left - v, cur, out);
        }
        cur[vars[i]] = 0;
    }
    if vars.is_empty() {
        if deg == 0 {
            out.push(cur);
        }
        return out;
    }
    rec(vars, 0, deg, &mut cur, &mut out);
    out
}

fn resolve_polynomial(b: &TorusElement, d: &TorusElement, cap: usize) -> Result<(TorusElement, TorusElement)> {
    let skew = b.skew().clone();
    let m = skew.size();
    let mut vars = b.support_vars();
    for v in d.support_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort_unstable();
    let homogeneous = b.homogeneous_degree().zip(d.homogeneous_degree());
    for level in 0..=cap as i64 {
        let (m1, m2): (Vec<Monomial>, Vec<Monomial>) = match homogeneous {
            Some((db, dd)) => {
                let base = (dd - db).max(0);
                let d1 = base + level;
                let d2 = d1 + db - dd;
                if d1.max(d2) > cap as i64 {
                    break;
                }
                (monomials_in(&vars, m, d1), monomials_in(&vars, m, d2))
            }
            None => {
                let all: Vec<Monomial> = (0..=level).flat_map(|k| monomials_in(&vars, m, k)).collect();
                (all.clone(), all)
            }
        };
        if let Some(sol) = solve_level(&skew, b, d, &m1, &m2) {
            return Ok(normalize_pair(sol.0, sol.1));
        }
    }
    Err(Error::CapExceeded(cap))
}

fn solve_level(
    skew: &Arc<SkewMatrix>,
    b: &TorusElement,
    d: &TorusElement,
    m1: &[Monomial],
    m2: &[Monomial],
) -> Option<(TorusElement, TorusElement)> {
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut cols: Vec<Vec<(Monomial, RatFun)>> = Vec::new();
    for a in m1 {
        let prod = b.mul(&TorusElement::monomial(skew, a.clone(), RatFun::one()));
        cols.push(prod.terms().iter().map(|(k, v)| (k.clone(), v.clone())).collect());
    }
    for a in m2 {
        let prod = d.mul(&TorusElement::monomial(skew, a.clone(), RatFun::one()));
        cols.push(prod.terms().iter().map(|(k, v)| (k.clone(), -v)).collect());
    }
    for col in &cols {
        for (k, _) in col {
            let n = rows.len();
            rows.entry(k.clone()).or_insert(n);
        }
    }
    let ncols = cols.len();
    let mut mat = vec![vec![RatFun::zero(); ncols]; rows.len()];
    for (j, col) in cols.iter().enumerate() {
        for (k, v) in col {
            mat[rows[k]][j] = v.clone();
        }
    }
    for v in linalg::nullspace(&mat, ncols) {
        let u1 = TorusElement::from_terms(skew, m1.iter().cloned().zip(v[..m1.len()].iter().cloned()));
        let u2 = TorusElement::from_terms(skew, m2.iter().cloned().zip(v[m1.len()..].iter().cloned()));
        if !u1.is_zero() && !u2.is_zero() {
            return Some((u1, u2));
        }
    }
    None
}

fn max_exponents(x: &TorusElement) -> Monomial {
    let mut it = x.terms().keys();
    let first = it.next().cloned().unwrap_or_else(|| vec![0; x.nvars()]);
    it.fold(first, |acc, a| acc.iter().zip(a).map(|(x, y)| *x.max(y)).collect())
}

/// `u` with `u · den = num`, found by leading-term division; `None` if not exact.
pub fn right_divide(num: &TorusElement, den: &TorusElement) -> Option<TorusElement> {
    let (db, dc) = den.leading()?;
    let (db, dc) = (db.clone(), dc.clone());
    let skew = num.skew().clone();
    let mut rem = num.clone();
    let mut quo = TorusElement::zero(&skew);
    if num.is_zero() {
        return Some(quo);
    }
    // exponents of an exact quotient lie in this box, since Newton polytopes add
    let lo: Monomial = num.min_exponents()?.iter().zip(den.min_exponents()?).map(|(x, y)| x - y).collect();
    let hi: Monomial = max_exponents(num).iter().zip(max_exponents(den)).map(|(x, y)| x - y).collect();
    for _ in 0..512 {
        let Some((a, c)) = rem.leading() else {
            return Some(quo);
        };
        let shift: Monomial = a.iter().zip(&db).map(|(x, y)| x - y).collect();
        if shift.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
            return None;
        }
        let e = reorder_exponent(&skew, &shift, &db);
        let k = &(c / &dc) * &RatFun::q_pow(-e);
        let term = TorusElement::monomial(&skew, shift, k);
        rem = rem.sub(&term.mul(den));
        quo = quo.add(&term);
    }
    None
}

/// A right fraction `num · den^{-1}`; equality is the fraction relation.
#[derive(Clone)]
pub struct OreFraction {
    num: TorusElement,
    den: TorusElement,
}

impl OreFraction {
    pub fn new(num: TorusElement, den: TorusElement) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::simplified(num, den))
    }

    /// A (Laurent) element as a fraction with polynomial numerator and monomial denominator.
    pub fn from_element(x: TorusElement) -> Self {
        let (p, n) = clear_negative(&x);
        let den = TorusElement::monomial(x.skew(), n, RatFun::one());
        Self::simplified(p, den)
    }

    pub fn zero(skew: &Arc<SkewMatrix>) -> Self {
        Self::from_element(TorusElement::zero(skew))
    }

    pub fn one(skew: &Arc<SkewMatrix>) -> Self {
        Self::from_element(TorusElement::one(skew))
    }

    pub fn var(skew: &Arc<SkewMatrix>, k: usize) -> Self {
        Self::from_element(TorusElement::var(skew, k))
    }

    pub fn scalar(skew: &Arc<SkewMatrix>, c: RatFun) -> Self {
        Self::from_element(TorusElement::scalar(skew, c))
    }

    pub fn num(&self) -> &TorusElement {
        &self.num
    }

    pub fn den(&self) -> &TorusElement {
        &self.den
    }

    pub fn skew(&self) -> &Arc<SkewMatrix> {
        self.num.skew()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element itself when the denominator is a scalar.
    pub fn as_element(&self) -> Option<TorusElement> {
        let c = self.den.as_scalar()?;
        Some(self.num.scale(&c.inv().ok()?))
    }

    fn simplified(num: TorusElement, den: TorusElement) -> Self {
        let skew = num.skew().clone();
        if num.is_zero() {
            return OreFraction { num, den: TorusElement::one(&skew) };
        }
        if let Some(c) = den.as_scalar() {
            let inv = c.inv().expect("nonzero denominator");
            return OreFraction { num: num.scale(&inv), den: TorusElement::one(&skew) };
        }
        let (mut num, mut den) = (num, den);
        // cancel a common right monomial factor
        if let (Some(a), Some(b)) = (num.min_exponents(), den.min_exponents()) {
            let common: Monomial = a.iter().zip(&b).map(|(x, y)| (*x.min(y)).max(0)).collect();
            if common.iter().any(|x| *x > 0) {
                if let (Some(n2), Some(d2)) = (num.right_divide_monomial(&common, true), den.right_divide_monomial(&common, true)) {
                    num = n2;
                    den = d2;
                }
            }
        }
        if den.as_monomial().is_none() {
            // den = d' t^s with t^s a unit: num den^{-1} = (num t^{-s}) d'^{-1}
            if let Some(s) = den.min_exponents().filter(|s| s.iter().any(|x| *x != 0)) {
                if let (Some(n2), Some(d2)) = (num.right_divide_monomial(&s, false), den.right_divide_monomial(&s, false)) {
                    num = n2;
                    den = d2;
                }
            }
            if let Some(u) = right_divide(&num, &den) {
                return OreFraction { num: u, den: TorusElement::one(&skew) };
            }
        } else if let Some(c) = den.as_scalar() {
            let inv = c.inv().expect("nonzero denominator");
            return OreFraction { num: num.scale(&inv), den: TorusElement::one(&skew) };
        }
        let lead = den.leading().map(|(_, c)| c.clone()).unwrap();
        let inv = lead.inv().expect("nonzero");
        OreFraction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn mul(&self, o: &OreFraction) -> Result<OreFraction> {
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.skew()));
        }
        // b^{-1} c = c' b'^{-1} with c b' = b c'
        if self.den.is_one() {
            return Self::new(self.num.mul(&o.num), o.den.clone());
        }
        let (bp, cp) = ore_resolve(&o.num, &self.den, ore_cap())?;
        Self::new(self.num.mul(&cp), o.den.mul(&bp))
    }

    pub fn add(&self, o: &OreFraction) -> Result<OreFraction> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        let (f, g) = ore_resolve(&self.den, &o.den, ore_cap())?;
        Self::new(self.num.mul(&f).add(&o.num.mul(&g)), self.den.mul(&f))
    }

    pub fn neg(&self) -> OreFraction {
        OreFraction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &OreFraction) -> Result<OreFraction> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &RatFun) -> OreFraction {
        Self::simplified(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Result<OreFraction> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &OreFraction) -> Result<OreFraction> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<OreFraction> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut r = Self::one(self.skew());
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base)?;
        }
        Ok(r)
    }

    /// The fraction relation: `a1 f = a2 g` where `b1 f = b2 g`.
    pub fn equiv(&self, o: &OreFraction) -> Result<bool> {
        if self.den == o.den {
            return Ok(self.num == o.num);
        }
        let (f, g) = ore_resolve(&self.den, &o.den, ore_cap())?;
        Ok(self.num.mul(&f) == o.num.mul(&g))
    }

    /// Substitutes fractions for the variables of a (Laurent) element: `t^a ↦ p_1^{a_1}⋯p_m^{a_m}`.
    pub fn substitute(x: &TorusElement, images: &[OreFraction], target: &Arc<SkewMatrix>) -> Result<OreFraction> {
        let mut acc = Self::zero(target);
        let mut powers: BTreeMap<(usize, i64), OreFraction> = BTreeMap::new();
        for (a, c) in x.terms() {
            let mut t = Self::scalar(target, c.clone());
            for (k, &e) in a.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(k, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images[k].pow(e)?;
                        powers.insert((k, e), p.clone());
                        p
                    }
                };
                t = t.mul(&p)?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitution applied to numerator and denominator.
    pub fn substitute_fraction(&self, images: &[OreFraction], target: &Arc<SkewMatrix>) -> Result<OreFraction> {
        let n = Self::substitute(&self.num, images, target)?;
        let d = Self::substitute(&self.den, images, target)?;
        n.div(&d)
    }
}

impl fmt::Display for OreFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) * ({})^-1", self.num, self.den)
        }
    }
}

impl fmt::Debug for OreFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
