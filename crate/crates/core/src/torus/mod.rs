//! Skew polynomial algebras `t_l t_k = q^{S_kl} t_k t_l` (k < l), their right
//! fractions, and truncated q-exponentials.

mod ore;
mod qexp;

pub use ore::{ore_cap, ore_resolve, right_divide, set_ore_cap, with_ore_cap, OreFraction, DEFAULT_ORE_CAP};
pub use qexp::{qexp_rule_check, qexp_truncated, torus_qexp_check};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::CartanData;
use crate::error::{Error, Result};
use crate::scalars::RatFun;

/// Integer skew-symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewMatrix {
    entries: Vec<Vec<i64>>,
}

impl SkewMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let m = entries.len();
        for (k, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::SizeMismatch(row.len(), m));
            }
            for l in 0..m {
                if row[l] != -entries[l][k] {
                    return Err(Error::Parse(format!("matrix is not skew-symmetric at ({}, {})", k + 1, l + 1)));
                }
            }
        }
        Ok(SkewMatrix { entries })
    }

    pub fn zero(m: usize) -> Self {
        SkewMatrix { entries: vec![vec![0; m]; m] }
    }

    /// `S_kl = C_{w_k, w_l}` for `k < l`.
    pub fn from_word(data: &CartanData, w: &[usize]) -> Self {
        let m = w.len();
        let mut entries = vec![vec![0; m]; m];
        for k in 0..m {
            for l in k + 1..m {
                let c = data.c(w[k], w[l]);
                entries[k][l] = c;
                entries[l][k] = -c;
            }
        }
        SkewMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, k: usize, l: usize) -> i64 {
        self.entries[k][l]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Submatrix on the given indices.
    pub fn restrict(&self, idx: &[usize]) -> SkewMatrix {
        SkewMatrix { entries: idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect()).collect() }
    }
}

/// Exponent vector of a (Laurent) monomial.
pub type Monomial = Vec<i64>;

/// The q-exponent collected when normal-ordering `t^left · t^right`.
pub fn reorder_exponent(s: &SkewMatrix, left: &[i64], right: &[i64]) -> i64 {
    let m = s.size();
    let mut e = 0;
    for k in 0..m {
        if right[k] == 0 {
            continue;
        }
        for l in k + 1..m {
            if left[l] != 0 {
                e += s.get(k, l) * right[k] * left[l];
            }
        }
    }
    e
}

/// `t^left · t^right = q^e t^{left+right}`.
pub fn reorder_product(s: &SkewMatrix, left: &[i64], right: &[i64]) -> (RatFun, Monomial) {
    let e = reorder_exponent(s, left, right);
    (RatFun::q_pow(e), left.iter().zip(right).map(|(a, b)| a + b).collect())
}

/// Normal-ordered element of the skew polynomial (or Laurent) algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement {
    skew: Arc<SkewMatrix>,
    terms: BTreeMap<Monomial, RatFun>,
}

impl TorusElement {
    pub fn zero(skew: &Arc<SkewMatrix>) -> Self {
        TorusElement { skew: skew.clone(), terms: BTreeMap::new() }
    }

    pub fn one(skew: &Arc<SkewMatrix>) -> Self {
        Self::scalar(skew, RatFun::one())
    }

    pub fn scalar(skew: &Arc<SkewMatrix>, c: RatFun) -> Self {
        Self::monomial(skew, vec![0; skew.size()], c)
    }

    pub fn monomial(skew: &Arc<SkewMatrix>, a: Monomial, c: RatFun) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        TorusElement { skew: skew.clone(), terms }
    }

    /// The generator `t_k` (0-based).
    pub fn var(skew: &Arc<SkewMatrix>, k: usize) -> Self {
        let mut a = vec![0; skew.size()];
        a[k] = 1;
        Self::monomial(skew, a, RatFun::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, RatFun)>>(skew: &Arc<SkewMatrix>, it: I) -> Self {
        let mut e = Self::zero(skew);
        for (a, c) in it {
            e.add_term(a, &c);
        }
        e
    }

    pub fn skew(&self) -> &Arc<SkewMatrix> {
        &self.skew
    }

    pub fn nvars(&self) -> usize {
        self.skew.size()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RatFun> {
        &self.terms
    }

    pub fn coeff(&self, a: &[i64]) -> RatFun {
        self.terms.get(a).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(a, c)| c.is_one() && a.iter().all(|x| *x == 0))
    }

    /// `(c, a)` when the element is a single term `c t^a`.
    pub fn as_monomial(&self) -> Option<(RatFun, Monomial)> {
        if self.terms.len() == 1 {
            let (a, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), a.clone()))
        } else {
            None
        }
    }

    /// The constant when the element is a scalar.
    pub fn as_scalar(&self) -> Option<RatFun> {
        if self.is_zero() {
            return Some(RatFun::zero());
        }
        let (c, a) = self.as_monomial()?;
        a.iter().all(|x| *x == 0).then_some(c)
    }

    /// Lexicographically largest exponent with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &RatFun)> {
        self.terms.iter().next_back()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|a| a.iter().all(|x| *x >= 0))
    }

    /// Total degree when all terms share it.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|a| a.iter().sum::<i64>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Indices of variables occurring with nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&k| self.terms.keys().any(|a| a[k] != 0)).collect()
    }

    pub fn add_term(&mut self, a: Monomial, c: &RatFun) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert_with(RatFun::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, o: &TorusElement) -> TorusElement {
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(a.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &TorusElement) -> TorusElement {
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(a.clone(), &-c);
        }
        r
    }

    pub fn neg(&self) -> TorusElement {
        self.scale(&RatFun::from_int(-1))
    }

    pub fn scale(&self, c: &RatFun) -> TorusElement {
        if c.is_zero() {
            return Self::zero(&self.skew);
        }
        TorusElement { skew: self.skew.clone(), terms: self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &TorusElement) -> TorusElement {
        let mut r = Self::zero(&self.skew);
        for (a, c1) in &self.terms {
            for (b, c2) in &o.terms {
                let (f, ab) = reorder_product(&self.skew, a, b);
                r.add_term(ab, &(&(c1 * c2) * &f));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> TorusElement {
        let mut r = Self::one(&self.skew);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// `x` with `t^a · self = t^a ... ` moved: returns `y` such that `self · t^a = t^a · y`.
    pub fn conjugate_past(&self, a: &[i64]) -> TorusElement {
        let mut r = Self::zero(&self.skew);
        for (m, c) in &self.terms {
            // t^m t^a = q^{e1} t^{m+a}, t^a t^m = q^{e2} t^{m+a}
            let e1 = reorder_exponent(&self.skew, m, a);
            let e2 = reorder_exponent(&self.skew, a, m);
            r.add_term(m.clone(), &(c * &RatFun::q_pow(e1 - e2)));
        }
        r
    }

    /// `y` with `y · t^a = self`, when each term is divisible by `t^a` (polynomially if `strict`).
    pub fn right_divide_monomial(&self, a: &[i64], strict: bool) -> Option<TorusElement> {
        let mut r = Self::zero(&self.skew);
        for (m, c) in &self.terms {
            let rest: Monomial = m.iter().zip(a).map(|(x, y)| x - y).collect();
            if strict && rest.iter().any(|x| *x < 0) {
                return None;
            }
            let e = reorder_exponent(&self.skew, &rest, a);
            r.add_term(rest, &(c * &RatFun::q_pow(-e)));
        }
        Some(r)
    }

    /// The largest monomial dividing every term on the right (componentwise minimum).
    pub fn min_exponents(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, a| acc.iter().zip(a).map(|(x, y)| *x.min(y)).collect()))
    }

    /// Re-embeds into another algebra via a variable map `k -> target[k]`.
    pub fn relabel(&self, skew: &Arc<SkewMatrix>, target: &[usize]) -> TorusElement {
        let mut r = Self::zero(skew);
        for (a, c) in &self.terms {
            let mut b = vec![0; skew.size()];
            for (k, &x) in a.iter().enumerate() {
                b[target[k]] += x;
            }
            r.add_term(b, c);
        }
        r
    }

    /// Exact check that `self · other = other · self`.
    pub fn commutes_with(&self, other: &TorusElement) -> bool {
        self.mul(other) == other.mul(self)
    }
}

fn format_coeff(c: &RatFun) -> String {
    let s = c.to_string();
    let compound = s.contains('/') || s[1..].contains('+') || s[1..].contains('-');
    if compound && !(s.starts_with('(') && s.ends_with(')') && !s.contains('/')) {
        format!("({})", s)
    } else {
        s
    }
}

fn format_monomial(a: &[i64]) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(k, &e)| if e == 1 { format!("t{}", k + 1) } else { format!("t{}^{}", k + 1, e) })
        .collect();
    parts.join(" ")
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (a, c)) in self.terms.iter().rev().enumerate() {
            let mono = format_monomial(a);
            let term = if mono.is_empty() {
                format_coeff(c)
            } else if c.is_one() {
                mono
            } else if *c == RatFun::from_int(-1) {
                format!("-{}", mono)
            } else {
                format!("{} * {}", format_coeff(c), mono)
            };
            if i == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p121() -> Arc<SkewMatrix> {
        Arc::new(SkewMatrix::from_word(&CartanData::a2(), &[0, 1, 0]))
    }

    #[test]
    fn reorder_examples() {
        let s = p121();
        assert_eq!(reorder_product(&s, &[0, 1, 0], &[1, 0, 0]), (RatFun::q_pow(-1), vec![1, 1, 0]));
        assert_eq!(reorder_product(&s, &[1, 0, 0], &[0, 1, 0]), (RatFun::one(), vec![1, 1, 0]));
        assert_eq!(reorder_product(&s, &[0, 0, 1], &[1, 0, 0]), (RatFun::q_pow(2), vec![1, 0, 1]));
    }

    #[test]
    fn skew_from_word() {
        let s = SkewMatrix::from_word(&CartanData::a2(), &[0, 1, 0]);
        assert_eq!(s.entries(), &[vec![0, -1, 2], vec![1, 0, -1], vec![-2, 1, 0]]);
        assert!(SkewMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn display_forms() {
        let s = p121();
        let x = TorusElement::var(&s, 0).add(&TorusElement::var(&s, 2));
        assert_eq!(x.to_string(), "t1 + t3");
        let y = TorusElement::var(&s, 2).mul(&TorusElement::var(&s, 0));
        assert_eq!(y.to_string(), "q^2 * t1 t3");
        let z = TorusElement::var(&s, 0).scale(&RatFun::from_int(-1)).add(&TorusElement::one(&s).scale(&"1+q".parse().unwrap()));
        assert_eq!(z.to_string(), "-t1 + (1+q)");
        assert_eq!(TorusElement::zero(&s).to_string(), "0");
    }

    #[test]
    fn monomial_division() {
        let s = p121();
        let x = TorusElement::var(&s, 0).add(&TorusElement::var(&s, 2));
        let t1 = TorusElement::var(&s, 0);
        let prod = x.mul(&t1);
        assert_eq!(prod.right_divide_monomial(&[1, 0, 0], true).unwrap(), x);
        let conj = x.conjugate_past(&[1, 0, 0]);
        assert_eq!(x.mul(&t1), t1.mul(&conj));
    }
}
