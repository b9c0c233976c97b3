//! The free algebra on `E_1..E_r` with its braided coproduct, the bialgebra
//! self-pairing, graded components of `U`, and the restricted dual `A`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::sync::{Arc, LazyLock, Mutex};

use serde::{Deserialize, Serialize};

use crate::cartan::{format_word, CartanData, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::RatFun;

/// Multidegree in `Z_+^r`.
pub type Degree = Vec<u32>;

/// Environment variable naming the persistent component cache directory.
pub const CACHE_ENV: &str = "QNIL_CACHE_DIR";
const CACHE_VERSION: u32 = 1;

pub fn degree_of(r: usize, w: &[usize]) -> Degree {
    let mut d = vec![0; r];
    for &i in w {
        d[i] += 1;
    }
    d
}

pub fn height(d: &[u32]) -> u32 {
    d.iter().sum()
}

pub fn unit_degree(r: usize, i: usize) -> Degree {
    let mut d = vec![0; r];
    d[i] = 1;
    d
}

pub fn add_degrees(a: &[u32], b: &[u32]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b` when nonnegative.
pub fn sub_degrees(a: &[u32], b: &[u32]) -> Option<Degree> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// All degrees of height at most `max_height`, ordered by height then lexicographically.
pub fn degrees_up_to(r: usize, max_height: u32) -> Vec<Degree> {
    let mut out = Vec::new();
    for h in 0..=max_height {
        let mut cur = vec![0u32; r];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Degree>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for v in (0..=left).rev() {
                cur[i] = v;
                rec(i + 1, left - v, cur, out);
            }
        }
        if r == 0 {
            if h == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        rec(0, h, &mut cur, &mut out);
    }
    out
}

/// Words of a given multidegree in lexicographic order.
pub fn words_of_degree(gamma: &[u32]) -> Vec<Word> {
    let n = height(gamma) as usize;
    let mut out = Vec::new();
    let mut rem = gamma.to_vec();
    let mut cur = Vec::with_capacity(n);
    fn rec(rem: &mut Vec<u32>, cur: &mut Vec<usize>, n: usize, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(i);
                rec(rem, cur, n, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    rec(&mut rem, &mut cur, n, &mut out);
    out
}

/// `q^{sum C_ij gamma_i delta_j}`.
pub fn braiding_factor(data: &CartanData, gamma: &[u32], delta: &[u32]) -> RatFun {
    RatFun::q_pow(braiding_exponent(data, gamma, delta))
}

pub fn braiding_exponent(data: &CartanData, gamma: &[u32], delta: &[u32]) -> i64 {
    let g: Vec<i64> = gamma.iter().map(|&x| x as i64).collect();
    let d: Vec<i64> = delta.iter().map(|&x| x as i64).collect();
    data.form(&g, &d)
}

/// Word-keyed maps as lists of pairs, since JSON keys must be strings.
mod word_map {
    use super::{RatFun, Word};
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Word, RatFun>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Word, RatFun>, D::Error> {
        Ok(Vec::<(Word, RatFun)>::deserialize(d)?.into_iter().collect())
    }
}

/// Element of the free algebra: words with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FreeElement {
    #[serde(with = "word_map")]
    terms: BTreeMap<Word, RatFun>,
}

impl FreeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, RatFun::one())
    }

    pub fn generator(i: usize) -> Self {
        Self::word(vec![i])
    }

    pub fn term(w: Word, c: RatFun) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreeElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, RatFun)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in it {
            e.add_term(w, &c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Word, RatFun> {
        &self.terms
    }

    pub fn coeff(&self, w: &[usize]) -> RatFun {
        self.terms.get(w).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &RatFun) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(RatFun::zero);
        *e += c;
        if e.is_zero() {
            let key: Vec<Word> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, o: &FreeElement) -> FreeElement {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &FreeElement) -> FreeElement {
        self.add(&o.scale(&RatFun::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFun) -> FreeElement {
        if c.is_zero() {
            return Self::zero();
        }
        FreeElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    /// Concatenation product.
    pub fn mul(&self, o: &FreeElement) -> FreeElement {
        let mut r = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, &(c1 * c2));
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> FreeElement {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// The common multidegree of all terms; `None` if mixed (zero counts as degree 0).
    pub fn degree(&self, r: usize) -> Option<Degree> {
        let mut it = self.terms.keys().map(|w| degree_of(r, w));
        let first = it.next().unwrap_or_else(|| vec![0; r]);
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|i| format!("E{}", i + 1)).collect::<Vec<_>>().join("")
                };
                if c.is_one() {
                    word
                } else {
                    format!("({}) {}", c, word)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Element of the braided tensor square.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TensorElement {
    terms: BTreeMap<(Word, Word), RatFun>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), RatFun> {
        &self.terms
    }

    pub fn coeff(&self, a: &[usize], b: &[usize]) -> RatFun {
        self.terms.get(&(a.to_vec(), b.to_vec())).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: &RatFun) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_insert_with(RatFun::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `(a⊗b)(c⊗d) = Q(deg b, deg c) ac⊗bd`.
    pub fn braided_mul(&self, data: &CartanData, o: &TensorElement) -> TensorElement {
        let r = data.rank();
        let mut out = Self::zero();
        for ((a, b), c1) in &self.terms {
            let db = degree_of(r, b);
            for ((c, d), c2) in &o.terms {
                let f = braiding_factor(data, &db, &degree_of(r, c));
                let mut ac = a.clone();
                ac.extend_from_slice(c);
                let mut bd = b.clone();
                bd.extend_from_slice(d);
                out.add_term(ac, bd, &(&(c1 * c2) * &f));
            }
        }
        out
    }
}

/// Terms `(left, right, exponent)` of `Δ(w)` whose right factor has degree `right_deg`.
pub fn coproduct_split(data: &CartanData, w: &[usize], right_deg: &[u32]) -> Vec<(Word, Word, i64)> {
    let r = data.rank();
    let n = w.len();
    let mut out = Vec::new();
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut rdeg = vec![0u32; r];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        data: &CartanData,
        w: &[usize],
        pos: usize,
        target: &[u32],
        rdeg: &mut Vec<u32>,
        left: &mut Vec<usize>,
        right: &mut Vec<usize>,
        e: i64,
        out: &mut Vec<(Word, Word, i64)>,
    ) {
        if pos == w.len() {
            if rdeg.as_slice() == target {
                out.push((left.clone(), right.clone(), e));
            }
            return;
        }
        let l = w[pos];
        if rdeg[l] < target[l] {
            rdeg[l] += 1;
            right.push(l);
            rec(data, w, pos + 1, target, rdeg, left, right, e, out);
            right.pop();
            rdeg[l] -= 1;
        }
        let remaining_needed: u32 = target.iter().zip(rdeg.iter()).map(|(t, d)| t - d).sum();
        if (w.len() - pos - 1) as u32 >= remaining_needed {
            let add: i64 = (0..rdeg.len()).map(|k| rdeg[k] as i64 * data.c(k, l)).sum();
            left.push(l);
            rec(data, w, pos + 1, target, rdeg, left, right, e + add, out);
            left.pop();
        }
    }
    rec(data, w, 0, right_deg, &mut rdeg, &mut left, &mut right, 0, &mut out);
    out
}

/// All terms of `Δ(w)` as `(left, right, exponent)`.
pub fn coproduct_word(data: &CartanData, w: &[usize]) -> Vec<(Word, Word, i64)> {
    let r = data.rank();
    let full = degree_of(r, w);
    let mut out = Vec::new();
    for sub in sub_degrees_of(&full) {
        out.extend(coproduct_split(data, w, &sub));
    }
    out
}

/// All degrees `d` with `0 <= d <= gamma` componentwise.
pub fn sub_degrees_of(gamma: &[u32]) -> Vec<Degree> {
    let mut out = vec![Vec::new()];
    for &g in gamma {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=g {
                let mut p: Vec<u32> = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// `Δ(u)`, extended multiplicatively from `Δ(E_i) = E_i⊗1 + 1⊗E_i`.
pub fn coproduct(data: &CartanData, u: &FreeElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (w, c) in u.terms() {
        for (a, b, e) in coproduct_word(data, w) {
            out.add_term(a, b, &(c * &RatFun::q_pow(e)));
        }
    }
    out
}

/// The bialgebra pairing of two words.
pub fn gram_pairing(data: &CartanData, u: &[usize], v: &[usize]) -> RatFun {
    let r = data.rank();
    if degree_of(r, u) != degree_of(r, v) {
        return RatFun::zero();
    }
    let mut memo = HashMap::new();
    pair_rec(data, u, v, &mut memo)
}

fn pair_rec(data: &CartanData, u: &[usize], v: &[usize], memo: &mut HashMap<(Word, Word), RatFun>) -> RatFun {
    if v.is_empty() {
        return if u.is_empty() { RatFun::one() } else { RatFun::zero() };
    }
    let key = (u.to_vec(), v.to_vec());
    if let Some(x) = memo.get(&key) {
        return x.clone();
    }
    let j = v[0];
    let mut acc = RatFun::zero();
    let mut e: i64 = 0;
    for p in 0..u.len() {
        if u[p] == j {
            let mut rest = u[..p].to_vec();
            rest.extend_from_slice(&u[p + 1..]);
            let sub = pair_rec(data, &rest, &v[1..], memo);
            if !sub.is_zero() {
                acc += &(&sub * &RatFun::q_pow(e));
            }
        }
        e += data.c(u[p], j);
    }
    memo.insert(key, acc.clone());
    acc
}

/// Pairing extended bilinearly to free elements.
pub fn pair_elements(data: &CartanData, u: &FreeElement, v: &FreeElement) -> RatFun {
    let mut memo = HashMap::new();
    let mut acc = RatFun::zero();
    for (a, c1) in u.terms() {
        for (b, c2) in v.terms() {
            if a.len() != b.len() {
                continue;
            }
            let p = pair_rec(data, a, b, &mut memo);
            if !p.is_zero() {
                acc += &(&(c1 * c2) * &p);
            }
        }
    }
    acc
}

/// A graded functional: values on the words of one degree (missing words are zero).
#[derive(Clone, Serialize, Deserialize)]
pub struct DualElement {
    pub degree: Degree,
    #[serde(with = "word_map")]
    values: BTreeMap<Word, RatFun>,
}

/// Zero functionals are equal regardless of their nominal degree.
impl PartialEq for DualElement {
    fn eq(&self, o: &Self) -> bool {
        self.values == o.values && (self.degree == o.degree || self.values.is_empty())
    }
}

impl Eq for DualElement {}

impl DualElement {
    pub fn zero(degree: Degree) -> Self {
        DualElement { degree, values: BTreeMap::new() }
    }

    /// The counit: value 1 on the empty word.
    pub fn unit(r: usize) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Vec::new(), RatFun::one());
        DualElement { degree: vec![0; r], values }
    }

    pub fn from_values(degree: Degree, values: BTreeMap<Word, RatFun>) -> Self {
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        DualElement { degree, values }
    }

    /// The functional `x_i` with `x_i(E_i) = 1`.
    pub fn generator(r: usize, i: usize) -> Self {
        let mut values = BTreeMap::new();
        values.insert(vec![i], RatFun::one());
        DualElement { degree: unit_degree(r, i), values }
    }

    pub fn eval(&self, w: &[usize]) -> RatFun {
        self.values.get(w).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn eval_ref(&self, w: &[usize]) -> Option<&RatFun> {
        self.values.get(w)
    }

    pub fn values(&self) -> &BTreeMap<Word, RatFun> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on a free element of matching degree.
    pub fn eval_element(&self, u: &FreeElement) -> RatFun {
        let mut acc = RatFun::zero();
        for (w, c) in u.terms() {
            if let Some(v) = self.values.get(w) {
                acc += &(c * v);
            }
        }
        acc
    }

    pub fn scale(&self, c: &RatFun) -> DualElement {
        if c.is_zero() {
            return DualElement::zero(self.degree.clone());
        }
        DualElement { degree: self.degree.clone(), values: self.values.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    pub fn add(&self, o: &DualElement) -> DualElement {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, o.degree, "adding functionals of different degrees");
        let mut values = self.values.clone();
        for (w, v) in &o.values {
            let e = values.entry(w.clone()).or_insert_with(RatFun::zero);
            *e += v;
        }
        Self::from_values(self.degree.clone(), values)
    }

    pub fn sub(&self, o: &DualElement) -> DualElement {
        self.add(&o.scale(&RatFun::from_int(-1)))
    }

    /// `c` with `self = c * other`, if the two are proportional and `other` is nonzero.
    pub fn ratio_to(&self, other: &DualElement) -> Option<RatFun> {
        let (w, v) = other.values.iter().next()?;
        let c = &self.eval(w) / v;
        if other.scale(&c) == *self {
            Some(c)
        } else {
            None
        }
    }
}

impl fmt::Display for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.values.iter().map(|(w, v)| format!("{}: {}", format_word(w), v)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `x · x_i`.
pub fn mul_generator_right(data: &CartanData, x: &DualElement, i: usize) -> DualElement {
    let r = data.rank();
    let mut deg = x.degree.clone();
    deg[i] += 1;
    let mut values = BTreeMap::new();
    for u in words_of_degree(&deg) {
        let mut acc = RatFun::zero();
        // exponent collects C_{i, u_l} over positions after the removed letter
        let mut suffix: i64 = 0;
        let mut rest = u.clone();
        for p in (0..u.len()).rev() {
            if u[p] == i {
                rest.remove(p);
                if let Some(v) = x.eval_ref(&rest) {
                    acc += &(v * &RatFun::q_pow(suffix));
                }
                rest.insert(p, i);
            }
            suffix += data.c(i, u[p]);
        }
        if !acc.is_zero() {
            values.insert(u, acc);
        }
    }
    let _ = r;
    DualElement { degree: deg, values }
}

/// `x_i · x`.
pub fn mul_generator_left(data: &CartanData, x: &DualElement, i: usize) -> DualElement {
    let mut deg = x.degree.clone();
    deg[i] += 1;
    let mut values = BTreeMap::new();
    for u in words_of_degree(&deg) {
        let mut acc = RatFun::zero();
        let mut prefix: i64 = 0;
        let mut rest = u.clone();
        for p in 0..u.len() {
            if u[p] == i {
                rest.remove(p);
                if let Some(v) = x.eval_ref(&rest) {
                    acc += &(v * &RatFun::q_pow(prefix));
                }
                rest.insert(p, i);
            }
            prefix += data.c(u[p], i);
        }
        if !acc.is_zero() {
            values.insert(u, acc);
        }
    }
    DualElement { degree: deg, values }
}

/// Product in `A`: `(xy)(u) = (x⊗y)(Δu)`.
pub fn dual_multiply(data: &CartanData, x: &DualElement, y: &DualElement) -> DualElement {
    let r = data.rank();
    if height(&y.degree) == 1 {
        let i = y.degree.iter().position(|&v| v == 1).unwrap();
        return mul_generator_right(data, x, i).scale(&y.eval(&[i]));
    }
    if height(&x.degree) == 1 {
        let i = x.degree.iter().position(|&v| v == 1).unwrap();
        return mul_generator_left(data, y, i).scale(&x.eval(&[i]));
    }
    let deg = add_degrees(&x.degree, &y.degree);
    let mut values = BTreeMap::new();
    if x.is_zero() || y.is_zero() {
        return DualElement::zero(deg);
    }
    for u in words_of_degree(&deg) {
        let mut acc = RatFun::zero();
        for (a, b, e) in coproduct_split(data, &u, &y.degree) {
            if let (Some(va), Some(vb)) = (x.eval_ref(&a), y.eval_ref(&b)) {
                acc += &(&(va * vb) * &RatFun::q_pow(e));
            }
        }
        if !acc.is_zero() {
            values.insert(u, acc);
        }
    }
    let _ = r;
    DualElement { degree: deg, values }
}

/// `E_i^*`: `(E_i^* x)(E) = x(E_i E)`.
pub fn estar_apply(data: &CartanData, i: usize, x: &DualElement) -> DualElement {
    let r = data.rank();
    let Some(deg) = sub_degrees(&x.degree, &unit_degree(r, i)) else {
        return DualElement::zero(vec![0; r]);
    };
    let mut values = BTreeMap::new();
    for (w, v) in &x.values {
        if w.first() == Some(&i) {
            values.insert(w[1..].to_vec(), v.clone());
        }
    }
    DualElement { degree: deg, values }
}

/// Adjoint of right multiplication by `E_i`: `(E_i x)(E) = x(E E_i)`.
pub fn e_right_apply(data: &CartanData, i: usize, x: &DualElement) -> DualElement {
    let r = data.rank();
    let Some(deg) = sub_degrees(&x.degree, &unit_degree(r, i)) else {
        return DualElement::zero(vec![0; r]);
    };
    let mut values = BTreeMap::new();
    for (w, v) in &x.values {
        if w.last() == Some(&i) {
            values.insert(w[..w.len() - 1].to_vec(), v.clone());
        }
    }
    DualElement { degree: deg, values }
}

/// The functional `<w, ·>` of a single word.
pub fn dual_word(data: &CartanData, w: &[usize]) -> DualElement {
    let mut memo = HashMap::new();
    dual_word_memo(data, w, &mut memo)
}

fn dual_word_memo(data: &CartanData, w: &[usize], memo: &mut HashMap<Word, DualElement>) -> DualElement {
    if let Some(x) = memo.get(w) {
        return x.clone();
    }
    let res = if w.is_empty() {
        DualElement::unit(data.rank())
    } else {
        let rest = dual_word_memo(data, &w[1..], memo);
        mul_generator_left(data, &rest, w[0])
    };
    memo.insert(w.to_vec(), res.clone());
    res
}

/// The functional `<u, ·>` for homogeneous `u`.
pub fn dual_of(data: &CartanData, u: &FreeElement) -> Result<DualElement> {
    let r = data.rank();
    let deg = u.degree(r).ok_or(Error::NotHomogeneous)?;
    let mut memo = HashMap::new();
    let mut acc = DualElement::zero(deg);
    for (w, c) in u.terms() {
        acc = acc.add(&dual_word_memo(data, w, &mut memo).scale(c));
    }
    Ok(acc)
}

/// The graded component `U(gamma)` of the quotient by the Gram radical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedBasis {
    pub degree: Degree,
    pub words: Vec<Word>,
    pub gram: Matrix,
    /// Indices into `words`.
    pub u_basis: Vec<usize>,
    pub radical_basis: Vec<FreeElement>,
    /// For each word, its coordinates in the `u_basis` modulo the radical.
    pub coords: Vec<Vec<RatFun>>,
}

impl GradedBasis {
    pub fn dim(&self) -> usize {
        self.u_basis.len()
    }

    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    pub fn u_words(&self) -> Vec<Word> {
        self.u_basis.iter().map(|&i| self.words[i].clone()).collect()
    }

    /// Coordinates of a homogeneous free element of this degree.
    pub fn coords_of(&self, u: &FreeElement) -> Vec<RatFun> {
        let mut acc = vec![RatFun::zero(); self.dim()];
        for (w, c) in u.terms() {
            let k = self.word_index(w).expect("word of matching degree");
            for (j, x) in self.coords[k].iter().enumerate() {
                if !x.is_zero() {
                    acc[j] += &(c * x);
                }
            }
        }
        acc
    }

    pub fn coords_of_word(&self, w: &[usize]) -> &[RatFun] {
        let k = self.word_index(w).expect("word of matching degree");
        &self.coords[k]
    }

    /// The functional taking value `y_j` on the `j`-th basis element.
    pub fn functional(&self, y: &[RatFun]) -> DualElement {
        let mut values = BTreeMap::new();
        for (k, w) in self.words.iter().enumerate() {
            let v = linalg::dot(&self.coords[k], y);
            if !v.is_zero() {
                values.insert(w.clone(), v);
            }
        }
        DualElement { degree: self.degree.clone(), values }
    }

    /// Values of a functional on the basis words.
    pub fn values_on_basis(&self, x: &DualElement) -> Vec<RatFun> {
        self.u_basis.iter().map(|&i| x.eval(&self.words[i])).collect()
    }

    /// Whether a functional kills every radical element.
    pub fn annihilates_radical(&self, x: &DualElement) -> bool {
        self.radical_basis.iter().all(|s| x.eval_element(s).is_zero())
    }

    /// The dual basis element `b_j^*`.
    pub fn dual_basis_element(&self, j: usize) -> DualElement {
        let mut y = vec![RatFun::zero(); self.dim()];
        y[j] = RatFun::one();
        self.functional(&y)
    }
}

type CacheKey = (String, Degree);

static MEMO: LazyLock<Mutex<HashMap<CacheKey, Arc<GradedBasis>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    cartan: String,
    basis: GradedBasis,
}

fn cache_path(data: &CartanData, gamma: &[u32]) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let deg: Vec<String> = gamma.iter().map(|x| x.to_string()).collect();
    Some(PathBuf::from(dir).join(format!("component-{}-{}.json", data.fingerprint(), deg.join("_"))))
}

fn load_cached(data: &CartanData, gamma: &[u32]) -> Option<GradedBasis> {
    let path = cache_path(data, gamma)?;
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.version != CACHE_VERSION || file.cartan != data.to_json() || file.basis.degree != gamma {
        return None;
    }
    Some(file.basis)
}

fn store_cached(data: &CartanData, basis: &GradedBasis) {
    let Some(path) = cache_path(data, &basis.degree) else { return };
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    let file = CacheFile { version: CACHE_VERSION, cartan: data.to_json(), basis: basis.clone() };
    let Ok(text) = serde_json::to_string(&file) else { return };
    // write then rename so concurrent fills never expose a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if std::fs::write(&tmp, text).is_ok() {
        let _ = std::fs::rename(&tmp, &path);
    }
}

/// Memoized graded component data.
pub fn component_data(data: &CartanData, gamma: &[u32]) -> Arc<GradedBasis> {
    let key = (data.fingerprint(), gamma.to_vec());
    if let Some(b) = MEMO.lock().unwrap().get(&key) {
        return b.clone();
    }
    let basis = match load_cached(data, gamma) {
        Some(b) => b,
        None => {
            let b = compute_component(data, gamma);
            store_cached(data, &b);
            b
        }
    };
    let arc = Arc::new(basis);
    MEMO.lock().unwrap().entry(key).or_insert(arc).clone()
}

/// Clears the in-process memo (the persistent cache is untouched).
pub fn clear_memo() {
    MEMO.lock().unwrap().clear();
}

/// Gram matrix of the words of one degree.
pub fn gram_matrix(data: &CartanData, words: &[Word]) -> Matrix {
    let mut memo = HashMap::new();
    words
        .iter()
        .map(|v| {
            let f = dual_word_memo(data, v, &mut memo);
            words.iter().map(|u| f.eval(u)).collect()
        })
        .collect()
}

pub fn compute_component(data: &CartanData, gamma: &[u32]) -> GradedBasis {
    let words = words_of_degree(gamma);
    let gram = gram_matrix(data, &words);
    let predicted = linalg::predicted_rows(&gram);
    if let Some(b) = certify(gamma, &words, &gram, &predicted) {
        return b;
    }
    let exact = linalg::independent_rows(&gram);
    certify(gamma, &words, &gram, &exact).expect("exact independent rows certify")
}

/// Builds the component from a candidate basis, or `None` if the candidate fails exact checks.
fn certify(gamma: &[u32], words: &[Word], gram: &Matrix, basis: &[usize]) -> Option<GradedBasis> {
    let n = words.len();
    let k = basis.len();
    let free: Vec<usize> = (0..n).filter(|i| !basis.contains(i)).collect();
    let sub: Matrix = basis.iter().map(|&i| basis.iter().map(|&j| gram[i][j].clone()).collect()).collect();
    let rhs: Vec<Vec<RatFun>> = free.iter().map(|&f| basis.iter().map(|&i| gram[i][f].clone()).collect()).collect();
    let sol = if k == 0 {
        vec![Vec::new(); free.len()]
    } else {
        linalg::solve(&sub, &rhs)?
    };
    let mut coords = vec![Vec::new(); n];
    for (j, &b) in basis.iter().enumerate() {
        let mut e = vec![RatFun::zero(); k];
        e[j] = RatFun::one();
        coords[b] = e;
    }
    let mut radical_basis = Vec::new();
    for (fi, &f) in free.iter().enumerate() {
        let x = &sol[fi];
        // lexicographic-first selection: only earlier basis rows may be used
        if x.iter().zip(basis).any(|(c, &b)| !c.is_zero() && b > f) {
            return None;
        }
        let mut v = vec![RatFun::zero(); n];
        v[f] = RatFun::one();
        for (j, &b) in basis.iter().enumerate() {
            v[b] = -&x[j];
        }
        if linalg::mat_vec(gram, &v).iter().any(|c| !c.is_zero()) {
            return None;
        }
        coords[f] = x.clone();
        radical_basis.push(FreeElement::from_terms(words.iter().cloned().zip(v)));
    }
    Some(GradedBasis { degree: gamma.to_vec(), words: words.to_vec(), gram: gram.clone(), u_basis: basis.to_vec(), radical_basis, coords })
}

/// Coproduct of the `j`-th basis element of `U(gamma)` restricted to `U(g1)⊗U(g2)`,
/// as a matrix over the two bases.
pub fn coproduct_matrix(data: &CartanData, gamma: &[u32], j: usize, g2: &[u32]) -> Vec<Vec<RatFun>> {
    let comp = component_data(data, gamma);
    let g1 = sub_degrees(gamma, g2).expect("g2 <= gamma");
    let c1 = component_data(data, &g1);
    let c2 = component_data(data, g2);
    let mut m = vec![vec![RatFun::zero(); c2.dim()]; c1.dim()];
    let w = &comp.words[comp.u_basis[j]];
    for (a, b, e) in coproduct_split(data, w, g2) {
        let f = RatFun::q_pow(e);
        let ca = c1.coords_of_word(&a);
        let cb = c2.coords_of_word(&b);
        for (x, va) in ca.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            let fa = va * &f;
            for (y, vb) in cb.iter().enumerate() {
                if !vb.is_zero() {
                    m[x][y] += &(&fa * vb);
                }
            }
        }
    }
    m
}
