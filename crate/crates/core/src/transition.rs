//! Transition maps between reduced words of the same Weyl group element.
//!
//! A map from `src` to `dst` sends each generator `t'_k` of `P_dst` to a
//! fraction `p_k` over `P_src` such that
//! `exp(t_1 E_{src_1}) ... exp(t_m E_{src_m}) = exp(p_1 E_{dst_1}) ... exp(p_m E_{dst_m})`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::bialgebra::{component_data, Degree, FreeElement};
use crate::cartan::{braid_path, enumerate_reduced, format_word, is_reduced, BraidMove, CartanData, Word};
use crate::error::{Error, Result};
use crate::feigin::{divided_power_factor, exponent_vectors, exponent_vectors_up_to, monomial_degree, monomial_word, torus_for_word};
use crate::linalg::{self, Matrix};
use crate::scalars::RatFun;
use crate::torus::{ore_cap, with_ore_cap, Monomial, OreFraction, SkewMatrix, TorusElement};

/// Images of the generators of `P_target` in the fraction field of `P_source`.
#[derive(Clone, Debug)]
pub struct TransitionMap {
    pub source: Word,
    pub target: Word,
    pub images: Vec<OreFraction>,
}

#[derive(Serialize)]
struct TransitionJson {
    source: String,
    target: String,
    images: Vec<String>,
}

impl TransitionMap {
    pub fn identity(data: &CartanData, w: &[usize]) -> Self {
        let skew = torus_for_word(data, w);
        TransitionMap { source: w.to_vec(), target: w.to_vec(), images: (0..w.len()).map(|k| OreFraction::var(&skew, k)).collect() }
    }

    pub fn skew(&self, data: &CartanData) -> Arc<SkewMatrix> {
        torus_for_word(data, &self.source)
    }

    /// Image-wise fraction equivalence.
    pub fn equiv(&self, other: &TransitionMap) -> Result<bool> {
        if self.source != other.source || self.target != other.target {
            return Ok(false);
        }
        for (a, b) in self.images.iter().zip(&other.images) {
            if !a.equiv(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the images obey `p_l p_k = q^{S_kl} p_k p_l` for the target word.
    pub fn preserves_relations(&self, data: &CartanData) -> Result<bool> {
        let s = SkewMatrix::from_word(data, &self.target);
        let m = self.images.len();
        for k in 0..m {
            for l in k + 1..m {
                let lhs = self.images[l].mul(&self.images[k])?;
                let rhs = self.images[k].mul(&self.images[l])?.scale(&RatFun::q_pow(s.get(k, l)));
                if !lhs.equiv(&rhs)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Follows this map by `next`, whose source must be this map's target.
    pub fn then(&self, data: &CartanData, next: &TransitionMap) -> Result<TransitionMap> {
        assert_eq!(self.target, next.source, "maps do not compose");
        let skew = self.skew(data);
        let images = next.images.iter().map(|p| p.substitute_fraction(&self.images, &skew)).collect::<Result<Vec<_>>>()?;
        Ok(TransitionMap { source: self.source.clone(), target: next.target.clone(), images })
    }

    pub fn image_strings(&self) -> Vec<String> {
        self.images.iter().map(|p| p.to_string()).collect()
    }

    pub fn to_json(&self) -> String {
        let j = TransitionJson { source: format_word(&self.source), target: format_word(&self.target), images: self.image_strings() };
        serde_json::to_string(&j).expect("serializable")
    }
}

fn alternating(i: usize, j: usize, l: usize) -> Word {
    (0..l).map(|k| if k % 2 == 0 { i } else { j }).collect()
}

/// The map from `(i,j,i,..)` to `(j,i,j,..)` for one braid relation.
pub fn local_transition(data: &CartanData, i: usize, j: usize) -> Result<TransitionMap> {
    data.check_word(&[i, j])?;
    let l = match data.braid_length(i, j) {
        Some(l) if i != j => l,
        _ => return Err(Error::UnsupportedOrder(0)),
    };
    let src = alternating(i, j, l);
    let dst = alternating(j, i, l);
    let skew = torus_for_word(data, &src);
    let t = |k: usize| TorusElement::var(&skew, k);
    match l {
        2 => Ok(TransitionMap { source: src, target: dst, images: vec![OreFraction::var(&skew, 1), OreFraction::var(&skew, 0)] }),
        3 => {
            let s = OreFraction::from_element(t(0).add(&t(2)));
            let p1 = OreFraction::from_element(t(1).mul(&t(2))).div(&s)?;
            let p3 = s.inv()?.mul(&OreFraction::from_element(t(0).mul(&t(1))))?;
            Ok(TransitionMap { source: src, target: dst, images: vec![p1, s, p3] })
        }
        4 => extraction_transition(data, &src, &dst),
        _ => Err(Error::UnsupportedOrder(l)),
    }
}

/// Solves `m y = rhs` when consistent, with free variables set to zero.
fn solve_consistent(m: &Matrix, rhs: &[RatFun]) -> Option<Vec<RatFun>> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Matrix = m.iter().zip(rhs).map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
    let pivots = linalg::rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut y = vec![RatFun::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        y[c] = aug[r][ncols].clone();
    }
    Some(y)
}

/// The evaluation of the dual element `y` (given in dual-basis coordinates) on `P_w`.
fn eval_coords(data: &CartanData, w: &[usize], gamma: &[u32], y: &[RatFun], skew: &Arc<SkewMatrix>) -> TorusElement {
    let comp = component_data(data, gamma);
    let mut out = TorusElement::zero(skew);
    for a in exponent_vectors(w, gamma) {
        let v = linalg::dot(comp.coords_of_word(&monomial_word(w, &a)), y);
        if !v.is_zero() {
            out.add_term(a.clone(), &(&v * &divided_power_factor(data, w, &a)));
        }
    }
    out
}

/// An ordered monomial `t'^b` of `P_dst` that is the image of some `y` in `A`,
/// together with that element's image over `P_src`.
fn extract(data: &CartanData, src: &[usize], dst: &[usize], b: &[i64], src_skew: &Arc<SkewMatrix>) -> Option<TorusElement> {
    let r = data.rank();
    let gamma = monomial_degree(r, dst, b);
    let comp = component_data(data, &gamma);
    let rows = exponent_vectors(dst, &gamma);
    let m: Matrix = rows
        .iter()
        .map(|a| {
            let f = divided_power_factor(data, dst, a);
            comp.coords_of_word(&monomial_word(dst, a)).iter().map(|x| x * &f).collect()
        })
        .collect();
    let rhs: Vec<RatFun> = rows.iter().map(|a| if a.as_slice() == b { RatFun::one() } else { RatFun::zero() }).collect();
    let y = solve_consistent(&m, &rhs)?;
    Some(eval_coords(data, src, &gamma, &y, src_skew))
}

fn support(b: &[i64]) -> Option<(usize, usize)> {
    let first = b.iter().position(|&x| x != 0)?;
    let last = b.iter().rposition(|&x| x != 0)?;
    Some((first, last))
}

/// `p^b (p^c)^{-1}` or `(p^c)^{-1} p^b` when that is again an ordered product.
fn quotients(b: &[i64], c: &[i64]) -> Vec<(Monomial, bool)> {
    let diff: Monomial = b.iter().zip(c).map(|(x, y)| x - y).collect();
    if diff.iter().any(|&x| x < 0) || diff.iter().all(|&x| x == 0) {
        return Vec::new();
    }
    let (Some((df, dl)), Some((cf, cl))) = (support(&diff), support(c)) else { return Vec::new() };
    let mut out = Vec::new();
    if dl <= cf {
        out.push((diff.clone(), true));
    }
    if cl <= df {
        out.push((diff, false));
    }
    out
}

/// Transition map obtained by comparing graded components of the exponential identity.
///
/// Finds ordered monomials of `P_dst` that are images of elements of `A`, reads
/// off the corresponding products of the `p_k` over `P_src`, and recovers each
/// `p_k` by one-sided quotients of such products.
pub fn extraction_transition(data: &CartanData, src: &[usize], dst: &[usize]) -> Result<TransitionMap> {
    let m = dst.len();
    let skew = torus_for_word(data, src);
    let mut known: BTreeMap<Monomial, OreFraction> = BTreeMap::new();
    let unit = |k: usize| -> Monomial { (0..m).map(|x| i64::from(x == k)).collect() };
    let done = |known: &BTreeMap<Monomial, OreFraction>| (0..m).all(|k| known.contains_key(&unit(k)));
    let max_height = 2 * m as u32;
    let mut candidates = exponent_vectors_up_to(m, max_height);
    candidates.retain(|b| b.iter().all(|&x| x <= 2) && b.iter().any(|&x| x > 0));
    candidates.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));
    for b in candidates {
        if done(&known) {
            break;
        }
        if known.contains_key(&b) {
            continue;
        }
        let Some(img) = extract(data, src, dst, &b, &skew) else { continue };
        known.insert(b, OreFraction::from_element(img));
        // close under one-sided quotients
        loop {
            let mut added = Vec::new();
            for (x, fx) in &known {
                for (y, fy) in &known {
                    for (d, right) in quotients(x, y) {
                        if known.contains_key(&d) || added.iter().any(|(e, _)| *e == d) {
                            continue;
                        }
                        let v = if right { fx.div(fy)? } else { fy.inv()?.mul(fx)? };
                        added.push((d, v));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            known.extend(added);
        }
    }
    if !done(&known) {
        return Err(Error::InternalInconsistency(format!(
            "could not isolate all generators for {} -> {}",
            format_word(src),
            format_word(dst)
        )));
    }
    let images = (0..m).map(|k| known[&unit(k)].clone()).collect();
    Ok(TransitionMap { source: src.to_vec(), target: dst.to_vec(), images })
}

/// Composes local transitions along the given braid moves starting at `src`.
pub fn transition_along(data: &CartanData, src: &[usize], moves: &[BraidMove]) -> Result<TransitionMap> {
    let skew = torus_for_word(data, src);
    let mut cur = TransitionMap::identity(data, src);
    let mut locals: HashMap<(usize, usize), TransitionMap> = HashMap::new();
    for mv in moves {
        let l = mv.length;
        let p = mv.position;
        if p + l > cur.target.len() || cur.target[p..p + l] != alternating(mv.i, mv.j, l)[..] {
            return Err(Error::InternalInconsistency(format!("move does not apply to {}", format_word(&cur.target))));
        }
        if !locals.contains_key(&(mv.i, mv.j)) {
            locals.insert((mv.i, mv.j), local_transition(data, mv.i, mv.j)?);
        }
        let local = &locals[&(mv.i, mv.j)];
        let window = &cur.images[p..p + l];
        let mut images = cur.images.clone();
        for (k, img) in local.images.iter().enumerate() {
            images[p + k] = img.substitute_fraction(window, &skew)?;
        }
        let mut target = cur.target.clone();
        target[p..p + l].copy_from_slice(&local.target);
        cur = TransitionMap { source: src.to_vec(), target, images };
    }
    Ok(cur)
}

/// Transition map along a shortest braid path.
pub fn global_transition(data: &CartanData, src: &[usize], dst: &[usize]) -> Result<TransitionMap> {
    data.check_word(src)?;
    data.check_word(dst)?;
    for w in [src, dst] {
        if !is_reduced(data, w) {
            return Err(Error::NotReduced(format_word(w)));
        }
    }
    if src == dst {
        return Ok(TransitionMap::identity(data, src));
    }
    let not_same = || Error::NotSameElement(format_word(src), format_word(dst));
    if src.len() != dst.len() || !enumerate_reduced(data, src)?.contains(dst) {
        return Err(not_same());
    }
    match braid_path(data, src, dst, &|l| l <= 4) {
        Some(moves) => transition_along(data, src, &moves),
        None => Err(Error::UnsupportedOrder(6)),
    }
}

/// Both sides of the exponential identity in `U(gamma)` basis coordinates, per degree.
pub type ExpansionByDegree = BTreeMap<Degree, Vec<OreFraction>>;

/// Expands `exp(c_{w_1} f_1 E_{w_1}) ... exp(c_{w_m} f_m E_{w_m})` through `max_height`.
///
/// `scalars` holds one rescaling per simple root.
pub fn expand_exponentials(data: &CartanData, w: &[usize], factors: &[OreFraction], scalars: &[RatFun], max_height: u32) -> Result<ExpansionByDegree> {
    let r = data.rank();
    let skew = factors.first().map(|f| f.skew().clone()).unwrap_or_else(|| Arc::new(SkewMatrix::zero(0)));
    let mut out: ExpansionByDegree = BTreeMap::new();
    let mut powers: HashMap<(usize, i64), OreFraction> = HashMap::new();
    for a in exponent_vectors_up_to(w.len(), max_height) {
        let gamma = monomial_degree(r, w, &a);
        let comp = component_data(data, &gamma);
        let entry = out.entry(gamma.clone()).or_insert_with(|| vec![OreFraction::zero(&skew); comp.dim()]);
        let mut f = divided_power_factor(data, w, &a);
        for (i, &g) in gamma.iter().enumerate() {
            if g > 0 {
                f *= &scalars[i].pow(g as i64);
            }
        }
        if f.is_zero() {
            continue;
        }
        let mut term = OreFraction::scalar(&skew, f);
        for (k, &e) in a.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !powers.contains_key(&(k, e)) {
                powers.insert((k, e), factors[k].pow(e)?);
            }
            term = term.mul(&powers[&(k, e)])?;
        }
        for (j, x) in comp.coords_of_word(&monomial_word(w, &a)).iter().enumerate() {
            if !x.is_zero() {
                entry[j] = entry[j].add(&term.scale(x))?;
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing both sides of the exponential identity.
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub degrees_checked: usize,
    /// `(degree, basis index)` pairs where the sides differ.
    pub mismatches: Vec<(Degree, usize)>,
    /// Fraction degree cap in effect.
    pub ore_cap: usize,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Doublings of the fraction degree cap tried before giving up.
pub const CAP_ESCALATIONS: u32 = 2;

/// Compares both sides of the exponential identity for the transition `src -> dst`.
///
/// Sums of fractions grow quickly with the height, so on `CapExceeded` the
/// comparison is retried with the fraction degree cap doubled, up to
/// [`CAP_ESCALATIONS`] times. The cap that succeeded is recorded in the report.
pub fn exp_identity_report(data: &CartanData, src: &[usize], dst: &[usize], max_height: u32, scalars: &[RatFun]) -> Result<IdentityReport> {
    if scalars.len() != data.rank() {
        return Err(Error::SizeMismatch(scalars.len(), data.rank()));
    }
    let mut cap = ore_cap();
    let mut tries = 0;
    loop {
        match with_ore_cap(cap, || compare_sides(data, src, dst, max_height, scalars)) {
            Ok(mut r) => {
                r.ore_cap = cap;
                return Ok(r);
            }
            Err(Error::CapExceeded(_)) if tries < CAP_ESCALATIONS => {
                cap *= 2;
                tries += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn compare_sides(data: &CartanData, src: &[usize], dst: &[usize], max_height: u32, scalars: &[RatFun]) -> Result<IdentityReport> {
    let map = global_transition(data, src, dst)?;
    let skew = map.skew(data);
    let own: Vec<OreFraction> = (0..src.len()).map(|k| OreFraction::var(&skew, k)).collect();
    let lhs = expand_exponentials(data, src, &own, scalars, max_height)?;
    let rhs = expand_exponentials(data, dst, &map.images, scalars, max_height)?;
    let degrees: BTreeSet<&Degree> = lhs.keys().chain(rhs.keys()).collect();
    let mut report = IdentityReport { degrees_checked: degrees.len(), mismatches: Vec::new(), ore_cap: 0 };
    for g in degrees {
        let dim = component_data(data, g).dim();
        let zero = vec![OreFraction::zero(&skew); dim];
        let (a, b) = (lhs.get(g).unwrap_or(&zero), rhs.get(g).unwrap_or(&zero));
        for j in 0..dim {
            if !a[j].equiv(&b[j])? {
                report.mismatches.push((g.clone(), j));
            }
        }
    }
    Ok(report)
}

pub fn verify_exp_identity(data: &CartanData, src: &[usize], dst: &[usize], max_height: u32, scalars: &[RatFun]) -> Result<bool> {
    Ok(exp_identity_report(data, src, dst, max_height, scalars)?.holds())
}

/// Free-algebra coefficients of one degree of `exp(f_1 E_{w_1}) ... exp(f_m E_{w_m})`.
fn expand_words(data: &CartanData, w: &[usize], factors: &[OreFraction], gamma: &[u32], skew: &Arc<SkewMatrix>) -> Result<BTreeMap<Word, OreFraction>> {
    let mut out: BTreeMap<Word, OreFraction> = BTreeMap::new();
    for a in exponent_vectors(w, gamma) {
        let mut term = OreFraction::scalar(skew, divided_power_factor(data, w, &a));
        for (k, &e) in a.iter().enumerate() {
            if e > 0 {
                term = term.mul(&factors[k].pow(e)?)?;
            }
        }
        let word = monomial_word(w, &a);
        let cur = out.remove(&word).unwrap_or_else(|| OreFraction::zero(skew));
        out.insert(word, cur.add(&term)?);
    }
    Ok(out)
}

/// The free-algebra difference of the two sides in one degree.
#[derive(Clone, Debug)]
pub struct SerreComponent {
    pub degree: Degree,
    pub difference: BTreeMap<Word, OreFraction>,
    /// The Gram radical in this degree.
    pub radical: Vec<FreeElement>,
    /// `f` with `difference = f * radical[0]`, when the difference is such a multiple.
    pub multiplier: Option<OreFraction>,
}

impl SerreComponent {
    /// Whether the difference is a nonzero multiple of the unique radical element.
    pub fn reproduces_radical(&self) -> bool {
        self.radical.len() == 1 && self.multiplier.as_ref().is_some_and(|f| !f.is_zero())
    }

    /// Whether `u` is proportional to the difference.
    pub fn proportional_to(&self, u: &FreeElement) -> Result<bool> {
        Ok(proportional(&self.difference, u)?.is_some_and(|f| !f.is_zero()))
    }
}

fn proportional(diff: &BTreeMap<Word, OreFraction>, u: &FreeElement) -> Result<Option<OreFraction>> {
    let Some((w0, c0)) = u.terms().iter().next() else { return Ok(None) };
    let Some(skew) = diff.values().next().map(|f| f.skew().clone()) else { return Ok(None) };
    let zero = OreFraction::zero(&skew);
    let f = diff.get(w0).unwrap_or(&zero).scale(&c0.inv()?);
    for (w, d) in diff {
        if !d.equiv(&f.scale(&u.coeff(w)))? {
            return Ok(None);
        }
    }
    for (w, c) in u.terms() {
        if !diff.contains_key(w) && !c.is_zero() && !f.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(f))
}

/// Takes the degree `alpha_i + (1 - a_ij) alpha_j` component of the identity for `src -> dst`.
pub fn serre_component(data: &CartanData, src: &[usize], dst: &[usize], i: usize, j: usize) -> Result<SerreComponent> {
    let r = data.rank();
    let mut gamma = vec![0u32; r];
    gamma[i] += 1;
    gamma[j] += (1 - data.a(i, j)) as u32;
    let map = global_transition(data, src, dst)?;
    let skew = map.skew(data);
    let own: Vec<OreFraction> = (0..src.len()).map(|k| OreFraction::var(&skew, k)).collect();
    let lhs = expand_words(data, src, &own, &gamma, &skew)?;
    let rhs = expand_words(data, dst, &map.images, &gamma, &skew)?;
    let mut difference = BTreeMap::new();
    let words: BTreeSet<&Word> = lhs.keys().chain(rhs.keys()).collect();
    let zero = OreFraction::zero(&skew);
    for w in words {
        let d = lhs.get(w).unwrap_or(&zero).sub(rhs.get(w).unwrap_or(&zero))?;
        if !d.is_zero() {
            difference.insert(w.clone(), d);
        }
    }
    let radical = component_data(data, &gamma).radical_basis.clone();
    let multiplier = match radical.as_slice() {
        [u] => proportional(&difference, u)?,
        _ => None,
    };
    Ok(SerreComponent { degree: gamma, difference, radical, multiplier })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{longest_word, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn frac(skew: &Arc<SkewMatrix>, terms: &[(&[i64], i64)]) -> OreFraction {
        OreFraction::from_element(TorusElement::from_terms(skew, terms.iter().map(|(a, c)| (a.to_vec(), RatFun::from_int(*c)))))
    }

    #[test]
    fn commuting_move() {
        let data = CartanData::a3();
        let m = local_transition(&data, 0, 2).unwrap();
        assert_eq!(m.target, vec![2, 0]);
        assert_eq!(m.image_strings(), vec!["t2", "t1"]);
    }

    #[test]
    fn a2_example() {
        let data = CartanData::a2();
        let m = global_transition(&data, &w("1,2,1"), &w("2,1,2")).unwrap();
        let skew = m.skew(&data);
        let s = frac(&skew, &[(&[1, 0, 0], 1), (&[0, 0, 1], 1)]);
        let p1 = frac(&skew, &[(&[0, 1, 1], 1)]).div(&s).unwrap();
        let p3 = s.inv().unwrap().mul(&frac(&skew, &[(&[1, 1, 0], 1)])).unwrap();
        assert!(m.images[0].equiv(&p1).unwrap());
        assert!(m.images[1].equiv(&s).unwrap());
        assert!(m.images[2].equiv(&p3).unwrap());
        assert!(m.preserves_relations(&data).unwrap());
    }

    #[test]
    fn extraction_agrees_with_closed_forms() {
        let data = CartanData::a2();
        for (i, j) in [(0, 1), (1, 0)] {
            let closed = local_transition(&data, i, j).unwrap();
            let solved = extraction_transition(&data, &closed.source, &closed.target).unwrap();
            assert!(closed.equiv(&solved).unwrap());
        }
        let data = CartanData::a3();
        let closed = local_transition(&data, 0, 2).unwrap();
        let solved = extraction_transition(&data, &closed.source, &closed.target).unwrap();
        assert!(closed.equiv(&solved).unwrap());
    }

    #[test]
    fn b2_products() {
        let data = CartanData::b2();
        let m = local_transition(&data, 0, 1).unwrap();
        let skew = m.skew(&data);
        let p = &m.images;
        let t = |a: [i64; 4]| TorusElement::monomial(&skew, a.to_vec(), RatFun::one());
        let p23 = p[1].mul(&p[2]).unwrap();
        let want = OreFraction::from_element(t([1, 1, 0, 0]).add(&t([1, 0, 0, 1])).add(&t([0, 0, 1, 1])));
        assert!(p23.equiv(&want).unwrap());
        let p234 = p23.mul(&p[3]).unwrap();
        assert!(p234.equiv(&OreFraction::from_element(t([1, 1, 1, 0]))).unwrap());
        assert!(m.preserves_relations(&data).unwrap());
    }

    #[test]
    fn round_trips() {
        for data in [CartanData::a3(), CartanData::a2(), CartanData::b2()] {
            for (i, j) in [(0, 1), (1, 0)] {
                if data.braid_length(i, j).is_none() {
                    continue;
                }
                let fwd = local_transition(&data, i, j).unwrap();
                let back = local_transition(&data, j, i).unwrap();
                let rt = fwd.then(&data, &back).unwrap();
                assert!(rt.equiv(&TransitionMap::identity(&data, &fwd.source)).unwrap(), "{:?}", rt);
            }
        }
    }

    #[test]
    fn same_word_is_identity() {
        let data = CartanData::b2();
        let src = w("1,2,1,2");
        let m = global_transition(&data, &src, &src).unwrap();
        assert_eq!(m.image_strings(), vec!["t1", "t2", "t3", "t4"]);
        assert!(verify_exp_identity(&data, &src, &src, 3, &[RatFun::one(), RatFun::one()]).unwrap());
    }

    #[test]
    fn errors() {
        let data = CartanData::a2();
        assert_eq!(
            global_transition(&data, &w("1,2"), &w("2,1")).unwrap_err(),
            Error::NotSameElement("(1,2)".into(), "(2,1)".into())
        );
        assert!(matches!(global_transition(&data, &w("1,1"), &w("1,1")), Err(Error::NotReduced(_))));
        let g2 = CartanData::new(vec![vec![2, -1], vec![-3, 2]], vec![3, 1]).unwrap();
        assert_eq!(local_transition(&g2, 0, 1).unwrap_err(), Error::UnsupportedOrder(6));
        let w0 = longest_word(&g2).unwrap();
        let other: Word = w0.iter().map(|x| 1 - x).collect();
        assert_eq!(global_transition(&g2, &w0, &other).unwrap_err(), Error::UnsupportedOrder(6));
    }

    #[test]
    fn a2_identity_and_serre() {
        let data = CartanData::a2();
        let (src, dst) = (w("1,2,1"), w("2,1,2"));
        assert!(verify_exp_identity(&data, &src, &dst, 4, &[RatFun::one(), RatFun::one()]).unwrap());
        let sc = serre_component(&data, &src, &dst, 1, 0).unwrap();
        assert_eq!(sc.degree, vec![2, 1]);
        assert!(sc.reproduces_radical());
    }
}
