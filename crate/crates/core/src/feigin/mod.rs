//! The evaluation map `A -> P_w` against the group-like element `e_w`, the
//! truncated group-like series itself, kernels, the universal element and the
//! constructive inverse on the fraction field.

mod inverse;

pub use inverse::{rational_inverse, rational_inverse_with, AlgExpr, ExprTree, InverseFormula};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::bialgebra::{self, component_data, coproduct_matrix, sub_degrees, sub_degrees_of, Degree, DualElement};
use crate::cartan::{is_reduced, CartanData, Word};
use crate::linalg::{self, Matrix};
use crate::scalars::{inv_q_factorial, Poly, RatFun};
use crate::torus::{reorder_exponent, Monomial, SkewMatrix, TorusElement};

pub use crate::bialgebra::estar_apply;

/// The skew matrix of `P_w`.
pub fn torus_for_word(data: &CartanData, w: &[usize]) -> Arc<SkewMatrix> {
    Arc::new(SkewMatrix::from_word(data, w))
}

/// `q_i = q^{C_ii}`, the base of the divided powers of `E_i`.
pub fn divided_power_base(data: &CartanData, i: usize) -> Poly {
    Poly::q_pow(data.c(i, i) as u32)
}

/// `1 / prod_k [a_k]_{q_{w_k}}!`.
pub fn divided_power_factor(data: &CartanData, w: &[usize], a: &[i64]) -> RatFun {
    let mut f = RatFun::one();
    for (k, &e) in a.iter().enumerate() {
        if e > 1 {
            f *= &inv_q_factorial(e as u32, &divided_power_base(data, w[k]));
        }
    }
    f
}

/// The word `E_{w_1}^{a_1} ... E_{w_m}^{a_m}`.
pub fn monomial_word(w: &[usize], a: &[i64]) -> Word {
    let mut out = Vec::new();
    for (k, &e) in a.iter().enumerate() {
        out.extend(std::iter::repeat(w[k]).take(e as usize));
    }
    out
}

/// Exponent vectors `a` with `sum a_k alpha_{w_k} = gamma`.
pub fn exponent_vectors(w: &[usize], gamma: &[u32]) -> Vec<Monomial> {
    let m = w.len();
    let mut out = Vec::new();
    let mut rem = gamma.to_vec();
    let mut cur = vec![0i64; m];
    // last position of each letter must absorb the remainder
    let mut last = vec![usize::MAX; gamma.len()];
    for (k, &i) in w.iter().enumerate() {
        last[i] = k;
    }
    if gamma.iter().enumerate().any(|(i, &g)| g > 0 && last[i] == usize::MAX) {
        return out;
    }
    fn rec(w: &[usize], k: usize, last: &[usize], rem: &mut Vec<u32>, cur: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if k == w.len() {
            if rem.iter().all(|x| *x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let i = w[k];
        let (lo, hi) = if last[i] == k { (rem[i], rem[i]) } else { (0, rem[i]) };
        for e in (lo..=hi).rev() {
            cur[k] = e as i64;
            rem[i] -= e;
            rec(w, k + 1, last, rem, cur, out);
            rem[i] += e;
        }
        cur[k] = 0;
    }
    rec(w, 0, &last, &mut rem, &mut cur, &mut out);
    out
}

/// Exponent vectors of total height at most `max_height`.
pub fn exponent_vectors_up_to(m: usize, max_height: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; m];
    fn rec(k: usize, left: u32, cur: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[k] = e as i64;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, max_height, &mut cur, &mut out);
    out
}

/// Degree of `t^a` under `deg t_k = alpha_{w_k}`.
pub fn monomial_degree(r: usize, w: &[usize], a: &[i64]) -> Degree {
    let mut d = vec![0u32; r];
    for (k, &e) in a.iter().enumerate() {
        d[w[k]] += e as u32;
    }
    d
}

/// `psi_w(x) = sum_a x(E^{[a]}) t^a`.
pub fn feigin_eval(data: &CartanData, x: &DualElement, w: &[usize]) -> TorusElement {
    feigin_eval_in(data, x, w, &torus_for_word(data, w))
}

pub fn feigin_eval_in(data: &CartanData, x: &DualElement, w: &[usize], skew: &Arc<SkewMatrix>) -> TorusElement {
    let mut out = TorusElement::zero(skew);
    if x.is_zero() {
        return out;
    }
    for a in exponent_vectors(w, &x.degree) {
        let word = monomial_word(w, &a);
        if let Some(v) = x.eval_ref(&word) {
            out.add_term(a.clone(), &(v * &divided_power_factor(data, w, &a)));
        }
    }
    out
}

/// Truncated `e_w = exp(c_1 t_1 E_{w_1}) ... exp(c_m t_m E_{w_m})` in basis coordinates.
#[derive(Clone, Debug)]
pub struct GroupLikeSeries {
    pub word: Word,
    pub truncation: u32,
    pub scalars: Vec<RatFun>,
    /// Per degree: `(torus exponent, basis index) -> coefficient`.
    pub components: BTreeMap<Degree, BTreeMap<(Monomial, usize), RatFun>>,
    pub grouplike: bool,
    pub failures: Vec<String>,
}

impl GroupLikeSeries {
    /// The coefficient of `t^a` attached to the `j`-th basis element of `U(gamma)`.
    pub fn coeff(&self, gamma: &[u32], a: &[i64], j: usize) -> RatFun {
        self.components
            .get(gamma)
            .and_then(|c| c.get(&(a.to_vec(), j)))
            .cloned()
            .unwrap_or_else(RatFun::zero)
    }

    /// The component of degree `gamma` as a torus element per basis index.
    pub fn component(&self, data: &CartanData, gamma: &[u32]) -> Vec<TorusElement> {
        let skew = torus_for_word(data, &self.word);
        let dim = component_data(data, gamma).dim();
        let mut out = vec![TorusElement::zero(&skew); dim];
        if let Some(c) = self.components.get(gamma) {
            for ((a, j), v) in c {
                out[*j].add_term(a.clone(), v);
            }
        }
        out
    }
}

/// Expands the group-like series and checks `Δ(e) = e⊗e` through height `max_height`.
pub fn grouplike_series(data: &CartanData, w: &[usize], c: &[RatFun], max_height: u32) -> GroupLikeSeries {
    assert_eq!(c.len(), w.len(), "one scalar per letter");
    let r = data.rank();
    let mut components: BTreeMap<Degree, BTreeMap<(Monomial, usize), RatFun>> = BTreeMap::new();
    for a in exponent_vectors_up_to(w.len(), max_height) {
        let gamma = monomial_degree(r, w, &a);
        let comp = component_data(data, &gamma);
        let mut f = divided_power_factor(data, w, &a);
        for (k, &e) in a.iter().enumerate() {
            if e > 0 {
                f *= &c[k].pow(e);
            }
        }
        if f.is_zero() {
            continue;
        }
        let word = monomial_word(w, &a);
        let entry = components.entry(gamma).or_default();
        for (j, x) in comp.coords_of_word(&word).iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let key = (a.clone(), j);
            let e = entry.entry(key.clone()).or_insert_with(RatFun::zero);
            *e += &(&f * x);
            if e.is_zero() {
                entry.remove(&key);
            }
        }
    }
    let mut series = GroupLikeSeries { word: w.to_vec(), truncation: max_height, scalars: c.to_vec(), components, grouplike: true, failures: Vec::new() };
    series.failures = grouplike_failures(data, &series);
    series.grouplike = series.failures.is_empty();
    series
}

/// Series with all scalars equal to one.
pub fn grouplike_series_unit(data: &CartanData, w: &[usize], max_height: u32) -> GroupLikeSeries {
    grouplike_series(data, w, &vec![RatFun::one(); w.len()], max_height)
}

type TripleKey = (Monomial, usize, usize);

fn grouplike_failures(data: &CartanData, s: &GroupLikeSeries) -> Vec<String> {
    let skew = SkewMatrix::from_word(data, &s.word);
    let r = data.rank();
    let mut failures = Vec::new();
    for gamma in bialgebra::degrees_up_to(r, s.truncation) {
        let empty = BTreeMap::new();
        let comp_g = s.components.get(&gamma).unwrap_or(&empty);
        for g2 in sub_degrees_of(&gamma) {
            let g1 = sub_degrees(&gamma, &g2).unwrap();
            let mut lhs: BTreeMap<TripleKey, RatFun> = BTreeMap::new();
            let mut mats: HashMap<usize, Vec<Vec<RatFun>>> = HashMap::new();
            for ((a, j), v) in comp_g {
                let m = mats.entry(*j).or_insert_with(|| coproduct_matrix(data, &gamma, *j, &g2));
                for (j1, row) in m.iter().enumerate() {
                    for (j2, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            let e = lhs.entry((a.clone(), j1, j2)).or_insert_with(RatFun::zero);
                            *e += &(v * x);
                        }
                    }
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            let mut rhs: BTreeMap<TripleKey, RatFun> = BTreeMap::new();
            if let (Some(c1), Some(c2)) = (s.components.get(&g1), s.components.get(&g2)) {
                for ((a1, j1), v1) in c1 {
                    for ((a2, j2), v2) in c2 {
                        let e = reorder_exponent(&skew, a1, a2);
                        let a: Monomial = a1.iter().zip(a2).map(|(x, y)| x + y).collect();
                        let entry = rhs.entry((a, *j1, *j2)).or_insert_with(RatFun::zero);
                        *entry += &(&(v1 * v2) * &RatFun::q_pow(e));
                    }
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                failures.push(format!("degree {:?} split {:?}+{:?}", gamma, g1, g2));
            }
        }
    }
    failures
}

/// Matrix whose rows are the basis coordinates of the monomials `E^a` of degree `gamma`.
pub fn monomial_matrix(data: &CartanData, w: &[usize], gamma: &[u32]) -> Matrix {
    let comp = component_data(data, gamma);
    exponent_vectors(w, gamma).iter().map(|a| comp.coords_of_word(&monomial_word(w, a)).to_vec()).collect()
}

/// `dim` of the span of monomials `E_{w_1}^{a_1}...E_{w_m}^{a_m}` in `U(gamma)`.
pub fn monomial_subspace_dim(data: &CartanData, w: &[usize], gamma: &[u32]) -> usize {
    let m = monomial_matrix(data, w, gamma);
    if m.is_empty() {
        0
    } else {
        linalg::rank(&m)
    }
}

/// Kernel of the evaluation map restricted to one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub degree: Degree,
    pub elements: Vec<DualElement>,
    /// The same elements as value vectors on the basis of `U(gamma)`.
    pub vectors: Vec<Vec<RatFun>>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Whether two kernels of the same degree span the same subspace.
    pub fn same_span(&self, other: &KernelBasis) -> bool {
        if self.degree != other.degree || self.dim() != other.dim() {
            return false;
        }
        if self.dim() == 0 {
            return true;
        }
        linalg::same_row_space(&self.vectors, &other.vectors)
    }
}

/// `{x in A(gamma) : x(E^a) = 0 for all monomials of w}`.
pub fn kernel_basis(data: &CartanData, w: &[usize], gamma: &[u32]) -> KernelBasis {
    let comp = component_data(data, gamma);
    let m = monomial_matrix(data, w, gamma);
    let vectors = if m.is_empty() {
        (0..comp.dim())
            .map(|j| (0..comp.dim()).map(|i| if i == j { RatFun::one() } else { RatFun::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&m, comp.dim())
    };
    let elements = vectors.iter().map(|y| comp.functional(y)).collect();
    KernelBasis { degree: gamma.to_vec(), elements, vectors }
}

/// The reduced subsequence kept by reading `w` left to right and skipping any letter
/// that would make the prefix non-reduced.
pub fn reduced_subsequence(data: &CartanData, w: &[usize]) -> Word {
    let mut out: Word = Vec::new();
    for &i in w {
        out.push(i);
        if !is_reduced(data, &out) {
            out.pop();
        }
    }
    out
}

/// `(psi_w ⊗ id)(R) = e_w` through height `max_height`, with `R = sum b^* ⊗ b`.
pub fn universal_check(data: &CartanData, w: &[usize], max_height: u32) -> bool {
    let e = grouplike_series_unit(data, w, max_height);
    let skew = torus_for_word(data, w);
    for gamma in bialgebra::degrees_up_to(data.rank(), max_height) {
        let comp = component_data(data, &gamma);
        let expected = e.component(data, &gamma);
        for j in 0..comp.dim() {
            let image = feigin_eval_in(data, &comp.dual_basis_element(j), w, &skew);
            if image != expected[j] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialgebra::{dual_multiply, FreeElement};

    #[test]
    fn generator_images() {
        let a2 = CartanData::a2();
        let x1 = DualElement::generator(2, 0);
        assert_eq!(feigin_eval(&a2, &x1, &[0, 1, 0]).to_string(), "t1 + t3");
        assert!(feigin_eval(&a2, &DualElement::generator(2, 1), &[0]).is_zero());
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let a2 = CartanData::a2();
        let w = [0, 1, 0];
        let x = dual_multiply(&a2, &DualElement::generator(2, 0), &DualElement::generator(2, 1));
        let y = DualElement::generator(2, 0);
        let lhs = feigin_eval(&a2, &dual_multiply(&a2, &x, &y), &w);
        let rhs = feigin_eval(&a2, &x, &w).mul(&feigin_eval(&a2, &y, &w));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn grouplike_small() {
        let a2 = CartanData::a2();
        let s = grouplike_series_unit(&a2, &[0], 2);
        assert!(s.grouplike);
        assert_eq!(s.coeff(&[2, 0], &[2], 0), "(1)/(1+q^2)".parse::<RatFun>().unwrap());
        assert!(grouplike_series_unit(&a2, &[0, 1, 0], 0).grouplike);
        assert!(grouplike_series_unit(&a2, &[0, 1, 0], 4).grouplike);
    }

    #[test]
    fn grouplike_detects_wrong_scalars_structure() {
        // breaking the divided powers must break the identity
        let a2 = CartanData::a2();
        let mut s = grouplike_series_unit(&a2, &[0], 2);
        let c = s.components.get_mut(&vec![2, 0]).unwrap();
        for v in c.values_mut() {
            *v = RatFun::one();
        }
        assert!(!grouplike_failures(&a2, &s).is_empty());
    }

    #[test]
    fn kernel_examples() {
        let a2 = CartanData::a2();
        let k = kernel_basis(&a2, &[0], &[0, 1]);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.elements[0], DualElement::generator(2, 1));
        assert_eq!(kernel_basis(&a2, &[0, 1, 0], &[1, 1]).dim(), 0);
        assert_eq!(monomial_subspace_dim(&a2, &[0, 1], &[1, 1]), 1);
        assert_eq!(monomial_subspace_dim(&a2, &[0, 1, 0], &[1, 1]), 2);
        assert_eq!(monomial_subspace_dim(&a2, &[0, 1], &[0, 0]), 1);
        assert!(kernel_basis(&a2, &[0, 0], &[2, 0]).same_span(&kernel_basis(&a2, &[0], &[2, 0])));
        assert_eq!(reduced_subsequence(&a2, &[0, 0, 1, 0, 1]), vec![0, 1, 0]);
    }

    #[test]
    fn universal_small() {
        let a2 = CartanData::a2();
        assert!(universal_check(&a2, &[0], 1));
        assert!(universal_check(&a2, &[0, 1], 0));
        assert!(universal_check(&a2, &[0, 1, 0], 3));
    }

    #[test]
    fn dual_of_word_evaluates() {
        let a2 = CartanData::a2();
        let y = crate::bialgebra::dual_of(&a2, &FreeElement::word(vec![0, 1])).unwrap();
        let img = feigin_eval(&a2, &y, &[0, 1]);
        assert_eq!(img.to_string(), "t1 t2");
    }
}
