//! The matrix model in type `A_{n-1}`: the entries `x_ij` of the unipotent
//! matrix `X`, the defining representation `E_i -> E_{i,i+1}` and the
//! factorization of `psi_w(X)` into elementary matrices.

use std::sync::Arc;

use serde::Serialize;

use crate::bialgebra::{component_data, degrees_up_to, dual_multiply, DualElement, FreeElement};
use crate::cartan::{CartanData, Word};
use crate::error::{Error, Result};
use crate::feigin::{feigin_eval_in, torus_for_word, GroupLikeSeries};
use crate::scalars::RatFun;
use crate::torus::{SkewMatrix, TorusElement};

/// Fails unless the data is `A_r` with `d = (1, ..., 1)`.
pub fn check_type_a(data: &CartanData) -> Result<()> {
    let r = data.rank();
    for i in 0..r {
        if data.d(i) != 1 {
            return Err(Error::NotTypeA);
        }
        for j in 0..r {
            let want = match i.abs_diff(j) {
                0 => 2,
                1 => -1,
                _ => 0,
            };
            if data.a(i, j) != want {
                return Err(Error::NotTypeA);
            }
        }
    }
    Ok(())
}

/// The increasing word `E_i E_{i+1} ... E_{j-1}` (0-based matrix indices).
fn increasing_word(i: usize, j: usize) -> Word {
    (i..j).collect()
}

/// The degree `alpha_i + ... + alpha_{j-1}`.
fn interval_degree(r: usize, i: usize, j: usize) -> Vec<u32> {
    (0..r).map(|k| u32::from(k >= i && k < j)).collect()
}

/// Upper unitriangular matrix with entries in `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOverA {
    pub entries: Vec<Vec<DualElement>>,
}

impl MatrixOverA {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// The entry `x_ij` for `0 <= i < j < n`.
    pub fn x(&self, i: usize, j: usize) -> &DualElement {
        &self.entries[i][j]
    }
}

/// `X = I + sum x_ij E_ij`, with `x_ij` dual to `E_i ... E_{j-1}` in the basis of `U(alpha_ij)`.
pub fn build_x_matrix(data: &CartanData) -> Result<MatrixOverA> {
    check_type_a(data)?;
    let r = data.rank();
    let n = r + 1;
    let mut entries = vec![vec![DualElement::zero(vec![0; r]); n]; n];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = DualElement::unit(r);
        for (j, e) in row.iter_mut().enumerate().skip(i + 1) {
            let comp = component_data(data, &interval_degree(r, i, j));
            let b = increasing_word(i, j);
            let k = comp.u_basis.iter().position(|&idx| comp.words[idx] == b).ok_or_else(|| {
                Error::InternalInconsistency("increasing word missing from basis".into())
            })?;
            *e = comp.dual_basis_element(k);
        }
    }
    Ok(MatrixOverA { entries })
}

/// Outcome of one relation check.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
}

/// Checks the commutation and bracket relations among the `x_ij`.
pub fn check_relations(data: &CartanData, x: &MatrixOverA) -> Vec<RelationCheck> {
    let n = x.size();
    let q = RatFun::q_pow(1);
    let qi = RatFun::q_pow(-1);
    let mul = |a: &DualElement, b: &DualElement| dual_multiply(data, a, b);
    let mut out = Vec::new();
    let mut push = |relation: String, passed: bool| out.push(RelationCheck { relation, passed });
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (xij, xjk, xik) = (x.x(i, j), x.x(j, k), x.x(i, k));
                let bracket = mul(xij, xjk).scale(&q).sub(&mul(xjk, xij)).scale(&(&q - &qi).inv().unwrap());
                push(format!("x{0}{2} = (q x{0}{1} x{1}{2} - x{1}{2} x{0}{1})/(q - q^-1)", i + 1, j + 1, k + 1), bracket == *xik);
                push(format!("x{0}{1} x{0}{2} = q x{0}{2} x{0}{1}", i + 1, j + 1, k + 1), mul(xij, xik) == mul(xik, xij).scale(&q));
                push(format!("x{1}{2} x{0}{2} = q^-1 x{0}{2} x{1}{2}", i + 1, j + 1, k + 1), mul(xjk, xik) == mul(xik, xjk).scale(&qi));
                for l in k + 1..n {
                    let (xkl, xil) = (x.x(k, l), x.x(i, l));
                    push(format!("x{0}{1} x{2}{3} = x{2}{3} x{0}{1}", i + 1, j + 1, k + 1, l + 1), mul(xij, xkl) == mul(xkl, xij));
                    push(format!("x{0}{3} x{1}{2} = x{1}{2} x{0}{3}", i + 1, j + 1, k + 1, l + 1), mul(xil, xjk) == mul(xjk, xil));
                }
            }
        }
    }
    out
}

/// `rho(w)` for a word: `E_{ij}` when `w = (i, i+1, ..., j-1)`, else zero. Returns `(i, j)`.
fn rho_word(w: &[usize]) -> Option<(usize, usize)> {
    let first = *w.first()?;
    w.iter().enumerate().all(|(k, &l)| l == first + k).then(|| (first, first + w.len()))
}

/// Image of a free element under `E_i -> E_{i,i+1}`.
pub fn rho_push(data: &CartanData, u: &FreeElement) -> Result<Vec<Vec<RatFun>>> {
    check_type_a(data)?;
    let n = data.rank() + 1;
    let mut m = vec![vec![RatFun::zero(); n]; n];
    for (w, c) in u.terms() {
        match rho_word(w) {
            Some((i, j)) => m[i][j] += c,
            None if w.is_empty() => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] += c;
                }
            }
            None => {}
        }
    }
    Ok(m)
}

/// Upper triangular matrix over a skew polynomial algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOverP {
    pub entries: Vec<Vec<TorusElement>>,
}

impl MatrixOverP {
    pub fn identity(skew: &Arc<SkewMatrix>, n: usize) -> Self {
        MatrixOverP {
            entries: (0..n).map(|i| (0..n).map(|j| if i == j { TorusElement::one(skew) } else { TorusElement::zero(skew) }).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &MatrixOverP) -> MatrixOverP {
        let n = self.entries.len();
        let skew = self.entries[0][0].skew().clone();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = TorusElement::zero(&skew);
                        for k in 0..n {
                            if !self.entries[i][k].is_zero() && !o.entries[k][j].is_zero() {
                                acc = acc.add(&self.entries[i][k].mul(&o.entries[k][j]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        MatrixOverP { entries }
    }

    pub fn pretty(&self) -> String {
        self.entries.iter().map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" | ")).collect::<Vec<_>>().join("\n")
    }
}

/// `(I + t_1 E_{w_1,w_1+1}) ... (I + t_m E_{w_m,w_m+1})` over `P_w`.
pub fn elementary_product(data: &CartanData, w: &[usize]) -> MatrixOverP {
    let skew = torus_for_word(data, w);
    let n = data.rank() + 1;
    let mut acc = MatrixOverP::identity(&skew, n);
    for (k, &i) in w.iter().enumerate() {
        let mut f = MatrixOverP::identity(&skew, n);
        f.entries[i][i + 1] = TorusElement::var(&skew, k);
        acc = acc.mul(&f);
    }
    acc
}

/// `psi_w` applied entrywise to `X`.
pub fn evaluate_x(data: &CartanData, x: &MatrixOverA, w: &[usize]) -> MatrixOverP {
    let skew = torus_for_word(data, w);
    MatrixOverP { entries: x.entries.iter().map(|row| row.iter().map(|e| feigin_eval_in(data, e, w, &skew)).collect()).collect() }
}

/// Whether `psi_w(X)` equals the product of elementary matrices.
pub fn factorization_check(data: &CartanData, w: &[usize], n: usize) -> Result<bool> {
    check_type_a(data)?;
    if n != data.rank() + 1 {
        return Err(Error::SizeMismatch(n, data.rank() + 1));
    }
    data.check_word(w)?;
    let x = build_x_matrix(data)?;
    Ok(evaluate_x(data, &x, w) == elementary_product(data, w))
}

/// `(id ⊗ rho)` of the truncated group-like series, as a matrix over `P_w`.
pub fn rho_series(data: &CartanData, series: &GroupLikeSeries) -> Result<MatrixOverP> {
    check_type_a(data)?;
    let skew = torus_for_word(data, &series.word);
    let n = data.rank() + 1;
    let mut m = MatrixOverP { entries: vec![vec![TorusElement::zero(&skew); n]; n] };
    for (gamma, comp) in &series.components {
        let basis = component_data(data, gamma);
        for ((a, j), c) in comp {
            let w = &basis.words[basis.u_basis[*j]];
            if w.is_empty() {
                for (i, row) in m.entries.iter_mut().enumerate() {
                    row[i].add_term(a.clone(), c);
                }
            } else if let Some((i, k)) = rho_word(w) {
                m.entries[i][k].add_term(a.clone(), c);
            }
        }
    }
    Ok(m)
}

/// Checks that `sum_b b^* rho(b)` over every degree of height at most `max_height`
/// reproduces the corresponding part of `X`.
pub fn lemma_check(data: &CartanData, max_height: u32) -> Result<bool> {
    let x = build_x_matrix(data)?;
    let r = data.rank();
    let n = r + 1;
    for gamma in degrees_up_to(r, max_height) {
        let comp = component_data(data, &gamma);
        let mut pushed = vec![vec![DualElement::zero(gamma.clone()); n]; n];
        for (k, &idx) in comp.u_basis.iter().enumerate() {
            let w = &comp.words[idx];
            let rho = rho_push(data, &FreeElement::word(w.clone()))?;
            let bstar = comp.dual_basis_element(k);
            for i in 0..n {
                for j in 0..n {
                    if !rho[i][j].is_zero() {
                        pushed[i][j] = pushed[i][j].add(&bstar.scale(&rho[i][j]));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = if x.entries[i][j].degree == gamma { x.entries[i][j].clone() } else { DualElement::zero(gamma.clone()) };
                if pushed[i][j] != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::parse_word;
    use crate::feigin::grouplike_series_unit;

    #[test]
    fn small_matrices() {
        let a1 = CartanData::type_a(1);
        let x = build_x_matrix(&a1).unwrap();
        assert_eq!(x.x(0, 1), &DualElement::generator(1, 0));
        assert!(factorization_check(&a1, &[0], 2).unwrap());

        let a2 = CartanData::a2();
        let x = build_x_matrix(&a2).unwrap();
        assert!(check_relations(&a2, &x).iter().all(|c| c.passed));
        let w = parse_word("1,2,1").unwrap();
        let p = evaluate_x(&a2, &x, &w);
        assert_eq!(p.entries[0][1].to_string(), "t1 + t3");
        assert_eq!(p.entries[1][2].to_string(), "t2");
        assert_eq!(p.entries[0][2].to_string(), "t1 t2");
        assert!(factorization_check(&a2, &w, 3).unwrap());
    }

    #[test]
    fn entries_are_rho_coefficients() {
        let a3 = CartanData::a3();
        let x = build_x_matrix(&a3).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                let e = x.x(i, j);
                for (w, v) in e.values() {
                    // value on a word is the E_ij coefficient of its image
                    let want = if rho_word(w) == Some((i, j)) { RatFun::one() } else { RatFun::zero() };
                    assert_eq!(v, &want, "x{}{} on {:?}", i + 1, j + 1, w);
                }
                assert_eq!(e.eval(&increasing_word(i, j)), RatFun::one());
            }
        }
    }

    #[test]
    fn rho_examples() {
        let a2 = CartanData::a2();
        let m = rho_push(&a2, &FreeElement::generator(0)).unwrap();
        assert!(m[0][1].is_one());
        let m = rho_push(&a2, &FreeElement::word(vec![0, 1])).unwrap();
        assert!(m[0][2].is_one());
        let serre = component_data(&a2, &[2, 1]).radical_basis[0].clone();
        let m = rho_push(&a2, &serre).unwrap();
        assert!(m.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn series_collapses() {
        let a2 = CartanData::a2();
        let w = parse_word("1,2,1").unwrap();
        let s = grouplike_series_unit(&a2, &w, 3);
        assert_eq!(rho_series(&a2, &s).unwrap(), elementary_product(&a2, &w));
        assert!(lemma_check(&a2, 3).unwrap());
    }

    #[test]
    fn not_type_a() {
        assert_eq!(build_x_matrix(&CartanData::b2()).unwrap_err(), Error::NotTypeA);
        assert_eq!(factorization_check(&CartanData::a2(), &[0], 4).unwrap_err(), Error::SizeMismatch(4, 3));
    }

    #[test]
    fn distinct_parameters_give_distinct_products() {
        let a2 = CartanData::a2();
        let w = parse_word("1,2,1").unwrap();
        let p = elementary_product(&a2, &w);
        let skew = torus_for_word(&a2, &w);
        let mut other = MatrixOverP::identity(&skew, 3);
        for (k, i) in [(2usize, 0usize), (1, 1), (0, 0)] {
            let mut f = MatrixOverP::identity(&skew, 3);
            f.entries[i][i + 1] = TorusElement::var(&skew, k);
            other = other.mul(&f);
        }
        assert_ne!(p, other);
    }
}
