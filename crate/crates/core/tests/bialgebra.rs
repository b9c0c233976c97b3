use std::collections::BTreeMap;

use qnil_core::bialgebra::{
    component_data, coproduct_word, degree_of, degrees_up_to, dual_multiply, dual_of, gram_pairing, words_of_degree,
    FreeElement,
};
use qnil_core::cartan::{CartanData, Word};
use qnil_core::RatFun;

type Triple = BTreeMap<(Word, Word, Word), RatFun>;

fn add(map: &mut Triple, key: (Word, Word, Word), c: RatFun) {
    let v = map.remove(&key).map(|old| &old + &c).unwrap_or(c);
    if !v.is_zero() {
        map.insert(key, v);
    }
}

fn left_first(data: &CartanData, w: &[usize]) -> Triple {
    let mut out = Triple::new();
    for (a, b, e) in coproduct_word(data, w) {
        for (a1, a2, e2) in coproduct_word(data, &a) {
            add(&mut out, (a1, a2, b.clone()), RatFun::q_pow(e + e2));
        }
    }
    out
}

fn right_first(data: &CartanData, w: &[usize]) -> Triple {
    let mut out = Triple::new();
    for (a, b, e) in coproduct_word(data, w) {
        for (b1, b2, e2) in coproduct_word(data, &b) {
            add(&mut out, (a.clone(), b1, b2), RatFun::q_pow(e + e2));
        }
    }
    out
}

fn all_words(r: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..r {
                let mut c = w.clone();
                c.push(i);
                next.push(c);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn coassociative_through_height_five() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for w in all_words(2, 5) {
            assert_eq!(left_first(&data, &w), right_first(&data, &w), "word {:?}", w);
        }
    }
}

#[test]
fn counit_law() {
    let data = CartanData::b2();
    for w in all_words(2, 4) {
        let terms = coproduct_word(&data, &w);
        let left: Vec<_> = terms.iter().filter(|(a, _, _)| a.is_empty()).collect();
        let right: Vec<_> = terms.iter().filter(|(_, b, _)| b.is_empty()).collect();
        assert_eq!(left.len(), 1);
        assert_eq!(right.len(), 1);
        assert_eq!((&left[0].1, left[0].2), (&w, 0));
        assert_eq!((&right[0].0, right[0].2), (&w, 0));
    }
}

#[test]
fn pairing_is_a_bialgebra_pairing() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let words = all_words(2, 4);
        for u in &words {
            for v in &words {
                if u.len() + v.len() > 4 {
                    continue;
                }
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                for w in words.iter().filter(|w| w.len() == uv.len()) {
                    let direct = gram_pairing(&data, w, &uv);
                    let mut via = RatFun::zero();
                    for (a, b, e) in coproduct_word(&data, w) {
                        via = &via + &(&(&gram_pairing(&data, &a, u) * &gram_pairing(&data, &b, v)) * &RatFun::q_pow(e));
                    }
                    assert_eq!(direct, via, "<{:?}, {:?}{:?}>", w, u, v);
                    assert_eq!(gram_pairing(&data, &uv, w), direct, "symmetry");
                }
            }
        }
    }
}

#[test]
fn radical_is_a_two_sided_ideal() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for gamma in degrees_up_to(2, 4) {
            let comp = component_data(&data, &gamma);
            for s in &comp.radical_basis {
                for i in 0..2 {
                    let g = FreeElement::generator(i);
                    for prod in [g.mul(s), s.mul(&g)] {
                        let deg = prod.degree(2).unwrap();
                        for w in words_of_degree(&deg) {
                            let mut acc = RatFun::zero();
                            for (u, c) in prod.terms() {
                                acc = &acc + &(c * &gram_pairing(&data, u, &w));
                            }
                            assert!(acc.is_zero(), "degree {:?}", deg);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn basis_sizes_are_consistent() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for gamma in degrees_up_to(2, 5) {
            let comp = component_data(&data, &gamma);
            assert_eq!(comp.u_basis.len() + comp.radical_basis.len(), comp.words.len());
        }
    }
    let b2 = CartanData::b2();
    let serre = component_data(&b2, &[3, 1]);
    assert_eq!(serre.words.len(), 4);
    assert_eq!(serre.radical_basis.len(), 1);
    let dims: Vec<usize> = [[1, 1], [2, 1], [1, 2], [2, 2]].iter().map(|g| component_data(&b2, g).dim()).collect();
    assert_eq!(dims, vec![2, 3, 2, 4]);
}

fn proportional(a: &FreeElement, b: &FreeElement) -> bool {
    let Some((w, c)) = b.terms().iter().next() else { return a.is_zero() };
    let ratio = &a.coeff(w) / c;
    !ratio.is_zero() && b.scale(&ratio) == *a
}

/// `sum_p (-1)^p v^(sign p p') E_i^[p] E_j E_i^[p']` with plain powers of `q_i = q^(C_ii)`.
fn serre_element(data: &CartanData, i: usize, j: usize, sign: i64) -> FreeElement {
    let n = (1 - data.a(i, j)) as u32;
    let v = data.d(i);
    let base = qnil_core::Poly::q_pow(data.c(i, i) as u32);
    let mut out = FreeElement::zero();
    for p in 0..=n {
        let pp = n - p;
        let mut c = RatFun::q_pow(sign * v * (p * pp) as i64);
        if p % 2 == 1 {
            c = -&c;
        }
        c = &(&c * &qnil_core::scalars::inv_q_factorial(p, &base)) * &qnil_core::scalars::inv_q_factorial(pp, &base);
        let mut w = vec![i; p as usize];
        w.push(j);
        w.extend(std::iter::repeat(i).take(pp as usize));
        out = out.add(&FreeElement::term(w, c));
    }
    out
}

#[test]
fn radical_is_the_quantum_serre_element() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for (i, j) in [(0, 1), (1, 0)] {
            let mut gamma = vec![0u32; 2];
            gamma[i] = (1 - data.a(i, j)) as u32;
            gamma[j] += 1;
            let comp = component_data(&data, &gamma);
            assert_eq!(comp.radical_basis.len(), 1);
            let s = &comp.radical_basis[0];
            assert!(proportional(s, &serre_element(&data, i, j, -1)), "{:?}", gamma);
            assert!(!proportional(s, &serre_element(&data, i, j, 1)), "{:?}", gamma);
        }
    }
    let a2 = CartanData::a2();
    let printed_sign = FreeElement::from_terms([
        (vec![0, 0, 1], RatFun::one()),
        (vec![0, 1, 0], -&(&RatFun::q_pow(1) + &RatFun::q_pow(-1))),
        (vec![1, 0, 0], RatFun::from_int(-1)),
    ]);
    let radical = &component_data(&a2, &[2, 1]).radical_basis[0];
    assert!(!proportional(radical, &printed_sign));
    let flipped = FreeElement::from_terms([
        (vec![0, 0, 1], RatFun::one()),
        (vec![0, 1, 0], -&(&RatFun::q_pow(1) + &RatFun::q_pow(-1))),
        (vec![1, 0, 0], RatFun::one()),
    ]);
    assert!(proportional(radical, &flipped));
}

#[test]
fn dual_of_is_multiplicative() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let words = all_words(2, 3);
        for u in words.iter().filter(|w| !w.is_empty()) {
            for v in words.iter().filter(|w| !w.is_empty() && u.len() + w.len() <= 4) {
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                let lhs = dual_of(&data, &FreeElement::word(uv.clone())).unwrap();
                let rhs = dual_multiply(
                    &data,
                    &dual_of(&data, &FreeElement::word(u.clone())).unwrap(),
                    &dual_of(&data, &FreeElement::word(v.clone())).unwrap(),
                );
                assert_eq!(rhs.degree, degree_of(2, &uv));
                assert_eq!(lhs, rhs, "{:?} {:?}", u, v);
            }
        }
    }
}

#[test]
fn dual_multiplication_is_associative() {
    let data = CartanData::b2();
    let gens: Vec<_> = (0..2).map(|i| dual_of(&data, &FreeElement::generator(i)).unwrap()).collect();
    let xy = dual_of(&data, &FreeElement::word(vec![0, 1])).unwrap();
    for a in &gens {
        for b in [&gens[0], &gens[1], &xy] {
            for c in &gens {
                let l = dual_multiply(&data, &dual_multiply(&data, a, b), c);
                let r = dual_multiply(&data, a, &dual_multiply(&data, b, c));
                assert_eq!(l, r);
            }
        }
    }
}
