use qnil_core::bialgebra::{component_data, degrees_up_to, estar_apply, DualElement};
use qnil_core::cartan::{longest_word, reduced_orbits, CartanData};
use qnil_core::extremal::{extremal_vector, ActionContext};
use qnil_core::feigin::{
    feigin_eval, grouplike_series, grouplike_series_unit, kernel_basis, monomial_subspace_dim, rational_inverse_with,
    reduced_subsequence, torus_for_word, universal_check,
};
use qnil_core::torus::{OreFraction, TorusElement};
use qnil_core::{Error, RatFun};

#[test]
fn evaluation_examples() {
    let a2 = CartanData::a2();
    let skew = torus_for_word(&a2, &[0, 1, 0]);
    let x1 = DualElement::generator(2, 0);
    let want = TorusElement::var(&skew, 0).add(&TorusElement::var(&skew, 2));
    assert_eq!(feigin_eval(&a2, &x1, &[0, 1, 0]), want);
    assert_eq!(feigin_eval(&a2, &x1, &[0, 1, 0]).to_string(), "t1 + t3");
    assert!(feigin_eval(&a2, &DualElement::generator(2, 1), &[0]).is_zero());

    let ctx = ActionContext::new(a2.clone(), vec![1, 0]).unwrap();
    let v = extremal_vector(&ctx, &[0, 1]).unwrap();
    let s12 = torus_for_word(&a2, &[0, 1]);
    assert_eq!(feigin_eval(&a2, &v, &[0, 1]), TorusElement::monomial(&s12, vec![1, 1], RatFun::one()));
    assert_eq!(estar_apply(&a2, 0, &v), DualElement::generator(2, 1));
}

#[test]
fn grouplike_longest_words() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let w0 = longest_word(&data).unwrap();
        let e = grouplike_series_unit(&data, &w0, 5);
        assert!(e.grouplike, "{:?}", e.failures);
        let c: Vec<RatFun> = (0..w0.len()).map(|k| RatFun::from_int(k as i64 + 2)).collect();
        assert!(grouplike_series(&data, &w0, &c, 4).grouplike);
    }
    let a2 = CartanData::a2();
    let e = grouplike_series_unit(&a2, &[0], 2);
    assert!(e.grouplike);
    let divided = RatFun::from_poly(qnil_core::Poly::from_coeffs(&[1, 0, 1])).inv().unwrap();
    assert_eq!(e.coeff(&[2, 0], &[2], 0), divided);
}

#[test]
fn grouplike_nonreduced_words() {
    let a2 = CartanData::a2();
    for w in [vec![0, 0], vec![0, 1, 1, 0], vec![1, 0, 1, 0]] {
        assert!(grouplike_series_unit(&a2, &w, 4).grouplike, "{:?}", w);
    }
}

#[test]
fn kernel_duality_and_longest_words() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let w0 = longest_word(&data).unwrap();
        for orbit in reduced_orbits(&data, w0.len()) {
            for w in &orbit {
                for gamma in degrees_up_to(2, 4) {
                    let k = kernel_basis(&data, w, &gamma);
                    let dim = component_data(&data, &gamma).dim();
                    assert_eq!(monomial_subspace_dim(&data, w, &gamma) + k.dim(), dim);
                    for x in &k.elements {
                        assert!(feigin_eval(&data, x, w).is_zero());
                    }
                    if *w == w0 {
                        assert_eq!(k.dim(), 0);
                    }
                }
            }
        }
    }
}

#[test]
fn kernels_agree_across_orbits_in_a3() {
    let a3 = CartanData::a3();
    for orbit in reduced_orbits(&a3, 4).into_iter().filter(|o| o.len() > 1) {
        let words: Vec<_> = orbit.iter().collect();
        for gamma in degrees_up_to(3, 3) {
            let first = kernel_basis(&a3, words[0], &gamma);
            for w in &words[1..] {
                assert!(first.same_span(&kernel_basis(&a3, w, &gamma)), "{:?} {:?}", w, gamma);
            }
        }
    }
}

#[test]
fn nonreduced_kernel_matches_reduced_subsequence() {
    let a2 = CartanData::a2();
    for w in [vec![0, 0], vec![0, 1, 0, 1], vec![1, 1, 0]] {
        let sub = reduced_subsequence(&a2, &w);
        for gamma in degrees_up_to(2, 4) {
            assert!(kernel_basis(&a2, &w, &gamma).same_span(&kernel_basis(&a2, &sub, &gamma)), "{:?}", w);
        }
    }
}

#[test]
fn universal_element() {
    let a2 = CartanData::a2();
    for w in [vec![], vec![0], vec![0, 1], vec![0, 1, 0]] {
        assert!(universal_check(&a2, &w, 4));
    }
    assert!(universal_check(&CartanData::b2(), &[0, 1, 0, 1], 3));
}

#[test]
fn inverse_reproduces_generators() {
    for (data, lambda) in [(CartanData::a2(), vec![1, 1]), (CartanData::b2(), vec![1, 1]), (CartanData::a2(), vec![2, 1])] {
        let w0 = longest_word(&data).unwrap();
        for w in qnil_core::cartan::enumerate_reduced(&data, &w0).unwrap() {
            let skew = torus_for_word(&data, &w);
            for f in rational_inverse_with(&data, &w, &lambda).unwrap() {
                let got = f.tree.evaluate(&data, &w).unwrap();
                assert!(got.equiv(&OreFraction::var(&skew, f.index)).unwrap(), "{:?} t{}", w, f.index + 1);
            }
        }
    }
}

#[test]
fn inverse_rejects_degenerate_weights() {
    let a2 = CartanData::a2();
    assert!(matches!(rational_inverse_with(&a2, &[0, 1], &[1, 0]), Err(Error::DegenerateWeight(_))));
    assert!(matches!(rational_inverse_with(&a2, &[0, 0], &[1, 1]), Err(Error::NotReduced(_))));
}
