use std::sync::Arc;

use proptest::prelude::*;

use qnil_core::bialgebra::{component_data, dual_multiply, DualElement};
use qnil_core::cartan::{reflect, CartanData, Lattice, RootVector};
use qnil_core::feigin::feigin_eval;
use qnil_core::scalars::{ratfun_normalize, Poly};
use qnil_core::skewform::{skew_normal_form, UnimodularMatrix};
use qnil_core::torus::{ore_resolve, reorder_exponent, OreFraction, SkewMatrix, TorusElement};
use qnil_core::RatFun;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..4).prop_map(|cs| Poly::from_coeffs(&cs))
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| ratfun_normalize(n, d).unwrap())
}

fn a2_skew() -> Arc<SkewMatrix> {
    Arc::new(SkewMatrix::from_word(&CartanData::a2(), &[0, 1, 0]))
}

fn torus_element(skew: Arc<SkewMatrix>, max_terms: usize) -> impl Strategy<Value = TorusElement> {
    let m = skew.size();
    prop::collection::vec((prop::collection::vec(0i64..=2, m), -3i64..=3), 1..=max_terms)
        .prop_map(move |terms| TorusElement::from_terms(&skew, terms.into_iter().map(|(a, c)| (a, RatFun::from_int(c)))))
}

fn nonzero_torus(skew: Arc<SkewMatrix>, max_terms: usize) -> impl Strategy<Value = TorusElement> {
    torus_element(skew, max_terms).prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfun(), b in ratfun(), c in ratfun()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn normalization_is_canonical(n in poly(), d in nonzero_poly(), k in nonzero_poly()) {
        let x = ratfun_normalize(n.clone(), d.clone()).unwrap();
        let y = ratfun_normalize(&n * &k, &d * &k).unwrap();
        prop_assert_eq!(&x, &y);
        let again = ratfun_normalize(x.num().clone(), x.den().clone()).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(x.to_string().parse::<RatFun>().unwrap(), x);
    }

    #[test]
    fn torus_associativity(x in torus_element(a2_skew(), 3), y in torus_element(a2_skew(), 3), z in torus_element(a2_skew(), 3)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn reorder_bracketings_agree(a in prop::collection::vec(0i64..=3, 3), b in prop::collection::vec(0i64..=3, 3), c in prop::collection::vec(0i64..=3, 3)) {
        let s = a2_skew();
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let bc: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        let left = reorder_exponent(&s, &a, &b) + reorder_exponent(&s, &ab, &c);
        let right = reorder_exponent(&s, &b, &c) + reorder_exponent(&s, &a, &bc);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn no_zero_divisors(x in nonzero_torus(a2_skew(), 3), y in nonzero_torus(a2_skew(), 3)) {
        let p = x.mul(&y);
        prop_assert!(!p.is_zero());
        let (la, _) = x.leading().unwrap();
        let (lb, _) = y.leading().unwrap();
        let want: Vec<i64> = la.iter().zip(lb).map(|(u, v)| u + v).collect();
        prop_assert_eq!(p.leading().unwrap().0, &want);
    }

    #[test]
    fn skew_congruence_invariance(
        entries in prop::collection::vec(-6i64..=6, 10),
        ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..12),
    ) {
        let n = 5;
        let mut s = vec![vec![0i64; n]; n];
        let mut it = entries.into_iter();
        for k in 0..n {
            for l in k + 1..n {
                let v = it.next().unwrap();
                s[k][l] = v;
                s[l][k] = -v;
            }
        }
        let mut t = UnimodularMatrix::identity(n);
        for (r, c, f) in ops {
            if r != c {
                for j in 0..n {
                    let add = f * t.rows[c][j];
                    t.rows[r][j] += add;
                }
            } else {
                t.rows.swap(r, (r + 1) % n);
            }
        }
        prop_assert_eq!(t.det().abs(), 1);
        let s1 = SkewMatrix::new(s.clone()).unwrap();
        let s2 = SkewMatrix::new(t.congruence(&s)).unwrap();
        let (a, b) = (skew_normal_form(&s1), skew_normal_form(&s2));
        prop_assert_eq!(&a.divisors, &b.divisors);
        for nf in [&a, &b] {
            prop_assert_eq!(nf.transform.det().abs(), 1);
        }
        prop_assert_eq!(a.transform.congruence(&s), a.block.clone());
    }

    #[test]
    fn reflection_preserves_form(g in prop::collection::vec(-5i64..=5, 2), i in 0usize..2, j in 0usize..2) {
        for data in [CartanData::a2(), CartanData::b2()] {
            let gamma = RootVector { coords: g.clone(), lattice: Lattice::Root };
            let sg = reflect(&data, i, &gamma).unwrap();
            let sa = reflect(&data, i, &RootVector::simple(2, j, Lattice::Root)).unwrap();
            let mut aj = vec![0; 2];
            aj[j] = 1;
            prop_assert_eq!(data.form(&sg.coords, &sa.coords), data.form(&g, &aj));
            prop_assert_eq!(reflect(&data, i, &sg).unwrap(), gamma);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ore_resolve_is_a_common_multiple(b in nonzero_torus(a2_skew(), 2), d in nonzero_torus(a2_skew(), 2)) {
        let (u1, u2) = ore_resolve(&b, &d, 6).unwrap();
        prop_assert!(!u1.is_zero() && !u2.is_zero());
        prop_assert_eq!(b.mul(&u1), d.mul(&u2));
    }

    #[test]
    fn fraction_ops_respect_equivalence(
        a in nonzero_torus(a2_skew(), 2),
        b in nonzero_torus(a2_skew(), 2),
        c in nonzero_torus(a2_skew(), 2),
        x in nonzero_torus(a2_skew(), 1),
    ) {
        let f = OreFraction::new(a.clone(), b.clone()).unwrap();
        let f2 = OreFraction::new(a.mul(&x), b.mul(&x)).unwrap();
        prop_assert!(f.equiv(&f2).unwrap());
        let g = OreFraction::from_element(c);
        prop_assert!(f.mul(&g).unwrap().equiv(&f2.mul(&g).unwrap()).unwrap());
        prop_assert!(g.mul(&f).unwrap().equiv(&g.mul(&f2).unwrap()).unwrap());
        prop_assert!(f.add(&g).unwrap().equiv(&f2.add(&g).unwrap()).unwrap());
        prop_assert!(f.mul(&f.inv().unwrap()).unwrap().equiv(&OreFraction::one(&a2_skew())).unwrap());
    }

    #[test]
    fn evaluation_is_multiplicative(
        c1 in prop::collection::vec(-2i64..=2, 2),
        c2 in prop::collection::vec(-2i64..=2, 3),
        g in prop::sample::select(vec![vec![1u32, 0], vec![0, 1], vec![1, 1]]),
    ) {
        let data = CartanData::a2();
        let w = [0usize, 1, 0];
        let pick = |gamma: &[u32], cs: &[i64]| -> DualElement {
            let comp = component_data(&data, gamma);
            let y: Vec<RatFun> = (0..comp.dim()).map(|j| RatFun::from_int(cs[j % cs.len()])).collect();
            comp.functional(&y)
        };
        let x = pick(&g, &c1);
        let y = pick(&[1, 1], &c2);
        let xy = dual_multiply(&data, &x, &y);
        prop_assert_eq!(feigin_eval(&data, &xy, &w), feigin_eval(&data, &x, &w).mul(&feigin_eval(&data, &y, &w)));
    }
}
