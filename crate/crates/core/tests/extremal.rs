use qnil_core::bialgebra::DualElement;
use qnil_core::cartan::{enumerate_reduced, longest_word, CartanData};
use qnil_core::extremal::{
    act, check_lowering_raising, compare_extremal, extremal_monomial_check, verify_action, ActionContext, Op,
};
use qnil_core::RatFun;

fn weights(max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            out.push(vec![a, b]);
        }
    }
    out
}

#[test]
fn highest_weight_vector() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for l in weights(2) {
            let ctx = ActionContext::new(data.clone(), l.clone()).unwrap();
            let one = DualElement::unit(2);
            for i in 0..2 {
                assert!(act(&ctx, Op::E(i), &one).is_zero());
                assert_eq!(act(&ctx, Op::K(i), &one), one.scale(&RatFun::q_pow(data.d(i) * l[i])));
            }
        }
    }
}

#[test]
fn prefix_properties_and_monomials() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let w0 = longest_word(&data).unwrap();
        for l in weights(2) {
            let ctx = ActionContext::new(data.clone(), l.clone()).unwrap();
            for w in enumerate_reduced(&data, &w0).unwrap() {
                assert!(check_lowering_raising(&ctx, &w).unwrap(), "{:?} {:?}", l, w);
                let m = extremal_monomial_check(&ctx, &w).unwrap();
                assert!(m.passed(), "{:?} {:?} {:?}", l, w, m);
            }
        }
    }
}

#[test]
fn extremal_vector_depends_only_on_the_element() {
    for data in [CartanData::a2(), CartanData::b2()] {
        let w0 = longest_word(&data).unwrap();
        let words: Vec<_> = enumerate_reduced(&data, &w0).unwrap().into_iter().collect();
        for l in weights(2) {
            let ctx = ActionContext::new(data.clone(), l.clone()).unwrap();
            let (equal, ratios) = compare_extremal(&ctx, &words).unwrap();
            assert!(ratios.iter().all(|r| r.is_some()), "{:?}", l);
            assert!(equal, "{:?} ratios {:?}", l, ratios);
        }
    }
}

#[test]
fn action_relations() {
    for data in [CartanData::a2(), CartanData::b2()] {
        for l in [vec![1, 1], vec![2, 0], vec![0, 2]] {
            let ctx = ActionContext::new(data.clone(), l.clone()).unwrap();
            let report = verify_action(&ctx, 4);
            let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.relation.clone()).collect();
            assert!(failed.is_empty(), "{:?} {:?}", l, failed);
        }
    }
}
