use qnil_core::cartan::{longest_word, enumerate_reduced, CartanData, Word};
use qnil_core::feigin::grouplike_series_unit;
use qnil_core::typea::{build_x_matrix, check_relations, elementary_product, factorization_check, lemma_check, rho_series};

fn all_words(r: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..r).map(move |i| {
                    let mut c = w.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn relations_through_rank_three() {
    for r in 1..=3 {
        let data = CartanData::type_a(r);
        let x = build_x_matrix(&data).unwrap();
        let checks = check_relations(&data, &x);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.relation.clone()).collect();
        assert!(failed.is_empty(), "{:?}", failed);
    }
}

#[test]
fn factorization_for_all_short_words() {
    let a2 = CartanData::a2();
    for w in all_words(2, 6) {
        assert!(factorization_check(&a2, &w, 3).unwrap(), "{:?}", w);
    }
    let a3 = CartanData::a3();
    for w in all_words(3, 4) {
        assert!(factorization_check(&a3, &w, 4).unwrap(), "{:?}", w);
    }
    for w in enumerate_reduced(&a3, &longest_word(&a3).unwrap()).unwrap() {
        assert!(factorization_check(&a3, &w, 4).unwrap(), "{:?}", w);
    }
}

#[test]
fn pushed_universal_element() {
    for data in [CartanData::a2(), CartanData::a3()] {
        assert!(lemma_check(&data, 4).unwrap());
        let w0 = longest_word(&data).unwrap();
        let s = grouplike_series_unit(&data, &w0, 3);
        assert_eq!(rho_series(&data, &s).unwrap(), elementary_product(&data, &w0));
    }
}
