mod common;

use common::small_rational;
use proptest::prelude::*;
use tmfgenus::exact::rat;
use tmfgenus::genus::{char_from_log, genus_ahat, genus_ochanine, genus_witten, GenusName};
use tmfgenus::series::{Ring, USeries};
use tmfgenus::Rational;

/// Odd logarithm `x + c_3 x^3 + c_5 x^5 + ...`.
fn odd_log(order: usize) -> impl Strategy<Value = USeries<Rational>> {
    proptest::collection::vec(small_rational(), order / 2).prop_map(move |cs| {
        let mut v = vec![rat(0, 1); order + 1];
        v[1] = rat(1, 1);
        for (i, c) in cs.into_iter().enumerate() {
            if 2 * i + 3 <= order {
                v[2 * i + 3] = c;
            }
        }
        USeries::from_rationals(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn odd_logs_give_even_genera(log in odd_log(9)) {
        let c = char_from_log(&log).unwrap();
        for (k, b) in &c.b {
            if k % 2 == 1 {
                prop_assert!(Ring::is_zero(b));
            }
        }
        prop_assert_eq!(c.rebuild().unwrap(), c.k);
    }
}

#[test]
fn every_genus_round_trips() {
    for g in GenusName::ALL {
        let c = g.build(10, 4).unwrap();
        assert_eq!(c.rebuild().unwrap(), c.k, "{g:?}");
    }
}

#[test]
fn cusp_degenerations() {
    let ahat = genus_ahat(12).unwrap().to_q().k;
    assert_eq!(genus_witten(12, 0).unwrap().k, ahat);
    let o = genus_ochanine(12, 0).unwrap();
    assert_eq!(o.char_series.k, ahat);
}

#[test]
fn ochanine_shape_at_full_truncation() {
    let o = genus_ochanine(12, 8).unwrap();
    assert_eq!(o.delta.coeff(0), &rat(-1, 8));
    assert_eq!(o.epsilon.coeff(0), &rat(0, 1));
}
