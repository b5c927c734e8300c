#![allow(dead_code)]

use proptest::prelude::*;
use tmfgenus::exact::rat;
use tmfgenus::qforms::{QExp, QSeries};
use tmfgenus::series::USeries;
use tmfgenus::Rational;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |x| *x != rat(0, 1))
}

/// Series with zero constant term, order `order`.
pub fn zero_constant(order: usize) -> impl Strategy<Value = USeries<Rational>> {
    proptest::collection::vec(small_rational(), order).prop_map(|mut v| {
        v.insert(0, rat(0, 1));
        USeries::from_rationals(v)
    })
}

/// Zero constant term and a nonzero linear term.
pub fn revertible(order: usize) -> impl Strategy<Value = USeries<Rational>> {
    (
        nonzero_rational(),
        proptest::collection::vec(small_rational(), order - 1),
    )
        .prop_map(|(c1, rest)| {
            let mut v = vec![rat(0, 1), c1];
            v.extend(rest);
            USeries::from_rationals(v)
        })
}

pub fn qseries(order: usize) -> impl Strategy<Value = QSeries> {
    proptest::collection::vec(small_rational(), order + 1).prop_map(QSeries::new)
}

pub fn qexp(level: u64, weight: u32, order: usize) -> impl Strategy<Value = QExp> {
    qseries(order).prop_map(move |s| QExp::from_series(level, weight, s))
}
