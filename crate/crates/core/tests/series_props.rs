mod common;

use common::{qseries, revertible, zero_constant};
use proptest::prelude::*;
use tmfgenus::exact::rat;
use tmfgenus::qforms::QSeries;
use tmfgenus::series::{Ring, USeries};
use tmfgenus::Rational;

const U: usize = 7;

fn at_q0(s: &USeries<QSeries>) -> USeries<Rational> {
    s.map(|c| c.coeff(0).clone())
}

fn qseries_series(
    order: usize,
    q: usize,
    zero_constant: bool,
) -> impl Strategy<Value = USeries<QSeries>> {
    proptest::collection::vec(qseries(q), order + 1).prop_map(move |mut v| {
        if zero_constant {
            v[0] = QSeries::zero(q);
        }
        USeries::new(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_of_exp(f in zero_constant(U)) {
        prop_assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn exp_of_log(f in zero_constant(U)) {
        let g = f.exp().unwrap();
        prop_assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn compose_with_reversion(f in revertible(U)) {
        let r = f.reversion().unwrap();
        let id = USeries::from_ints(&[0, 1, 0, 0, 0, 0, 0, 0]);
        prop_assert_eq!(f.compose(&r).unwrap(), id.clone());
        prop_assert_eq!(r.compose(&f).unwrap(), id);
    }

    #[test]
    fn exp_is_additive(f in zero_constant(U), g in zero_constant(U)) {
        let lhs = f.add(&g).exp().unwrap();
        prop_assert_eq!(lhs, f.exp().unwrap().mul(&g.exp().unwrap()));
    }

    #[test]
    fn inverse_times_self(f in zero_constant(U)) {
        let g = f.exp().unwrap();
        prop_assert_eq!(g.mul(&g.inverse().unwrap()), USeries::one(&rat(0, 1), U));
    }

    #[test]
    fn evaluation_at_q0_is_a_homomorphism(
        f in qseries_series(5, 3, true),
        g in qseries_series(5, 3, true),
    ) {
        prop_assert_eq!(at_q0(&f.mul(&g)), at_q0(&f).mul(&at_q0(&g)));
        prop_assert_eq!(at_q0(&f.add(&g)), at_q0(&f).add(&at_q0(&g)));
        prop_assert_eq!(at_q0(&f.exp().unwrap()), at_q0(&f).exp().unwrap());
        let e = g.exp().unwrap();
        prop_assert_eq!(at_q0(&e.inverse().unwrap()), at_q0(&e).inverse().unwrap());
        prop_assert_eq!(at_q0(&e.log().unwrap()), at_q0(&e).log().unwrap());
        if !Ring::is_zero(at_q0(&f).coeff(1)) {
            prop_assert_eq!(at_q0(&f.reversion().unwrap()), at_q0(&f).reversion().unwrap());
        }
    }
}
