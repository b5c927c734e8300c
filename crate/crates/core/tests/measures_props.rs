use num_bigint::BigInt;
use proptest::prelude::*;
use tmfgenus::exact::{bernoulli, rat, Modulus};
use tmfgenus::measures::{
    class_representatives, exponent_period, mahler_test_zp, measure_solve_finite, reduce_level,
    total_mass, MomentSequence,
};
use tmfgenus::Rational;

/// Exact moments `sum mu(x) x^e` of an integer-valued measure on the given
/// representatives.
fn moments_of(p: u64, level: u32, weights: &[i64]) -> MomentSequence {
    let classes = class_representatives(p, level).unwrap();
    let top = exponent_period(p, level).unwrap() as u32 + 2;
    MomentSequence::from_rationals(p, 2, top, |e| {
        let sum: BigInt = classes
            .iter()
            .zip(weights)
            .map(|(&x, &w)| BigInt::from(w) * BigInt::from(x).pow(e))
            .sum();
        Rational::from_integer(sum)
    })
    .unwrap()
}

fn measure_case() -> impl Strategy<Value = (u64, u32, Vec<i64>)> {
    prop::sample::select(vec![
        (3u64, 1u32),
        (3, 2),
        (3, 3),
        (5, 1),
        (5, 2),
        (7, 2),
        (2, 3),
        (2, 4),
    ])
    .prop_flat_map(|(p, level)| {
        let n = class_representatives(p, level).unwrap().len();
        (
            Just(p),
            Just(level),
            proptest::collection::vec(-4i64..=4, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn genuine_measures_are_recovered((p, level, weights) in measure_case()) {
        let seq = moments_of(p, level, &weights);
        let mu = measure_solve_finite(&seq, level, 0).unwrap();
        let mu = mu.witness().expect("moments of an actual measure");
        prop_assert_eq!(mu.check(&seq).unwrap(), None);
        let m = Modulus::new(p, level).unwrap();
        let expected = m.from_i64(weights.iter().sum());
        prop_assert_eq!(total_mass(mu)[0].value(), expected);
    }

    #[test]
    fn witnesses_push_forward((p, level, weights) in measure_case()) {
        prop_assume!(level >= 2 && !(p == 2 && level == 3));
        let seq = moments_of(p, level, &weights);
        let mu = measure_solve_finite(&seq, level, 0).unwrap().witness().unwrap().clone();
        let lower = reduce_level(&mu).unwrap();
        prop_assert_eq!(lower.check(&seq).unwrap(), None);
    }

    #[test]
    fn dirac_measures_have_unit_mass(p in prop::sample::select(vec![3u64, 5, 7]), level in 1u32..=3, seed in 0usize..1000) {
        let classes = class_representatives(p, level).unwrap();
        let c = classes[seed % classes.len()];
        let top = exponent_period(p, level).unwrap() as u32 + 2;
        let seq = MomentSequence::from_rationals(p, 2, top, |e| Rational::from_integer(BigInt::from(c).pow(e))).unwrap();
        let mu = measure_solve_finite(&seq, level, 0).unwrap();
        let mu = mu.witness().unwrap();
        prop_assert_eq!(total_mass(mu)[0].value(), 1);
    }

    #[test]
    fn integer_points_pass_mahler(lambda in -20i64..=20, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let b: Vec<Rational> = (0..=8).map(|j| Rational::from_integer(BigInt::from(lambda).pow(j))).collect();
        prop_assert!(mahler_test_zp(&b, p).pass);
    }
}

#[test]
fn kummer_spot_check() {
    // (1 - p^(k-1)) B_k / k at k = 2 and k = 6 agree mod 5 since 2 = 6 mod 4.
    let m = Modulus::new(5, 1).unwrap();
    let side = |k: u32| {
        (rat(1, 1) - Rational::from_integer(BigInt::from(5).pow(k - 1))) * bernoulli(k)
            / rat(k as i64, 1)
    };
    assert_eq!(m.reduce(&side(2)), m.reduce(&side(6)));
    assert_eq!(m.reduce(&side(2)), Ok(3));
}
