mod common;

use common::qexp;
use proptest::prelude::*;
use tmfgenus::exact::{pow_rational, rat};
use tmfgenus::qforms::{
    atkin_u, deplete, eisenstein_g, eisenstein_gtilde, frobenius_psi, hecke_t, QExp,
};
use tmfgenus::Rational;

fn p_pow(p: u64, e: i64) -> Rational {
    pow_rational(&rat(p as i64, 1), e)
}

/// `(1 - U_p)(1 - psi^p/p) f` against `(1 - T_p + p^(k-1)) f`, at the
/// reliable order `floor(Q/p)`.
fn operator_identity(f: &QExp, p: u64) -> bool {
    let h = deplete(f, p);
    let u = atkin_u(&h, p);
    let lhs = h.truncate(u.q_order()).sub(&u);
    let t = hecke_t(f, p).unwrap();
    let base = f.truncate(t.q_order());
    let rhs = base
        .sub(&t)
        .add(&base.scale(&p_pow(p, f.weight as i64 - 1)));
    lhs.first_mismatch(&rhs).is_none() && lhs.q_order() == rhs.q_order()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn u_after_psi_is_scalar(f in qexp(1, 4, 24), p in prop::sample::select(vec![2u64, 3, 5])) {
        let lhs = atkin_u(&frobenius_psi(&f, p), p);
        let rhs = f.truncate(lhs.q_order()).scale(&p_pow(p, 4));
        prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
    }

    #[test]
    fn depletion_identity(f in qexp(1, 6, 30), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assert!(operator_identity(&f, p));
    }

    #[test]
    fn depletion_identity_level_two(f in qexp(2, 2, 30), p in prop::sample::select(vec![3u64, 5])) {
        prop_assert!(operator_identity(&f, p));
    }
}

#[test]
fn eigenforms_have_atkin_fixed_depletions() {
    for p in [2u64, 3, 5, 7] {
        for k in (4..=12).step_by(2) {
            let g = eisenstein_g(k, 20 * p as usize).unwrap();
            let t = hecke_t(&g, p).unwrap();
            let eigen = p_pow(p, k as i64 - 1) + rat(1, 1);
            assert_eq!(t.first_mismatch(&g.scale(&eigen)), None);
            let h = deplete(&g, p);
            assert_eq!(atkin_u(&h, p).first_mismatch(&h), None, "p={p} k={k}");
            if p != 2 {
                let h = deplete(&eisenstein_gtilde(k, 20 * p as usize).unwrap(), p);
                assert_eq!(atkin_u(&h, p).first_mismatch(&h), None, "G~ p={p} k={k}");
            }
        }
    }
}

#[test]
fn congruence_family_lies_in_z_half() {
    for k in (2..=24).step_by(2) {
        let g = eisenstein_g(k, 30).unwrap();
        for other in [
            eisenstein_gtilde(k, 30).unwrap(),
            deplete(&g, 2).scale_int(2),
        ] {
            for c in g.sub(&other).coeffs() {
                let mut d = c.denom().clone();
                while &d % 2u32 == 0u32.into() {
                    d /= 2u32;
                }
                assert_eq!(d, 1u32.into(), "k = {k}");
            }
        }
    }
}
