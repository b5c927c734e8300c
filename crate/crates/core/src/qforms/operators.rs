//! `U_p`, `psi^p`, `T_p = U_p + psi^p/p` and p-depletion on q-expansions.
//!
//! Only `Gamma_0` levels are supported, so the diamond operator is trivial and
//! `psi^p` is `f(q) -> p^k f(q^p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{QExp, QSeries};
use crate::error::{Error, Result};
use crate::exact::{pow_rational, Rational};

fn p_pow(p: u64, e: i64) -> Rational {
    pow_rational(&Rational::from_integer(BigInt::from(p)), e)
}

/// `psi^p f = p^k sum a_n q^{pn}`. The reliable order is unchanged: every
/// coefficient up to `q^Q` is determined by `a_0..a_{Q/p}`.
pub fn frobenius_psi(f: &QExp, p: u64) -> QExp {
    let scale = p_pow(p, f.weight as i64);
    let q = f.q_order();
    let coeffs = (0..=q)
        .map(|m| {
            if (m as u64).is_multiple_of(p) {
                f.coeff(m / p as usize) * &scale
            } else {
                Rational::zero()
            }
        })
        .collect();
    QExp {
        level: f.level.lcm(&p),
        weight: f.weight,
        quasi: f.quasi,
        series: QSeries::new(coeffs),
    }
}

/// `U_p f = sum a_{np} q^n`, reliable to `floor(Q/p)`.
pub fn atkin_u(f: &QExp, p: u64) -> QExp {
    let out = f.q_order() / p as usize;
    let coeffs = (0..=out).map(|n| f.coeff(n * p as usize).clone()).collect();
    QExp {
        level: f.level.lcm(&p),
        weight: f.weight,
        quasi: f.quasi,
        series: QSeries::new(coeffs),
    }
}

/// `T_p f`, with coefficients `a_{np} + p^{k-1} a_{n/p}`, reliable to
/// `floor(Q/p)`. Requires `p` coprime to the level.
pub fn hecke_t(f: &QExp, p: u64) -> Result<QExp> {
    if f.level.is_multiple_of(p) {
        return Err(Error::LevelConflict { p, level: f.level });
    }
    let scale = p_pow(p, f.weight as i64 - 1);
    let out = f.q_order() / p as usize;
    let coeffs = (0..=out)
        .map(|n| {
            let mut c = f.coeff(n * p as usize).clone();
            if (n as u64).is_multiple_of(p) {
                c += f.coeff(n / p as usize) * &scale;
            }
            c
        })
        .collect();
    Ok(QExp {
        level: f.level,
        weight: f.weight,
        quasi: f.quasi,
        series: QSeries::new(coeffs),
    })
}

/// p-depletion `(1 - psi^p/p) f`, coefficients `a_n - p^{k-1} a_{n/p}`.
///
/// The result is treated as a genuine modular form: the only quasi-modular
/// input in use is `G_2`, and `G_2(q) - p G_2(q^p)` is modular of level `p`.
pub fn deplete(f: &QExp, p: u64) -> QExp {
    let scale = p_pow(p, f.weight as i64 - 1);
    let coeffs = (0..=f.q_order())
        .map(|n| {
            let mut c = f.coeff(n).clone();
            if (n as u64).is_multiple_of(p) {
                c -= f.coeff(n / p as usize) * &scale;
            }
            c
        })
        .collect();
    QExp {
        level: f.level.lcm(&p),
        weight: f.weight,
        quasi: false,
        series: QSeries::new(coeffs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::qforms::{eisenstein_g, eisenstein_gtilde};

    fn monomial(weight: u32, n: usize, order: usize) -> QExp {
        QExp::from_series(1, weight, QSeries::monomial(rat(1, 1), n, order))
    }

    #[test]
    fn psi_examples() {
        let f = monomial(4, 1, 4);
        assert_eq!(
            frobenius_psi(&f, 2).coeffs(),
            &[rat(0, 1), rat(0, 1), rat(16, 1), rat(0, 1), rat(0, 1)]
        );
        let c = QExp::constant(1, 6, rat(3, 7), 4);
        assert_eq!(frobenius_psi(&c, 3).coeff(0), &rat(3 * 729, 7));
        assert_eq!(frobenius_psi(&c, 3).level, 3);
    }

    #[test]
    fn u_examples() {
        let f = monomial(2, 2, 6);
        assert_eq!(
            atkin_u(&f, 2).coeffs(),
            &[rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)]
        );
        let g4 = eisenstein_g(4, 12).unwrap();
        let u = atkin_u(&g4, 3);
        assert_eq!(u.q_order(), 4);
        assert_eq!(u.coeff(1), &rat(28, 1));
        let c = QExp::constant(1, 4, rat(5, 1), 9);
        assert_eq!(
            atkin_u(&c, 3).coeffs(),
            &[rat(5, 1), rat(0, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn hecke_examples() {
        let g4 = eisenstein_g(4, 20).unwrap();
        let t2 = hecke_t(&g4, 2).unwrap();
        assert_eq!(t2.first_mismatch(&g4.scale_int(9)), None);
        assert_eq!(t2.q_order(), 10);
        let gt4 = eisenstein_gtilde(4, 21).unwrap();
        let t3 = hecke_t(&gt4, 3).unwrap();
        assert_eq!(t3.coeff(1), &rat(-28, 1));
        assert_eq!(t3.first_mismatch(&gt4.scale_int(28)), None);
        let zero = QExp::zero(1, 4, 10);
        assert!(hecke_t(&zero, 5).unwrap().is_zero());
        assert_eq!(
            hecke_t(&gt4, 2),
            Err(Error::LevelConflict { p: 2, level: 2 })
        );
    }

    #[test]
    fn deplete_examples() {
        let g2 = eisenstein_g(2, 3).unwrap();
        let d = deplete(&g2, 2);
        assert_eq!(d.coeffs(), &[rat(1, 24), rat(1, 1), rat(1, 1), rat(4, 1)]);
        assert!(!d.quasi);
        assert_eq!(d.level, 2);
        let c = QExp::constant(1, 4, rat(1, 1), 3);
        assert_eq!(deplete(&c, 3).coeff(0), &rat(1 - 27, 1));
        let g4 = eisenstein_g(4, 3).unwrap();
        assert_eq!(
            deplete(&g4, 2).coeffs(),
            &[rat(-7, 240), rat(1, 1), rat(1, 1), rat(28, 1)]
        );
    }

    #[test]
    fn depleted_g2_matches_difference_formula() {
        // G_2(q) - p G_2(q^p)
        for p in [2u64, 3, 5, 7] {
            let g2 = eisenstein_g(2, 30).unwrap();
            let mut expected = g2.coeffs().to_vec();
            for n in (0..=30).step_by(p as usize) {
                expected[n] -= g2.coeff(n / p as usize) * rat(p as i64, 1);
            }
            assert_eq!(deplete(&g2, p).coeffs(), &expected[..]);
        }
    }
}
