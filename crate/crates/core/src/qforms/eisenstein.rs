use num_bigint::BigInt;
use num_traits::Zero;

use super::QExp;
use crate::error::{Error, Result};
use crate::exact::{bernoulli, Rational};

/// `sum_{d | n} sign(n/d) * d^e`, where `sign` is `+1` or `(-1)^{n/d}`.
pub fn divisor_power_sum(n: u64, e: u32, alternating: bool) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let term = BigInt::from(d).pow(e);
        if alternating && (n / d) % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k as i64));
    }
    Ok(())
}

fn constant_term(k: u32) -> Rational {
    -bernoulli(k) / Rational::from_integer(BigInt::from(2 * k))
}

/// Level-one Eisenstein series `G_k = -B_k/(2k) + sum sigma_{k-1}(n) q^n`.
///
/// The constant term is `-B_k/(2k)`, the sign that makes the Witten
/// characteristic series degenerate to the A-hat series at `q = 0` and that
/// matches the level-two series `G~_k`. `G_2` is flagged quasi-modular.
pub fn eisenstein_g(k: u32, q_order: usize) -> Result<QExp> {
    check_weight(k)?;
    let mut coeffs = Vec::with_capacity(q_order + 1);
    coeffs.push(constant_term(k));
    for n in 1..=q_order as u64 {
        coeffs.push(Rational::from_integer(divisor_power_sum(n, k - 1, false)));
    }
    Ok(QExp::new(1, k, k == 2, coeffs))
}

/// Level-two series `G~_k = -B_k/(2k) + sum_n q^n sum_{d | n} (-1)^{n/d} d^{k-1}`.
pub fn eisenstein_gtilde(k: u32, q_order: usize) -> Result<QExp> {
    check_weight(k)?;
    let mut coeffs = Vec::with_capacity(q_order + 1);
    coeffs.push(constant_term(k));
    for n in 1..=q_order as u64 {
        coeffs.push(Rational::from_integer(divisor_power_sum(n, k - 1, true)));
    }
    Ok(QExp::new(2, k, false, coeffs))
}
