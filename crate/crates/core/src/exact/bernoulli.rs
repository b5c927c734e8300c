use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{vp_int, Rational};
use super::residue::is_prime;
use crate::error::{Error, Result};

fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `B_k` for the generating function `x/(e^x - 1)`, so `B_1 = -1/2`.
///
/// Values are produced by inverting `(e^x - 1)/x` one coefficient at a time,
/// written in the binomial form `sum_{j<=n} C(n+1, j) B_j = 0`, and cached in
/// a process-wide table.
pub fn bernoulli(k: u32) -> Rational {
    let k = k as usize;
    let mut memo = table().lock().unwrap_or_else(|e| e.into_inner());
    while memo.len() <= k {
        let n = memo.len();
        let value = if n >= 3 && n % 2 == 1 {
            Rational::zero()
        } else {
            let mut acc = Rational::zero();
            let mut binom = BigInt::one();
            for (j, b) in memo.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(binom.clone());
                }
                // C(n+1, j+1) from C(n+1, j)
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            -acc / Rational::from_integer(BigInt::from(n + 1))
        };
        memo.push(value);
    }
    memo[k].clone()
}

/// p-adic valuation of the denominator of `B_k / (2k)` from the closed forms:
/// for odd `p` it is `0` unless `(p-1) | k`, then `v_p(k) + 1`; for `p = 2` it
/// is `m + 2` where `k = 2^m * odd`.
pub fn bernoulli_denominator_valuation(k: u32, p: u64) -> Result<i64> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadParity(k));
    }
    let vk = vp_int(&BigInt::from(k), p);
    if p == 2 {
        return Ok(vk + 2);
    }
    if (k as u64).is_multiple_of(p - 1) {
        Ok(vk + 1)
    } else {
        Ok(0)
    }
}

/// `B_k + sum_{(p-1) | k} 1/p`, an integer for even `k` by von Staudt-Clausen.
pub fn von_staudt_clausen_fraction(k: u32) -> Rational {
    let mut x = bernoulli(k);
    for p in 2..=(k as u64 + 1) {
        if is_prime(p) && (k as u64).is_multiple_of(p - 1) {
            x += Rational::new(BigInt::one(), BigInt::from(p));
        }
    }
    x
}
