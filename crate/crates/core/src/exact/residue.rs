use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{vp_int, Rational};
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring `Z/p^M`, with `p^M` small enough that products fit in `u128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    exponent: u32,
    value: u64,
}

impl Modulus {
    pub fn new(p: u64, exponent: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadModulus(format!("{p} is not prime")));
        }
        if exponent == 0 {
            return Err(Error::BadModulus("precision exponent must be >= 1".into()));
        }
        let value = p
            .checked_pow(exponent)
            .filter(|v| *v < (1 << 62))
            .ok_or_else(|| Error::BadModulus(format!("{p}^{exponent} is too large")))?;
        Ok(Modulus { p, exponent, value })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.value as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.value - b % self.value)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.value as u128) as u64
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.value;
        let mut b = base % self.value;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Number of factors of `p` in `a`, capped at the precision exponent.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.value;
        if a == 0 {
            return self.exponent;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let e = (a as i128 % self.value as i128).extended_gcd(&(self.value as i128));
        if e.gcd != 1 {
            return None;
        }
        Some(e.x.rem_euclid(self.value as i128) as u64)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.value as i128) as u64
    }

    /// Reduces a p-integral rational. Returns `Err(valuation)` when the
    /// rational has `p` in its denominator.
    pub fn reduce(&self, x: &Rational) -> std::result::Result<u64, i64> {
        if x.is_zero() {
            return Ok(0);
        }
        let dv = vp_int(x.denom(), self.p);
        if dv > 0 {
            return Err(vp_int(x.numer(), self.p) - dv);
        }
        let m = BigInt::from(self.value);
        let n = x
            .numer()
            .mod_floor(&m)
            .to_u64()
            .expect("reduced below modulus");
        let d = x
            .denom()
            .mod_floor(&m)
            .to_u64()
            .expect("reduced below modulus");
        Ok(self.mul(n, self.inv(d).expect("denominator is a unit")))
    }

    /// Symmetric lift to `(-p^M/2, p^M/2]`, handy for readable output.
    pub fn signed(&self, a: u64) -> i64 {
        let a = a % self.value;
        if a > self.value / 2 {
            a as i64 - self.value as i64
        } else {
            a as i64
        }
    }
}

/// An element of `Z/p^M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueInt {
    modulus: Modulus,
    value: u64,
}

impl ResidueInt {
    pub fn new(modulus: Modulus, value: u64) -> Self {
        ResidueInt {
            modulus,
            value: value % modulus.value,
        }
    }

    pub fn from_rational(modulus: Modulus, x: &Rational) -> Result<Self> {
        modulus
            .reduce(x)
            .map(|v| ResidueInt::new(modulus, v))
            .map_err(|valuation| Error::NotPIntegral {
                p: modulus.p,
                exponent: 0,
                q_index: 0,
                valuation,
            })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.value)
    }

    /// Image in `Z/p^j` for `j <= M`.
    pub fn reduce_to(&self, exponent: u32) -> Result<ResidueInt> {
        let m = Modulus::new(self.modulus.p, exponent.min(self.modulus.exponent))?;
        Ok(ResidueInt::new(m, self.value))
    }

    pub fn inv(&self) -> Option<ResidueInt> {
        self.modulus
            .inv(self.value)
            .map(|v| ResidueInt::new(self.modulus, v))
    }

    fn check(&self, other: &ResidueInt) {
        assert_eq!(self.modulus, other.modulus, "residues modulo different p^M");
    }
}

impl std::ops::Add for ResidueInt {
    type Output = ResidueInt;
    fn add(self, rhs: ResidueInt) -> ResidueInt {
        self.check(&rhs);
        ResidueInt::new(self.modulus, self.modulus.add(self.value, rhs.value))
    }
}

impl std::ops::Sub for ResidueInt {
    type Output = ResidueInt;
    fn sub(self, rhs: ResidueInt) -> ResidueInt {
        self.check(&rhs);
        ResidueInt::new(self.modulus, self.modulus.sub(self.value, rhs.value))
    }
}

impl std::ops::Mul for ResidueInt {
    type Output = ResidueInt;
    fn mul(self, rhs: ResidueInt) -> ResidueInt {
        self.check(&rhs);
        ResidueInt::new(self.modulus, self.modulus.mul(self.value, rhs.value))
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.value)
    }
}

/// Desk-scale truncation parameters: prime, p-adic precision, q-order and
/// the largest weight considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicContext {
    pub p: u64,
    pub precision: u32,
    pub q_order: usize,
    pub k_max: u32,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32, q_order: usize, k_max: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::ConfigInvalid(format!("{p} is not prime")));
        }
        if precision < 1 {
            return Err(Error::ConfigInvalid("precision M must be >= 1".into()));
        }
        if k_max < 2 {
            return Err(Error::ConfigInvalid("K_max must be >= 2".into()));
        }
        Ok(PadicContext {
            p,
            precision,
            q_order,
            k_max,
        })
    }
}

/// `log(c^(p-1))` modulo `p^M` (`log(c^2)` when `p = 2`), summed from the
/// Mercator series in `t = c^(p-1) - 1`.
pub fn padic_log_unit(c: i64, p: u64, precision: u32) -> Result<ResidueInt> {
    let modulus = Modulus::new(p, precision)?;
    if c.rem_euclid(p as i64) == 0 {
        return Err(Error::NonUnit { value: c, p });
    }
    let exponent = if p == 2 { 2 } else { p - 1 };
    let t = BigInt::from(c).pow(exponent as u32) - BigInt::one();
    if t.is_zero() {
        return Ok(ResidueInt::new(modulus, 0));
    }
    let vt = vp_int(&t, p) as u64;
    debug_assert!(vt >= 1);
    // Past n > M p / (v(t) (p - 1)) every term has valuation >= M.
    let cap = (precision as u64 * p) / (vt * (p - 1)) + 1;
    let t = Rational::from_integer(t);
    let mut power = Rational::one();
    let mut acc = 0u64;
    for n in 1..=cap {
        power *= &t;
        let term = &power / Rational::from_integer(BigInt::from(n));
        let r = modulus.reduce(&term).expect("t^n/n is p-integral");
        acc = if n % 2 == 1 {
            modulus.add(acc, r)
        } else {
            modulus.sub(acc, r)
        };
    }
    Ok(ResidueInt::new(modulus, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn modulus_arithmetic() {
        let m = Modulus::new(5, 2).unwrap();
        assert_eq!(m.value(), 25);
        assert_eq!(m.inv(2), Some(13));
        assert_eq!(m.inv(10), None);
        assert_eq!(m.valuation(50), 2);
        assert_eq!(m.valuation(15), 1);
        assert_eq!(m.reduce(&crate::exact::rat(1, 2)), Ok(13));
        assert_eq!(m.reduce(&crate::exact::rat(1, 10)), Err(-1));
        assert_eq!(m.from_i64(-1), 24);
        assert!(Modulus::new(4, 2).is_err());
        assert!(Modulus::new(3, 0).is_err());
    }

    #[test]
    fn log_examples() {
        assert_eq!(padic_log_unit(1, 5, 3).unwrap().value(), 0);
        assert_eq!(padic_log_unit(2, 5, 2).unwrap().value(), 15);
        assert!(padic_log_unit(7, 3, 2).unwrap().valuation() >= 1);
        assert_eq!(
            padic_log_unit(10, 5, 2),
            Err(Error::NonUnit { value: 10, p: 5 })
        );
    }

    /// Independent route for t = 15, p = 5, M = 2: sum many more terms than the
    /// cap and reduce at the end.
    #[test]
    fn cap_is_sufficient() {
        let t = Rational::from_integer(BigInt::from(15));
        let mut s = Rational::zero();
        let mut pw = Rational::one();
        for n in 1..=40i64 {
            pw *= &t;
            let term = &pw / Rational::from_integer(BigInt::from(n));
            if n % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        let m = Modulus::new(5, 4).unwrap();
        assert_eq!(
            m.reduce(&s).unwrap(),
            padic_log_unit(2, 5, 4).unwrap().value()
        );
    }

    #[test]
    fn log_is_additive() {
        for &(p, prec) in &[(3u64, 4u32), (5, 3), (7, 2), (2, 6)] {
            let m = Modulus::new(p, prec).unwrap();
            for c in 1..20i64 {
                for d in 1..20i64 {
                    if c % p as i64 == 0 || d % p as i64 == 0 {
                        continue;
                    }
                    if p == 2 && (c % 2 == 0 || d % 2 == 0) {
                        continue;
                    }
                    let lhs = padic_log_unit(c * d, p, prec).unwrap();
                    let rhs =
                        padic_log_unit(c, p, prec).unwrap() + padic_log_unit(d, p, prec).unwrap();
                    assert_eq!(lhs, rhs, "p = {p}, c = {c}, d = {d}");
                    assert_eq!(lhs.modulus(), m);
                }
            }
        }
    }
}
