use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// p-adic valuation, with `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a non-zero integer.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational.
pub fn vp(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    x.is_zero() || vp_int(x.denom(), p) == 0
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_rational(base: &Rational, exp: i64) -> Rational {
    let mut out = Rational::one();
    let b = if exp < 0 { base.recip() } else { base.clone() };
    for _ in 0..exp.unsigned_abs() {
        out *= &b;
    }
    out
}

/// Canonical text form: `"-7/240"`, or `"3"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the canonical form. Non-reduced input such as `"2/4"` is accepted
/// and reduced; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp(&rat(1, 24), 2), Valuation::Finite(-3));
        assert_eq!(vp(&Rational::zero(), 5), Valuation::Infinite);
        assert_eq!(vp(&rat(50, 3), 5), Valuation::Finite(2));
        assert_eq!(vp(&rat(-7, 240), 3), Valuation::Finite(-1));
        assert!(Valuation::Finite(10) < Valuation::Infinite);
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(format_rational(&rat(-7, 240)), "-7/240");
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert_eq!(parse_rational("-14/480").unwrap(), rat(-7, 240));
        assert_eq!(parse_rational("0").unwrap(), Rational::zero());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = rat(0, -5);
        assert!(z.denom().is_one());
    }
}
