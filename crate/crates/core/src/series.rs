//! Truncated power series `c_0 + c_1 u + ... + c_U u^U` over an exact
//! commutative ring.
//!
//! Every series carries its truncation order `U` (the index of its last known
//! coefficient). Binary operations truncate to the smaller of the two orders,
//! so precision can only ever be lost visibly.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Capabilities a coefficient ring must provide. Elements know enough about
/// their own shape (e.g. a q-truncation) to produce matching zeros and ones.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// Multiplicative inverse, or `None` if `self` is not a unit.
    fn invert_unit(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn invert_unit(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A power series in `u` truncated after `u^U`.
#[derive(Debug, Clone, PartialEq)]
pub struct USeries<R: Ring> {
    coeffs: Vec<R>,
}

fn inv_int(n: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n))
}

impl<R: Ring> USeries<R> {
    /// Takes ownership of `c_0..=c_U`. Panics on an empty vector since the
    /// truncation order would be undefined.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        USeries { coeffs }
    }

    pub fn zero(template: &R, order: usize) -> Self {
        USeries {
            coeffs: vec![template.zero_like(); order + 1],
        }
    }

    pub fn one(template: &R, order: usize) -> Self {
        let mut s = Self::zero(template, order);
        s.coeffs[0] = template.one_like();
        s
    }

    /// The series `u` itself.
    pub fn variable(template: &R, order: usize) -> Self {
        let mut s = Self::zero(template, order);
        if order >= 1 {
            s.coeffs[1] = template.one_like();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    fn template(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Self {
        USeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> USeries<S> {
        USeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        USeries {
            coeffs: (0..=n)
                .map(|i| self.coeffs[i].add(&other.coeffs[i]))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        USeries {
            coeffs: (0..=n)
                .map(|i| self.coeffs[i].sub(&other.coeffs[i]))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        USeries {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        USeries {
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn scale_ring(&self, c: &R) -> Self {
        USeries {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![self.template().zero_like(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        USeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be a unit of `R`.
    pub fn inverse(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].invert_unit().ok_or(Error::NotInvertible)?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(c0_inv.clone());
        for i in 1..=n {
            let mut acc = self.template().zero_like();
            for j in 1..=i {
                acc = acc.add(&self.coeffs[j].mul(&out[i - j]));
            }
            out.push(acc.mul(&c0_inv).neg());
        }
        Ok(USeries { coeffs: out })
    }

    /// Divides by `u`, dropping the constant term (which must be zero).
    pub fn shift_down(&self) -> Option<Self> {
        if !self.coeffs[0].is_zero() || self.order() == 0 {
            return None;
        }
        Some(USeries {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `u`; the order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.template().zero_like());
        coeffs.extend(self.coeffs.iter().cloned());
        USeries { coeffs }
    }

    /// Formal derivative; the order drops by one (an order-0 series maps to
    /// the zero series of order 0).
    pub fn derive(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(self.template(), 0);
        }
        USeries {
            coeffs: (1..=self.order())
                .map(|i| self.coeffs[i].scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.template().zero_like());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&inv_int(i + 1)));
        }
        USeries { coeffs }
    }

    /// `exp(f)` for `f` with zero constant term, from `(exp f)' = f' exp f`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(self.template().one_like());
        for i in 1..=n {
            let mut acc = self.template().zero_like();
            for k in 1..=i {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let term = self.coeffs[k].mul(&out[i - k]);
                acc = acc.add(&term.scale(&Rational::from_integer(BigInt::from(k))));
            }
            out.push(acc.scale(&inv_int(i)));
        }
        Ok(USeries { coeffs: out })
    }

    /// `log(f)` for `f` with constant term 1, from `(log f)' = f'/f`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonunitConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(self.template(), 0));
        }
        let quotient = self.derive().mul(&self.truncate(n - 1).inverse()?);
        Ok(quotient.integrate())
    }

    /// `f(g(u))` by Horner's scheme; `g` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = USeries::zero(self.template(), n);
        acc.coeffs[0] = self.coeffs[n].clone();
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `f(g(u)) = u`, solved one coefficient
    /// at a time. Needs `c_0 = 0` and `c_1` a unit.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 || !self.coeffs[0].is_zero() {
            return Err(Error::NotRevertible);
        }
        let c1_inv = self.coeffs[1].invert_unit().ok_or(Error::NotRevertible)?;
        let zero = self.template().zero_like();
        // powers[j][m] = [u^m] g^j for the coefficients of g found so far.
        let mut powers: Vec<Vec<R>> = vec![vec![zero.clone(); n + 1]; n + 1];
        powers[0][0] = self.template().one_like();
        let mut g = vec![zero.clone(); n + 1];
        g[1] = c1_inv.clone();
        powers[1][1] = c1_inv.clone();
        for m in 2..=n {
            // [u^m] g^j for j >= 2 only involves g_1..g_{m-1}.
            for j in 2..=m {
                let mut acc = zero.clone();
                for i in 1..=(m - (j - 1)) {
                    if g[i].is_zero() {
                        continue;
                    }
                    acc = acc.add(&g[i].mul(&powers[j - 1][m - i]));
                }
                powers[j][m] = acc;
            }
            let mut rest = zero.clone();
            for j in 2..=m {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                rest = rest.add(&self.coeffs[j].mul(&powers[j][m]));
            }
            g[m] = rest.mul(&c1_inv).neg();
            powers[1][m] = g[m].clone();
        }
        Ok(USeries { coeffs: g })
    }

    /// Index of the first coefficient where `self` and `other` differ, up to
    /// the common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}

impl USeries<Rational> {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        USeries::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        USeries::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn s(c: &[(i64, i64)]) -> USeries<Rational> {
        USeries::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn products() {
        let one_plus = USeries::from_ints(&[1, 1, 0]);
        let one_minus = USeries::from_ints(&[1, -1, 0]);
        assert_eq!(one_plus.mul(&one_minus), USeries::from_ints(&[1, 0, -1]));
        let u = USeries::from_ints(&[0, 1, 0]);
        assert_eq!(u.mul(&u), USeries::from_ints(&[0, 0, 1]));
        let a = USeries::from_ints(&[1, 1, 1]);
        let b = USeries::from_ints(&[1, 1, 0]);
        assert_eq!(a.mul(&b), USeries::from_ints(&[1, 2, 2]));
        // Truncation to the smaller order.
        assert_eq!(a.mul(&USeries::from_ints(&[1, 1])).order(), 1);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            USeries::from_ints(&[0, 0, 0]).exp().unwrap(),
            USeries::from_ints(&[1, 0, 0])
        );
        let u = USeries::from_ints(&[0, 1, 0, 0]);
        assert_eq!(u.exp().unwrap(), s(&[(1, 1), (1, 1), (1, 2), (1, 6)]));
        let mercator = s(&[(0, 1), (1, 1), (-1, 2), (1, 3), (-1, 4)]);
        assert_eq!(
            mercator.exp().unwrap(),
            USeries::from_ints(&[1, 1, 0, 0, 0])
        );
        assert_eq!(
            USeries::from_ints(&[1, 1]).exp(),
            Err(Error::NonzeroConstant)
        );
    }

    #[test]
    fn log_examples() {
        assert_eq!(
            USeries::from_ints(&[1, 0, 0]).log().unwrap(),
            USeries::from_ints(&[0, 0, 0])
        );
        let u2 = USeries::from_ints(&[0, 0, 1, 0, 0, 0]);
        assert_eq!(u2.exp().unwrap().log().unwrap(), u2);
        assert_eq!(
            USeries::from_ints(&[1, 1, 0, 0, 0]).log().unwrap(),
            s(&[(0, 1), (1, 1), (-1, 2), (1, 3), (-1, 4)])
        );
        assert_eq!(
            USeries::from_ints(&[2, 1]).log(),
            Err(Error::NonunitConstant)
        );
    }

    #[test]
    fn reversion_examples() {
        let u = USeries::from_ints(&[0, 1, 0, 0]);
        assert_eq!(u.reversion().unwrap(), u);
        let tanh = s(&[(0, 1), (1, 1), (0, 1), (-1, 3), (0, 1), (2, 15)]);
        let atanh = s(&[(0, 1), (1, 1), (0, 1), (1, 3), (0, 1), (1, 5)]);
        assert_eq!(tanh.reversion().unwrap(), atanh);
        let f = USeries::from_ints(&[0, 1, 1, 0, 0]);
        assert_eq!(
            f.reversion().unwrap(),
            USeries::from_ints(&[0, 1, -1, 2, -5])
        );
        assert_eq!(
            USeries::from_ints(&[1, 1]).reversion(),
            Err(Error::NotRevertible)
        );
        assert_eq!(
            USeries::from_ints(&[0, 0, 1]).reversion(),
            Err(Error::NotRevertible)
        );
    }

    /// Brute-force oracle for reversion: solve f(g) = u by trying to kill each
    /// coefficient of the full composition in turn.
    #[test]
    fn reversion_matches_brute_force_solve() {
        let f = s(&[(0, 1), (2, 1), (1, 3), (-1, 1), (5, 7), (0, 1), (1, 2)]);
        let n = f.order();
        let mut g = vec![rat(0, 1); n + 1];
        g[1] = rat(1, 2);
        for m in 2..=n {
            let comp = f.compose(&USeries::new(g.clone())).unwrap();
            g[m] = -comp.coeff(m).clone() / f.coeff(1);
        }
        assert_eq!(f.reversion().unwrap(), USeries::new(g));
    }

    #[test]
    fn compose_examples() {
        let f = USeries::from_ints(&[3, 1, 4, 1]);
        let u = USeries::from_ints(&[0, 1, 0, 0]);
        assert_eq!(f.compose(&u).unwrap(), f);
        let sq = USeries::from_ints(&[0, 0, 1, 0]);
        let inner = USeries::from_ints(&[0, 1, 1, 0]);
        assert_eq!(
            sq.compose(&inner).unwrap(),
            USeries::from_ints(&[0, 0, 1, 2])
        );
        let g = USeries::from_ints(&[0, 1, 1, 0]);
        assert_eq!(g.reversion().unwrap().compose(&g).unwrap(), u);
        assert_eq!(f.compose(&f), Err(Error::NonzeroInnerConstant));
    }

    #[test]
    fn calculus() {
        assert_eq!(
            USeries::from_ints(&[0, 0, 0, 1]).derive(),
            USeries::from_ints(&[0, 0, 3])
        );
        assert_eq!(
            USeries::from_ints(&[1, 1]).integrate(),
            s(&[(0, 1), (1, 1), (1, 2)])
        );
        let f = USeries::from_ints(&[7, 2, -3, 5]);
        let mut expected = f.clone();
        expected.coeffs[0] = rat(0, 1);
        assert_eq!(f.derive().integrate(), expected);
    }

    #[test]
    fn inverse() {
        let f = USeries::from_ints(&[2, 1, 0, 0]);
        let inv = f.inverse().unwrap();
        assert_eq!(f.mul(&inv), USeries::from_ints(&[1, 0, 0, 0]));
        assert_eq!(
            USeries::from_ints(&[0, 1]).inverse(),
            Err(Error::NotInvertible)
        );
    }
}
