//! q-expansions of modular forms.
//!
//! A [`QExp`] is a truncated q-expansion tagged with level, weight and a flag
//! for quasi-modular objects such as `G_2`. Equality, integrality and
//! congruence of forms are all decided on q-coefficients, so this is also the
//! representation used for p-adic modular forms.

mod basis;
mod eisenstein;
mod operators;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::series::{self, Ring};

pub use basis::{
    atkin_matrix, classical_membership, eisenstein_basis, EisensteinBasis, Membership,
};
pub use eisenstein::{divisor_power_sum, eisenstein_g, eisenstein_gtilde};
pub use operators::{atkin_u, deplete, frobenius_psi, hecke_t};

/// A q-series `a_0 + a_1 q + ... + a_Q q^Q` with rational coefficients and no
/// modular metadata. This is the coefficient ring for two-variable series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "q-series needs a constant term");
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^n`, or zero if `n` is past the truncation.
    pub fn monomial(c: Rational, n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Index of the first differing coefficient at the common order.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }
}

impl series::Ring for QSeries {
    fn zero_like(&self) -> Self {
        QSeries::zero(self.order())
    }

    fn one_like(&self) -> Self {
        QSeries::constant(Rational::one(), self.order())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !Zero::is_zero(b) {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn invert_unit(&self) -> Option<Self> {
        if Zero::is_zero(&self.coeffs[0]) {
            return None;
        }
        let c0 = self.coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(c0.clone());
        for i in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for j in 1..=i {
                if !Zero::is_zero(&self.coeffs[j]) {
                    acc += &self.coeffs[j] * &out[i - j];
                }
            }
            out.push(-acc * &c0);
        }
        Some(QSeries { coeffs: out })
    }
}

/// A truncated q-expansion with modular metadata. The truncation order is the
/// reliable order: every stored coefficient is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExp {
    pub level: u64,
    pub weight: u32,
    pub quasi: bool,
    series: QSeries,
}

#[derive(Serialize, Deserialize)]
struct QExpWire {
    level: u64,
    weight: u32,
    quasi: bool,
    q_order: usize,
    #[serde(with = "crate::json::rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for QExp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QExpWire {
            level: self.level,
            weight: self.weight,
            quasi: self.quasi,
            q_order: self.q_order(),
            coeffs: self.series.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = QExpWire::deserialize(d)?;
        if w.coeffs.len() != w.q_order + 1 {
            return Err(serde::de::Error::custom(format!(
                "q_order {} needs {} coefficients, got {}",
                w.q_order,
                w.q_order + 1,
                w.coeffs.len()
            )));
        }
        if w.level == 0 {
            return Err(serde::de::Error::custom("level must be positive"));
        }
        Ok(QExp {
            level: w.level,
            weight: w.weight,
            quasi: w.quasi,
            series: QSeries::new(w.coeffs),
        })
    }
}

impl QExp {
    pub fn new(level: u64, weight: u32, quasi: bool, coeffs: Vec<Rational>) -> Self {
        assert!(level > 0, "level must be positive");
        QExp {
            level,
            weight,
            quasi,
            series: QSeries::new(coeffs),
        }
    }

    pub fn from_series(level: u64, weight: u32, series: QSeries) -> Self {
        QExp {
            level,
            weight,
            quasi: false,
            series,
        }
    }

    pub fn zero(level: u64, weight: u32, order: usize) -> Self {
        QExp::from_series(level, weight, QSeries::zero(order))
    }

    pub fn constant(level: u64, weight: u32, c: Rational, order: usize) -> Self {
        QExp::from_series(level, weight, QSeries::constant(c, order))
    }

    pub fn q_order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        self.series.coeff(n)
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.series.coeffs()
    }

    pub fn series(&self) -> &QSeries {
        &self.series
    }

    pub fn into_series(self) -> QSeries {
        self.series
    }

    pub fn truncate(&self, order: usize) -> QExp {
        QExp {
            series: self.series.truncate(order),
            ..self.clone()
        }
    }

    fn combine(&self, other: &QExp, series: QSeries) -> QExp {
        QExp {
            level: self.level.lcm(&other.level),
            weight: self.weight,
            quasi: self.quasi || other.quasi,
            series,
        }
    }

    /// Sum of two forms of the same weight; level is the lcm, order the min.
    pub fn add(&self, other: &QExp) -> QExp {
        debug_assert_eq!(
            self.weight, other.weight,
            "adding forms of different weights"
        );
        self.combine(other, self.series.add(&other.series))
    }

    pub fn sub(&self, other: &QExp) -> QExp {
        debug_assert_eq!(
            self.weight, other.weight,
            "subtracting forms of different weights"
        );
        self.combine(other, self.series.sub(&other.series))
    }

    pub fn scale(&self, c: &Rational) -> QExp {
        QExp {
            series: self.series.scale(c),
            ..self.clone()
        }
    }

    pub fn scale_int(&self, c: i64) -> QExp {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    pub fn is_zero(&self) -> bool {
        series::Ring::is_zero(&self.series)
    }

    /// First index where the q-coefficients differ, at the common order.
    pub fn first_mismatch(&self, other: &QExp) -> Option<usize> {
        self.series.first_mismatch(&other.series)
    }

    pub fn with_level(mut self, level: u64) -> QExp {
        self.level = level;
        self
    }

    pub fn with_quasi(mut self, quasi: bool) -> QExp {
        self.quasi = quasi;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("QExp serializes")
    }

    pub fn from_json(s: &str) -> Result<QExp> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
