//! Characteristic series of the five classical genera and the checks built
//! on them.
//!
//! Every characteristic series is normalized as
//! `K(u) = exp(2 sum_{k>=2} b_k u^k / k!)`. For the q-dependent genera the
//! coefficients live in [`QSeries`], so `K` is a two-variable series truncated
//! at `u^U` and `q^Q`. Infinite products over `n >= 1` are cut at `n <= Q`;
//! the omitted factors are `1 mod q^(Q+1)`, so nothing is approximated.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bernoulli, factorial, format_rational, is_prime, pow_rational, Rational};
use crate::qforms::{deplete, eisenstein_g, eisenstein_gtilde, QExp, QSeries};
use crate::series::{Ring, USeries};

/// A characteristic series together with its `b_k` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CharSeries<R: Ring> {
    pub k: USeries<R>,
    pub b: BTreeMap<u32, R>,
}

fn fact(n: usize) -> Rational {
    Rational::from_integer(factorial(n as u32))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl<R: Ring> CharSeries<R> {
    /// Wraps `K` (constant term 1) and extracts `b_k = (k!/2) [u^k] log K`.
    pub fn from_k(k: USeries<R>) -> Result<Self> {
        let log = k.log()?;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let b = (2..=k.order())
            .map(|i| (i as u32, log.coeff(i).scale(&(fact(i) * &half))))
            .collect();
        Ok(CharSeries { k, b })
    }

    pub fn u_order(&self) -> usize {
        self.k.order()
    }

    /// `exp(2 sum b_k u^k/k!)`, which must give back `K`.
    pub fn rebuild(&self) -> Result<USeries<R>> {
        let template = self.k.coeff(0);
        let mut coeffs = vec![template.zero_like(); self.k.order() + 1];
        for (&i, bk) in &self.b {
            coeffs[i as usize] = bk.scale(&(int(2) / fact(i as usize)));
        }
        USeries::new(coeffs).exp()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> CharSeries<S> {
        CharSeries {
            k: self.k.map(&f),
            b: self.b.iter().map(|(&i, x)| (i, f(x))).collect(),
        }
    }
}

impl<R: Ring> CharSeries<R> {
    pub fn truncate(&self, u_order: usize) -> Self {
        CharSeries {
            k: self.k.truncate(u_order),
            b: self
                .b
                .iter()
                .filter(|(&i, _)| i as usize <= u_order)
                .map(|(&i, x)| (i, x.clone()))
                .collect(),
        }
    }
}

impl CharSeries<Rational> {
    /// View as a two-variable series with q-order 0.
    pub fn to_q(&self) -> CharSeries<QSeries> {
        self.map(|x| QSeries::constant(x.clone(), 0))
    }
}

#[derive(Serialize)]
struct CharSeriesWire {
    u_order: usize,
    q_order: usize,
    #[serde(rename = "K")]
    k: Vec<Vec<String>>,
    b: BTreeMap<u32, Vec<String>>,
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

impl CharSeries<QSeries> {
    pub fn q_order(&self) -> usize {
        self.k
            .coeffs()
            .iter()
            .map(QSeries::order)
            .min()
            .unwrap_or(0)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = CharSeriesWire {
            u_order: self.u_order(),
            q_order: self.q_order(),
            k: self
                .k
                .coeffs()
                .iter()
                .map(|c| strings(c.coeffs()))
                .collect(),
            b: self
                .b
                .iter()
                .map(|(&i, x)| (i, strings(x.coeffs())))
                .collect(),
        };
        serde_json::to_value(wire).expect("char series serializes")
    }
}

/// `K = u / rev(log)`, with the leading `u` cancelled exactly. A logarithm
/// known to `u^(U+1)` gives `K` to `u^U`.
pub fn char_from_log<R: Ring>(log: &USeries<R>) -> Result<CharSeries<R>> {
    let exp = log.reversion()?;
    let quotient = exp.shift_down().ok_or(Error::NotRevertible)?;
    CharSeries::from_k(quotient.inverse()?)
}

/// `log_Sign(x) = x + x^3/3 + x^5/5 + ...`, truncated after `x^order`.
pub fn log_sign(order: usize) -> USeries<Rational> {
    USeries::new(
        (0..=order)
            .map(|i| {
                if i % 2 == 1 {
                    Rational::new(BigInt::one(), BigInt::from(i))
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    )
}

/// `exp_Ahat(u) = 2 sinh(u/2)`.
pub fn exp_ahat(order: usize) -> USeries<Rational> {
    USeries::new(
        (0..=order)
            .map(|i| {
                if i % 2 == 1 {
                    pow_rational(&Rational::new(BigInt::one(), BigInt::from(2)), i as i64 - 1)
                        / fact(i)
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    )
}

/// L-genus, from its logarithm.
pub fn genus_sign(u_order: usize) -> Result<CharSeries<Rational>> {
    char_from_log(&log_sign(u_order + 1))
}

/// A-hat genus, from the logarithm `rev(2 sinh(u/2))`.
pub fn genus_ahat(u_order: usize) -> Result<CharSeries<Rational>> {
    char_from_log(&exp_ahat(u_order + 1).reversion()?)
}

fn q_const(c: Rational, q: usize) -> QSeries {
    QSeries::constant(c, q)
}

/// `sum_j (u/2)^(2j) / (2j+1)! = sinh(u/2) / (u/2)` over the q-ring.
fn sinh_half_over_half(u: usize, q: usize) -> USeries<QSeries> {
    let shifted = exp_ahat(u + 1).shift_down().expect("odd series");
    shifted.map(|c| q_const(c.clone(), q))
}

/// `cosh(u/2)` over the q-ring.
fn cosh_half(u: usize, q: usize) -> USeries<QSeries> {
    USeries::new(
        (0..=u)
            .map(|i| {
                let c = if i % 2 == 0 {
                    pow_rational(&Rational::new(BigInt::one(), BigInt::from(2)), i as i64) / fact(i)
                } else {
                    Rational::zero()
                };
                q_const(c, q)
            })
            .collect(),
    )
}

/// `a + s q^n e^(sign u)` as a series in `u` over the q-ring.
fn one_plus_qn_exp(a: i64, s: i64, n: usize, sign: i64, u: usize, q: usize) -> USeries<QSeries> {
    USeries::new(
        (0..=u)
            .map(|j| {
                let c = int(s) * pow_rational(&int(sign), j as i64) / fact(j);
                let mut term = QSeries::monomial(c, n, q);
                if j == 0 {
                    term = term.add(&q_const(int(a), q));
                }
                term
            })
            .collect(),
    )
}

/// `(u/2)/sinh(u/2) * prod_n (1-q^n)^2 / ((1 - q^n e^u)(1 - q^n e^-u))`.
pub fn genus_witten(u_order: usize, q_order: usize) -> Result<CharSeries<QSeries>> {
    let (u, q) = (u_order, q_order);
    let mut k = sinh_half_over_half(u, q).inverse()?;
    for n in 1..=q {
        let one_minus_qn = QSeries::monomial(int(-1), n, q).add(&q_const(int(1), q));
        let numerator = one_minus_qn.mul(&one_minus_qn);
        let denominator =
            one_plus_qn_exp(1, -1, n, 1, u, q).mul(&one_plus_qn_exp(1, -1, n, -1, u, q));
        k = k.mul(&denominator.inverse()?).scale_ring(&numerator);
    }
    CharSeries::from_k(k)
}

/// `(u/2)/tanh(u/2) * prod_n (1+q^n e^u)(1+q^n e^-u) / ((1-q^n e^u)(1-q^n e^-u))
///  * ((1-q^n)/(1+q^n))^2`.
pub fn genus_wsig(u_order: usize, q_order: usize) -> Result<CharSeries<QSeries>> {
    let (u, q) = (u_order, q_order);
    let mut k = cosh_half(u, q).mul(&sinh_half_over_half(u, q).inverse()?);
    for n in 1..=q {
        let plus = QSeries::monomial(int(1), n, q).add(&q_const(int(1), q));
        let minus = QSeries::monomial(int(-1), n, q).add(&q_const(int(1), q));
        let ratio = minus.mul(&plus.invert_unit().expect("1 + q^n is a unit"));
        let numerator = one_plus_qn_exp(1, 1, n, 1, u, q).mul(&one_plus_qn_exp(1, 1, n, -1, u, q));
        let denominator =
            one_plus_qn_exp(1, -1, n, 1, u, q).mul(&one_plus_qn_exp(1, -1, n, -1, u, q));
        k = k
            .mul(&numerator)
            .mul(&denominator.inverse()?)
            .scale_ring(&ratio.mul(&ratio));
    }
    CharSeries::from_k(k)
}

/// `exp(2 sum_{k>=2} g_k u^k / k!)` for a weight-indexed family; odd weights
/// contribute nothing.
pub fn char_from_family(
    family: &dyn Fn(u32) -> Result<QSeries>,
    u_order: usize,
    q_order: usize,
) -> Result<CharSeries<QSeries>> {
    let mut coeffs = vec![QSeries::zero(q_order); u_order + 1];
    for k in (2..=u_order).step_by(2) {
        coeffs[k] = family(k as u32)?
            .truncate(q_order)
            .scale(&(int(2) / fact(k)));
    }
    CharSeries::from_k(USeries::new(coeffs).exp()?)
}

/// Ochanine genus data: the characteristic series, the logarithm, and the
/// recovered `delta` (weight 2) and `epsilon` (weight 4).
#[derive(Debug, Clone, PartialEq)]
pub struct Ochanine {
    pub char_series: CharSeries<QSeries>,
    pub log: USeries<QSeries>,
    pub delta: QExp,
    pub epsilon: QExp,
}

/// Builds `K = exp(2 sum G~_k u^k/k!)`, inverts `u/K` to get the logarithm,
/// reads off `delta = 3 [x^3] log` and `epsilon = 3 delta^2 - 10 [x^5] log`,
/// then checks `(log')^2 (1 - 2 delta x^2 + epsilon x^4) = 1` coefficientwise.
pub fn genus_ochanine(u_order: usize, q_order: usize) -> Result<Ochanine> {
    if u_order < 6 {
        return Err(Error::ConfigInvalid(format!(
            "Ochanine data needs u-order >= 6, got {u_order}"
        )));
    }
    let family = |k: u32| eisenstein_gtilde(k, q_order).map(QExp::into_series);
    let char_series = char_from_family(&family, u_order, q_order)?;
    let exp = char_series.k.inverse()?.shift_up();
    let log = exp.reversion()?;
    let delta = log.coeff(3).scale(&int(3));
    let epsilon = delta
        .mul(&delta)
        .scale(&int(3))
        .sub(&log.coeff(5).scale(&int(10)));

    let q = q_order;
    let mut quartic = vec![QSeries::zero(q); log.order()];
    quartic[0] = q_const(int(1), q);
    quartic[2] = delta.scale(&int(-2));
    quartic[4] = epsilon.clone();
    let d = log.derive();
    let lhs = d.mul(&d).mul(&USeries::new(quartic));
    for (i, c) in lhs.coeffs().iter().enumerate() {
        let expected = if i == 0 {
            q_const(int(1), q)
        } else {
            QSeries::zero(q)
        };
        if let Some(j) = c.first_mismatch(&expected) {
            return Err(Error::ShapeViolation {
                u_index: i,
                q_index: j,
            });
        }
    }
    Ok(Ochanine {
        char_series,
        log,
        delta: QExp::from_series(2, 2, delta),
        epsilon: QExp::from_series(2, 4, epsilon),
    })
}

/// How a genus is specified before its characteristic series is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DefinitionMode {
    LogSeries,
    ExpSeries,
    KSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenusName {
    Sign,
    Ahat,
    Witten,
    Wsig,
    Ochanine,
}

impl GenusName {
    pub const ALL: [GenusName; 5] = [
        GenusName::Sign,
        GenusName::Ahat,
        GenusName::Witten,
        GenusName::Wsig,
        GenusName::Ochanine,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sign" | "l" => Ok(GenusName::Sign),
            "ahat" => Ok(GenusName::Ahat),
            "witten" => Ok(GenusName::Witten),
            "wsig" => Ok(GenusName::Wsig),
            "ochanine" | "och" => Ok(GenusName::Ochanine),
            other => Err(Error::ConfigInvalid(format!("unknown genus {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GenusName::Sign => "sign",
            GenusName::Ahat => "ahat",
            GenusName::Witten => "witten",
            GenusName::Wsig => "wsig",
            GenusName::Ochanine => "ochanine",
        }
    }

    pub fn mode(self) -> DefinitionMode {
        match self {
            GenusName::Sign => DefinitionMode::LogSeries,
            GenusName::Ahat => DefinitionMode::ExpSeries,
            GenusName::Witten | GenusName::Wsig | GenusName::Ochanine => DefinitionMode::KSeries,
        }
    }

    pub fn has_q(self) -> bool {
        self.mode() == DefinitionMode::KSeries
    }

    /// Characteristic series over the q-ring (q-order 0 for the q-free
    /// genera).
    pub fn build(self, u_order: usize, q_order: usize) -> Result<CharSeries<QSeries>> {
        match self {
            GenusName::Sign => Ok(genus_sign(u_order)?.to_q()),
            GenusName::Ahat => Ok(genus_ahat(u_order)?.to_q()),
            GenusName::Witten => genus_witten(u_order, q_order),
            GenusName::Wsig => genus_wsig(u_order, q_order),
            GenusName::Ochanine => Ok(genus_ochanine(u_order.max(6), q_order)?
                .char_series
                .truncate(u_order)),
        }
    }

    /// The weight-indexed family `g_k` with `log K = 2 sum g_k u^k/k!`.
    pub fn family(self, k: u32, q_order: usize) -> Result<QSeries> {
        match self {
            GenusName::Sign => Ok(QSeries::constant(sign_coefficient(k), 0)),
            GenusName::Ahat => Ok(QSeries::constant(ahat_coefficient(k), 0)),
            GenusName::Witten => eisenstein_g(k, q_order).map(QExp::into_series),
            GenusName::Wsig => {
                eisenstein_g(k, q_order).map(|f| deplete(&f, 2).scale_int(2).into_series())
            }
            GenusName::Ochanine => eisenstein_gtilde(k, q_order).map(QExp::into_series),
        }
    }

    /// Builds the series and checks it against its family.
    pub fn verify(self, u_order: usize, q_order: usize) -> Result<IdentityReport> {
        let q = if self.has_q() { q_order } else { 0 };
        let k = self.build(u_order, q)?;
        verify_identity(&k, &|w| self.family(w, q), &Rational::one())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub pass: bool,
    pub u_order: usize,
    pub q_order: usize,
    /// `(u-index, q-index)` of the first disagreement.
    pub first_mismatch: Option<(usize, usize)>,
}

/// Checks `log K = 2 sum_{k>=2} factor * g_k u^k/k!` exactly. The family is
/// only consulted at even weights; odd weights must contribute zero.
pub fn verify_identity(
    k: &CharSeries<QSeries>,
    family: &dyn Fn(u32) -> Result<QSeries>,
    factor: &Rational,
) -> Result<IdentityReport> {
    let log = k.k.log()?;
    let q = k.q_order();
    let mut first_mismatch = None;
    for i in 0..=log.order() {
        let expected = if i >= 2 && i % 2 == 0 {
            family(i as u32)?
                .truncate(q)
                .scale(&(int(2) * factor / fact(i)))
        } else {
            QSeries::zero(q)
        };
        if let Some(j) = log.coeff(i).truncate(q).first_mismatch(&expected) {
            first_mismatch = Some((i, j));
            break;
        }
    }
    Ok(IdentityReport {
        pass: first_mismatch.is_none(),
        u_order: log.order(),
        q_order: q,
        first_mismatch,
    })
}

/// `2^(k+1) (2^(k-1) - 1) B_k / (2k)`, the L-genus coefficients.
pub fn sign_coefficient(k: u32) -> Rational {
    let two = BigInt::from(2);
    let c = two.pow(k + 1) * (two.pow(k - 1) - BigInt::one());
    Rational::from_integer(c) * bernoulli(k) / int(2 * k as i64)
}

/// `-B_k / (2k)`.
pub fn ahat_coefficient(k: u32) -> Rational {
    -bernoulli(k) / int(2 * k as i64)
}

/// Coefficient rings for congruence checks: `Z` with the listed primes
/// inverted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientRing {
    pub inverted: Vec<u64>,
}

impl CoefficientRing {
    pub fn integers() -> Self {
        CoefficientRing { inverted: vec![] }
    }

    /// `Z[1/N]`: every prime factor of `N` inverted.
    pub fn invert(n: u64) -> Self {
        let mut inverted = Vec::new();
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m.is_multiple_of(p) {
                inverted.push(p);
                while m.is_multiple_of(p) {
                    m /= p;
                }
            }
            p += 1;
        }
        CoefficientRing { inverted }
    }

    pub fn name(&self) -> String {
        if self.inverted.is_empty() {
            "Z".to_string()
        } else {
            let n: u64 = self.inverted.iter().product();
            format!("Z[1/{n}]")
        }
    }

    /// Smallest prime outside the inverted set dividing the denominator of
    /// `x`, with its (negative) valuation.
    pub fn obstruction(&self, x: &Rational) -> Option<(u64, i64)> {
        let mut d = x.denom().clone();
        for &p in &self.inverted {
            let bp = BigInt::from(p);
            while (&d % &bp).is_zero() {
                d /= &bp;
            }
        }
        if d.is_one() {
            return None;
        }
        let mut p = 2u64;
        loop {
            let bp = BigInt::from(p);
            if is_prime(p) && (&d % &bp).is_zero() {
                let mut v = 0;
                while (&d % &bp).is_zero() {
                    d /= &bp;
                    v += 1;
                }
                return Some((p, -v));
            }
            if BigInt::from(p) * BigInt::from(p) > d {
                // d itself is prime
                return Some((num_traits::ToPrimitive::to_u64(&d).unwrap_or(u64::MAX), -1));
            }
            p += 1;
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.obstruction(x).is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceVerdict {
    pub k: u32,
    pub pass: bool,
    /// First failing q-index, the prime, the valuation and the difference.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<CongruenceFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceFailure {
    pub q_index: usize,
    pub prime: u64,
    pub valuation: i64,
    #[serde(with = "crate::json::rational")]
    pub difference: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub name: String,
    pub ring: String,
    pub pass: bool,
    pub verdicts: Vec<CongruenceVerdict>,
}

/// For each weight, tests that every coefficient of `a_k - b_k` lies in the
/// coefficient ring.
pub fn congruence_check(
    name: &str,
    a: &dyn Fn(u32) -> Result<QSeries>,
    b: &dyn Fn(u32) -> Result<QSeries>,
    ring: &CoefficientRing,
    weights: impl IntoIterator<Item = u32>,
) -> Result<CongruenceReport> {
    let mut verdicts = Vec::new();
    for k in weights {
        let diff = a(k)?.sub(&b(k)?);
        let failure = diff.coeffs().iter().enumerate().find_map(|(i, c)| {
            ring.obstruction(c)
                .map(|(prime, valuation)| CongruenceFailure {
                    q_index: i,
                    prime,
                    valuation,
                    difference: c.clone(),
                })
        });
        verdicts.push(CongruenceVerdict {
            k,
            pass: failure.is_none(),
            failure,
        });
    }
    Ok(CongruenceReport {
        name: name.to_string(),
        ring: ring.name(),
        pass: verdicts.iter().all(|v| v.pass),
        verdicts,
    })
}

/// The three families of congruences between the Bernoulli and Eisenstein
/// sequences, run for even weights `2..=k_max` and q-coefficients up to
/// `q_order`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceSuite {
    pub ahat_vs_half_sign_mod_z_half: CongruenceReport,
    pub ahat_vs_sign_mod_z: CongruenceReport,
    pub g_vs_gtilde_mod_z_half: CongruenceReport,
    pub g_vs_depleted_mod_z_half: CongruenceReport,
}

pub fn bernoulli_eisenstein_congruences(k_max: u32, q_order: usize) -> Result<CongruenceSuite> {
    let weights = || (2..=k_max).step_by(2);
    let z_half = CoefficientRing::invert(2);
    let constant = |c: Rational| Ok(QSeries::constant(c, 0));
    let ahat = |k: u32| constant(ahat_coefficient(k));
    let half_sign = |k: u32| {
        let two = BigInt::from(2);
        let c = Rational::from_integer(&two * (two.pow(k - 1) - BigInt::one()));
        constant(c * bernoulli(k) / int(2 * k as i64))
    };
    let sign = |k: u32| constant(sign_coefficient(k));
    let g = |k: u32| eisenstein_g(k, q_order).map(QExp::into_series);
    let gt = |k: u32| eisenstein_gtilde(k, q_order).map(QExp::into_series);
    let g2 = |k: u32| eisenstein_g(k, q_order).map(|f| deplete(&f, 2).scale_int(2).into_series());
    Ok(CongruenceSuite {
        ahat_vs_half_sign_mod_z_half: congruence_check(
            "-B_k/2k = 2(2^(k-1)-1)B_k/2k",
            &ahat,
            &half_sign,
            &z_half,
            weights(),
        )?,
        ahat_vs_sign_mod_z: congruence_check(
            "-B_k/2k = 2^(k+1)(2^(k-1)-1)B_k/2k",
            &ahat,
            &sign,
            &CoefficientRing::integers(),
            weights(),
        )?,
        g_vs_gtilde_mod_z_half: congruence_check("G_k = G~_k", &g, &gt, &z_half, weights())?,
        g_vs_depleted_mod_z_half: congruence_check("G_k = 2 G_k^(2)", &g, &g2, &z_half, weights())?,
    })
}
