//! p-adic measures on `Z_p^x / {+-1}` through their even moments.
//!
//! A measure is certified one finite level at a time: a [`FiniteMeasure`] at
//! level `M` assigns a residue mod `p^M` to every class of
//! `(Z/p^M)^x / {+-1}`, and its moments `sum mu(x) x^(2k)` must reproduce the
//! supplied moment sequence mod `p^M`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bernoulli, factorial, vp, vp_int, Modulus, Rational, ResidueInt, Valuation};
use crate::qforms::{deplete, eisenstein_g, QExp, QSeries};

/// Even moments `b_(2k)` for `2k >= start`, each a q-series of a common
/// truncation. Rational-valued sequences use q-order 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub p: u64,
    pub start: u32,
    q_order: usize,
    moments: BTreeMap<u32, QSeries>,
}

impl MomentSequence {
    pub fn new(p: u64, start: u32, q_order: usize) -> Self {
        MomentSequence {
            p,
            start,
            q_order,
            moments: BTreeMap::new(),
        }
    }

    /// Collects `f(e)` for every even `e` in `start..=k_max`.
    pub fn from_fn(
        p: u64,
        start: u32,
        k_max: u32,
        q_order: usize,
        f: impl Fn(u32) -> Result<QSeries>,
    ) -> Result<Self> {
        let mut seq = MomentSequence::new(p, start, q_order);
        let first = start + start % 2;
        for e in (first..=k_max).step_by(2) {
            seq.insert(e, f(e)?)?;
        }
        Ok(seq)
    }

    pub fn from_rationals(
        p: u64,
        start: u32,
        k_max: u32,
        f: impl Fn(u32) -> Rational,
    ) -> Result<Self> {
        Self::from_fn(p, start, k_max, 0, |e| Ok(QSeries::constant(f(e), 0)))
    }

    pub fn insert(&mut self, exponent: u32, value: QSeries) -> Result<()> {
        if exponent % 2 == 1 {
            return Err(Error::BadParity(exponent));
        }
        if value.order() < self.q_order {
            return Err(Error::ConfigInvalid(format!(
                "moment x^{exponent} has q-order {}, sequence needs {}",
                value.order(),
                self.q_order
            )));
        }
        self.moments.insert(exponent, value.truncate(self.q_order));
        Ok(())
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn get(&self, exponent: u32) -> Option<&QSeries> {
        self.moments.get(&exponent)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.moments.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &QSeries)> {
        self.moments.iter().map(|(&e, v)| (e, v))
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MomentWire::from(self)).expect("moments serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: MomentWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seq = MomentSequence::new(w.p, w.start, w.q_order);
        for m in w.moments {
            if m.coeffs.len() != w.q_order + 1 {
                return Err(Error::Parse(format!(
                    "moment x^{} has {} coefficients, q_order {} needs {}",
                    m.exponent,
                    m.coeffs.len(),
                    w.q_order,
                    w.q_order + 1
                )));
            }
            seq.insert(m.exponent, QSeries::new(m.coeffs))?;
        }
        Ok(seq)
    }
}

#[derive(Serialize, Deserialize)]
struct MomentEntry {
    exponent: u32,
    #[serde(with = "crate::json::rational_vec")]
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MomentWire {
    p: u64,
    start: u32,
    q_order: usize,
    moments: Vec<MomentEntry>,
}

impl From<&MomentSequence> for MomentWire {
    fn from(s: &MomentSequence) -> Self {
        MomentWire {
            p: s.p,
            start: s.start,
            q_order: s.q_order,
            moments: s
                .moments
                .iter()
                .map(|(&exponent, v)| MomentEntry {
                    exponent,
                    coeffs: v.coeffs().to_vec(),
                })
                .collect(),
        }
    }
}

fn level_modulus(p: u64, level: u32) -> Result<Modulus> {
    if p == 2 && level < 3 {
        return Err(Error::BadModulus(format!(
            "p = 2 needs level M >= 3, got {level}"
        )));
    }
    Modulus::new(p, level)
}

/// Exponent of `(Z/p^M)^x`: `(p-1) p^(M-1)`, or `2^(M-2)` for `p = 2`.
/// `x^e` on units depends only on `e` modulo this.
pub fn exponent_period(p: u64, level: u32) -> Result<u64> {
    let m = level_modulus(p, level)?;
    Ok(if p == 2 {
        m.value() / 4
    } else {
        (p - 1) * m.value() / p
    })
}

/// Smallest representative of each pair `{x, p^M - x}` of units, ascending.
pub fn class_representatives(p: u64, level: u32) -> Result<Vec<u64>> {
    let m = level_modulus(p, level)?;
    Ok((1..=m.value() / 2).filter(|x| x % p != 0).collect())
}

fn canonical_class(m: &Modulus, x: u64) -> u64 {
    let x = x % m.value();
    x.min(m.value() - x)
}

/// Even residues modulo the exponent period that no supplied exponent
/// (at or above `start`) reaches.
pub fn missing_exponent_classes(seq: &MomentSequence, level: u32) -> Result<Vec<u64>> {
    let period = exponent_period(seq.p, level)?;
    let covered: std::collections::BTreeSet<u64> = seq
        .exponents()
        .filter(|&e| e >= seq.start)
        .map(|e| e as u64 % period)
        .collect();
    Ok((0..period)
        .step_by(2)
        .filter(|r| !covered.contains(r))
        .collect())
}

/// A witness at level `M`: one residue series per class representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMeasure {
    pub p: u64,
    pub level_exponent: u32,
    modulus: Modulus,
    q_order: usize,
    classes: Vec<u64>,
    /// `values[i][n]`: value on `classes[i]` at `q^n`, reduced into `[0, p^M)`.
    values: Vec<Vec<u64>>,
}

impl FiniteMeasure {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn classes(&self) -> &[u64] {
        &self.classes
    }

    pub fn value(&self, class: u64) -> Option<&[u64]> {
        self.classes
            .binary_search(&class)
            .ok()
            .map(|i| &self.values[i][..])
    }

    /// Classes carrying a nonzero value.
    pub fn support(&self) -> Vec<u64> {
        self.classes
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.iter().any(|&c| c != 0))
            .map(|(&x, _)| x)
            .collect()
    }

    /// `sum mu(x) x^e` at `q^n`.
    pub fn moment(&self, exponent: u32, q_index: usize) -> u64 {
        let m = &self.modulus;
        self.classes
            .iter()
            .zip(&self.values)
            .fold(0, |acc, (&x, v)| {
                m.add(acc, m.mul(v[q_index], m.pow(x, exponent as u64)))
            })
    }

    /// First supplied moment this witness fails to reproduce, as
    /// `(exponent, q_index)`.
    pub fn check(&self, seq: &MomentSequence) -> Result<Option<(u32, usize)>> {
        let q = self.q_order.min(seq.q_order());
        for (e, b) in seq.iter().filter(|(e, _)| *e >= seq.start) {
            for n in 0..=q {
                let target = reduce(&self.modulus, b.coeff(n), e, n)?;
                if self.moment(e, n) != target {
                    return Ok(Some((e, n)));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> String {
        let w = MeasureWire {
            p: self.p,
            level_exponent: self.level_exponent,
            modulus: self.modulus.value(),
            q_order: self.q_order,
            values: self
                .classes
                .iter()
                .zip(&self.values)
                .map(|(&class, v)| MeasureEntry {
                    class,
                    coeffs: v.iter().map(u64::to_string).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&w).expect("measure serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: MeasureWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let modulus = level_modulus(w.p, w.level_exponent)?;
        if modulus.value() != w.modulus {
            return Err(Error::Parse(format!(
                "modulus {} is not {}^{}",
                w.modulus, w.p, w.level_exponent
            )));
        }
        let classes = class_representatives(w.p, w.level_exponent)?;
        let listed: Vec<u64> = w.values.iter().map(|e| e.class).collect();
        if listed != classes {
            return Err(Error::Parse(
                "class list does not match (Z/p^M)^x/{+-1}".into(),
            ));
        }
        let values = w
            .values
            .iter()
            .map(|e| {
                if e.coeffs.len() != w.q_order + 1 {
                    return Err(Error::Parse(format!(
                        "class {} has the wrong number of coefficients",
                        e.class
                    )));
                }
                e.coeffs
                    .iter()
                    .map(|c| {
                        c.parse::<u64>()
                            .ok()
                            .filter(|&v| v < modulus.value())
                            .ok_or_else(|| Error::Parse(format!("bad residue {c:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(FiniteMeasure {
            p: w.p,
            level_exponent: w.level_exponent,
            modulus,
            q_order: w.q_order,
            classes,
            values,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureEntry {
    class: u64,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MeasureWire {
    p: u64,
    level_exponent: u32,
    modulus: u64,
    q_order: usize,
    values: Vec<MeasureEntry>,
}

/// Why a moment sequence has no witness at a given level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Infeasibility {
    /// Exponent whose congruence fails after elimination.
    pub exponent: u32,
    pub q_index: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible(FiniteMeasure),
    Infeasible(Infeasibility),
}

impl SolveOutcome {
    pub fn witness(&self) -> Option<&FiniteMeasure> {
        match self {
            SolveOutcome::Feasible(m) => Some(m),
            SolveOutcome::Infeasible(_) => None,
        }
    }
}

fn reduce(m: &Modulus, x: &Rational, exponent: u32, q_index: usize) -> Result<u64> {
    m.reduce(x).map_err(|valuation| Error::NotPIntegral {
        p: m.p(),
        exponent,
        q_index,
        valuation,
    })
}

/// Solves `sum_x mu(x) x^(2k) = b_(2k) mod p^M` for every supplied exponent
/// and every q-coefficient, over the classes of `(Z/p^M)^x/{+-1}`.
///
/// Elimination uses full pivoting on the entry of least p-adic valuation, so
/// the row-reduced system decides feasibility exactly over `Z/p^M`. Free
/// variables are set to zero. The witness is checked against every supplied
/// moment before it is returned.
pub fn measure_solve_finite(
    seq: &MomentSequence,
    level: u32,
    q_order: usize,
) -> Result<SolveOutcome> {
    let modulus = level_modulus(seq.p, level)?;
    let q = q_order.min(seq.q_order());
    let rows: Vec<(u32, &QSeries)> = seq.iter().filter(|(e, _)| *e >= seq.start).collect();
    let mut rhs = Vec::with_capacity(rows.len());
    for (e, b) in &rows {
        rhs.push(
            (0..=q)
                .map(|n| reduce(&modulus, b.coeff(n), *e, n))
                .collect::<Result<Vec<u64>>>()?,
        );
    }
    let missing = missing_exponent_classes(seq, level)?;
    if !missing.is_empty() {
        return Err(Error::MissingExponentClass {
            modulus: exponent_period(seq.p, level)?,
            missing,
        });
    }

    let classes = class_representatives(seq.p, level)?;
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|(e, _)| classes.iter().map(|&x| modulus.pow(x, *e as u64)).collect())
        .collect();
    let mut row_label: Vec<u32> = rows.iter().map(|(e, _)| *e).collect();
    let mut col_perm: Vec<usize> = (0..classes.len()).collect();
    let (nr, nc) = (a.len(), classes.len());
    let mut pivots: Vec<u32> = Vec::new();

    for r in 0..nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, &v) in row.iter().enumerate().skip(r) {
                if v == 0 {
                    continue;
                }
                let val = modulus.valuation(v);
                if best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else { break };
        a.swap(r, i);
        rhs.swap(r, i);
        row_label.swap(r, i);
        for row in a.iter_mut() {
            row.swap(r, j);
        }
        col_perm.swap(r, j);

        let unit_inv = modulus
            .inv(a[r][r] / modulus.p().pow(v))
            .expect("pivot unit part");
        for i in r + 1..nr {
            if a[i][r] == 0 {
                continue;
            }
            let f = modulus.mul(a[i][r] / modulus.p().pow(v), unit_inv);
            for j in r..nc {
                let t = modulus.mul(f, a[r][j]);
                a[i][j] = modulus.sub(a[i][j], t);
            }
            for n in 0..=q {
                let t = modulus.mul(f, rhs[r][n]);
                rhs[i][n] = modulus.sub(rhs[i][n], t);
            }
        }
        pivots.push(v);
    }

    let rank = pivots.len();
    for i in rank..nr {
        if let Some(n) = rhs[i].iter().position(|&b| b != 0) {
            return Ok(SolveOutcome::Infeasible(Infeasibility {
                exponent: row_label[i],
                q_index: n,
                detail: format!(
                    "after elimination the x^{} equation reads 0 = {} mod {}",
                    row_label[i],
                    rhs[i][n],
                    modulus.value()
                ),
            }));
        }
    }

    let mut solution = vec![vec![0u64; q + 1]; nc];
    for n in 0..=q {
        for r in (0..rank).rev() {
            let mut b = rhs[r][n];
            for j in r + 1..rank {
                b = modulus.sub(b, modulus.mul(a[r][j], solution[j][n]));
            }
            let v = pivots[r];
            if modulus.valuation(b) < v {
                return Ok(SolveOutcome::Infeasible(Infeasibility {
                    exponent: row_label[r],
                    q_index: n,
                    detail: format!(
                        "pivot for x^{} has valuation {v} but its right-hand side has valuation {}",
                        row_label[r],
                        modulus.valuation(b)
                    ),
                }));
            }
            let pv = modulus.p().pow(v);
            let unit_inv = modulus.inv(a[r][r] / pv).expect("pivot unit part");
            solution[r][n] = modulus.mul(b / pv, unit_inv);
        }
    }

    let mut values = vec![vec![0u64; q + 1]; nc];
    for (slot, &col) in col_perm.iter().enumerate() {
        values[col] = solution[slot].clone();
    }
    let measure = FiniteMeasure {
        p: seq.p,
        level_exponent: level,
        modulus,
        q_order: q,
        classes,
        values,
    };
    if let Some((e, n)) = measure.check(seq)? {
        panic!("solver witness fails re-verification at x^{e} q^{n}");
    }
    Ok(SolveOutcome::Feasible(measure))
}

/// Push-forward to level `M - 1`: sums values over the fibres of
/// `(Z/p^M)^x/{+-1} -> (Z/p^(M-1))^x/{+-1}`.
pub fn reduce_level(mu: &FiniteMeasure) -> Result<FiniteMeasure> {
    let level = mu.level_exponent - 1;
    let modulus = level_modulus(mu.p, level)?;
    let classes = class_representatives(mu.p, level)?;
    let mut values = vec![vec![0u64; mu.q_order + 1]; classes.len()];
    for (&x, v) in mu.classes.iter().zip(&mu.values) {
        let image = canonical_class(&modulus, x);
        let i = classes.binary_search(&image).expect("units map to units");
        for (n, &c) in v.iter().enumerate() {
            values[i][n] = modulus.add(values[i][n], c % modulus.value());
        }
    }
    Ok(FiniteMeasure {
        p: mu.p,
        level_exponent: level,
        modulus,
        q_order: mu.q_order,
        classes,
        values,
    })
}

/// `sum_x mu(x)` coefficientwise, mod `p^M`.
pub fn total_mass(mu: &FiniteMeasure) -> Vec<ResidueInt> {
    (0..=mu.q_order)
        .map(|n| {
            let m = &mu.modulus;
            ResidueInt::new(*m, mu.values.iter().fold(0, |acc, v| m.add(acc, v[n])))
        })
        .collect()
}

/// `(1/2p) log(c^(p-1))`, which for `p = 2` is `log(c^2)/8`, from a
/// logarithm known mod `p^M`. The division costs one digit (three for
/// `p = 2`), so the result is mod `p^(M-1)` (resp. `2^(M-3)`).
pub fn mass_target(c: i64, p: u64, level: u32) -> Result<ResidueInt> {
    let log = crate::exact::padic_log_unit(c, p, level)?;
    let lost = if p == 2 { 3 } else { 1 };
    if level <= lost {
        return Err(Error::BadModulus(format!(
            "level {level} leaves no digits after dividing by 2p"
        )));
    }
    let out = Modulus::new(p, level - lost)?;
    let divisor = p.pow(lost);
    debug_assert_eq!(log.value() % divisor, 0);
    let quotient = ResidueInt::new(out, log.value() / divisor);
    if p == 2 {
        Ok(quotient)
    } else {
        Ok(quotient * ResidueInt::new(out, 2).inv().expect("2 is a unit"))
    }
}

/// Mahler-basis pairing `m_k = (1/k!) sum_j s(k, j) b_j` of a candidate
/// measure with the binomial polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MahlerReport {
    pub p: u64,
    pub pass: bool,
    #[serde(with = "crate::json::rational_vec")]
    pub pairings: Vec<Rational>,
    /// First `k` with `m_k` not p-integral, and its valuation.
    pub first_failure: Option<(usize, i64)>,
}

/// Signed Stirling numbers of the first kind `s(n, j)` for `n <= k`.
fn stirling_first(k: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); k + 1]; k + 1];
    s[0][0] = BigInt::one();
    for n in 1..=k {
        for j in 1..=n {
            s[n][j] = &s[n - 1][j - 1] - BigInt::from(n - 1) * &s[n - 1][j];
        }
    }
    s
}

pub fn mahler_test_zp(b: &[Rational], p: u64) -> MahlerReport {
    let k = b.len().saturating_sub(1);
    let s = stirling_first(k);
    let pairings: Vec<Rational> = (0..b.len())
        .map(|n| {
            let sum: Rational = (0..=n)
                .map(|j| Rational::from_integer(s[n][j].clone()) * &b[j])
                .sum();
            sum / Rational::from_integer(factorial(n as u32))
        })
        .collect();
    let first_failure = pairings
        .iter()
        .enumerate()
        .find_map(|(n, m)| match vp(m, p) {
            Valuation::Finite(v) if v < 0 => Some((n, v)),
            _ => None,
        });
    MahlerReport {
        p,
        pass: first_failure.is_none(),
        pairings,
        first_failure,
    }
}

/// One approximation `g_((p-1) p^r) mod p^(r+1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTerm {
    pub r: u32,
    pub weight: u64,
    /// Coefficients reduced into `Q_p / p^(r+1) Z_p`: integers in
    /// `[0, p^(r+1))` for p-integral values, otherwise `a / p^s` with
    /// `0 <= a < p^(r+1+s)`.
    #[serde(with = "crate::json::rational_vec")]
    pub coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub p: u64,
    pub terms: Vec<LimitTerm>,
    /// For each step `r -> r+1`, the q-indices where term `r+1` does not
    /// reduce to term `r`.
    pub unstable: Vec<Vec<usize>>,
    pub stabilized: bool,
}

fn reduce_padic(x: &Rational, p: u64, digits: u32) -> Rational {
    let s = (-vp_int(x.numer(), p) + vp_int(x.denom(), p)).max(0);
    let bp = BigInt::from(p);
    let shift = bp.pow(s as u32);
    let scaled = x * Rational::from_integer(shift.clone());
    let m = bp.pow(digits + s as u32);
    let n = scaled.numer().mod_floor(&m);
    let d = scaled.denom().mod_floor(&m);
    let dinv = d.extended_gcd(&m).x.mod_floor(&m);
    Rational::new((n * dinv).mod_floor(&m), shift)
}

fn refines(fine: &Rational, coarse: &Rational, p: u64, digits: u32) -> bool {
    match vp(&(fine - coarse), p) {
        Valuation::Infinite => true,
        Valuation::Finite(v) => v >= digits as i64,
    }
}

/// Evaluates `g` at weights `(p-1) p^r`, `r = 0..=r_max` (`2^(r+1)` for
/// `p = 2`), reduces mod `p^(r+1)` and reports whether each term refines
/// the previous one.
pub fn limit_weight_sequence(
    family: &dyn Fn(u32) -> Result<QSeries>,
    p: u64,
    r_max: u32,
    weight_cap: u64,
) -> Result<LimitReport> {
    let mut terms = Vec::new();
    for r in 0..=r_max {
        let weight = if p == 2 {
            2u64.pow(r + 1)
        } else {
            (p - 1) * p.pow(r)
        };
        if weight > weight_cap {
            return Err(Error::WeightOverflow {
                weight,
                cap: weight_cap,
            });
        }
        let g = family(weight as u32)?;
        let coeffs = g
            .coeffs()
            .iter()
            .map(|c| reduce_padic(c, p, r + 1))
            .collect();
        terms.push(LimitTerm { r, weight, coeffs });
    }
    let unstable: Vec<Vec<usize>> = terms
        .windows(2)
        .map(|w| {
            let digits = w[0].r + 1;
            (0..w[0].coeffs.len().min(w[1].coeffs.len()))
                .filter(|&n| !refines(&w[1].coeffs[n], &w[0].coeffs[n], p, digits))
                .collect()
        })
        .collect();
    let stabilized = unstable.iter().all(Vec::is_empty);
    Ok(LimitReport {
        p,
        terms,
        unstable,
        stabilized,
    })
}

/// `(1 - c^(2k)) (1 - p^(2k-1)) (-B_(2k) / 4k)`, the even moments of the
/// regularised measure attached to `-B_k/2k`.
pub fn mazur_moment(c: i64, p: u64, exponent: u32) -> Rational {
    let one = Rational::one();
    let ck = Rational::from_integer(BigInt::from(c).pow(exponent));
    let pk = Rational::from_integer(BigInt::from(p).pow(exponent - 1));
    (&one - ck)
        * (&one - pk)
        * (-bernoulli(exponent) / Rational::from_integer(BigInt::from(2 * exponent)))
}

fn check_unit(c: i64, p: u64) -> Result<()> {
    if c.rem_euclid(p as i64) == 0 {
        return Err(Error::NonUnit { value: c, p });
    }
    Ok(())
}

pub fn mazur_moments(c: i64, p: u64, k_max: u32) -> Result<MomentSequence> {
    check_unit(c, p)?;
    MomentSequence::from_rationals(p, 2, k_max, |e| mazur_moment(c, p, e))
}

/// `(1 - c^(2k)) g_(2k)^(p)` for a weight-indexed family `g`.
pub fn regularized_moments(
    family: &dyn Fn(u32) -> Result<QExp>,
    c: i64,
    p: u64,
    start: u32,
    k_max: u32,
    q_order: usize,
) -> Result<MomentSequence> {
    check_unit(c, p)?;
    MomentSequence::from_fn(p, start, k_max, q_order, |e| {
        let g = family(e)?;
        let factor = Rational::one() - Rational::from_integer(BigInt::from(c).pow(e));
        Ok(deplete(&g, p).scale(&factor).into_series())
    })
}

/// Moments `(1 - c^(2k)) (1 - psi^p/p) G_(2k)^(l)` of the Katz Eisenstein
/// measure, for `2k` in `start..=k_max`.
pub fn katz_eisenstein_moments(
    c: i64,
    p: u64,
    ell: u64,
    start: u32,
    k_max: u32,
    q_order: usize,
) -> Result<MomentSequence> {
    if p == ell {
        return Err(Error::PrimeClash(p));
    }
    let family = |e: u32| eisenstein_g(e, q_order).map(|g| deplete(&g, ell));
    regularized_moments(&family, c, p, start, k_max, q_order)
}
