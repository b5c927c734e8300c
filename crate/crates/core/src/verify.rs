//! Checks of the orientation conditions on a concrete weight-indexed family
//! `k -> g_k` of level-`N` modular forms at one prime `p`.
//!
//! Conditions, in report order:
//! - `a`: odd-weight forms vanish (and, for a named genus, its characteristic
//!   series matches the family);
//! - `b`: for each unit `c`, the moments `(1 - c^(2k)) g_(2k)^(p)` admit a
//!   finite measure at every level up to `M`;
//! - `c`: `T_p g_k = (1 + p^(k-1)) g_k`;
//! - `c'`: `U_p g_k^(p) = g_k^(p)`, together with the operator identity
//!   `(1 - U_p)(1 - psi^p/p) = 1 - T_p + p^(k-1)` on the same forms;
//! - `d`: `g_k = G_k` (string) or `G~_k` (spin) with coefficients in `Z[1/N]`;
//! - `e`: total mass of each witness is `(1/2p) log(c^(p-1))`;
//! - `weight2` (spin): `g_2` lies in the classical weight-2 Eisenstein span;
//! - `shape` (Ochanine only): the quartic shape of the logarithm.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, is_prime, pow_rational, Modulus, Rational};
use crate::genus::{congruence_check, genus_ochanine, CoefficientRing, GenusName};
use crate::measures::{
    class_representatives, exponent_period, mass_target, measure_solve_finite,
    missing_exponent_classes, reduce_level, regularized_moments, total_mass, SolveOutcome,
};
use crate::qforms::{
    atkin_u, classical_membership, deplete, eisenstein_basis, eisenstein_g, eisenstein_gtilde,
    hecke_t, Membership, QExp,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spin,
    String,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spin" => Ok(Mode::Spin),
            "string" => Ok(Mode::String),
            other => Err(Error::ConfigInvalid(format!(
                "mode must be spin or string, got {other:?}"
            ))),
        }
    }

    /// First weight the conditions apply to.
    pub fn start(self) -> u32 {
        match self {
            Mode::Spin => 2,
            Mode::String => 4,
        }
    }
}

/// A weight-indexed family, materialized up to some weight and q-order.
/// Missing weights are treated as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub name: String,
    pub level: u64,
    pub genus: Option<GenusName>,
    pub forms: BTreeMap<u32, QExp>,
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    name: String,
    level: u64,
    forms: Vec<QExp>,
}

impl Family {
    /// The built-in families: `ochanine` (`G~_k`, level 2), `wsig`
    /// (`2 G_k^(2)`, level 2) and `witten` (`G_k`, level 1).
    pub fn named(name: &str, k_max: u32, q_order: usize) -> Result<Family> {
        let (genus, level) = match name {
            "ochanine" => (GenusName::Ochanine, 2),
            "wsig" => (GenusName::Wsig, 2),
            "witten" => (GenusName::Witten, 1),
            other => {
                return Err(Error::ConfigInvalid(format!(
                    "unknown family {other:?}; expected ochanine, wsig or witten"
                )))
            }
        };
        let mut forms = BTreeMap::new();
        for k in (2..=k_max).step_by(2) {
            let f = match genus {
                GenusName::Ochanine => eisenstein_gtilde(k, q_order)?,
                GenusName::Wsig => deplete(&eisenstein_g(k, q_order)?, 2).scale_int(2),
                _ => eisenstein_g(k, q_order)?,
            };
            forms.insert(k, f);
        }
        Ok(Family {
            name: name.to_string(),
            level,
            genus: Some(genus),
            forms,
        })
    }

    /// Mode the built-in family is meant for.
    pub fn default_mode(&self) -> Mode {
        if self.level == 1 {
            Mode::String
        } else {
            Mode::Spin
        }
    }

    pub fn get(&self, k: u32) -> Option<&QExp> {
        self.forms.get(&k)
    }

    pub fn from_json(s: &str) -> Result<Family> {
        let w: FamilyWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if w.level == 0 {
            return Err(Error::Parse("family level must be positive".into()));
        }
        let mut forms = BTreeMap::new();
        for f in w.forms {
            let k = f.weight;
            if forms.insert(k, f).is_some() {
                return Err(Error::Parse(format!("weight {k} listed twice")));
            }
        }
        Ok(Family {
            name: w.name,
            level: w.level,
            genus: None,
            forms,
        })
    }

    pub fn to_json(&self) -> String {
        let w = FamilyWire {
            name: self.name.clone(),
            level: self.level,
            forms: self.forms.values().cloned().collect(),
        };
        serde_json::to_string(&w).expect("family serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub family: Family,
    pub p: u64,
    pub units: Vec<i64>,
    pub precision: u32,
    pub q_order: usize,
    pub k_max: u32,
    pub mode: Mode,
}

/// Smallest positive `c` generating `(Z/p^2)^x` (for `p = 2`, `3`, which
/// generates `(Z/2^M)^x / {+-1}`).
pub fn default_unit(p: u64) -> i64 {
    if p == 2 {
        return 3;
    }
    let m = Modulus::new(p, 2).expect("prime");
    let order = (p - 1) * p;
    let mut prime_factors = Vec::new();
    let mut n = order;
    let mut d = 2;
    while n > 1 {
        if n.is_multiple_of(d) {
            prime_factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    (2..m.value())
        .find(|&c| c % p != 0 && prime_factors.iter().all(|&f| m.pow(c, order / f) != 1))
        .expect("cyclic group has a generator") as i64
}

/// Lowest weight needed so every even exponent class mod the period of
/// `(Z/p^M)^x` is covered, plus one extra weight as a consistency check.
pub fn default_k_max(p: u64, precision: u32, mode: Mode) -> Result<u32> {
    Ok(mode.start() + exponent_period(p, precision)? as u32)
}

impl VerifyConfig {
    /// Builds a config for a named family with default unit and `K_max`.
    pub fn named(name: &str, p: u64, precision: u32, q_order: usize) -> Result<VerifyConfig> {
        let probe = Family::named(name, 2, 0)?;
        let mode = probe.default_mode();
        let k_max = default_k_max(p, precision, mode)?;
        Ok(VerifyConfig {
            family: Family::named(name, k_max, q_order)?,
            p,
            units: vec![default_unit(p)],
            precision,
            q_order,
            k_max,
            mode,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !is_prime(p) {
            return Err(Error::ConfigInvalid(format!("{p} is not prime")));
        }
        if self.family.level.is_multiple_of(p) {
            return Err(Error::ConfigInvalid(format!(
                "p = {p} divides the level {}",
                self.family.level
            )));
        }
        let lowest = if p == 2 { 4 } else { 2 };
        if self.precision < lowest {
            return Err(Error::ConfigInvalid(format!(
                "precision M must be >= {lowest} for p = {p}"
            )));
        }
        Modulus::new(p, self.precision)?;
        if self.units.is_empty() {
            return Err(Error::ConfigInvalid(
                "at least one unit c is required".into(),
            ));
        }
        for &c in &self.units {
            if c.rem_euclid(p as i64) == 0 {
                return Err(Error::ConfigInvalid(format!(
                    "c = {c} is not a unit mod {p}"
                )));
            }
        }
        let probe = regularized_moments(
            &|_| Ok(QExp::zero(1, 2, 0)),
            1,
            p,
            self.mode.start(),
            self.k_max,
            0,
        )?;
        let missing = missing_exponent_classes(&probe, self.precision)?;
        if !missing.is_empty() {
            return Err(Error::ConfigInvalid(format!(
                "K_max = {} leaves exponent classes {missing:?} mod {} uncovered",
                self.k_max,
                exponent_period(p, self.precision)?
            )));
        }
        for k in (self.mode.start()..=self.k_max).step_by(2) {
            match self.family.get(k) {
                Some(f) if f.q_order() < self.q_order => {
                    return Err(Error::ConfigInvalid(format!(
                        "g_{k} has q-order {}, need {}",
                        f.q_order(),
                        self.q_order
                    )))
                }
                Some(_) => {}
                None => {
                    return Err(Error::ConfigInvalid(format!(
                        "family has no weight-{k} form"
                    )))
                }
            }
        }
        Ok(())
    }

    fn form(&self, k: u32) -> QExp {
        self.family
            .get(k)
            .expect("validated")
            .truncate(self.q_order)
    }

    fn even_weights(&self) -> impl Iterator<Item = u32> {
        (self.mode.start()..=self.k_max).step_by(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub id: String,
    pub title: String,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub family: String,
    pub level: u64,
    pub p: u64,
    pub precision: u32,
    pub q_order: usize,
    pub k_max: u32,
    pub mode: Mode,
    pub units: Vec<i64>,
    pub conditions: Vec<ConditionReport>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn condition(&self, id: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn condition(id: &str, title: &str, pass: bool, details: Value) -> ConditionReport {
    ConditionReport {
        id: id.to_string(),
        title: title.to_string(),
        pass,
        details,
    }
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn check_odd_vanishing(cfg: &VerifyConfig) -> Result<ConditionReport> {
    let nonzero: Vec<u32> = cfg
        .family
        .forms
        .iter()
        .filter(|(k, f)| *k % 2 == 1 && !f.is_zero())
        .map(|(k, _)| *k)
        .collect();
    let mut details = json!({ "nonzero_odd_weights": nonzero });
    let mut pass = nonzero.is_empty();
    if let Some(genus) = cfg.family.genus {
        let u = cfg.k_max.min(12) as usize;
        let q = cfg.q_order.min(8);
        let r = genus.verify(u, q)?;
        pass &= r.pass;
        details["char_series"] = serde_json::to_value(&r).expect("identity report");
        details["genus"] = json!(genus.name());
    }
    Ok(condition("a", "odd-weight vanishing", pass, details))
}

fn check_measures(cfg: &VerifyConfig) -> Result<(ConditionReport, ConditionReport)> {
    let p = cfg.p;
    let lowest = if p == 2 { 3 } else { 2 };
    let family = |k: u32| Ok(cfg.form(k));
    let mut b_runs = Vec::new();
    let mut e_runs = Vec::new();
    let (mut b_pass, mut e_pass) = (true, true);
    for &c in &cfg.units {
        let moments = regularized_moments(&family, c, p, cfg.mode.start(), cfg.k_max, cfg.q_order)?;
        let mut levels = Vec::new();
        let mut top = None;
        let mut previous: Option<crate::measures::FiniteMeasure> = None;
        for level in lowest..=cfg.precision {
            let (ok, entry) = match measure_solve_finite(&moments, level, cfg.q_order) {
                Ok(SolveOutcome::Feasible(mu)) => {
                    let compatible = match &previous {
                        Some(_) => reduce_level(&mu)?.check(&moments)?.is_none(),
                        None => true,
                    };
                    let entry = json!({
                        "level": level,
                        "feasible": true,
                        "classes": class_representatives(p, level)?.len(),
                        "support": mu.support().len(),
                        "compatible_with_previous_level": compatible,
                    });
                    previous = Some(mu.clone());
                    top = Some(mu);
                    (compatible, entry)
                }
                Ok(SolveOutcome::Infeasible(why)) => {
                    top = None;
                    (
                        false,
                        json!({ "level": level, "feasible": false, "violation": why }),
                    )
                }
                Err(Error::NotPIntegral {
                    exponent,
                    q_index,
                    valuation,
                    ..
                }) => {
                    top = None;
                    (
                        false,
                        json!({
                            "level": level,
                            "feasible": false,
                            "not_p_integral": { "exponent": exponent, "q_index": q_index, "valuation": valuation },
                        }),
                    )
                }
                Err(e) => return Err(e),
            };
            b_pass &= ok;
            levels.push(entry);
        }
        b_runs.push(json!({ "c": c, "levels": levels }));

        match top {
            Some(mu) => {
                let target = mass_target(c, p, cfg.precision)?;
                let m = target.modulus();
                let mass = total_mass(&mu);
                let reduced: Vec<u64> = mass.iter().map(|r| r.value() % m.value()).collect();
                let first_bad = reduced
                    .iter()
                    .enumerate()
                    .find(|(n, &v)| v != if *n == 0 { target.value() } else { 0 })
                    .map(|(n, _)| n);
                e_pass &= first_bad.is_none();
                e_runs.push(json!({
                    "c": c,
                    "modulus": m.value(),
                    "mass": reduced.iter().map(u64::to_string).collect::<Vec<_>>(),
                    "target": target.value().to_string(),
                    "first_mismatch": first_bad,
                }));
            }
            None => {
                e_pass = false;
                e_runs.push(json!({ "c": c, "skipped": "no witness at the top level" }));
            }
        }
    }
    Ok((
        condition(
            "b",
            "finite-level measures",
            b_pass,
            json!({ "units": b_runs }),
        ),
        condition("e", "total mass", e_pass, json!({ "units": e_runs })),
    ))
}

fn check_hecke(cfg: &VerifyConfig) -> Result<(ConditionReport, ConditionReport)> {
    let p = cfg.p;
    let mut c_fail = None;
    let mut c2_fail = None;
    let mut identity_fail = None;
    for k in cfg.even_weights() {
        let g = cfg.form(k);
        let eigen =
            pow_rational(&Rational::from_integer(BigInt::from(p)), k as i64 - 1) + Rational::one();
        let t = hecke_t(&g, p)?;
        if c_fail.is_none() {
            if let Some(n) = t.first_mismatch(&g.scale(&eigen)) {
                c_fail = Some(json!({
                    "k": k,
                    "q_index": n,
                    "lhs": format_rational(t.coeff(n)),
                    "rhs": format_rational(&(g.coeff(n) * &eigen)),
                }));
            }
        }
        let h = deplete(&g, p);
        let u = atkin_u(&h, p);
        if c2_fail.is_none() {
            if let Some(n) = u.first_mismatch(&h) {
                c2_fail = Some(json!({
                    "k": k,
                    "q_index": n,
                    "lhs": format_rational(u.coeff(n)),
                    "rhs": format_rational(h.coeff(n)),
                }));
            }
        }
        // (1 - U_p)(1 - psi^p/p) g against (1 - T_p + p^(k-1)) g
        let lhs = h.truncate(u.q_order()).sub(&u);
        let pk1 = &eigen - Rational::one();
        let rhs = g
            .truncate(t.q_order())
            .sub(&t)
            .add(&g.truncate(t.q_order()).scale(&pk1));
        if identity_fail.is_none() {
            if let Some(n) = lhs.first_mismatch(&rhs) {
                identity_fail = Some(json!({ "k": k, "q_index": n }));
            }
        }
    }
    let reliable = cfg.q_order / p as usize;
    let c_pass = c_fail.is_none();
    let c2_pass = c2_fail.is_none() && identity_fail.is_none();
    Ok((
        condition(
            "c",
            "Hecke eigenforms",
            c_pass,
            json!({ "reliable_q_order": reliable, "first_mismatch": c_fail }),
        ),
        condition(
            "c'",
            "Atkin-fixed depletions",
            c2_pass,
            json!({
                "reliable_q_order": reliable,
                "first_mismatch": c2_fail,
                "operator_identity_holds": identity_fail.is_none(),
                "operator_identity_mismatch": identity_fail,
                "agrees_with_c": c_pass == c2_fail.is_none(),
            }),
        ),
    ))
}

fn check_congruence(cfg: &VerifyConfig) -> Result<ConditionReport> {
    let ring = CoefficientRing::invert(cfg.family.level);
    let q = cfg.q_order;
    let g = |k: u32| Ok(cfg.form(k).into_series());
    let reference = |k: u32| match cfg.mode {
        Mode::String => eisenstein_g(k, q).map(QExp::into_series),
        Mode::Spin => eisenstein_gtilde(k, q).map(QExp::into_series),
    };
    let name = match cfg.mode {
        Mode::String => "g_k = G_k",
        Mode::Spin => "g_k = G~_k",
    };
    let r = congruence_check(name, &g, &reference, &ring, cfg.even_weights())?;
    let failures: Vec<&crate::genus::CongruenceVerdict> =
        r.verdicts.iter().filter(|v| !v.pass).collect();
    Ok(condition(
        "d",
        "congruence with Eisenstein series",
        r.pass,
        json!({ "ring": r.ring, "relation": r.name, "weights_checked": r.verdicts.len(), "failures": failures }),
    ))
}

fn level_primes(n: u64) -> Vec<u64> {
    CoefficientRing::invert(n).inverted
}

fn check_weight_two(cfg: &VerifyConfig) -> Result<ConditionReport> {
    let primes = level_primes(cfg.family.level);
    let Some(g2) = cfg.family.get(2).map(|f| f.truncate(cfg.q_order)) else {
        return Ok(condition(
            "weight2",
            "weight-2 classicality",
            false,
            json!({ "missing": "g_2" }),
        ));
    };
    if primes.is_empty() || primes.len() > 2 {
        return Ok(condition(
            "weight2",
            "weight-2 classicality",
            false,
            json!({ "unsupported_level": cfg.family.level }),
        ));
    }
    let basis = eisenstein_basis(2, &primes, cfg.q_order)?;
    let (pass, details) = match classical_membership(&g2, &basis.forms) {
        Membership::Member(x) => (
            true,
            json!({ "basis": basis.labels, "coordinates": strings(&x) }),
        ),
        Membership::NotMember(why) => (false, json!({ "basis": basis.labels, "reason": why })),
    };
    Ok(condition("weight2", "weight-2 classicality", pass, details))
}

fn check_shape(cfg: &VerifyConfig) -> Result<ConditionReport> {
    let u = (cfg.k_max as usize).clamp(6, 12);
    let q = cfg.q_order.min(8);
    Ok(match genus_ochanine(u, q) {
        Ok(o) => condition(
            "shape",
            "Ochanine quartic shape",
            true,
            json!({
                "u_order": u,
                "q_order": q,
                "delta": strings(o.delta.coeffs()),
                "epsilon": strings(o.epsilon.coeffs()),
            }),
        ),
        Err(Error::ShapeViolation { u_index, q_index }) => condition(
            "shape",
            "Ochanine quartic shape",
            false,
            json!({ "u_order": u, "q_order": q, "violation": { "u_index": u_index, "q_index": q_index } }),
        ),
        Err(e) => return Err(e),
    })
}

/// Runs every condition. Configuration problems are errors; mathematical
/// failures are recorded in the report.
pub fn verify_theorem_main(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut conditions = vec![check_odd_vanishing(cfg)?];
    let (b, e) = check_measures(cfg)?;
    conditions.push(b);
    let (c, c2) = check_hecke(cfg)?;
    conditions.push(c);
    conditions.push(c2);
    conditions.push(check_congruence(cfg)?);
    conditions.push(e);
    if cfg.mode == Mode::Spin {
        conditions.push(check_weight_two(cfg)?);
    }
    if cfg.family.genus == Some(GenusName::Ochanine) {
        conditions.push(check_shape(cfg)?);
    }
    let pass = conditions.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema: 1,
        family: cfg.family.name.clone(),
        level: cfg.family.level,
        p: cfg.p,
        precision: cfg.precision,
        q_order: cfg.q_order,
        k_max: cfg.k_max,
        mode: cfg.mode,
        units: cfg.units.clone(),
        conditions,
        pass,
    })
}
