//! Parameter-driven batteries (integrality, twist identity) and dispatch of
//! parsed fixtures to their checks.

use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::lfun::theta::{apply_delta_t, assess_integrality, check_t, theta_s};
use crate::lfun::{delta_twist_identity, enumerate_fields, AbelianField};
use crate::verdict::Verdict;

use super::brumer_stark::brumer_stark_check;
use super::coates_sinnott::coates_sinnott_check;
use super::emc::{emc_shape_suite, EmcConfig};
use super::fixture::Fixture;
use super::report::CheckReport;

fn int_list(value: &Value, key: &str, default: &[u64]) -> Result<Vec<u64>> {
    match value.get(key) {
        None | Some(Value::Null) => Ok(default.to_vec()),
        Some(v) => serde_json::from_value(v.clone()).map_err(|_| Error::Schema(format!("\"{key}\" must be a list of integers"))),
    }
}

fn int_field(value: &Value, key: &str, default: u64) -> Result<u64> {
    match value.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v.as_u64().ok_or_else(|| Error::Schema(format!("\"{key}\" must be a nonnegative integer"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityConfig {
    /// Every abelian field of conductor at most this bound.
    pub max_conductor: u64,
    pub m_values: Vec<u64>,
    pub primes: Vec<u64>,
    /// T runs over singletons and pairs of primes up to this bound.
    pub t_bound: u64,
}

impl Default for IntegralityConfig {
    fn default() -> Self {
        IntegralityConfig { max_conductor: 40, m_values: vec![1, 2, 3, 4], primes: vec![3, 5, 7], t_bound: 13 }
    }
}

impl IntegralityConfig {
    pub fn from_json(value: &Value) -> Result<Self> {
        let base = IntegralityConfig::default();
        Ok(IntegralityConfig {
            max_conductor: int_field(value, "max_conductor", base.max_conductor)?,
            m_values: int_list(value, "m", &base.m_values)?,
            primes: int_list(value, "p", &base.primes)?,
            t_bound: int_field(value, "T_bound", base.t_bound)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "max_conductor": self.max_conductor, "m": self.m_values, "p": self.primes, "T_bound": self.t_bound })
    }
}

/// The admissible T for a field: singletons and pairs of unramified primes
/// up to the bound, outside S.
fn t_sets(field: &AbelianField, s: &[u64], bound: u64) -> Vec<Vec<u64>> {
    let pool: Vec<u64> = (2..=bound).filter(|&l| is_prime(l) && check_t(field, s, &[l]).is_ok()).collect();
    let mut out: Vec<Vec<u64>> = pool.iter().map(|&l| vec![l]).collect();
    for (i, &a) in pool.iter().enumerate() {
        for &b in &pool[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out
}

/// δ_T(1−m)·Θ_S(1−m) ∈ Z_(p)[G] over a battery of fields, m, p and T, with
/// S the ramified primes.
pub fn integrality_battery(config: &IntegralityConfig) -> Result<CheckReport> {
    if let Some(&bad) = config.primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidPrime(bad));
    }
    let mut report = CheckReport::new(
        "integrality",
        "delta_T(1-m)·Theta_S(1-m) lies in Z_(p)[G]; in Z[G] when T has two distinct primes",
        config.to_json(),
    );
    let (mut fields, mut instances, mut passes, mut skipped) = (0usize, 0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    for field in enumerate_fields(config.max_conductor) {
        fields += 1;
        let s = field.ramified_primes();
        let battery = t_sets(&field, &s, config.t_bound);
        for &m in &config.m_values {
            let theta = theta_s(&field, &s, m as u32)?;
            for t in &battery {
                let element = apply_delta_t(&field, &theta, t)?;
                for &p in &config.primes {
                    instances += 1;
                    let outcome = assess_integrality(&field, element.clone(), p);
                    match outcome.verdict {
                        Verdict::Pass => passes += 1,
                        Verdict::NotApplicable => skipped += 1,
                        Verdict::Fail => failures.push(json!({
                            "field": field.to_json(),
                            "m": m,
                            "p": p,
                            "T": t,
                            "report": outcome.to_json(),
                        })),
                    }
                }
            }
        }
    }
    report.hypothesis("T avoids S and the primes above p are handled per instance", true, format!("{skipped} instances not applicable"));
    report.certificate(
        "counts",
        json!({ "fields": fields, "instances": instances, "passes": passes, "not_applicable": skipped, "failures": failures.len() }),
    );
    report.certificate("failures", Value::Array(failures.clone()));
    report.verdict("integrality", if instances == skipped { Verdict::NotApplicable } else { Verdict::from_bool(failures.is_empty()) });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistConfig {
    /// Conductors of the base fields K = Q(ζ_f); the towers are over K(μ_p).
    pub conductors: Vec<u64>,
    pub p: u64,
    pub m_values: Vec<u64>,
    pub n_prec: u32,
    pub t_prec: usize,
    /// T-set; by default the two smallest primes prime to p·f.
    pub t_primes: Option<Vec<u64>>,
}

impl Default for TwistConfig {
    fn default() -> Self {
        TwistConfig { conductors: vec![4, 5], p: 3, m_values: vec![1, 2, 3], n_prec: 5, t_prec: 8, t_primes: None }
    }
}

impl TwistConfig {
    pub fn from_json(value: &Value) -> Result<Self> {
        let base = TwistConfig::default();
        let t_primes = match value.get("T") {
            None | Some(Value::Null) => None,
            Some(v) => Some(serde_json::from_value(v.clone()).map_err(|_| Error::Schema("\"T\" must be a list of primes".into()))?),
        };
        Ok(TwistConfig {
            conductors: int_list(value, "conductors", &base.conductors)?,
            p: int_field(value, "p", base.p)?,
            m_values: int_list(value, "m", &base.m_values)?,
            n_prec: int_field(value, "N", u64::from(base.n_prec))? as u32,
            t_prec: int_field(value, "M", base.t_prec as u64)? as usize,
            t_primes,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conductors": self.conductors,
            "p": self.p,
            "m": self.m_values,
            "N": self.n_prec,
            "M": self.t_prec,
            "T": self.t_primes,
        })
    }
}

fn default_t(conductor: u64, p: u64) -> Vec<u64> {
    (2..).filter(|&l| is_prime(l) && l != p && conductor % l != 0).take(2).collect()
}

/// δ_T^{(∞)}(1−m) = t_{1−m}(δ_T^{(∞)}(0)) on each tower at truncation (N, M).
pub fn twist_check(config: &TwistConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "twist",
        "delta_T^(inf)(1-m) = t_{1-m}(delta_T^(inf)(0)) in Zp[G][[t]] modulo (p^N, t^M)",
        config.to_json(),
    );
    report.hypothesis("p is an odd prime", config.p > 2 && is_prime(config.p), format!("p = {}", config.p));
    if config.p < 3 || !is_prime(config.p) {
        report.verdict("delta_twist", Verdict::NotApplicable);
        return Ok(report);
    }
    let mut rows = Vec::new();
    let mut all = true;
    for &f in &config.conductors {
        let field = AbelianField::cyclotomic(f)?.with_mu_p(config.p)?;
        let t = config.t_primes.clone().unwrap_or_else(|| default_t(field.conductor(), config.p));
        for &m in &config.m_values {
            let holds = delta_twist_identity(&field, &t, config.p, config.n_prec, config.t_prec, m as u32)?;
            all &= holds;
            rows.push(json!({ "conductor": field.conductor(), "T": t, "m": m, "holds": holds }));
        }
    }
    report.certificate("instances", Value::Array(rows));
    report.verdict("delta_twist", Verdict::from_bool(all));
    Ok(report)
}

/// Runs the check a fixture describes. Class-module fixtures need S and T.
pub fn run_fixture(fixture: &Fixture) -> Result<CheckReport> {
    match fixture {
        Fixture::ClassModule(f) => {
            let s = f.s_primes.clone().ok_or_else(|| Error::Schema("a class-module fixture needs \"S\"".into()))?;
            let t = f.t_primes.clone().ok_or_else(|| Error::Schema("a class-module fixture needs \"T\"".into()))?;
            brumer_stark_check(&f.field, &s, &t, f.p, f)
        }
        Fixture::Cohomology(f) => {
            let s = f.s_primes.clone().unwrap_or_else(|| f.field.ramified_primes());
            coates_sinnott_check(&f.field, &s, f.p, f)
        }
        Fixture::Parameters { kind, value } => match kind.as_str() {
            "integrality" => integrality_battery(&IntegralityConfig::from_json(value)?),
            "twist" => twist_check(&TwistConfig::from_json(value)?),
            "emc_shape" => emc_shape_suite(&EmcConfig::from_json(value)?),
            other => Err(Error::Schema(format!("unknown fixture kind \"{other}\""))),
        },
    }
}
