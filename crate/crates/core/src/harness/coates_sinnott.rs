//! Θ_S(1−n) against the second étale cohomology of a fixture: the left ideal
//! generated by δ_T(1−n)·Θ_S(1−n) over a battery of T, against e_n·Fit(H²).

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::fitcalc::matrix::invert_element;
use crate::fitcalc::presentation::elem_to_json;
use crate::fitcalc::{FiniteModule, IdealHandle};
use crate::grp::{TruncAlgebra, TruncElem};
use crate::lfun::theta::{check_s, check_t, e_n, rational_group_ring_json};
use crate::lfun::{theta_st, AbelianField};
use crate::verdict::Verdict;

use super::fixture::CohFixture;
use super::report::CheckReport;

pub const STATEMENT: &str =
    "Ann(H^1_tors)·Theta_S(1-n) is contained in Ann(H^2) and equals e_n·Fit_{Zp[G]}(H^2(O_{K,S}[1/p], Zp(n)))";

/// Largest prime used by the default battery of singleton T-sets.
pub const DEFAULT_BATTERY_BOUND: u64 = 20;

/// Singleton T = {ℓ} for the primes ℓ ≤ DEFAULT_BATTERY_BOUND outside S ∪ {p}.
pub fn default_battery(field: &AbelianField, s_primes: &[u64], p: u64) -> Vec<Vec<u64>> {
    (2..=DEFAULT_BATTERY_BOUND)
        .filter(|&ell| is_prime(ell) && ell != p && !s_primes.contains(&ell))
        .filter(|&ell| check_t(field, s_primes, &[ell]).is_ok())
        .map(|ell| vec![ell])
        .collect()
}

pub fn coates_sinnott_check(field: &AbelianField, s_primes: &[u64], p: u64, fixture: &CohFixture) -> Result<CheckReport> {
    if fixture.p != p {
        return Err(Error::InvalidArgument(format!("fixture is for p = {}, not {p}", fixture.p)));
    }
    if fixture.field.conductor() != field.conductor() || fixture.field.kernel() != field.kernel() {
        return Err(Error::InvalidArgument("fixture belongs to a different field".into()));
    }
    let n = fixture.n;
    let alg = fixture.h2.alg().clone();
    let s = check_s(field, s_primes);
    let battery = match &s {
        Ok(s) if fixture.t_battery.is_empty() => default_battery(field, s, p),
        _ => fixture.t_battery.clone(),
    };
    let parameters = json!({
        "field": field.to_json(),
        "S": s_primes,
        "p": p,
        "n": n,
        "N": alg.n(),
        "T_battery": battery,
        "fixture": fixture.label,
    });
    let mut report = CheckReport::new("coates-sinnott", STATEMENT, parameters);
    report.hypothesis("n is at least 2", n >= 2, format!("n = {n}"));
    report.hypothesis("S contains the ramified primes", s.is_ok(), s.as_ref().err().map_or(String::new(), |e| e.to_string()));
    let bad_t: Vec<String> = match &s {
        Ok(s) => battery.iter().filter_map(|t| check_t(field, s, t).err().map(|e| e.to_string())).collect(),
        Err(_) => vec![],
    };
    report.hypothesis("every T in the battery is disjoint from S and unramified", bad_t.is_empty(), bad_t.join("; "));
    report.hypothesis("the battery is nonempty", !battery.is_empty(), format!("{} sets", battery.len()));
    let s = match s {
        Ok(s) if n >= 2 && bad_t.is_empty() && !battery.is_empty() => s,
        _ => {
            for name in ["containment", "equality", "euler_factor_unit"] {
                report.verdict(name, Verdict::NotApplicable);
            }
            return Ok(report);
        }
    };

    let mut generators = Vec::with_capacity(battery.len());
    let mut elements = Vec::with_capacity(battery.len());
    let mut non_integral = Vec::new();
    for t in &battery {
        let theta = theta_st(field, &s, t, n)?;
        elements.push(json!({ "T": t, "element": rational_group_ring_json(&theta.elem) }));
        match TruncElem::from_rational_group_ring(&alg, &theta.elem) {
            Ok(x) => generators.push(x),
            Err(_) => non_integral.push(t.clone()),
        }
    }
    report.certificate("generators", Value::Array(elements));
    let h2 = FiniteModule::from_presentation(&fixture.h2);
    let fit = fixture.h2.fitting_ideal()?;
    let idempotent = TruncElem::from_rational_group_ring(&alg, &e_n(&alg.group, n))
        .map_err(|_| Error::Inconsistent("e_n is not p-integral".into()))?;
    let target = IdealHandle::from_generators(&alg, fit.generators().iter().map(|g| idempotent.mul(g)).collect())?;
    report.certificate("e_n_fitting", target.to_json());
    if !non_integral.is_empty() {
        report.certificate("non_integral", json!(non_integral));
        report.verdict("containment", Verdict::Fail);
        report.verdict("equality", Verdict::Fail);
    } else {
        let left = IdealHandle::from_generators(&alg, generators.clone())?;
        report.certificate("left_ideal", left.to_json());
        let killers: Vec<bool> = generators.iter().map(|g| h2.is_killed_by(g)).collect();
        let survivors: Vec<Value> = generators
            .iter()
            .zip(&battery)
            .zip(&killers)
            .filter(|(_, &k)| !k)
            .map(|((g, t), _)| json!({ "T": t, "element": elem_to_json(g) }))
            .collect();
        if !survivors.is_empty() {
            report.certificate("non_annihilating", Value::Array(survivors));
        }
        report.verdict("containment", Verdict::from_bool(killers.iter().all(|&k| k)));
        report.verdict("equality", Verdict::from_bool(left.equals(&target)?));
    }

    let (applicable, unit, detail) = euler_factor_unit(field, &alg, p, n)?;
    report.certificate("euler_factor", Value::String(detail));
    report.verdict("euler_factor_unit", Verdict::guarded(applicable, unit));
    Ok(report)
}

/// 1 − σ_p^{-1}·p^n is invertible in Z/p^N[G] whenever p is unramified.
fn euler_factor_unit(field: &AbelianField, alg: &Arc<TruncAlgebra>, p: u64, n: u32) -> Result<(bool, bool, String)> {
    if field.conductor() % p == 0 {
        return Ok((false, false, format!("{p} ramifies; no Frobenius at p")));
    }
    let sigma = field.frobenius(p)?;
    let inverse = alg.group.neg_idx(sigma);
    let pn = TruncElem::from_int(alg, p.pow(n) as i64);
    let factor = TruncElem::one(alg).sub(&TruncElem::group_element(alg, inverse).mul(&pn));
    let unit = invert_element(&factor).is_ok();
    Ok((true, unit, format!("1 - sigma_{p}^(-1)·{p}^{n}: {}", if unit { "unit" } else { "not a unit" })))
}
