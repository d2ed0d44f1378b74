//! Θ_{S,T}(0) against the minus part of a class-group fixture: annihilation
//! of A⁻ and membership in Fit((A⁻)^∨) for the covariant dual.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::coeff::make_coeff_ring;
use crate::error::{Error, Result};
use crate::grp::{enumerate_characters, AbGroup, TruncAlgebra, TruncElem};
use crate::lfun::theta::{check_s, check_t, rational_group_ring_json};
use crate::lfun::{theta_st, AbelianField};
use crate::verdict::Verdict;

use super::fixture::ClassModuleFixture;
use super::report::CheckReport;

pub const STATEMENT: &str =
    "Theta_{S,T}(0) annihilates A_{K,T}^- and lies in Fit_{Zp[G]}((A_{K,T}^-)^dual) (covariant dual)";

/// Hypothesis on T: two distinct primes, or a prime not dividing w_K.
fn t_shape(t: &[u64], w: u64) -> (bool, String) {
    if t.iter().any(|&a| t.iter().any(|&b| a != b)) {
        return (true, "T contains two primes of distinct residue characteristic".into());
    }
    match t.iter().find(|&&v| w % v != 0) {
        Some(v) => (true, format!("{v} ∈ T is prime to w_K = {w}")),
        None => (false, format!("every prime of T divides w_K = {w}")),
    }
}

pub fn brumer_stark_check(
    field: &AbelianField,
    s_primes: &[u64],
    t_primes: &[u64],
    p: u64,
    fixture: &ClassModuleFixture,
) -> Result<CheckReport> {
    if fixture.p != p {
        return Err(Error::InvalidArgument(format!("fixture is for p = {}, not {p}", fixture.p)));
    }
    if fixture.field.conductor() != field.conductor() || fixture.field.kernel() != field.kernel() {
        return Err(Error::InvalidArgument("fixture belongs to a different field".into()));
    }
    let parameters = json!({
        "field": field.to_json(),
        "S": s_primes,
        "T": t_primes,
        "p": p,
        "N": fixture.presentation.alg().n(),
        "fixture": fixture.label,
    });
    let mut report = CheckReport::new("brumer-stark", STATEMENT, parameters);
    let s = check_s(field, s_primes);
    report.hypothesis("S contains the ramified primes", s.is_ok(), s.as_ref().err().map_or(String::new(), |e| e.to_string()));
    let t = s.as_ref().ok().map(|s| check_t(field, s, t_primes));
    let t_ok = matches!(t, Some(Ok(_)));
    let t_detail = match &t {
        Some(Err(e)) => e.to_string(),
        _ => String::new(),
    };
    report.hypothesis("T is disjoint from S and unramified", t_ok, t_detail);
    let w = field.twisted_invariant_order(1);
    let (shape, shape_detail) = t_shape(t_primes, w);
    report.hypothesis("T is large enough", shape, shape_detail);
    let s_p = s_primes.contains(&p);
    report.hypothesis(
        "S contains the primes above p",
        s_p,
        if s_p { "recorded".to_string() } else { format!("{p} ∉ S; recorded only, the verdicts are still evaluated") },
    );
    if !(s.is_ok() && t_ok && shape) {
        report.verdict("annihilation", Verdict::NotApplicable);
        report.verdict("fitting_membership", Verdict::NotApplicable);
        return Ok(report);
    }
    let (Ok(s), Some(Ok(t))) = (s, t) else { unreachable!("hypotheses checked above") };
    let theta = theta_st(field, &s, &t, 1)?;
    report.certificate("theta", rational_group_ring_json(&theta.elem));
    let alg = fixture.presentation.alg();
    let Ok(element) = TruncElem::from_rational_group_ring(alg, &theta.elem) else {
        report.certificate("failure", Value::String(format!("Θ_{{S,T}}(0) is not {p}-integral")));
        report.verdict("annihilation", Verdict::Fail);
        report.verdict("fitting_membership", Verdict::Fail);
        return Ok(report);
    };
    let module = fixture.module();
    report.verdict("annihilation", Verdict::from_bool(module.is_killed_by(&element)));
    let dual = module.dual(true)?;
    let fit = dual.fitting_ideal()?;
    let certificate = fit.membership_certificate(&element)?;
    report.certificate("fitting_ideal", fit.to_json());
    report.certificate(
        "membership",
        match &certificate {
            Some(c) => json!({ "coefficients": c.iter().map(|x| alg.zp().signed(*x).to_string()).collect::<Vec<_>>() }),
            None => Value::Null,
        },
    );
    report.certificate("minus_characters", minus_character_images(alg, &element)?);
    report.verdict("fitting_membership", Verdict::from_bool(certificate.is_some()));
    Ok(report)
}

/// χ(Θ) mod p^N for the odd characters of G, as signed digit strings in the
/// integral power basis.
fn minus_character_images(alg: &Arc<TruncAlgebra>, x: &TruncElem) -> Result<Value> {
    let Some(j) = alg.group.j_index() else { return Ok(Value::Null) };
    let exponent = alg.group.exponent();
    let coeff = make_coeff_ring(alg.p(), alg.n(), exponent)?;
    let target = TruncAlgebra::new(&coeff, &AbGroup::trivial(), 1)?;
    let mut out = Vec::new();
    for chi in enumerate_characters(&alg.group) {
        if chi.value_exponent_idx(j) == 0 {
            continue;
        }
        let image = x.apply_character(&chi, &target)?;
        out.push(json!({ "character": chi.exps(), "value": image.to_json() }));
    }
    Ok(Value::Array(out))
}
