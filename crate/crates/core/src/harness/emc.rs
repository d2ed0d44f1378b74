//! Exactly computable shadows of the equivariant main conjecture: the
//! T-modified Δ-module, association of characteristic series, and
//! multiplicativity of Fitting ideals on block-triangular extensions.
//! Everything here is synthetic or tower data; no class groups enter.

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fitcalc::checks::{random_element, random_gamma_module, random_matrix, random_nonsingular};
use crate::fitcalc::{fit_gamma_module, fit_gamma_module_minors, FiniteModule, IdealHandle, Presentation, RingMatrix};
use crate::grp::{AbGroup, TruncAlgebra, TruncElem};
use crate::iwasawa::{associated_check, AdmissibleQuotient};
use crate::lfun::tower::exponent_precision;
use crate::lfun::{t_prime_data, AbelianField};
use crate::motive::delta_module;
use crate::verdict::Verdict;

use super::report::CheckReport;

pub const STATEMENT: &str = "Fit(T_p(M_{S,T})^-) = (Theta_{S,T}^(inf)), on constructible instances: \
Fit(Delta-module) = (delta_T^(inf)); association of characteristic series matches ideal equality; \
Fit(extension) = Fit(sub)·Fit(quotient) for square nonsingular pieces";

#[derive(Debug, Clone, PartialEq)]
pub struct EmcConfig {
    pub p: u64,
    pub n_prec: u32,
    pub t_prec: usize,
    /// Conductor of the base field K; the tower is over K(μ_p).
    pub conductor: u64,
    /// Every nonempty subset of these primes is a T.
    pub t_primes: Vec<u64>,
    pub samples: usize,
    pub max_rank: usize,
    pub seed: u64,
}

impl Default for EmcConfig {
    fn default() -> Self {
        EmcConfig { p: 3, n_prec: 5, t_prec: 8, conductor: 4, t_primes: vec![5, 7, 11], samples: 20, max_rank: 3, seed: 2024 }
    }
}

impl EmcConfig {
    /// Missing keys fall back to the defaults.
    pub fn from_json(value: &Value) -> Result<Self> {
        let base = EmcConfig::default();
        let int = |key: &str, default: u64| -> Result<u64> {
            match value.get(key) {
                None | Some(Value::Null) => Ok(default),
                Some(v) => v.as_u64().ok_or_else(|| Error::Schema(format!("\"{key}\" must be a nonnegative integer"))),
            }
        };
        let t_primes = match value.get("T") {
            None | Some(Value::Null) => base.t_primes.clone(),
            Some(v) => serde_json::from_value(v.clone()).map_err(|_| Error::Schema("\"T\" must be a list of primes".into()))?,
        };
        Ok(EmcConfig {
            p: int("p", base.p)?,
            n_prec: int("N", u64::from(base.n_prec))? as u32,
            t_prec: int("M", base.t_prec as u64)? as usize,
            conductor: int("conductor", base.conductor)?,
            t_primes,
            samples: int("samples", base.samples as u64)? as usize,
            max_rank: int("max_rank", base.max_rank as u64)? as usize,
            seed: int("seed", base.seed)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "N": self.n_prec,
            "M": self.t_prec,
            "conductor": self.conductor,
            "T": self.t_primes,
            "samples": self.samples,
            "max_rank": self.max_rank,
            "seed": self.seed,
        })
    }
}

/// Nonempty subsets in order of size, then lexicographically.
fn subsets(primes: &[u64]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = (1..1u32 << primes.len())
        .map(|mask| primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect();
    out.sort_by(|a: &Vec<u64>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Part (a): Fit(⊕_v Λ/(δ_v)) = (δ_T^{(∞)}) for every T.
pub fn delta_part(config: &EmcConfig) -> Result<(bool, Value)> {
    let field = AbelianField::cyclotomic(config.conductor)?.with_mu_p(config.p)?;
    let alg = TruncAlgebra::series(config.p, config.n_prec, field.group(), config.t_prec)?;
    let prec = exponent_precision(config.p, config.n_prec, config.t_prec);
    let mut all = true;
    let mut rows = Vec::new();
    for t in subsets(&config.t_primes) {
        let data = t_prime_data(&field, &t, config.p, prec)?;
        let module = delta_module(&alg, &data)?;
        let holds = module.fitting_matches_delta()?;
        all &= holds;
        rows.push(json!({ "T": t, "holds": holds }));
    }
    Ok((all, json!({ "field": field.to_json(), "instances": rows })))
}

fn random_unit(rng: &mut StdRng, alg: &Arc<TruncAlgebra>) -> TruncElem {
    let small = random_element(rng, alg, 4).scale(alg.p());
    let tail = random_element(rng, alg, 4).mul(&TruncElem::t(alg));
    TruncElem::one(alg).add(&small).add(&tail)
}

/// Part (b): for synthetic Γ-modules with Fit = (F), associated_check against
/// unit·F and (t+p)·F reproduces the verdicts of canonical ideal equality.
pub fn association_part(config: &EmcConfig, rng: &mut StdRng) -> Result<(bool, Value)> {
    let group = AbGroup::new(vec![2], Some(vec![1]))?;
    let base = TruncAlgebra::group_ring(config.p, config.n_prec, &group)?;
    let t_prec = config.t_prec.max(config.max_rank + 2);
    let series = base.with_t_prec(t_prec)?;
    let quotient = AdmissibleQuotient::minus(config.p, &group)?;
    let t_plus_p = TruncElem::t(&series).add(&TruncElem::from_int(&series, config.p as i64));
    let mut all = true;
    let mut mismatches = Vec::new();
    for sample in 0..config.samples {
        let rank = rng.gen_range(1..=config.max_rank.max(1));
        let module = random_gamma_module(rng, &base, rank);
        let fit = fit_gamma_module(&module, t_prec)?;
        let minors_agree = fit.equals(&fit_gamma_module_minors(&module, t_prec)?)?;
        let series_f = module.gamma_series(t_prec)?;
        let scaled = random_unit(rng, &series).mul(&series_f);
        let shifted = t_plus_p.mul(&series_f);
        let unit_assoc = associated_check(&series_f, &scaled, &quotient)?;
        let unit_equal = minus_ideal(&quotient, &series_f)?.equals(&minus_ideal(&quotient, &scaled)?)?;
        let shift_assoc = associated_check(&series_f, &shifted, &quotient)?;
        let shift_equal = minus_ideal(&quotient, &series_f)?.equals(&minus_ideal(&quotient, &shifted)?)?;
        let ok = minors_agree && unit_assoc && unit_equal && !shift_assoc && !shift_equal;
        if !ok {
            all = false;
            mismatches.push(json!({
                "sample": sample,
                "rank": rank,
                "minors_agree": minors_agree,
                "unit": [unit_assoc, unit_equal],
                "t_plus_p": [shift_assoc, shift_equal],
            }));
        }
    }
    Ok((all, json!({ "samples": config.samples, "t_prec": t_prec, "mismatches": mismatches })))
}

/// (e·x) in the quotient cut out by the idempotent e.
fn minus_ideal(quotient: &AdmissibleQuotient, x: &TruncElem) -> Result<IdealHandle> {
    Ok(IdealHandle::principal(&quotient.idempotent(x.alg())?.mul(x)))
}

/// [[P₁, X], [0, P₂]] presents an extension of coker P₂ by coker P₁.
fn block_triangular(alg: &Arc<TruncAlgebra>, top: &RingMatrix, glue: &RingMatrix, bottom: &RingMatrix) -> RingMatrix {
    let (m1, m2) = (top.len(), bottom.len());
    let mut out = vec![vec![TruncElem::zero(alg); m1 + m2]; m1 + m2];
    for i in 0..m1 {
        for k in 0..m1 {
            out[i][k] = top[i][k].clone();
        }
        for k in 0..m2 {
            out[i][m1 + k] = glue[i][k].clone();
        }
    }
    for i in 0..m2 {
        for k in 0..m2 {
            out[m1 + i][m1 + k] = bottom[i][k].clone();
        }
    }
    out
}

/// Part (c): Fit(total) = Fit(sub)·Fit(quotient) on block-triangular square
/// nonsingular presentations, with orders multiplying, and Fit(0) = (1).
pub fn extension_part(config: &EmcConfig, rng: &mut StdRng) -> Result<(bool, Value)> {
    let group = AbGroup::new(vec![2], Some(vec![1]))?;
    let alg = TruncAlgebra::group_ring(config.p, config.n_prec, &group)?;
    let max = config.max_rank.max(1);
    let mut all = true;
    let mut mismatches = Vec::new();
    for sample in 0..config.samples {
        let m1 = rng.gen_range(1..=max);
        let m2 = rng.gen_range(1..=max);
        let top = random_nonsingular(rng, &alg, m1, 2);
        let bottom = random_nonsingular(rng, &alg, m2, 2);
        let glue = random_matrix(rng, &alg, m1, m2, 3);
        let sub = Presentation::from_matrix(&alg, top.clone())?;
        let quot = Presentation::from_matrix(&alg, bottom.clone())?;
        let total = Presentation::from_matrix(&alg, block_triangular(&alg, &top, &glue, &bottom))?;
        let product = sub.fitting_ideal()?.product(&quot.fitting_ideal()?)?;
        let fit_holds = total.fitting_ideal()?.equals(&product)?;
        let orders = FiniteModule::from_presentation(&total).log_order()
            == FiniteModule::from_presentation(&sub).log_order() + FiniteModule::from_presentation(&quot).log_order();
        if !(fit_holds && orders) {
            all = false;
            mismatches.push(json!({ "sample": sample, "sizes": [m1, m2], "fitting": fit_holds, "orders": orders }));
        }
    }
    let zero = Presentation::free(&alg, 0).fitting_ideal()?.is_unit_ideal();
    Ok((all && zero, json!({ "samples": config.samples, "zero_module_unit_ideal": zero, "mismatches": mismatches })))
}

pub fn emc_shape_suite(config: &EmcConfig) -> Result<CheckReport> {
    let mut report = CheckReport::new("emc-shape", STATEMENT, config.to_json());
    report.hypothesis("synthetic scope", true, "constructible instances only; no class-group input");
    let mut rng = StdRng::seed_from_u64(config.seed);
    let (delta, delta_cert) = delta_part(config)?;
    report.certificate("delta_module", delta_cert);
    report.verdict("delta_module", Verdict::from_bool(delta));
    let (assoc, assoc_cert) = association_part(config, &mut rng)?;
    report.certificate("association", assoc_cert);
    report.verdict("association", Verdict::from_bool(assoc));
    let (ext, ext_cert) = extension_part(config, &mut rng)?;
    report.certificate("extension", ext_cert);
    report.verdict("extension", Verdict::from_bool(ext));
    Ok(report)
}
