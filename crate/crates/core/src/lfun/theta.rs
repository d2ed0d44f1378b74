//! Θ_S(1−m), δ_T(1−m) and Θ_{S,T}(1−m) in Q[G] for abelian K/Q, with the
//! Deligne–Ribet integrality check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{binomial_big, gcd, is_prime, prime_divisors, vp_rational};
use crate::error::{Error, Result};
use crate::grp::{enumerate_characters, AbGroup, CycloRational, GroupRingElem};
use crate::verdict::Verdict;

use super::bernoulli::{bernoulli_numbers, l_value_s, DirichletCharacter};
use super::field::AbelianField;

/// Above this group order Θ_S is computed by partial zeta values only.
pub const CHARACTER_ROUTE_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LValueElement {
    pub conductor: u64,
    pub s_primes: Vec<u64>,
    pub t_primes: Vec<u64>,
    pub m: u32,
    pub level: Option<u32>,
    pub elem: GroupRingElem<BigRational>,
}

pub fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

pub fn rational_group_ring_json(x: &GroupRingElem<BigRational>) -> Value {
    x.to_json_with(|c| Value::String(rational_string(c)))
}

impl LValueElement {
    pub fn group(&self) -> &AbGroup {
        self.elem.group()
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.elem.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conductor": self.conductor,
            "S": self.s_primes,
            "T": self.t_primes,
            "m": self.m,
            "level": self.level,
            "element": rational_group_ring_json(&self.elem),
        })
    }
}

fn sorted_primes(list: &[u64]) -> Result<Vec<u64>> {
    let mut out = list.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&ell| !is_prime(ell)) {
        return Err(Error::InvalidArgument(format!("{bad} is not a prime")));
    }
    Ok(out)
}

/// The finite places of S, which must contain every ramified prime.
pub fn check_s(field: &AbelianField, s_primes: &[u64]) -> Result<Vec<u64>> {
    let s = sorted_primes(s_primes)?;
    for ell in field.ramified_primes() {
        if !s.contains(&ell) {
            return Err(Error::Hypothesis(format!("S misses the ramified prime {ell}")));
        }
    }
    Ok(s)
}

/// T must be disjoint from S; unramified primes only.
pub fn check_t(field: &AbelianField, s_primes: &[u64], t_primes: &[u64]) -> Result<Vec<u64>> {
    let t = sorted_primes(t_primes)?;
    let ramified = field.ramified_primes();
    for &ell in &t {
        if s_primes.contains(&ell) {
            return Err(Error::Hypothesis(format!("{ell} lies in both S and T")));
        }
        if ramified.contains(&ell) {
            return Err(Error::Hypothesis(format!("{ell} ramifies in K")));
        }
    }
    Ok(t)
}

/// ζ_S(1−m, σ) for every σ ∈ G, from power sums over residues b mod F with
/// F = f·∏_{ℓ ∈ S, ℓ ∤ f}ℓ:
/// ζ_S(1−m, σ) = −1/(mF) Σ_k C(m,k) B_k F^k Σ_{b ↦ σ} b^{m−k}.
pub fn partial_zeta_values(field: &AbelianField, s_primes: &[u64], m: u32) -> Result<Vec<BigRational>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let s = check_s(field, s_primes)?;
    let base = if prime_divisors(field.conductor()).iter().all(|ell| s.contains(ell)) {
        field.clone()
    } else {
        field.primitive()
    };
    let f = base.conductor();
    let big_f = s.iter().filter(|&&ell| f % ell != 0).fold(f, |acc, &ell| acc * ell);
    let order = base.degree();
    let mdeg = m as usize;
    let mut sums = vec![vec![BigInt::zero(); mdeg + 1]; order];
    for b in 1..=big_f {
        if gcd(b, big_f) != 1 {
            continue;
        }
        let sigma = base.artin((b % f) as i64).expect("unit");
        let bb = BigInt::from(b);
        let mut power = BigInt::one();
        for slot in sums[sigma].iter_mut() {
            *slot += &power;
            power *= &bb;
        }
    }
    let numbers = bernoulli_numbers(mdeg);
    let fbig = BigInt::from(big_f);
    let scale = BigRational::new(BigInt::from(-1), BigInt::from(m) * &fbig);
    let out = sums
        .iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for k in 0..=mdeg {
                let weight = BigRational::from_integer(binomial_big(m as u64, k as u64) * fbig.pow(k as u32));
                acc += weight * &numbers[k] * BigRational::from_integer(row[mdeg - k].clone());
            }
            acc * &scale
        })
        .collect();
    Ok(out)
}

/// Θ_S(1−m) = Σ_σ ζ_S(1−m, σ)·σ^{-1}.
pub fn theta_s_by_partial_zeta(field: &AbelianField, s_primes: &[u64], m: u32) -> Result<GroupRingElem<BigRational>> {
    let values = partial_zeta_values(field, s_primes, m)?;
    let group = field.group();
    let mut coeffs = vec![BigRational::zero(); group.order()];
    for (sigma, value) in values.into_iter().enumerate() {
        coeffs[group.neg_idx(sigma)] = value;
    }
    GroupRingElem::from_coeffs(group, coeffs)
}

/// Θ_S(1−m) = Σ_χ L_S(χ^{-1}, 1−m)·e_χ, certified to lie in Q[G].
pub fn theta_s_by_characters(field: &AbelianField, s_primes: &[u64], m: u32) -> Result<GroupRingElem<BigRational>> {
    let s = check_s(field, s_primes)?;
    let group = field.group();
    let big = group.exponent();
    let size = group.order();
    let mut buckets = vec![vec![BigRational::zero(); big as usize]; size];
    for chi in enumerate_characters(group) {
        let dc = DirichletCharacter::from_field(field, &chi.inverse());
        let value = l_value_s(&dc, m, &s)?;
        if value.is_zero() {
            continue;
        }
        let lifted = value.embed(big)?.to_bucket();
        for (g, bucket) in buckets.iter_mut().enumerate() {
            // coefficient of g in e_χ is χ(g)^{-1}/|G|
            let shift = (big - chi.value_exponent_idx(g)) % big;
            for (i, c) in lifted.iter().enumerate() {
                if !c.is_zero() {
                    bucket[(i as u64 + shift) as usize % big as usize] += c;
                }
            }
        }
    }
    let inv = BigRational::new(BigInt::one(), BigInt::from(size));
    let coeffs = buckets
        .iter()
        .map(|bucket| {
            CycloRational::from_bucket(big, bucket)
                .as_rational()
                .map(|r| r * &inv)
                .ok_or_else(|| Error::Inconsistent("Θ_S has a coefficient outside Q".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupRingElem::from_coeffs(group, coeffs)
}

/// Θ_S(1−m), cross-checked between the two routes for small G.
pub fn theta_s(field: &AbelianField, s_primes: &[u64], m: u32) -> Result<LValueElement> {
    let s = check_s(field, s_primes)?;
    let elem = theta_s_by_partial_zeta(field, &s, m)?;
    if field.degree() <= CHARACTER_ROUTE_LIMIT {
        let other = theta_s_by_characters(field, &s, m)?;
        if other != elem {
            return Err(Error::Inconsistent("character and partial-zeta routes disagree".into()));
        }
    }
    Ok(LValueElement { conductor: field.conductor(), s_primes: s, t_primes: vec![], m, level: None, elem })
}

/// δ_T(1−m) = ∏_{v ∈ T}(1 − σ_v^{-1}·Nv^m).
pub fn delta_t(field: &AbelianField, s_primes: &[u64], t_primes: &[u64], m: u32) -> Result<GroupRingElem<BigRational>> {
    let t = check_t(field, s_primes, t_primes)?;
    let group = field.group();
    let mut acc = GroupRingElem::one(group, &BigRational::one());
    for ell in t {
        let sigma = field.frobenius(ell)?;
        let q = BigRational::from_integer(BigInt::from(ell).pow(m));
        acc = acc.sub(&acc.shift(group.neg_idx(sigma)).scale(&q));
    }
    Ok(acc)
}

pub fn theta_st(field: &AbelianField, s_primes: &[u64], t_primes: &[u64], m: u32) -> Result<LValueElement> {
    apply_delta_t(field, &theta_s(field, s_primes, m)?, t_primes)
}

/// δ_T(1−m)·Θ_S(1−m) from an already computed Θ_S(1−m).
pub fn apply_delta_t(field: &AbelianField, theta: &LValueElement, t_primes: &[u64]) -> Result<LValueElement> {
    let t = check_t(field, &theta.s_primes, t_primes)?;
    let group = field.group();
    let mut elem = theta.elem.clone();
    for &ell in &t {
        let sigma = field.frobenius(ell)?;
        let q = BigRational::from_integer(BigInt::from(ell).pow(theta.m));
        elem = elem.sub(&elem.shift(group.neg_idx(sigma)).scale(&q));
    }
    Ok(LValueElement { t_primes: t, elem, ..theta.clone() })
}

/// e_n = ½(1 + (−1)^n j).
pub fn e_n(group: &AbGroup, n: u32) -> GroupRingElem<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sign = if n % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let one = GroupRingElem::one(group, &BigRational::one());
    let j = match group.j_index() {
        Some(idx) => GroupRingElem::basis(group, idx, &BigRational::one()),
        None => one.clone(),
    };
    one.add(&j.scale(&sign)).scale(&half)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralityReport {
    pub p: u64,
    pub hypothesis: bool,
    pub hypothesis_note: String,
    pub twisted_invariant_order: u64,
    pub element: LValueElement,
    /// Coefficients with negative p-adic valuation, by group index.
    pub offending: Vec<(usize, BigRational)>,
    /// Characters χ with χ(Θ_{S,T}) ∉ Z_(p)[ζ].
    pub failing_characters: Vec<Vec<u64>>,
    /// T has primes of two distinct residue characteristics.
    pub stronger_hypothesis: bool,
    pub integral_over_z: bool,
    pub verdict: Verdict,
}

impl IntegralityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "statement": "delta_T(1-m) * Theta_S(1-m) lies in Z_(p)[G]",
            "p": self.p,
            "m": self.element.m,
            "hypothesis": self.hypothesis,
            "hypothesis_note": self.hypothesis_note,
            "twisted_invariant_order": self.twisted_invariant_order.to_string(),
            "element": self.element.to_json(),
            "offending": self.offending.iter().map(|(g, c)| json!({"index": g, "coefficient": rational_string(c)})).collect::<Vec<_>>(),
            "failing_characters": self.failing_characters,
            "stronger_hypothesis": self.stronger_hypothesis,
            "integral_over_z": self.integral_over_z,
            "verdict": self.verdict,
        })
    }
}

/// Checks δ_T(1−m)·Θ_S(1−m) ∈ Z_(p)[G]. The hypothesis (some v ∈ T with
/// v ∤ p, or p ∤ w_m(K)) is evaluated independently of the verdict.
pub fn integrality_check(
    field: &AbelianField,
    s_primes: &[u64],
    t_primes: &[u64],
    p: u64,
    m: u32,
) -> Result<IntegralityReport> {
    if !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let element = theta_st(field, s_primes, t_primes, m)?;
    Ok(assess_integrality(field, element, p))
}

/// The integrality verdict for an already computed Θ_{S,T}(1−m).
pub fn assess_integrality(field: &AbelianField, element: LValueElement, p: u64) -> IntegralityReport {
    let m = element.m;
    let w = field.twisted_invariant_order(m);
    let away = element.t_primes.iter().any(|&v| v != p);
    let hypothesis = away || w % p != 0;
    let hypothesis_note = if away {
        "T contains a prime not above p".to_string()
    } else if w % p != 0 {
        format!("p does not divide w_{m}(K) = {w}")
    } else {
        format!("every prime of T lies above p and p divides w_{m}(K) = {w}")
    };
    let offending: Vec<(usize, BigRational)> = element
        .elem
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| vp_rational(c, p).map_or(false, |v| v < 0))
        .map(|(g, c)| (g, c.clone()))
        .collect();
    let failing_characters = if offending.is_empty() { vec![] } else { failing_characters(&element.elem, p) };
    let stronger_hypothesis = {
        let t = &element.t_primes;
        t.iter().any(|&a| t.iter().any(|&b| a != b))
    };
    let integral_over_z = element.elem.coeffs().iter().all(|c| c.denom().is_one());
    let ok = offending.is_empty() && (!stronger_hypothesis || integral_over_z);
    IntegralityReport {
        p,
        hypothesis,
        hypothesis_note,
        twisted_invariant_order: w,
        element,
        offending,
        failing_characters,
        stronger_hypothesis,
        integral_over_z,
        verdict: Verdict::guarded(hypothesis, ok),
    }
}

/// Characters whose value has a coordinate (in the integral power basis of
/// Z[ζ_E]) outside Z_(p).
fn failing_characters(x: &GroupRingElem<BigRational>, p: u64) -> Vec<Vec<u64>> {
    let group = x.group();
    let big = group.exponent();
    let mut out = Vec::new();
    for chi in enumerate_characters(group) {
        let mut bucket = vec![BigRational::zero(); big as usize];
        for (g, c) in x.coeffs().iter().enumerate() {
            if !c.is_zero() {
                bucket[chi.value_exponent_idx(g) as usize] += c;
            }
        }
        let value = CycloRational::from_bucket(big, &bucket);
        if value.coeffs().iter().any(|c| vp_rational(c, p).map_or(false, |v| v < 0)) {
            out.push(chi.exps().to_vec());
        }
    }
    out
}

/// ‖x‖ in the sense of the largest absolute numerator, for reports.
pub fn max_abs_numerator(x: &GroupRingElem<BigRational>) -> BigInt {
    x.coeffs().iter().map(|c| c.numer().abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn elem(group: &AbGroup, coeffs: &[BigRational]) -> GroupRingElem<BigRational> {
        GroupRingElem::from_coeffs(group, coeffs.to_vec()).unwrap()
    }

    fn gaussian() -> AbelianField {
        AbelianField::cyclotomic(4).unwrap()
    }

    fn minus_23() -> AbelianField {
        let squares: Vec<u64> = (1..23).map(|a| a * a % 23).collect();
        AbelianField::from_subgroup(23, &squares).unwrap()
    }

    #[test]
    fn theta_of_gaussian_field() {
        let k = gaussian();
        let g = k.group().clone();
        assert_eq!(theta_s(&k, &[2], 1).unwrap().elem, elem(&g, &[q(1, 4), q(-1, 4)]));
        assert_eq!(theta_s(&k, &[2], 2).unwrap().elem, elem(&g, &[q(1, 24), q(1, 24)]));
    }

    #[test]
    fn delta_examples() {
        let k = gaussian();
        let g = k.group().clone();
        assert_eq!(delta_t(&k, &[2], &[3], 1).unwrap(), elem(&g, &[q(1, 1), q(-3, 1)]));
        assert_eq!(delta_t(&k, &[2], &[5], 2).unwrap(), elem(&g, &[q(-24, 1), q(0, 1)]));
        let two = delta_t(&k, &[2], &[3, 5], 1).unwrap();
        let expected = delta_t(&k, &[2], &[3], 1).unwrap().mul(&delta_t(&k, &[2], &[5], 1).unwrap());
        assert_eq!(two, expected);
        assert!(matches!(delta_t(&k, &[2], &[2], 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn theta_st_examples() {
        let k = gaussian();
        let g = k.group().clone();
        assert_eq!(theta_st(&k, &[2], &[3], 1).unwrap().elem, elem(&g, &[q(1, 1), q(-1, 1)]));
        assert_eq!(theta_st(&k, &[2], &[5], 2).unwrap().elem, elem(&g, &[q(-1, 1), q(-1, 1)]));
        let k23 = minus_23();
        let g23 = k23.group().clone();
        assert_eq!(theta_st(&k23, &[23], &[3], 1).unwrap().elem, elem(&g23, &[q(-3, 1), q(3, 1)]));
    }

    #[test]
    fn split_prime_kills_trivial_component() {
        let k = gaussian();
        let theta = theta_s(&k, &[2, 5], 1).unwrap();
        assert!(theta.elem.augmentation().is_zero());
    }

    #[test]
    fn s_must_contain_ramified_primes() {
        assert!(matches!(theta_s(&gaussian(), &[3], 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn routes_agree_on_larger_fields() {
        let k = AbelianField::cyclotomic(15).unwrap();
        for m in 1..=3 {
            let a = theta_s_by_partial_zeta(&k, &[3, 5, 7], m).unwrap();
            let b = theta_s_by_characters(&k, &[3, 5, 7], m).unwrap();
            assert_eq!(a, b, "m = {m}");
        }
    }

    #[test]
    fn theta_is_supported_on_e_m() {
        let k = AbelianField::cyclotomic(7).unwrap();
        for m in 1..=4 {
            let theta = theta_s(&k, &[7], m).unwrap().elem;
            assert_eq!(theta.mul(&e_n(k.group(), m)), theta, "m = {m}");
        }
    }

    #[test]
    fn integrality_verdicts() {
        let k = gaussian();
        let report = integrality_check(&k, &[2], &[3], 3, 1).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(integrality_check(&k, &[2], &[5], 7, 2).unwrap().verdict.is_pass());
        let bare = integrality_check(&k, &[2], &[], 2, 1).unwrap();
        assert_eq!(bare.verdict, Verdict::NotApplicable);
        assert_eq!(bare.offending.len(), 2);
        assert_eq!(bare.failing_characters, vec![vec![1]]);
    }
}
