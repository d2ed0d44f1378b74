//! Equivariant power series in Zp[G][[t]] ≅ Zp[[G × Γ]], γ ↔ 1 + t.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::ModRing;
use crate::error::{Error, Result};
use crate::fitcalc::gamma::twist_group_part;
use crate::fitcalc::presentation::{elem_from_json, elem_to_json, ring_from_json, ring_to_json};
use crate::grp::{AbGroup, TruncAlgebra, TruncElem};

#[derive(Debug, Clone, PartialEq)]
pub struct EqSeries {
    elem: TruncElem,
    u: u64,
    c_values: Option<Vec<u64>>,
}

/// 1 + p.
pub fn default_u(zp: &ModRing) -> u64 {
    (1 + zp.p) % zp.modulus
}

/// Largest v_p(k!) over k < bound.
pub fn max_factorial_valuation(p: u64, bound: usize) -> u32 {
    let top = bound.saturating_sub(1) as u64;
    let mut total = 0u32;
    let mut pk = p;
    while pk <= top {
        total += (top / pk) as u32;
        pk = match pk.checked_mul(p) {
            Some(next) => next,
            None => break,
        };
    }
    total
}

/// Generalised binomial C(a, k) for an integer a.
pub fn binomial_int(a: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= a - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// (1+t)^a for an integer a (negative allowed), exact in Z/p^N[[t]]/(t^M).
pub fn gamma_power_exact(alg: &Arc<TruncAlgebra>, a: &BigInt) -> TruncElem {
    let zp = alg.zp();
    let series: Vec<u64> = (0..alg.t_prec).map(|k| zp.from_bigint(&binomial_int(a, k))).collect();
    TruncElem::from_zp_series(alg, &series)
}

/// (1+t)^a for a p-adic integer known mod p^{a_prec}; the result is valid
/// modulo p^{N'} with N' = min(N, a_prec − max_{k<M} v_p(k!)), returned
/// alongside the series reduced to that precision.
pub fn gamma_power_padic(alg: &Arc<TruncAlgebra>, a: &BigInt, a_prec: u32) -> Result<(TruncElem, u32)> {
    let loss = max_factorial_valuation(alg.p(), alg.t_prec);
    if a_prec <= loss {
        return Err(Error::PrecisionExhausted(format!(
            "exponent known mod p^{a_prec} but binomials lose {loss} digits"
        )));
    }
    let prec = alg.n().min(a_prec - loss);
    let modulus = BigInt::from(alg.p()).pow(a_prec);
    let mut lift = a % &modulus;
    if lift < BigInt::zero() {
        lift += &modulus;
    }
    let full = gamma_power_exact(alg, &lift);
    Ok((full.reduce_precision(prec)?, prec))
}

impl EqSeries {
    pub fn new(elem: TruncElem, u: u64, c_values: Option<Vec<u64>>) -> Result<Self> {
        let zp = *elem.alg().zp();
        if u % zp.p != 1 {
            return Err(Error::InvalidArgument("u must be congruent to 1 mod p".into()));
        }
        if let Some(c) = &c_values {
            if c.len() != elem.alg().group.rank() {
                return Err(Error::InvalidArgument("c-data needs a value per cyclic generator".into()));
            }
        }
        Ok(EqSeries { elem, u: u % zp.modulus, c_values })
    }

    pub fn from_elem(elem: TruncElem) -> Self {
        let u = default_u(elem.alg().zp());
        EqSeries { elem, u, c_values: None }
    }

    pub fn with_c_values(mut self, c_values: Vec<u64>) -> Result<Self> {
        if c_values.len() != self.elem.alg().group.rank() {
            return Err(Error::InvalidArgument("c-data needs a value per cyclic generator".into()));
        }
        self.c_values = Some(c_values);
        Ok(self)
    }

    pub fn elem(&self) -> &TruncElem {
        &self.elem
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        self.elem.alg()
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn c_values(&self) -> Option<&[u64]> {
        self.c_values.as_deref()
    }

    pub fn t_prec(&self) -> usize {
        self.alg().t_prec
    }

    fn rewrap(&self, elem: TruncElem) -> Self {
        EqSeries { elem, u: self.u, c_values: self.c_values.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.rewrap(self.elem.add(&other.elem))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.rewrap(self.elem.sub(&other.elem))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.rewrap(self.elem.mul(&other.elem))
    }

    /// γ = 1 + t.
    pub fn gamma(alg: &Arc<TruncAlgebra>) -> TruncElem {
        TruncElem::one(alg).add(&TruncElem::t(alg))
    }

    /// ι: g ↦ g^{-1} on G and t ↦ (1+t)^{-1} − 1; exact at truncation.
    pub fn iota(&self) -> Self {
        let zp = self.alg().zp();
        let series: Vec<u64> =
            (0..self.t_prec()).map(|k| if k == 0 { 0 } else if k % 2 == 1 { zp.modulus - 1 } else { 1 }).collect();
        self.rewrap(self.elem.invert_group().substitute(&series))
    }

    /// t-precision left after t ↦ u^n(1+t) − 1: the discarded tail
    /// Σ_{k≥M} a_k (u^n(1+t) − 1)^k only reaches degree j modulo
    /// p^{v·(M−j)}, v = v_p(u^n − 1).
    pub fn twist_t_prec(&self, n: i64) -> Result<usize> {
        if n == 0 {
            return Ok(self.t_prec());
        }
        let zp = self.alg().zp();
        let un = signed_pow(zp, self.u, n)?;
        let shift = zp.sub(un, 1);
        let v = zp.valuation(shift).max(1);
        let loss = (zp.n + v - 1) / v;
        let m = self.t_prec() as i64 - loss as i64 + 1;
        if m <= 0 {
            return Err(Error::TruncationTooSmall(format!(
                "twisting by {n} leaves no reliable t-coefficients at M = {}",
                self.t_prec()
            )));
        }
        Ok(m as usize)
    }

    /// t_n: g ↦ c(g)^n g on G and t ↦ u^n(1+t) − 1, truncated to the
    /// t-precision that remains reliable.
    pub fn twist(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Ok(self.clone());
        }
        let c_values = self
            .c_values
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("twisting needs the values of ω on G".into()))?;
        let zp = *self.alg().zp();
        let un = signed_pow(&zp, self.u, n)?;
        let grouped = twist_group_part(&self.elem, c_values, n)?;
        let mut series = vec![0u64; self.t_prec()];
        series[0] = zp.sub(un, 1);
        if self.t_prec() > 1 {
            series[1] = un;
        }
        let substituted = grouped.substitute(&series);
        let m = self.twist_t_prec(n)?;
        Ok(self.rewrap(substituted.truncate_t(m)?))
    }

    /// Image in Z/p^{N'}[G × Z/p^n] under γ ↦ τ, the generator of the new
    /// factor; N' = min(N, ⌊M/p^n⌋) since (τ − 1)^{p^n} ∈ p·Zp[Z/p^n].
    pub fn project_level(&self, n: u32) -> Result<TruncElem> {
        project_level(&self.elem, n)
    }

    pub fn truncate(&self, t_prec: usize) -> Result<Self> {
        Ok(self.rewrap(self.elem.truncate_t(t_prec)?))
    }

    pub fn to_json(&self) -> Value {
        let alg = self.alg();
        let mut coefficients = Vec::with_capacity(alg.t_prec);
        let deg0 = alg.with_t_prec(1).expect("positive");
        for deg in 0..alg.t_prec {
            let mut data = vec![0u64; deg0.dim()];
            for g in 0..alg.gsize() {
                let src = alg.index(deg, g, 0);
                data[g * alg.d()..(g + 1) * alg.d()].copy_from_slice(&self.elem.data()[src..src + alg.d()]);
            }
            let coeff = TruncElem::from_data(&deg0, data).expect("dimension");
            coefficients.push(elem_to_json(&coeff));
        }
        json!({
            "ring": ring_to_json(alg),
            "u": self.u.to_string(),
            "c_values": self.c_values.as_ref().map(|c| c.iter().map(|x| alg.zp().signed(*x).to_string()).collect::<Vec<_>>()),
            "coefficients": coefficients,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let alg = ring_from_json(value.get("ring").ok_or_else(|| Error::Schema("series needs a ring".into()))?)?;
        let zp = *alg.zp();
        let parse = |v: &Value| -> Result<u64> {
            match v {
                Value::Number(n) => n.as_i64().map(|x| zp.from_i64(x)).ok_or_else(|| Error::Schema("integer".into())),
                Value::String(s) => s.trim().parse::<i64>().map(|x| zp.from_i64(x)).map_err(|e| Error::Schema(e.to_string())),
                _ => Err(Error::Schema("integer expected".into())),
            }
        };
        let u = match value.get("u") {
            Some(v) => parse(v)?,
            None => default_u(&zp),
        };
        let c_values = match value.get("c_values") {
            Some(Value::Array(items)) => Some(items.iter().map(parse).collect::<Result<Vec<_>>>()?),
            _ => None,
        };
        let coefficients = value
            .get("coefficients")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Schema("series needs coefficients".into()))?;
        if coefficients.len() > alg.t_prec {
            return Err(Error::Schema("more coefficients than the t-precision".into()));
        }
        let deg0 = alg.with_t_prec(1)?;
        let mut data = vec![0u64; alg.dim()];
        for (deg, c) in coefficients.iter().enumerate() {
            let coeff = elem_from_json(&deg0, c)?;
            for g in 0..alg.gsize() {
                let dst = alg.index(deg, g, 0);
                data[dst..dst + alg.d()].copy_from_slice(&coeff.data()[g * alg.d()..(g + 1) * alg.d()]);
            }
        }
        Self::new(TruncElem::from_data(&alg, data)?, u, c_values)
    }
}

pub fn signed_pow(zp: &ModRing, base: u64, n: i64) -> Result<u64> {
    let b = if n >= 0 { base % zp.modulus } else { zp.inv(base).ok_or_else(|| Error::NotInvertible("u".into()))? };
    Ok(zp.pow(b, n.unsigned_abs()))
}

/// The group G × Z/p^n of level n.
pub fn level_group(group: &AbGroup, p: u64, n: u32) -> AbGroup {
    group.times_cyclic(p.pow(n))
}

/// Precision of π_n on data known mod (p^N, t^M).
pub fn level_precision(p: u64, n_prec: u32, t_prec: usize, n: u32) -> u32 {
    n_prec.min((t_prec as u64 / p.pow(n)) as u32)
}

pub fn project_level(x: &TruncElem, n: u32) -> Result<TruncElem> {
    let alg = x.alg();
    let p = alg.p();
    let pn = p.pow(n) as usize;
    if alg.t_prec < pn {
        return Err(Error::TruncationTooSmall(format!("level {n} needs t-precision at least {pn}")));
    }
    let prec = level_precision(p, alg.n(), alg.t_prec, n);
    if prec == 0 {
        return Err(Error::PrecisionExhausted("no p-adic digits survive the level projection".into()));
    }
    let group = level_group(&alg.group, p, n);
    let target = TruncAlgebra::new(&alg.coeff, &group, 1)?;
    let d = alg.d();
    let tau_minus_one = if pn > 1 {
        TruncElem::group_element(&target, 1).sub(&TruncElem::one(&target))
    } else {
        TruncElem::zero(&target)
    };
    let mut power = TruncElem::one(&target);
    let mut acc = TruncElem::zero(&target);
    for deg in 0..alg.t_prec {
        let mut data = vec![0u64; target.dim()];
        for g in 0..alg.gsize() {
            let src = alg.index(deg, g, 0);
            let dst = target.index(0, g * pn, 0);
            data[dst..dst + d].copy_from_slice(&x.data()[src..src + d]);
        }
        let coeff = TruncElem::from_data(&target, data)?;
        if !coeff.is_zero() {
            acc = acc.add(&coeff.mul(&power));
        }
        power = power.mul(&tau_minus_one);
    }
    acc.reduce_precision(prec)
}

/// The quotient map Z/p^N[G × Z/p^n] → Z/p^N[G × Z/p^{n−1}].
pub fn level_down(x: &TruncElem) -> Result<TruncElem> {
    let alg = x.alg();
    let orders = &alg.group.cyclic_orders;
    let last = *orders.last().ok_or_else(|| Error::InvalidArgument("group has no level factor".into()))?;
    let p = alg.p();
    if last % p != 0 {
        return Err(Error::InvalidArgument("last factor is not a p-group level".into()));
    }
    let mut new_orders = orders.clone();
    let smaller = last / p;
    *new_orders.last_mut().expect("nonempty") = smaller;
    let group = AbGroup::new(new_orders, alg.group.j.clone())?;
    let target = TruncAlgebra::new(&alg.coeff, &group, alg.t_prec)?;
    let zp = alg.zp();
    let mut data = vec![0u64; target.dim()];
    for deg in 0..alg.t_prec {
        for g in 0..alg.gsize() {
            let mut exps = alg.group.element(g);
            if let Some(l) = exps.last_mut() {
                *l %= smaller.max(1);
            }
            let start = target.index(deg, group.index_of(&exps), 0);
            for (i, &c) in x.block(deg, g).iter().enumerate() {
                data[start + i] = zp.add(data[start + i], c);
            }
        }
    }
    let out = TruncElem::from_data(&target, data)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(group: &AbGroup, n: u32, m: usize) -> Arc<TruncAlgebra> {
        TruncAlgebra::series(3, n, group, m).unwrap()
    }

    #[test]
    fn iota_examples() {
        let a = alg(&AbGroup::trivial(), 5, 6);
        let one = EqSeries::from_elem(TruncElem::one(&a));
        assert_eq!(one.iota(), one);
        let t = EqSeries::from_elem(TruncElem::t(&a));
        let expected: Vec<u64> = vec![0, a.zp().from_i64(-1), 1, a.zp().from_i64(-1), 1, a.zp().from_i64(-1)];
        assert_eq!(t.iota().elem().data(), expected.as_slice());
        assert_eq!(t.iota().iota(), t);
    }

    #[test]
    fn twist_of_t() {
        let g = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        let a = alg(&g, 5, 8);
        let zp = *a.zp();
        let t = EqSeries::from_elem(TruncElem::t(&a)).with_c_values(vec![zp.from_i64(-1)]).unwrap();
        let twisted = t.twist(1).unwrap();
        assert_eq!(twisted.t_prec(), 4);
        let data = twisted.elem().data();
        assert_eq!(data[a.index(0, 0, 0)], 3);
        assert_eq!(data[a.index(1, 0, 0)], 4);
        assert_eq!(t.twist(0).unwrap(), t);
    }

    #[test]
    fn gamma_power_examples() {
        let a = alg(&AbGroup::trivial(), 6, 6);
        assert_eq!(gamma_power_exact(&a, &BigInt::zero()), TruncElem::one(&a));
        let gamma = EqSeries::gamma(&a);
        assert_eq!(gamma_power_exact(&a, &BigInt::one()), gamma);
        assert_eq!(gamma_power_exact(&a, &BigInt::from(2)), gamma.mul(&gamma));
        let inv = gamma_power_exact(&a, &BigInt::from(-1));
        assert_eq!(inv.mul(&gamma), TruncElem::one(&a));
    }

    #[test]
    fn level_projection_of_gamma() {
        let a = alg(&AbGroup::trivial(), 4, 9);
        let gamma = EqSeries::from_elem(EqSeries::gamma(&a));
        let image = gamma.project_level(1).unwrap();
        assert_eq!(image.data(), &[0, 1, 0]);
        let constant = EqSeries::from_elem(TruncElem::from_int(&a, 5).add(&TruncElem::t(&a).scale(3)));
        assert_eq!(constant.project_level(0).unwrap().data(), &[5]);
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(max_factorial_valuation(3, 10), 4);
        assert_eq!(max_factorial_valuation(3, 3), 0);
        assert_eq!(max_factorial_valuation(5, 6), 1);
    }
}
