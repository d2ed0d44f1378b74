//! The truncated algebra O[G][t]/(p^N, t^M) as a free Z/p^N-module.
//!
//! Coordinates are laid out as ((deg·|G| + g)·d + c) where d is the rank of
//! O over Zp. With M = 1 this is the group ring O[G]/p^N, with a trivial
//! group it is O[t]/(p^N, t^M).

use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::arith::ModRing;
use crate::coeff::{make_coeff_ring, CoeffRingDesc, CyclotomicCoeff};
use crate::error::{Error, Result};
use crate::grp::character::Character;
use crate::grp::group::AbGroup;
use crate::grp::ring::GroupRingElem;

const TABLE_LIMIT: usize = 512;

#[derive(Debug, PartialEq, Eq)]
pub struct TruncAlgebra {
    pub coeff: Arc<CoeffRingDesc>,
    pub group: AbGroup,
    pub t_prec: usize,
    add_table: Option<Vec<usize>>,
    neg_table: Vec<usize>,
}

impl TruncAlgebra {
    pub fn new(coeff: &Arc<CoeffRingDesc>, group: &AbGroup, t_prec: usize) -> Result<Arc<Self>> {
        if t_prec == 0 {
            return Err(Error::InvalidArgument("t-precision must be at least 1".into()));
        }
        let add_table = if group.order() <= TABLE_LIMIT { Some(group.addition_table()) } else { None };
        Ok(Arc::new(TruncAlgebra {
            coeff: coeff.clone(),
            group: group.clone(),
            t_prec,
            add_table,
            neg_table: group.negation_table(),
        }))
    }

    /// Z/p^N[G].
    pub fn group_ring(p: u64, n: u32, group: &AbGroup) -> Result<Arc<Self>> {
        Self::new(&make_coeff_ring(p, n, 1)?, group, 1)
    }

    /// Z/p^N[G][t]/(t^M).
    pub fn series(p: u64, n: u32, group: &AbGroup, t_prec: usize) -> Result<Arc<Self>> {
        Self::new(&make_coeff_ring(p, n, 1)?, group, t_prec)
    }

    pub fn with_t_prec(&self, t_prec: usize) -> Result<Arc<Self>> {
        Self::new(&self.coeff, &self.group, t_prec)
    }

    pub fn with_group(&self, group: &AbGroup) -> Result<Arc<Self>> {
        Self::new(&self.coeff, group, self.t_prec)
    }

    pub fn zp(&self) -> &ModRing {
        &self.coeff.zp
    }

    pub fn p(&self) -> u64 {
        self.coeff.p
    }

    pub fn n(&self) -> u32 {
        self.coeff.n
    }

    pub fn d(&self) -> usize {
        self.coeff.degree()
    }

    pub fn gsize(&self) -> usize {
        self.group.order()
    }

    pub fn dim(&self) -> usize {
        self.t_prec * self.gsize() * self.d()
    }

    pub fn index(&self, deg: usize, g: usize, c: usize) -> usize {
        (deg * self.gsize() + g) * self.d() + c
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(table) => table[a * self.gsize() + b],
            None => self.group.add_idx(a, b),
        }
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.neg_table[a]
    }

    pub fn same_shape(&self, other: &TruncAlgebra) -> bool {
        self.coeff == other.coeff && self.group == other.group && self.t_prec == other.t_prec
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncElem {
    alg: Arc<TruncAlgebra>,
    data: Vec<u64>,
}

impl TruncElem {
    pub fn zero(alg: &Arc<TruncAlgebra>) -> Self {
        TruncElem { alg: alg.clone(), data: vec![0; alg.dim()] }
    }

    pub fn one(alg: &Arc<TruncAlgebra>) -> Self {
        Self::from_int(alg, 1)
    }

    pub fn from_int(alg: &Arc<TruncAlgebra>, value: i64) -> Self {
        let mut out = Self::zero(alg);
        out.data[0] = alg.zp().from_i64(value);
        out
    }

    pub fn from_data(alg: &Arc<TruncAlgebra>, data: Vec<u64>) -> Result<Self> {
        if data.len() != alg.dim() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates, got {}", alg.dim(), data.len())));
        }
        let modulus = alg.zp().modulus;
        Ok(TruncElem { alg: alg.clone(), data: data.into_iter().map(|x| x % modulus).collect() })
    }

    /// Unit vector of the coordinate basis.
    pub fn basis(alg: &Arc<TruncAlgebra>, idx: usize) -> Self {
        let mut out = Self::zero(alg);
        out.data[idx] = 1;
        out
    }

    pub fn group_element(alg: &Arc<TruncAlgebra>, g: usize) -> Self {
        let mut out = Self::zero(alg);
        out.data[alg.index(0, g, 0)] = 1;
        out
    }

    pub fn monomial(alg: &Arc<TruncAlgebra>, deg: usize, g: usize, value: i64) -> Self {
        let mut out = Self::zero(alg);
        if deg < alg.t_prec {
            out.data[alg.index(deg, g, 0)] = alg.zp().from_i64(value);
        }
        out
    }

    pub fn t(alg: &Arc<TruncAlgebra>) -> Self {
        Self::monomial(alg, 1, 0, 1)
    }

    pub fn from_coeff(alg: &Arc<TruncAlgebra>, value: &CyclotomicCoeff) -> Self {
        let mut out = Self::zero(alg);
        out.data[..alg.d()].copy_from_slice(value.coeffs());
        out
    }

    /// Scalar power series Σ s_k t^k with s_k ∈ Z/p^N.
    pub fn from_zp_series(alg: &Arc<TruncAlgebra>, series: &[u64]) -> Self {
        let mut out = Self::zero(alg);
        for (deg, &s) in series.iter().enumerate().take(alg.t_prec) {
            out.data[alg.index(deg, 0, 0)] = s % alg.zp().modulus;
        }
        out
    }

    pub fn from_group_ring(alg: &Arc<TruncAlgebra>, x: &GroupRingElem<CyclotomicCoeff>) -> Result<Self> {
        if x.group().cyclic_orders != alg.group.cyclic_orders {
            return Err(Error::RingMismatch("group of element differs from algebra".into()));
        }
        let mut out = Self::zero(alg);
        let d = alg.d();
        for (g, c) in x.coeffs().iter().enumerate() {
            let start = alg.index(0, g, 0);
            out.data[start..start + d].copy_from_slice(c.coeffs());
        }
        Ok(out)
    }

    /// Image of a p-integral rational group ring element.
    pub fn from_rational_group_ring(alg: &Arc<TruncAlgebra>, x: &GroupRingElem<BigRational>) -> Result<Self> {
        if x.group().cyclic_orders != alg.group.cyclic_orders {
            return Err(Error::RingMismatch("group of element differs from algebra".into()));
        }
        let mut out = Self::zero(alg);
        for (g, c) in x.coeffs().iter().enumerate() {
            out.data[alg.index(0, g, 0)] = alg.zp().from_rational(c)?;
        }
        Ok(out)
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        &self.alg
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u64> {
        self.data
    }

    pub fn block(&self, deg: usize, g: usize) -> &[u64] {
        let start = self.alg.index(deg, g, 0);
        &self.data[start..start + self.alg.d()]
    }

    pub fn block_coeff(&self, deg: usize, g: usize) -> CyclotomicCoeff {
        CyclotomicCoeff::from_coeffs(&self.alg.coeff, self.block(deg, g).to_vec(), self.alg.coeff.full_prec())
            .expect("block has ring degree")
    }

    /// Coefficient of t^deg as an element of O[G].
    pub fn coefficient(&self, deg: usize) -> GroupRingElem<CyclotomicCoeff> {
        let coeffs = (0..self.alg.gsize()).map(|g| self.block_coeff(deg, g)).collect();
        GroupRingElem::from_coeffs(&self.alg.group, coeffs).expect("one block per group element")
    }

    /// Z/p^N-valued coordinate at (deg, g) when O = Zp.
    pub fn zp_coeff(&self, deg: usize, g: usize) -> u64 {
        self.data[self.alg.index(deg, g, 0)]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || self.alg.same_shape(&other.alg) {
            Ok(())
        } else {
            Err(Error::RingMismatch("elements live in different truncated algebras".into()))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("same algebra");
        let zp = self.alg.zp();
        TruncElem { alg: self.alg.clone(), data: self.data.iter().zip(&other.data).map(|(&a, &b)| zp.add(a, b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other).expect("same algebra");
        let zp = self.alg.zp();
        TruncElem { alg: self.alg.clone(), data: self.data.iter().zip(&other.data).map(|(&a, &b)| zp.sub(a, b)).collect() }
    }

    pub fn neg(&self) -> Self {
        let zp = self.alg.zp();
        TruncElem { alg: self.alg.clone(), data: self.data.iter().map(|&a| zp.neg(a)).collect() }
    }

    pub fn scale(&self, factor: u64) -> Self {
        let zp = self.alg.zp();
        let factor = factor % zp.modulus;
        TruncElem { alg: self.alg.clone(), data: self.data.iter().map(|&a| zp.mul(a, factor)).collect() }
    }

    pub fn scale_i64(&self, factor: i64) -> Self {
        self.scale(self.alg.zp().from_i64(factor))
    }

    pub fn mul_coeff(&self, value: &CyclotomicCoeff) -> Self {
        self.mul(&Self::from_coeff(&self.alg, value))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let alg = &self.alg;
        let d = alg.d();
        let gs = alg.gsize();
        let m = alg.t_prec;
        let zp = alg.zp();
        let nonzero = |x: &Self| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            for deg in 0..m {
                for g in 0..gs {
                    let start = alg.index(deg, g, 0);
                    if x.data[start..start + d].iter().any(|&c| c != 0) {
                        out.push((deg, g));
                    }
                }
            }
            out
        };
        let left = nonzero(self);
        let right = nonzero(other);
        let mut out = vec![0u64; alg.dim()];
        for &(da, ga) in &left {
            for &(db, gb) in &right {
                if da + db >= m {
                    continue;
                }
                let target = alg.index(da + db, alg.add_idx(ga, gb), 0);
                if d == 1 {
                    let prod = zp.mul(self.data[alg.index(da, ga, 0)], other.data[alg.index(db, gb, 0)]);
                    out[target] = zp.add(out[target], prod);
                } else {
                    let prod = alg.coeff.mul_raw(self.block(da, ga), other.block(db, gb));
                    for (c, v) in prod.into_iter().enumerate() {
                        out[target + c] = zp.add(out[target + c], v);
                    }
                }
            }
        }
        TruncElem { alg: alg.clone(), data: out }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::one(&self.alg);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        result
    }

    /// Multiplication by a scalar series Σ s_k t^k with s_k ∈ Z/p^N.
    pub fn mul_zp_series(&self, series: &[u64]) -> Self {
        let alg = &self.alg;
        let zp = alg.zp();
        let block = alg.gsize() * alg.d();
        let mut out = vec![0u64; alg.dim()];
        for deg in 0..alg.t_prec {
            let src = &self.data[deg * block..(deg + 1) * block];
            if src.iter().all(|&c| c == 0) {
                continue;
            }
            for (k, &s) in series.iter().enumerate() {
                if s == 0 || deg + k >= alg.t_prec {
                    continue;
                }
                let dst = (deg + k) * block;
                for (i, &c) in src.iter().enumerate() {
                    out[dst + i] = zp.add(out[dst + i], zp.mul(c, s));
                }
            }
        }
        TruncElem { alg: alg.clone(), data: out }
    }

    /// F(t) ↦ Σ_k F_k s(t)^k by Horner's rule, with s a scalar series.
    pub fn substitute(&self, series: &[u64]) -> Self {
        let alg = &self.alg;
        let block = alg.gsize() * alg.d();
        let mut acc = TruncElem::zero(alg);
        for deg in (0..alg.t_prec).rev() {
            acc = acc.mul_zp_series(series);
            let zp = alg.zp();
            for i in 0..block {
                acc.data[i] = zp.add(acc.data[i], self.data[deg * block + i]);
            }
        }
        acc
    }

    /// Group part g ↦ g^{-1}.
    pub fn invert_group(&self) -> Self {
        let alg = &self.alg;
        let d = alg.d();
        let mut out = vec![0u64; alg.dim()];
        for deg in 0..alg.t_prec {
            for g in 0..alg.gsize() {
                let src = alg.index(deg, g, 0);
                let dst = alg.index(deg, alg.neg_idx(g), 0);
                out[dst..dst + d].copy_from_slice(&self.data[src..src + d]);
            }
        }
        TruncElem { alg: alg.clone(), data: out }
    }

    /// Multiplication of every coefficient at g by w(g), w given on
    /// the cyclic generators.
    pub fn twist_group(&self, gen_values: &[CyclotomicCoeff]) -> Result<Self> {
        let alg = &self.alg;
        if gen_values.len() != alg.group.rank() {
            return Err(Error::InvalidArgument("twist data must give a value on every generator".into()));
        }
        let d = alg.d();
        let mut out = self.clone();
        for g in 0..alg.gsize() {
            let exps = alg.group.element(g);
            let mut factor = CyclotomicCoeff::one(&alg.coeff);
            for (e, v) in exps.iter().zip(gen_values) {
                factor = factor.mul(&v.pow(*e));
            }
            for deg in 0..alg.t_prec {
                let start = alg.index(deg, g, 0);
                let block = &self.data[start..start + d];
                if block.iter().all(|&c| c == 0) {
                    continue;
                }
                let prod = alg.coeff.mul_raw(block, factor.coeffs());
                out.data[start..start + d].copy_from_slice(&prod);
            }
        }
        Ok(out)
    }

    /// Shift by the group element g.
    pub fn shift_group(&self, h: usize) -> Self {
        let alg = &self.alg;
        let d = alg.d();
        let mut out = vec![0u64; alg.dim()];
        for deg in 0..alg.t_prec {
            for g in 0..alg.gsize() {
                let src = alg.index(deg, g, 0);
                let dst = alg.index(deg, alg.add_idx(g, h), 0);
                out[dst..dst + d].copy_from_slice(&self.data[src..src + d]);
            }
        }
        TruncElem { alg: alg.clone(), data: out }
    }

    /// Keep only t-degrees below `t_prec`.
    pub fn truncate_t(&self, t_prec: usize) -> Result<Self> {
        let target = self.alg.with_t_prec(t_prec.min(self.alg.t_prec))?;
        let data = self.data[..target.dim()].to_vec();
        Ok(TruncElem { alg: target, data })
    }

    /// Extend by zeros to a larger t-precision.
    pub fn pad_t(&self, t_prec: usize) -> Result<Self> {
        let target = self.alg.with_t_prec(t_prec.max(self.alg.t_prec))?;
        let mut data = self.data.clone();
        data.resize(target.dim(), 0);
        Ok(TruncElem { alg: target, data })
    }

    /// Reduction to Z/p^k coefficients.
    pub fn reduce_precision(&self, k: u32) -> Result<Self> {
        let coeff = self.alg.coeff.with_precision(k.min(self.alg.n()))?;
        let target = TruncAlgebra::new(&coeff, &self.alg.group, self.alg.t_prec)?;
        let modulus = coeff.zp.modulus;
        Ok(TruncElem { alg: target, data: self.data.iter().map(|&x| x % modulus).collect() })
    }

    /// Move into an algebra of the same shape but a different coefficient
    /// ring of the same index (coordinates reduced or reinterpreted).
    pub fn reinterpret(&self, target: &Arc<TruncAlgebra>) -> Result<Self> {
        if target.dim() != self.alg.dim() || target.coeff.m != self.alg.coeff.m {
            return Err(Error::RingMismatch("algebras have different shapes".into()));
        }
        let modulus = target.zp().modulus;
        Ok(TruncElem { alg: target.clone(), data: self.data.iter().map(|&x| x % modulus).collect() })
    }

    /// χ(x) ∈ O'[t] for O = Zp; `target` must have trivial group, the same
    /// t-precision, and contain the values of χ.
    pub fn apply_character(&self, chi: &Character, target: &Arc<TruncAlgebra>) -> Result<Self> {
        let alg = &self.alg;
        if alg.d() != 1 {
            return Err(Error::InvalidArgument("character maps are defined on Zp-coefficient algebras".into()));
        }
        if target.gsize() != 1 || target.t_prec != alg.t_prec {
            return Err(Error::RingMismatch("character target must be O[t] of the same t-precision".into()));
        }
        let big = chi.value_order();
        let roots: Vec<CyclotomicCoeff> =
            (0..big).map(|k| CyclotomicCoeff::root_of_unity(&target.coeff, big, k as i64)).collect::<Result<_>>()?;
        let zp = target.zp();
        let mut out = vec![0u64; target.dim()];
        for g in 0..alg.gsize() {
            let root = &roots[chi.value_exponent_idx(g) as usize];
            for deg in 0..alg.t_prec {
                let c = self.data[alg.index(deg, g, 0)] % zp.modulus;
                if c == 0 {
                    continue;
                }
                let dst = target.index(deg, 0, 0);
                for (i, &r) in root.coeffs().iter().enumerate() {
                    out[dst + i] = zp.add(out[dst + i], zp.mul(r, c));
                }
            }
        }
        Ok(TruncElem { alg: target.clone(), data: out })
    }

    /// Elementwise image of (1-j)/2 · x.
    pub fn minus_part(&self) -> Result<Self> {
        let j = self.alg.group.j_index().ok_or_else(|| Error::InvalidArgument("group has no involution j".into()))?;
        let zp = self.alg.zp();
        let half = zp.inv(2).expect("p is odd");
        Ok(self.sub(&self.shift_group(j)).scale(half))
    }

    pub fn to_json(&self) -> Value {
        let alg = &self.alg;
        let mut degrees = Vec::new();
        for deg in 0..alg.t_prec {
            let mut entries = serde_json::Map::new();
            for g in 0..alg.gsize() {
                let block = self.block(deg, g);
                if block.iter().all(|&c| c == 0) {
                    continue;
                }
                let key = alg.group.element(g).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let value = if alg.d() == 1 {
                    Value::String(block[0].to_string())
                } else {
                    Value::Array(block.iter().map(|c| Value::String(c.to_string())).collect())
                };
                entries.insert(key, value);
            }
            degrees.push(Value::Object(entries));
        }
        json!({
            "p": alg.p(),
            "N": alg.n(),
            "M": alg.t_prec,
            "m": alg.coeff.m,
            "group": alg.group,
            "coeffs": degrees,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_multiplication_truncates() {
        let alg = TruncAlgebra::series(3, 4, &AbGroup::trivial(), 3).unwrap();
        let one_plus_t = TruncElem::one(&alg).add(&TruncElem::t(&alg));
        let sq = one_plus_t.mul(&one_plus_t);
        assert_eq!(sq.data(), &[1, 2, 1]);
        let cube = sq.mul(&one_plus_t);
        assert_eq!(cube.data(), &[1, 3, 3]);
    }

    #[test]
    fn group_ring_multiplication() {
        let g = AbGroup::cyclic(3);
        let alg = TruncAlgebra::group_ring(3, 2, &g).unwrap();
        let sigma = TruncElem::group_element(&alg, 1);
        assert_eq!(sigma.pow(3), TruncElem::one(&alg));
        assert_eq!(sigma.invert_group(), TruncElem::group_element(&alg, 2));
    }

    #[test]
    fn substitution_of_inverse_series_is_involutive() {
        let alg = TruncAlgebra::series(5, 3, &AbGroup::cyclic(2), 6).unwrap();
        let zp = *alg.zp();
        let iota_t: Vec<u64> = (0..6).map(|k| if k == 0 { 0 } else if k % 2 == 1 { zp.neg(1) } else { 1 }).collect();
        let x = TruncElem::from_data(&alg, (0..12).map(|i| (i * i + 7) as u64).collect()).unwrap();
        let twice = x.substitute(&iota_t).substitute(&iota_t);
        assert_eq!(twice, x);
    }
}
