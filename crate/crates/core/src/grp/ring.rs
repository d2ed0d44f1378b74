use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grp::group::AbGroup;
use crate::grp::scalar::Scalar;

/// Element Σ_g a_g·g of R[G], coefficients indexed by group element index.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingElem<S> {
    group: AbGroup,
    coeffs: Vec<S>,
}

impl<S: Scalar> GroupRingElem<S> {
    pub fn zero(group: &AbGroup, proto: &S) -> Self {
        GroupRingElem { group: group.clone(), coeffs: vec![proto.zero_like(); group.order()] }
    }

    pub fn one(group: &AbGroup, proto: &S) -> Self {
        Self::basis(group, 0, proto)
    }

    pub fn basis(group: &AbGroup, idx: usize, proto: &S) -> Self {
        let mut out = Self::zero(group, proto);
        out.coeffs[idx] = proto.one_like();
        out
    }

    pub fn scalar(group: &AbGroup, value: S) -> Self {
        let mut out = Self::zero(group, &value);
        out.coeffs[0] = value;
        out
    }

    pub fn from_coeffs(group: &AbGroup, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                group.order(),
                coeffs.len()
            )));
        }
        Ok(GroupRingElem { group: group.clone(), coeffs })
    }

    /// Norm element Σ_g g.
    pub fn norm_element(group: &AbGroup, proto: &S) -> Self {
        GroupRingElem { group: group.clone(), coeffs: vec![proto.one_like(); group.order()] }
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> &S {
        &self.coeffs[idx]
    }

    pub fn coeff_at(&self, element: &[u64]) -> &S {
        &self.coeffs[self.group.index_of(element)]
    }

    pub fn proto(&self) -> &S {
        &self.coeffs[0]
    }

    fn check_group(&self, other: &Self) {
        debug_assert_eq!(self.group.cyclic_orders, other.group.cyclic_orders, "group mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_group(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect();
        GroupRingElem { group: self.group.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_group(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.minus(b)).collect();
        GroupRingElem { group: self.group.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        GroupRingElem { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a.negated()).collect() }
    }

    pub fn scale(&self, factor: &S) -> Self {
        GroupRingElem { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a.times(factor)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_group(other);
        let elems = self.group.elements();
        let mut out = vec![self.proto().zero_like(); self.coeffs.len()];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.vanishes() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if y.vanishes() {
                    continue;
                }
                let target = self.group.index_of(&self.group.add_vec(&elems[a], &elems[b]));
                out[target] = out[target].plus(&x.times(y));
            }
        }
        GroupRingElem { group: self.group.clone(), coeffs: out }
    }

    /// Multiplication by the group element with index `idx`.
    pub fn shift(&self, idx: usize) -> Self {
        let g = self.group.element(idx);
        let mut out = vec![self.proto().zero_like(); self.coeffs.len()];
        for (a, x) in self.coeffs.iter().enumerate() {
            let target = self.group.index_of(&self.group.add_vec(&self.group.element(a), &g));
            out[target] = x.clone();
        }
        GroupRingElem { group: self.group.clone(), coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }

    /// ι(g) = g^{-1}.
    pub fn iota(&self) -> Self {
        let mut out = vec![self.proto().zero_like(); self.coeffs.len()];
        for (a, x) in self.coeffs.iter().enumerate() {
            out[self.group.neg_idx(a)] = x.clone();
        }
        GroupRingElem { group: self.group.clone(), coeffs: out }
    }

    /// t_n(g) = c(g)^n·g, with c given on the cyclic generators.
    pub fn tate_twist(&self, n: i64, c_data: &[S]) -> Result<Self> {
        if c_data.len() != self.group.rank() {
            return Err(Error::InvalidArgument("twist data must give c on every generator".into()));
        }
        let base: Vec<S> = if n >= 0 {
            c_data.to_vec()
        } else {
            c_data
                .iter()
                .map(|c| c.try_inverse().ok_or_else(|| Error::NotInvertible("twist value is not a unit".into())))
                .collect::<Result<_>>()?
        };
        let steps = n.unsigned_abs();
        let powered: Vec<S> = base.iter().map(|c| pow_scalar(c, steps)).collect();
        let mut out = self.coeffs.clone();
        for (a, slot) in out.iter_mut().enumerate() {
            let g = self.group.element(a);
            let mut factor = self.proto().one_like();
            for (gi, c) in g.iter().zip(&powered) {
                factor = factor.times(&pow_scalar(c, *gi));
            }
            *slot = slot.times(&factor);
        }
        Ok(GroupRingElem { group: self.group.clone(), coeffs: out })
    }

    /// Canonical section of R[G]⁻ = R[G]/(1+j): x ↦ (1-j)/2·x.
    pub fn minus_projection(&self) -> Result<Self> {
        let j = self.group.j_index().ok_or_else(|| Error::InvalidArgument("group has no involution j".into()))?;
        let half = self
            .proto()
            .from_int_like(2)
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("2 is not invertible".into()))?;
        Ok(self.sub(&self.shift(j)).scale(&half))
    }

    pub fn plus_projection(&self) -> Result<Self> {
        let j = self.group.j_index().ok_or_else(|| Error::InvalidArgument("group has no involution j".into()))?;
        let half = self
            .proto()
            .from_int_like(2)
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("2 is not invertible".into()))?;
        Ok(self.add(&self.shift(j)).scale(&half))
    }

    pub fn augmentation(&self) -> S {
        self.coeffs.iter().fold(self.proto().zero_like(), |acc, c| acc.plus(c))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> GroupRingElem<T> {
        GroupRingElem { group: self.group.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<GroupRingElem<T>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(GroupRingElem { group: self.group.clone(), coeffs })
    }

    /// Nonzero coefficients keyed by the exponent vector written "a,b,…".
    pub fn to_json_with(&self, fmt: impl Fn(&S) -> Value) -> Value {
        let mut map = Map::new();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            let key = self.group.element(idx).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            map.insert(key, fmt(c));
        }
        json!({ "group": self.group, "coeffs": Value::Object(map) })
    }
}

pub fn pow_scalar<S: Scalar>(base: &S, mut exp: u64) -> S {
    let mut result = base.one_like();
    let mut acc = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result = result.times(&acc);
        }
        acc = acc.times(&acc);
        exp >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn iota_inverts_generator_of_order_four() {
        let g = AbGroup::cyclic(4);
        let sigma = GroupRingElem::basis(&g, 1, &q(0));
        assert_eq!(sigma.iota(), GroupRingElem::basis(&g, 3, &q(0)));
    }

    #[test]
    fn twist_by_two() {
        let g = AbGroup::cyclic(2);
        let sigma = GroupRingElem::basis(&g, 1, &q(0));
        let twisted = sigma.tate_twist(1, &[q(2)]).unwrap();
        assert_eq!(twisted, sigma.scale(&q(2)));
        assert_eq!(twisted.tate_twist(-1, &[q(2)]).unwrap(), sigma);
        assert!(sigma.tate_twist(1, &[]).is_err());
    }

    #[test]
    fn minus_projection_examples() {
        let g = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        let one = GroupRingElem::one(&g, &q(0));
        let j = GroupRingElem::basis(&g, 1, &q(0));
        assert!(one.add(&j).minus_projection().unwrap().is_zero());
        let section = one.minus_projection().unwrap();
        assert_eq!(section.coeffs(), &[BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 2.into())]);
        assert_eq!(j.minus_projection().unwrap(), section.neg());
        assert!(GroupRingElem::one(&AbGroup::cyclic(2), &q(0)).minus_projection().is_err());
    }
}
