use crate::error::{Error, Result};
use crate::grp::cyclo::CycloRational;
use crate::grp::group::AbGroup;
use crate::grp::ring::GroupRingElem;
use crate::grp::scalar::Scalar;

/// χ(g_i) = ζ_{d_i}^{exps_i} on the cyclic generators g_i.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: AbGroup,
    exps: Vec<u64>,
}

impl Character {
    pub fn new(group: &AbGroup, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.rank() {
            return Err(Error::InvalidArgument("character needs one image per generator".into()));
        }
        Ok(Character { group: group.clone(), exps: group.normalize(&exps) })
    }

    pub fn trivial(group: &AbGroup) -> Self {
        Character { group: group.clone(), exps: vec![0; group.rank()] }
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// Order of the root of unity in which values are expressed.
    pub fn value_order(&self) -> u64 {
        self.group.exponent()
    }

    /// k with χ(g) = ζ_E^k, E the group exponent.
    pub fn value_exponent(&self, g: &[u64]) -> u64 {
        let big = self.value_order();
        let mut total = 0u64;
        for ((&a, &x), &d) in self.exps.iter().zip(g).zip(&self.group.cyclic_orders) {
            total = (total + (a * (x % d)) % d * (big / d)) % big;
        }
        total
    }

    pub fn value_exponent_idx(&self, idx: usize) -> u64 {
        self.value_exponent(&self.group.element(idx))
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    /// Exact order of χ.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.group.cyclic_orders)
            .map(|(&a, &d)| d / crate::arith::gcd(a, d))
            .fold(1, crate::arith::lcm)
    }

    /// +1 or -1 according to χ(j); `None` without j.
    pub fn parity(&self) -> Option<i8> {
        let j = self.group.j.as_ref()?;
        let k = self.value_exponent(j);
        Some(if k == 0 { 1 } else { -1 })
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Some(-1)
    }

    pub fn inverse(&self) -> Character {
        Character { group: self.group.clone(), exps: self.group.neg_vec(&self.exps) }
    }

    pub fn mul(&self, other: &Character) -> Character {
        Character { group: self.group.clone(), exps: self.group.add_vec(&self.exps, &other.exps) }
    }

    pub fn pow(&self, n: i64) -> Character {
        Character { group: self.group.clone(), exps: self.group.scale_vec(&self.exps, n) }
    }

    pub fn value_cyclo(&self, g: &[u64]) -> CycloRational {
        CycloRational::root(self.value_order(), self.value_exponent(g) as i64)
    }

    pub fn value<S: Scalar>(&self, g: &[u64], proto: &S) -> Result<S> {
        proto
            .root_like(self.value_order(), self.value_exponent(g) as i64)
            .ok_or_else(|| Error::InvalidArgument("coefficient domain lacks the character values".into()))
    }

    /// χ(x) = Σ_g x_g χ(g).
    pub fn eval<S: Scalar>(&self, x: &GroupRingElem<S>) -> Result<S> {
        let proto = x.proto();
        let big = self.value_order();
        let roots: Vec<S> = (0..big)
            .map(|k| {
                proto
                    .root_like(big, k as i64)
                    .ok_or_else(|| Error::InvalidArgument("coefficient domain lacks the character values".into()))
            })
            .collect::<Result<_>>()?;
        let mut acc = proto.zero_like();
        for (idx, c) in x.coeffs().iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            let k = self.value_exponent_idx(idx) as usize;
            acc = acc.plus(&c.times(&roots[k]));
        }
        Ok(acc)
    }
}

/// All characters, exponent vectors in lexicographic order.
pub fn enumerate_characters(group: &AbGroup) -> Vec<Character> {
    group
        .elements()
        .into_iter()
        .map(|exps| Character { group: group.clone(), exps })
        .collect()
}

/// e_χ = 1/|G| Σ_σ χ(σ) σ^{-1}.
pub fn idempotent<S: Scalar>(chi: &Character, proto: &S) -> Result<GroupRingElem<S>> {
    let group = chi.group();
    let inv_order = proto
        .from_int_like(group.order() as i64)
        .try_inverse()
        .ok_or_else(|| Error::NotInvertible("|G| is not invertible in the coefficient domain".into()))?;
    let mut coeffs = vec![proto.zero_like(); group.order()];
    for idx in 0..group.order() {
        let value = chi.value(&group.element(idx), proto)?;
        coeffs[group.neg_idx(idx)] = value.times(&inv_order);
    }
    GroupRingElem::from_coeffs(group, coeffs)
}

pub fn char_transform<S: Scalar>(x: &GroupRingElem<S>) -> Result<Vec<S>> {
    enumerate_characters(x.group()).iter().map(|chi| chi.eval(x)).collect()
}

/// Σ_χ v_χ e_χ, values ordered as in `enumerate_characters`.
pub fn inverse_char_transform<S: Scalar>(group: &AbGroup, values: &[S]) -> Result<GroupRingElem<S>> {
    let chars = enumerate_characters(group);
    if values.len() != chars.len() {
        return Err(Error::InvalidArgument("one value per character is required".into()));
    }
    let proto = &values[0];
    let mut acc = GroupRingElem::zero(group, proto);
    for (chi, v) in chars.iter().zip(values) {
        if v.vanishes() {
            continue;
        }
        acc = acc.add(&idempotent(chi, proto)?.scale(v));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{make_coeff_ring, CyclotomicCoeff};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn characters_of_small_groups() {
        let g2 = AbGroup::cyclic(2);
        assert_eq!(enumerate_characters(&g2).len(), 2);
        let g6 = AbGroup::new(vec![2, 3], Some(vec![1, 0])).unwrap();
        let chars = enumerate_characters(&g6);
        assert_eq!(chars.len(), 6);
        assert_eq!(chars.iter().filter(|c| c.is_odd()).count(), 3);
    }

    #[test]
    fn orthogonality_on_z4() {
        let g = AbGroup::cyclic(4);
        let chars = enumerate_characters(&g);
        for chi in &chars {
            for psi in &chars {
                let mut sum = CycloRational::zero(4);
                for idx in 0..4 {
                    let gval = g.element(idx);
                    let inv = g.neg_vec(&gval);
                    sum = sum.add(&chi.value_cyclo(&gval).mul(&psi.value_cyclo(&inv)));
                }
                let expected = if chi == psi { 4 } else { 0 };
                assert_eq!(sum, CycloRational::from_int(4, expected));
            }
        }
        let images: Vec<_> = chars.iter().map(|c| c.value_cyclo(&[1])).collect();
        for (k, img) in images.iter().enumerate() {
            assert_eq!(*img, CycloRational::root(4, k as i64));
        }
    }

    #[test]
    fn idempotents_on_z2_and_z3() {
        let g = AbGroup::cyclic(2);
        let proto = BigRational::from_integer(BigInt::from(0));
        let sign = Character::new(&g, vec![1]).unwrap();
        let e = idempotent(&sign, &proto).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(e.coeffs(), &[half.clone(), -half]);
        let total = enumerate_characters(&g)
            .iter()
            .fold(GroupRingElem::zero(&g, &proto), |acc, c| acc.add(&idempotent(c, &proto).unwrap()));
        assert_eq!(total, GroupRingElem::one(&g, &proto));

        let g3 = AbGroup::cyclic(3);
        let proto3 = CycloRational::zero(3);
        let chi = Character::new(&g3, vec![1]).unwrap();
        let e1 = idempotent(&chi, &proto3).unwrap();
        let e2 = idempotent(&chi.pow(2), &proto3).unwrap();
        assert!(e1.mul(&e2).is_zero());
        assert_eq!(e1.mul(&e1), e1);
    }

    #[test]
    fn transform_examples_and_round_trip() {
        let g = AbGroup::new(vec![2, 3], Some(vec![1, 0])).unwrap();
        let proto = CycloRational::zero(6);
        let one = GroupRingElem::one(&g, &proto);
        assert!(char_transform(&one).unwrap().iter().all(|v| *v == CycloRational::from_int(6, 1)));
        let norm = GroupRingElem::norm_element(&g, &proto);
        let values = char_transform(&norm).unwrap();
        assert_eq!(values[0], CycloRational::from_int(6, 6));
        assert!(values[1..].iter().all(|v| v.is_zero()));

        let ring = make_coeff_ring(7, 4, 6).unwrap();
        let coeffs: Vec<CyclotomicCoeff> =
            (0..6).map(|i| CyclotomicCoeff::from_int(&ring, 3 * i * i - 5)).collect();
        let x = GroupRingElem::from_coeffs(&g, coeffs).unwrap();
        let back = inverse_char_transform(&g, &char_transform(&x).unwrap()).unwrap();
        for (a, b) in back.coeffs().iter().zip(x.coeffs()) {
            assert!(a.equals_at_precision(b));
        }
    }
}
