use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fitcalc::howell::{howell, Echelon};
use crate::grp::{TruncAlgebra, TruncElem};

/// A finitely generated ideal of a truncated algebra, normalised by the
/// Howell form of its underlying Z/p^N-module.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    alg: Arc<TruncAlgebra>,
    generators: Vec<TruncElem>,
    echelon: Echelon,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_shape(&other.alg) && self.echelon.rows == other.echelon.rows
    }
}

impl IdealHandle {
    pub fn from_generators(alg: &Arc<TruncAlgebra>, generators: Vec<TruncElem>) -> Result<Self> {
        for g in &generators {
            if !g.alg().same_shape(alg) {
                return Err(Error::RingMismatch("generator outside the ideal's algebra".into()));
            }
        }
        let mut rows = Vec::with_capacity(generators.len() * alg.dim());
        for g in &generators {
            if g.is_zero() {
                continue;
            }
            for b in 0..alg.dim() {
                rows.push(g.mul(&TruncElem::basis(alg, b)).into_data());
            }
        }
        let echelon = howell(alg.zp(), rows, alg.dim());
        Ok(IdealHandle { alg: alg.clone(), generators, echelon })
    }

    pub fn principal(x: &TruncElem) -> Self {
        Self::from_generators(x.alg(), vec![x.clone()]).expect("generator lies in its algebra")
    }

    pub fn unit(alg: &Arc<TruncAlgebra>) -> Self {
        Self::principal(&TruncElem::one(alg))
    }

    pub fn zero(alg: &Arc<TruncAlgebra>) -> Self {
        Self::from_generators(alg, vec![]).expect("empty generator list")
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[TruncElem] {
        &self.generators
    }

    pub fn canonical_basis(&self) -> &[Vec<u64>] {
        &self.echelon.rows
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    fn check_alg(&self, x: &TruncElem) -> Result<()> {
        if x.alg().same_shape(&self.alg) {
            Ok(())
        } else {
            Err(Error::RingMismatch("element and ideal live in different algebras".into()))
        }
    }

    pub fn contains(&self, x: &TruncElem) -> Result<bool> {
        self.check_alg(x)?;
        Ok(self.echelon.contains(x.data()))
    }

    /// Multipliers against the canonical basis witnessing membership.
    pub fn membership_certificate(&self, x: &TruncElem) -> Result<Option<Vec<u64>>> {
        self.check_alg(x)?;
        let (rest, cert) = self.echelon.reduce(x.data());
        Ok(if rest.iter().all(|&c| c == 0) { Some(cert) } else { None })
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        if !self.alg.same_shape(&other.alg) {
            return Err(Error::RingMismatch("ideals live in different algebras".into()));
        }
        Ok(self.echelon.rows == other.echelon.rows)
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        if !self.alg.same_shape(&other.alg) {
            return Err(Error::RingMismatch("ideals live in different algebras".into()));
        }
        Ok(self.echelon.rows.iter().all(|r| other.echelon.contains(r)))
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.try_mul(b)?);
            }
        }
        Self::from_generators(&self.alg, gens)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::from_generators(&self.alg, gens)
    }

    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::unit(&self.alg);
        for _ in 0..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.echelon.contains(TruncElem::one(&self.alg).data())
    }

    /// Image under a ring map, generated by the images of the generators.
    pub fn map(&self, target: &Arc<TruncAlgebra>, f: impl Fn(&TruncElem) -> Result<TruncElem>) -> Result<Self> {
        let gens = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::from_generators(target, gens)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            "canonical_basis": self
                .echelon
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::AbGroup;

    #[test]
    fn three_equals_three_nine() {
        let alg = TruncAlgebra::group_ring(3, 5, &AbGroup::trivial()).unwrap();
        let a = IdealHandle::principal(&TruncElem::from_int(&alg, 3));
        let b = IdealHandle::from_generators(&alg, vec![TruncElem::from_int(&alg, 3), TruncElem::from_int(&alg, 9)])
            .unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&TruncElem::zero(&alg)).unwrap());
        assert!(!a.contains(&TruncElem::from_int(&alg, 1)).unwrap());
    }

    #[test]
    fn membership_matches_brute_force_over_z9_c2() {
        let alg = TruncAlgebra::group_ring(3, 2, &AbGroup::cyclic(2)).unwrap();
        let gen = TruncElem::from_data(&alg, vec![3, 1]).unwrap();
        let ideal = IdealHandle::principal(&gen);
        let mut brute = std::collections::HashSet::new();
        for a in 0..9 {
            for b in 0..9 {
                let x = TruncElem::from_data(&alg, vec![a, b]).unwrap();
                brute.insert(gen.mul(&x).into_data());
            }
        }
        for a in 0..9 {
            for b in 0..9 {
                let x = TruncElem::from_data(&alg, vec![a, b]).unwrap();
                assert_eq!(ideal.contains(&x).unwrap(), brute.contains(&vec![a, b]));
            }
        }
    }
}
