use serde::{Deserialize, Serialize};

use crate::arith::lcm;
use crate::error::{Error, Result};

/// Finite abelian group ∏ Z/d_i with an optional complex conjugation j.
///
/// Elements are exponent vectors; the index of an element is its
/// mixed-radix value with the first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbGroup {
    pub cyclic_orders: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<u64>>,
}

impl AbGroup {
    pub fn new(cyclic_orders: Vec<u64>, j: Option<Vec<u64>>) -> Result<Self> {
        if cyclic_orders.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("cyclic orders must be positive".into()));
        }
        let group = AbGroup { cyclic_orders, j: None };
        if let Some(jv) = j {
            if jv.len() != group.rank() {
                return Err(Error::InvalidArgument("j has the wrong length".into()));
            }
            let jv = group.normalize(&jv);
            let twice = group.add_vec(&jv, &jv);
            if group.is_identity(&jv) || !group.is_identity(&twice) {
                return Err(Error::InvalidArgument("j must have order exactly 2".into()));
            }
            return Ok(AbGroup { j: Some(jv), ..group });
        }
        Ok(group)
    }

    pub fn cyclic(order: u64) -> Self {
        AbGroup { cyclic_orders: vec![order], j: None }
    }

    pub fn trivial() -> Self {
        AbGroup { cyclic_orders: vec![], j: None }
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn order(&self) -> usize {
        self.cyclic_orders.iter().product::<u64>() as usize
    }

    /// Exponent of the group, lcm of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.cyclic_orders.iter().fold(1, |acc, &d| lcm(acc, d))
    }

    pub fn normalize(&self, v: &[u64]) -> Vec<u64> {
        v.iter().zip(&self.cyclic_orders).map(|(&a, &d)| a % d).collect()
    }

    pub fn normalize_signed(&self, v: &[i64]) -> Vec<u64> {
        v.iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &d)| a.rem_euclid(d as i64) as u64)
            .collect()
    }

    pub fn is_identity(&self, v: &[u64]) -> bool {
        v.iter().zip(&self.cyclic_orders).all(|(&a, &d)| a % d == 0)
    }

    pub fn add_vec(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.cyclic_orders)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn neg_vec(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.cyclic_orders).map(|(&x, &d)| (d - x % d) % d).collect()
    }

    pub fn scale_vec(&self, a: &[u64], k: i64) -> Vec<u64> {
        a.iter()
            .zip(&self.cyclic_orders)
            .map(|(&x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn index_of(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&a, &d) in v.iter().zip(&self.cyclic_orders) {
            idx = idx * d as usize + (a % d) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.rank()];
        for (slot, &d) in out.iter_mut().zip(&self.cyclic_orders).rev() {
            *slot = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        out
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.add_vec(&self.element(a), &self.element(b)))
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.index_of(&self.neg_vec(&self.element(a)))
    }

    /// Table of sums, row-major; only for small groups.
    pub fn addition_table(&self) -> Vec<usize> {
        let n = self.order();
        let elems = self.elements();
        let mut table = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.index_of(&self.add_vec(&elems[a], &elems[b]));
            }
        }
        table
    }

    pub fn negation_table(&self) -> Vec<usize> {
        (0..self.order()).map(|a| self.neg_idx(a)).collect()
    }

    pub fn j_index(&self) -> Option<usize> {
        self.j.as_ref().map(|jv| self.index_of(jv))
    }

    pub fn element_order(&self, v: &[u64]) -> u64 {
        v.iter()
            .zip(&self.cyclic_orders)
            .map(|(&a, &d)| d / crate::arith::gcd(a % d, d).max(1))
            .map(|o| if o == 0 { 1 } else { o })
            .fold(1, lcm)
    }

    /// G × Z/d with j extended by zero.
    pub fn times_cyclic(&self, d: u64) -> AbGroup {
        let mut orders = self.cyclic_orders.clone();
        orders.push(d);
        let j = self.j.as_ref().map(|jv| {
            let mut v = jv.clone();
            v.push(0);
            v
        });
        AbGroup { cyclic_orders: orders, j }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let g = AbGroup::new(vec![2, 3, 4], Some(vec![1, 0, 0])).unwrap();
        for idx in 0..g.order() {
            assert_eq!(g.index_of(&g.element(idx)), idx);
        }
        assert_eq!(g.exponent(), 12);
        assert_eq!(g.j_index(), Some(12));
    }

    #[test]
    fn rejects_bad_involution() {
        assert!(AbGroup::new(vec![4], Some(vec![1])).is_err());
        assert!(AbGroup::new(vec![4], Some(vec![0])).is_err());
        assert!(AbGroup::new(vec![4], Some(vec![2])).is_ok());
    }
}
