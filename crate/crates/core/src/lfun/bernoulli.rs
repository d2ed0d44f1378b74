//! Bernoulli numbers and polynomials, Dirichlet characters and generalized
//! Bernoulli numbers B_{m,χ}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{binomial_big, divisors, gcd, prime_divisors};
use crate::error::{Error, Result};
use crate::grp::{Character, CycloRational};

use super::field::AbelianField;

fn rat(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// B_0..B_n with B_1 = −1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
    out.push(BigRational::one());
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for (i, b) in out.iter().enumerate() {
            acc += BigRational::from_integer(binomial_big(k as u64 + 1, i as u64)) * b;
        }
        out.push(-acc / rat(k as i64 + 1));
    }
    out
}

/// B_m(x) = Σ_k C(m, k) B_k x^{m−k}.
pub fn bernoulli_polynomial(m: usize, x: &BigRational) -> BigRational {
    let numbers = bernoulli_numbers(m);
    let mut acc = BigRational::zero();
    let mut power = BigRational::one();
    for k in (0..=m).rev() {
        acc += BigRational::from_integer(binomial_big(m as u64, k as u64)) * &numbers[k] * &power;
        power *= x;
    }
    acc
}

/// χ(a) = ζ_order^{values[a]}, None on non-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    values: Vec<Option<u64>>,
}

impl DirichletCharacter {
    pub fn new(modulus: u64, order: u64, values: Vec<Option<u64>>) -> Result<Self> {
        if modulus == 0 || order == 0 || values.len() != modulus as usize {
            return Err(Error::InvalidArgument("one value per residue is required".into()));
        }
        for a in 0..modulus {
            let unit = gcd(a, modulus) == 1;
            if unit != values[a as usize].is_some() {
                return Err(Error::InvalidArgument(format!("χ({a}) must vanish exactly off the units")));
            }
        }
        let values: Vec<Option<u64>> = values.into_iter().map(|v| v.map(|k| k % order)).collect();
        for a in 0..modulus {
            for b in 0..modulus {
                if let (Some(x), Some(y)) = (values[a as usize], values[b as usize]) {
                    if values[(a * b % modulus) as usize] != Some((x + y) % order) {
                        return Err(Error::InvalidArgument("values are not multiplicative".into()));
                    }
                }
            }
        }
        Ok(DirichletCharacter { modulus, order, values })
    }

    pub fn trivial(modulus: u64) -> Self {
        let values = (0..modulus).map(|a| if gcd(a, modulus) == 1 { Some(0) } else { None }).collect();
        DirichletCharacter { modulus, order: 1, values }
    }

    /// χ ∘ Artin map, of modulus the presentation conductor of K, with values
    /// in μ_E for E the exponent of G.
    pub fn from_field(field: &AbelianField, chi: &Character) -> Self {
        let order = field.group().exponent();
        let values = field.artin_table().iter().map(|g| g.map(|idx| chi.value_exponent_idx(idx))).collect();
        DirichletCharacter { modulus: field.conductor(), order, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn value(&self, a: i64) -> Option<u64> {
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value_cyclo(&self, a: i64) -> CycloRational {
        match self.value(a) {
            Some(k) => CycloRational::root(self.order, k as i64),
            None => CycloRational::zero(self.order),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|&k| k == 0)
    }

    pub fn is_even(&self) -> bool {
        self.value(-1) == Some(0)
    }

    pub fn inverse(&self) -> Self {
        let order = self.order;
        let values = self.values.iter().map(|v| v.map(|k| (order - k) % order)).collect();
        DirichletCharacter { modulus: self.modulus, order, values }
    }

    /// Smallest d | f with χ trivial on units ≡ 1 mod d.
    pub fn conductor(&self) -> u64 {
        let f = self.modulus;
        divisors(f)
            .into_iter()
            .find(|&d| (0..f).all(|a| a % d != 1 % d || self.values[a as usize].map_or(true, |k| k == 0)))
            .unwrap_or(f)
    }

    /// The primitive character inducing χ.
    pub fn primitive(&self) -> Self {
        let d = self.conductor();
        let f = self.modulus;
        let values = (0..d)
            .map(|b| {
                if gcd(b, d) != 1 {
                    return None;
                }
                (0..f).filter(|&a| a % d == b % d).find_map(|a| self.values[a as usize])
            })
            .collect();
        DirichletCharacter { modulus: d, order: self.order, values }
    }
}

/// B_{m,χ} = f^{m−1} Σ_{a=1}^{f} χ(a) B_m(a/f), f the modulus of χ. For an
/// imprimitive χ this is B_{m,χ_0}·∏_{ℓ | f}(1 − χ_0(ℓ)ℓ^{m−1}).
pub fn generalized_bernoulli(chi: &DirichletCharacter, m: u32) -> Result<CycloRational> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let f = chi.modulus;
    let numbers = bernoulli_numbers(m as usize);
    let mut bucket = vec![BigRational::zero(); chi.order as usize];
    for a in 1..=f {
        let Some(k) = chi.value(a as i64) else { continue };
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        let mut value = BigRational::zero();
        let mut power = BigRational::one();
        for i in (0..=m as usize).rev() {
            value += BigRational::from_integer(binomial_big(m as u64, i as u64)) * &numbers[i] * &power;
            power *= &x;
        }
        bucket[k as usize] += value;
    }
    let scale = BigRational::from_integer(BigInt::from(f).pow(m - 1));
    Ok(CycloRational::from_bucket(chi.order, &bucket).scale(&scale))
}

/// L_S(χ, 1−m) = −B_{m,χ_0}/m · ∏_{ℓ ∈ S}(1 − χ_0(ℓ)ℓ^{m−1}), χ_0 primitive;
/// `s_primes` lists the finite places of S.
pub fn l_value_s(chi: &DirichletCharacter, m: u32, s_primes: &[u64]) -> Result<CycloRational> {
    let prim = chi.primitive();
    for ell in prime_divisors(prim.modulus) {
        if !s_primes.contains(&ell) {
            return Err(Error::Hypothesis(format!("S misses the ramified prime {ell}")));
        }
    }
    let b = generalized_bernoulli(&prim, m)?;
    let mut value = b.scale(&BigRational::new(BigInt::from(-1), BigInt::from(m)));
    for &ell in s_primes {
        let power = BigRational::from_integer(BigInt::from(ell).pow(m - 1));
        let factor = CycloRational::from_int(prim.order, 1).sub(&prim.value_cyclo(ell as i64).scale(&power));
        value = value.mul(&factor);
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn quadratic(field: &AbelianField) -> DirichletCharacter {
        let chi = Character::new(field.group(), vec![1]).unwrap();
        DirichletCharacter::from_field(field, &chi)
    }

    fn bernoulli_oracle(n: usize) -> BigRational {
        // Akiyama–Tanigawa
        let mut row: Vec<BigRational> = (0..=n).map(|k| q(1, k as i64 + 1)).collect();
        for j in 1..=n {
            for k in 0..=n - j {
                row[k] = rat(k as i64 + 1) * (&row[k] - &row[k + 1]);
            }
        }
        let b = row[0].clone();
        // the algorithm yields B_1 = +1/2
        if n == 1 {
            -b
        } else {
            b
        }
    }

    #[test]
    fn bernoulli_numbers_match_oracle() {
        let numbers = bernoulli_numbers(14);
        for (n, b) in numbers.iter().enumerate() {
            assert_eq!(*b, bernoulli_oracle(n), "B_{n}");
        }
        assert_eq!(numbers[2], q(1, 6));
        assert_eq!(numbers[12], q(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomial_values() {
        assert_eq!(bernoulli_polynomial(1, &q(1, 4)), q(-1, 4));
        assert_eq!(bernoulli_polynomial(2, &q(0, 1)), q(1, 6));
        assert_eq!(bernoulli_polynomial(2, &q(1, 2)), q(-1, 12));
    }

    #[test]
    fn first_generalized_numbers() {
        let chi4 = quadratic(&AbelianField::cyclotomic(4).unwrap());
        assert_eq!(generalized_bernoulli(&chi4, 1).unwrap().as_rational(), Some(q(-1, 2)));
        let chi3 = quadratic(&AbelianField::cyclotomic(3).unwrap());
        assert_eq!(generalized_bernoulli(&chi3, 1).unwrap().as_rational(), Some(q(-1, 3)));
        let trivial = DirichletCharacter::trivial(1);
        assert_eq!(generalized_bernoulli(&trivial, 2).unwrap().as_rational(), Some(q(1, 6)));
        assert_eq!(generalized_bernoulli(&trivial, 1).unwrap().as_rational(), Some(q(1, 2)));
        assert!(generalized_bernoulli(&trivial, 0).is_err());
    }

    #[test]
    fn class_number_of_minus_23() {
        let squares: Vec<u64> = (1..23).map(|a| a * a % 23).collect();
        let chi = quadratic(&AbelianField::from_subgroup(23, &squares).unwrap());
        assert_eq!(generalized_bernoulli(&chi, 1).unwrap().as_rational(), Some(rat(-3)));
    }

    #[test]
    fn parity_vanishing() {
        let field = AbelianField::cyclotomic(7).unwrap();
        for chi in crate::grp::enumerate_characters(field.group()) {
            let dc = DirichletCharacter::from_field(&field, &chi).primitive();
            for m in 1..=4u32 {
                // χ(−1) = (−1)^{m+1}
                let forced = dc.is_even() == (m % 2 == 1);
                if forced && !(m == 1 && dc.is_trivial()) {
                    assert!(generalized_bernoulli(&dc, m).unwrap().is_zero(), "{:?} m={m}", chi.exps());
                }
            }
        }
    }

    #[test]
    fn imprimitive_sum_removes_euler_factors() {
        let field = AbelianField::cyclotomic(4).unwrap().at_conductor(12).unwrap();
        let chi = quadratic(&field);
        assert_eq!(chi.conductor(), 4);
        let prim = chi.primitive();
        for m in 1..=3u32 {
            let full = generalized_bernoulli(&chi, m).unwrap();
            let expected = generalized_bernoulli(&prim, m)
                .unwrap()
                .mul(&CycloRational::from_int(2, 1).sub(&prim.value_cyclo(3).scale(&rat(3i64.pow(m - 1)))));
            assert_eq!(full.as_rational(), expected.embed(full.order()).unwrap().as_rational());
        }
    }

    #[test]
    fn s_truncated_values() {
        let chi4 = quadratic(&AbelianField::cyclotomic(4).unwrap());
        assert_eq!(l_value_s(&chi4, 1, &[2]).unwrap().as_rational(), Some(q(1, 2)));
        let trivial = DirichletCharacter::trivial(1);
        assert!(l_value_s(&trivial, 1, &[2]).unwrap().is_zero());
        assert_eq!(l_value_s(&trivial, 2, &[2]).unwrap().as_rational(), Some(q(1, 12)));
        assert!(matches!(l_value_s(&chi4, 1, &[3]), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn conductor_of_characters() {
        let field = AbelianField::cyclotomic(40).unwrap();
        for chi in crate::grp::enumerate_characters(field.group()) {
            let dc = DirichletCharacter::from_field(&field, &chi);
            let f = dc.conductor();
            assert_eq!(40 % f, 0);
            assert_eq!(dc.primitive().conductor(), f);
        }
    }
}
