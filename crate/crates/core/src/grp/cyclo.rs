//! Exact arithmetic in Q(ζ_d), power basis 1, ζ, …, ζ^{φ(d)-1}.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{euler_phi, gcd};
use crate::coeff::{CoeffRingDesc, CyclotomicCoeff};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    pub order: u64,
    pub degree: usize,
    /// Monic Φ_d, lowest degree first.
    pub poly: Vec<BigInt>,
    /// ζ^k reduced to the power basis, for 0 ≤ k < d.
    powers: Vec<Vec<BigInt>>,
}

fn int_poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
        quot[i] = c;
    }
    quot
}

pub fn cyclotomic_polynomial(d: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d % e == 0 {
            num = int_poly_div(&num, &cyclotomic_polynomial(e));
        }
    }
    num
}

impl CycloField {
    fn build(order: u64) -> Self {
        let poly = cyclotomic_polynomial(order);
        let degree = euler_phi(order) as usize;
        let mut powers = Vec::with_capacity(order as usize);
        let mut current = vec![BigInt::zero(); degree];
        current[0] = BigInt::one();
        for _ in 0..order {
            powers.push(current.clone());
            // multiply by ζ
            let top = current[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = current[i - 1].clone();
            }
            if !top.is_zero() {
                for i in 0..degree {
                    next[i] -= &top * &poly[i];
                }
            }
            current = next;
        }
        CycloField { order, degree, poly, powers }
    }

    pub fn get(order: u64) -> Arc<CycloField> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard.entry(order.max(1)).or_insert_with(|| Arc::new(CycloField::build(order.max(1)))).clone()
    }

    pub fn power(&self, k: u64) -> &[BigInt] {
        &self.powers[(k % self.order) as usize]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycloRational {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.field.order),
                _ => format!("({c})*z{}^{i}", self.field.order),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl CycloRational {
    pub fn zero(order: u64) -> Self {
        let field = CycloField::get(order);
        let coeffs = vec![BigRational::zero(); field.degree];
        CycloRational { field, coeffs }
    }

    pub fn from_rational(order: u64, value: BigRational) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = value;
        out
    }

    pub fn from_int(order: u64, value: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(value)))
    }

    /// ζ_d^k.
    pub fn root(order: u64, k: i64) -> Self {
        let field = CycloField::get(order);
        let idx = k.rem_euclid(field.order as i64) as u64;
        let coeffs = field.power(idx).iter().map(|c| BigRational::from_integer(c.clone())).collect();
        CycloRational { field, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Build from coefficients of ζ^0..ζ^{d-1} (not necessarily reduced).
    pub fn from_bucket(order: u64, bucket: &[BigRational]) -> Self {
        let field = CycloField::get(order);
        let mut coeffs = vec![BigRational::zero(); field.degree];
        for (k, c) in bucket.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, b) in coeffs.iter_mut().zip(field.power(k as u64)) {
                if !b.is_zero() {
                    *slot += c * BigRational::from_integer(b.clone());
                }
            }
        }
        CycloRational { field, coeffs }
    }

    /// Coefficients as a length-d bucket (ζ^i for i < φ(d)).
    pub fn to_bucket(&self) -> Vec<BigRational> {
        let mut bucket = vec![BigRational::zero(); self.field.order as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            bucket[i] = c.clone();
        }
        bucket
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloRational { field: a.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloRational { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let d = a.field.order as usize;
        let mut bucket = vec![BigRational::zero(); d];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    bucket[(i + k) % d] += x * y;
                }
            }
        }
        Self::from_bucket(a.field.order, &bucket)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        CycloRational { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplication by ζ^k.
    pub fn mul_root(&self, k: i64) -> Self {
        let d = self.field.order as i64;
        let mut bucket = vec![BigRational::zero(); d as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            bucket[(i as i64 + k).rem_euclid(d) as usize] = c.clone();
        }
        Self::from_bucket(d as u64, &bucket)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// View in Q(ζ_D) for d | D via ζ_d = ζ_D^{D/d}.
    pub fn embed(&self, target: u64) -> Result<Self> {
        let d = self.field.order;
        if target % d != 0 {
            return Err(Error::InvalidArgument(format!("Q(zeta_{d}) does not embed in Q(zeta_{target})")));
        }
        if target == d {
            return Ok(self.clone());
        }
        let step = (target / d) as usize;
        let mut bucket = vec![BigRational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            bucket[i * step] = c.clone();
        }
        Ok(Self::from_bucket(target, &bucket))
    }

    /// Galois action ζ ↦ ζ^a for a prime to d.
    pub fn galois(&self, a: u64) -> Result<Self> {
        let d = self.field.order;
        if gcd(a % d, d) != 1 {
            return Err(Error::InvalidArgument(format!("{a} is not a unit mod {d}")));
        }
        let mut bucket = vec![BigRational::zero(); d as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            bucket[((i as u64 * a) % d) as usize] = c.clone();
        }
        Ok(Self::from_bucket(d, &bucket))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(self.order(), r.recip()));
        }
        // Product of the nontrivial conjugates divided by the norm.
        let d = self.field.order;
        let mut acc = Self::from_int(d, 1);
        for a in 2..d {
            if gcd(a, d) == 1 {
                acc = acc.mul(&self.galois(a).ok()?);
            }
        }
        let norm = self.mul(&acc).as_rational()?;
        Some(acc.scale(&norm.recip()))
    }

    /// Image in O under ζ_d ↦ ζ_m^{m/d}; needs d | m and p-integral
    /// coefficients.
    pub fn to_coeff(&self, ring: &Arc<CoeffRingDesc>) -> Result<CyclotomicCoeff> {
        let d = self.field.order;
        let mut acc = CyclotomicCoeff::zero(ring);
        let zeta = CyclotomicCoeff::root_of_unity(ring, d, 1)?;
        let mut power = CyclotomicCoeff::one(ring);
        for c in &self.coeffs {
            if !c.is_zero() {
                let term = CyclotomicCoeff::from_rational(ring, c)?;
                acc = acc.add(&term.mul(&power));
            }
            power = power.mul(&zeta);
        }
        Ok(acc)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.field.order == b.field.order {
            return (a.clone(), b.clone());
        }
        let target = crate::arith::lcm(a.field.order, b.field.order);
        (a.embed(target).expect("divides lcm"), b.embed(target).expect("divides lcm"))
    }
}
