use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::CyclotomicCoeff;
use crate::grp::cyclo::CycloRational;

/// Coefficient domain of a group ring. Constructors take `&self` so that
/// descriptor-carrying coefficients (precision rings, cyclotomic orders) can
/// produce compatible constants.
pub trait Scalar: Clone + fmt::Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, value: i64) -> Self;
    /// None when the rational is not in the domain (p in the denominator).
    fn from_rational_like(&self, value: &BigRational) -> Option<Self>;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn try_inverse(&self) -> Option<Self>;
    /// ζ_order^k if the domain contains it.
    fn root_like(&self, order: u64, k: i64) -> Option<Self>;
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_int_like(&self, value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
    fn from_rational_like(&self, value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn root_like(&self, order: u64, k: i64) -> Option<Self> {
        let reduced = k.rem_euclid(order.max(1) as i64) as u64;
        if reduced == 0 {
            Some(BigRational::one())
        } else if 2 * reduced == order {
            Some(-BigRational::one())
        } else {
            None
        }
    }
}

impl Scalar for CycloRational {
    fn zero_like(&self) -> Self {
        CycloRational::zero(self.order())
    }
    fn one_like(&self) -> Self {
        CycloRational::from_int(self.order(), 1)
    }
    fn from_int_like(&self, value: i64) -> Self {
        CycloRational::from_int(self.order(), value)
    }
    fn from_rational_like(&self, value: &BigRational) -> Option<Self> {
        Some(CycloRational::from_rational(self.order(), value.clone()))
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn root_like(&self, order: u64, k: i64) -> Option<Self> {
        let root = CycloRational::root(order, k);
        if self.order() % order == 0 {
            root.embed(self.order()).ok()
        } else {
            Some(root)
        }
    }
}

impl Scalar for CyclotomicCoeff {
    fn zero_like(&self) -> Self {
        CyclotomicCoeff::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        CyclotomicCoeff::one(self.ring())
    }
    fn from_int_like(&self, value: i64) -> Self {
        CyclotomicCoeff::from_int(self.ring(), value)
    }
    fn from_rational_like(&self, value: &BigRational) -> Option<Self> {
        CyclotomicCoeff::from_rational(self.ring(), value).ok()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn try_inverse(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn root_like(&self, order: u64, k: i64) -> Option<Self> {
        CyclotomicCoeff::root_of_unity(self.ring(), order, k).ok()
    }
}
