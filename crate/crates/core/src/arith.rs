//! Small-integer number theory and arithmetic modulo a prime power.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(q, _)| q).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut acc = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, acc, modulus);
        }
        acc = mul_mod(acc, acc, modulus);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub fn inv_mod(a: u64, modulus: u64) -> Option<u64> {
    let ext = (a as i128).extended_gcd(&(modulus as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(modulus as i128) as u64)
}

/// Multiplicative order of `a` modulo `modulus` (requires a unit).
pub fn mult_order(a: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(1);
    }
    if gcd(a % modulus, modulus) != 1 {
        return None;
    }
    let phi = euler_phi(modulus);
    let mut order = phi;
    for (q, _) in factorize(phi) {
        while order % q == 0 && pow_mod(a, order / q, modulus) == 1 {
            order /= q;
        }
    }
    Some(order)
}

pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn vp_bigint(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p_big = BigInt::from(p);
    let mut value = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = value.div_rem(&p_big);
        if !rem.is_zero() {
            return Some(v);
        }
        value = quot;
        v += 1;
    }
}

/// p-adic valuation of a rational number, `None` for zero.
pub fn vp_rational(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let num = vp_bigint(x.numer(), p).unwrap_or(0) as i64;
    let den = vp_bigint(x.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Arithmetic in Z/p^N with `p^N < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModRing {
    pub p: u64,
    pub n: u32,
    pub modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("precision N must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .filter(|&q| q < (1u64 << 62))
                .ok_or(Error::PrecisionTooLarge { p, n })?;
        }
        Ok(ModRing { p, n, modulus })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, exp: u64) -> u64 {
        pow_mod(a, exp, self.modulus)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.modulus)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.modulus);
        let r = a.mod_floor(&m);
        r.to_u64().unwrap_or(0)
    }

    /// Reduction of a rational with denominator prime to p.
    pub fn from_rational(&self, x: &BigRational) -> Result<u64> {
        let den = self.from_bigint(x.denom());
        let inv = self
            .inv(den)
            .ok_or_else(|| Error::NotInvertible(format!("denominator of {x} is divisible by {}", self.p)))?;
        Ok(self.mul(self.from_bigint(x.numer()), inv))
    }

    /// Valuation of a residue, `n` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        if a % self.modulus == 0 {
            self.n
        } else {
            vp_u64(a, self.p)
        }
    }

    /// Symmetric representative in (-p^N/2, p^N/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    /// The ring Z/p^k for k ≤ n.
    pub fn with_precision(&self, k: u32) -> Result<ModRing> {
        ModRing::new(self.p, k)
    }

    pub fn p_power(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }
}

pub fn bigint_sign_str(x: &BigInt) -> String {
    match x.sign() {
        Sign::Minus => format!("-{}", x.abs()),
        _ => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_three_mod_four() {
        assert_eq!(mult_order(3, 4), Some(2));
        assert_eq!(mult_order(2, 9), Some(6));
    }

    #[test]
    fn inverse_of_two_mod_81() {
        let ring = ModRing::new(3, 4).unwrap();
        assert_eq!(ring.inv(2), Some(41));
        assert_eq!(ring.inv(3), None);
    }

    #[test]
    fn rejects_even_and_composite() {
        assert!(ModRing::new(2, 3).is_err());
        assert!(ModRing::new(9, 3).is_err());
        assert!(matches!(ModRing::new(3, 60), Err(Error::PrecisionTooLarge { .. })));
    }

    #[test]
    fn factorization_and_phi() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(vp_u64(54, 3), 3);
    }
}
