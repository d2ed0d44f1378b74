//! Truncated p-adic cyclotomic coefficient rings O = Zp[μ_m] modulo p^N.
//!
//! O is built as a tower: the unramified part U = (Z/p^N)[x]/(h(x)) with h
//! monic of degree f = ord(p mod m') and irreducible mod p, then the totally
//! ramified part O = U[π]/(E(π)) with E(π) = Φ_{p^k}(1+π) Eisenstein of
//! degree e = φ(p^k). An element is stored as the coefficient vector of
//! x^i π^j at index j*f + i.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::arith::{binomial_big, euler_phi, factorize, is_prime, mult_order, vp_u64, ModRing};
use crate::error::{Error, Result};

/// π-adic valuation, normalised by v(p) = e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRingDesc {
    pub p: u64,
    pub n: u32,
    pub m: u64,
    pub m_prime: u64,
    pub k: u32,
    pub residue_degree: usize,
    pub ramification: usize,
    pub zp: ModRing,
    /// Monic h of degree f, length f+1, lowest degree first.
    pub unramified_poly: Vec<u64>,
    /// Monic E(π) = Φ_{p^k}(1+π), length e+1.
    pub eisenstein_poly: Vec<u64>,
    zeta_m: Vec<u64>,
}

/// The defining data of O over Zp as a tower of an unramified and an
/// Eisenstein extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerMinpoly {
    pub unramified: Vec<u64>,
    pub eisenstein: Vec<u64>,
}

pub fn make_coeff_ring(p: u64, n: u32, m: u64) -> Result<Arc<CoeffRingDesc>> {
    CoeffRingDesc::new(p, n, m).map(Arc::new)
}

impl CoeffRingDesc {
    pub fn new(p: u64, n: u32, m: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("cyclotomic index m must be at least 1".into()));
        }
        let zp = ModRing::new(p, n)?;
        let k = vp_u64(m, p);
        let m_prime = m / p.pow(k);
        let f = mult_order(p % m_prime, m_prime).unwrap_or(1) as usize;
        let e = euler_phi(p.pow(k)) as usize;
        if (f as f64) * (p as f64).log2() >= 62.0 {
            return Err(Error::SizeLimit(format!("residue field of size {p}^{f} is too large")));
        }
        let h_residue = first_irreducible(p, f);
        let unramified_poly: Vec<u64> = h_residue.clone();
        let eisenstein_poly = eisenstein(p, k, &zp);
        let mut desc = CoeffRingDesc {
            p,
            n,
            m,
            m_prime,
            k,
            residue_degree: f,
            ramification: e,
            zp,
            unramified_poly,
            eisenstein_poly,
            zeta_m: Vec::new(),
        };
        let zeta_unr = desc.teichmuller_root(m_prime);
        let mut zeta = vec![0u64; desc.degree()];
        zeta[..f].copy_from_slice(&zeta_unr);
        if k > 0 {
            let one_plus_pi = desc.one_plus_pi();
            zeta = desc.mul_raw(&zeta, &one_plus_pi);
        }
        desc.zeta_m = zeta;
        Ok(desc)
    }

    pub fn degree(&self) -> usize {
        self.residue_degree * self.ramification
    }

    /// Maximal π-adic precision N·e.
    pub fn full_prec(&self) -> u32 {
        self.n * self.ramification as u32
    }

    pub fn is_ramified(&self) -> bool {
        self.k > 0
    }

    pub fn minpoly(&self) -> TowerMinpoly {
        TowerMinpoly {
            unramified: self.unramified_poly.clone(),
            eisenstein: self.eisenstein_poly.clone(),
        }
    }

    /// Human readable uniformiser: "p" or "zeta_{p^k} - 1".
    pub fn uniformizer_spec(&self) -> String {
        if self.k == 0 {
            format!("{}", self.p)
        } else {
            format!("zeta_{} - 1", self.p.pow(self.k))
        }
    }

    pub fn with_precision(&self, n: u32) -> Result<Arc<CoeffRingDesc>> {
        make_coeff_ring(self.p, n, self.m)
    }

    fn one_plus_pi(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.degree()];
        v[0] = 1;
        if self.ramification > 1 {
            v[self.residue_degree] = 1;
        } else {
            v[0] = self.zp.add(1, self.zp.p);
        }
        v
    }

    fn u_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.residue_degree;
        let zp = &self.zp;
        if f == 1 {
            return vec![zp.mul(a[0], b[0])];
        }
        let mut acc = vec![0u64; 2 * f - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc[i + j] = zp.add(acc[i + j], zp.mul(ai, bj));
            }
        }
        for deg in (f..2 * f - 1).rev() {
            let c = acc[deg];
            if c == 0 {
                continue;
            }
            for i in 0..f {
                let t = zp.mul(c, self.unramified_poly[i]);
                acc[deg - f + i] = zp.sub(acc[deg - f + i], t);
            }
            acc[deg] = 0;
        }
        acc.truncate(f);
        acc
    }

    fn u_pow(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let f = self.residue_degree;
        let mut result = vec![0u64; f];
        result[0] = 1;
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.u_mul(&result, &base);
            }
            base = self.u_mul(&base, &base);
            exp >>= 1;
        }
        result
    }

    /// Raw product of coefficient vectors.
    pub fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.residue_degree;
        let e = self.ramification;
        if e == 1 {
            return self.u_mul(a, b);
        }
        let zp = &self.zp;
        let mut acc: Vec<Vec<u64>> = vec![vec![0u64; f]; 2 * e - 1];
        for j1 in 0..e {
            let a_j = &a[j1 * f..(j1 + 1) * f];
            if a_j.iter().all(|&c| c == 0) {
                continue;
            }
            for j2 in 0..e {
                let b_j = &b[j2 * f..(j2 + 1) * f];
                if b_j.iter().all(|&c| c == 0) {
                    continue;
                }
                let prod = self.u_mul(a_j, b_j);
                let slot = &mut acc[j1 + j2];
                for i in 0..f {
                    slot[i] = zp.add(slot[i], prod[i]);
                }
            }
        }
        for deg in (e..2 * e - 1).rev() {
            let top = std::mem::replace(&mut acc[deg], vec![0u64; f]);
            if top.iter().all(|&c| c == 0) {
                continue;
            }
            for l in 0..e {
                let c = self.eisenstein_poly[l];
                if c == 0 {
                    continue;
                }
                let slot = &mut acc[deg - e + l];
                for i in 0..f {
                    slot[i] = zp.sub(slot[i], zp.mul(top[i], c));
                }
            }
        }
        acc.truncate(e);
        acc.into_iter().flatten().collect()
    }

    /// Teichmüller lift of a primitive root of unity of order `order`
    /// (prime to p) in the unramified part, as a vector of length f.
    fn teichmuller_root(&self, order: u64) -> Vec<u64> {
        let f = self.residue_degree;
        let q = self.p.pow(f as u32);
        let mut one = vec![0u64; f];
        one[0] = 1;
        if order == 1 {
            return one;
        }
        let residue = ModRing { p: self.p, n: 1, modulus: self.p };
        let gen = self.residue_generator(&residue);
        let residue_desc = self.residue_view();
        let mut z = residue_desc.u_pow(&gen, (q - 1) / order);
        for _ in 0..self.n {
            for _ in 0..f {
                z = self.u_pow(&z, self.p);
            }
        }
        z
    }

    fn residue_view(&self) -> CoeffRingDesc {
        let residue = ModRing { p: self.p, n: 1, modulus: self.p };
        CoeffRingDesc {
            zp: residue,
            n: 1,
            unramified_poly: self.unramified_poly.iter().map(|c| c % self.p).collect(),
            eisenstein_poly: self.eisenstein_poly.iter().map(|c| c % self.p).collect(),
            zeta_m: Vec::new(),
            ..self.clone()
        }
    }

    fn residue_generator(&self, residue: &ModRing) -> Vec<u64> {
        let f = self.residue_degree;
        let view = self.residue_view();
        let q = self.p.pow(f as u32);
        let order = q - 1;
        let primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
        let mut candidate = vec![0u64; f];
        loop {
            increment(&mut candidate, residue.p);
            if candidate.iter().all(|&c| c == 0) {
                continue;
            }
            let ok = primes.iter().all(|&r| {
                let w = view.u_pow(&candidate, order / r);
                !(w[0] == 1 && w[1..].iter().all(|&c| c == 0))
            });
            if ok {
                return candidate;
            }
        }
    }
}

fn increment(digits: &mut [u64], base: u64) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

fn poly_rem_mod_p(mut num: Vec<u64>, den: &[u64], p: u64) -> Vec<u64> {
    let dd = den.len() - 1;
    let lead_inv = crate::arith::inv_mod(den[dd], p).unwrap_or(1);
    while num.len() > dd {
        let top = num.pop().unwrap_or(0);
        if top == 0 {
            continue;
        }
        let c = top * lead_inv % p;
        let shift = num.len() - dd;
        for i in 0..dd {
            num[shift + i] = (num[shift + i] + p - c * den[i] % p) % p;
        }
    }
    num
}

/// Lexicographically first monic irreducible polynomial of degree f mod p.
fn first_irreducible(p: u64, f: usize) -> Vec<u64> {
    let mut low = vec![0u64; f];
    loop {
        let mut cand = low.clone();
        cand.push(1);
        if is_irreducible_mod_p(&cand, p) {
            return cand;
        }
        increment(&mut low, p);
    }
}

fn is_irreducible_mod_p(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let mut low = vec![0u64; d];
        loop {
            let mut div = low.clone();
            div.push(1);
            let rem = poly_rem_mod_p(poly.to_vec(), &div, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
            increment(&mut low, p);
            if low.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    true
}

fn eisenstein(p: u64, k: u32, zp: &ModRing) -> Vec<u64> {
    if k == 0 {
        return vec![zp.neg(zp.p % zp.modulus), 1];
    }
    let step = p.pow(k - 1);
    let e = ((p - 1) * step) as usize;
    (0..=e)
        .map(|j| {
            let total: BigInt = (0..p).map(|i| binomial_big(i * step, j as u64)).sum();
            zp.from_bigint(&total)
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicCoeff {
    ring: Arc<CoeffRingDesc>,
    coeffs: Vec<u64>,
    prec: u32,
}

impl fmt::Debug for CyclotomicCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O{:?}@{}", self.coeffs, self.prec)
    }
}

impl CyclotomicCoeff {
    pub fn from_coeffs(ring: &Arc<CoeffRingDesc>, coeffs: Vec<u64>, prec: u32) -> Result<Self> {
        if coeffs.len() != ring.degree() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                ring.degree(),
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| c % ring.zp.modulus).collect();
        Ok(CyclotomicCoeff { ring: ring.clone(), coeffs, prec: prec.min(ring.full_prec()) })
    }

    pub fn zero(ring: &Arc<CoeffRingDesc>) -> Self {
        CyclotomicCoeff { ring: ring.clone(), coeffs: vec![0; ring.degree()], prec: ring.full_prec() }
    }

    pub fn one(ring: &Arc<CoeffRingDesc>) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<CoeffRingDesc>, value: i64) -> Self {
        let mut coeffs = vec![0; ring.degree()];
        coeffs[0] = ring.zp.from_i64(value);
        CyclotomicCoeff { ring: ring.clone(), coeffs, prec: ring.full_prec() }
    }

    pub fn from_bigint(ring: &Arc<CoeffRingDesc>, value: &BigInt) -> Self {
        let mut coeffs = vec![0; ring.degree()];
        coeffs[0] = ring.zp.from_bigint(value);
        CyclotomicCoeff { ring: ring.clone(), coeffs, prec: ring.full_prec() }
    }

    pub fn from_rational(ring: &Arc<CoeffRingDesc>, value: &BigRational) -> Result<Self> {
        let mut coeffs = vec![0; ring.degree()];
        coeffs[0] = ring.zp.from_rational(value)?;
        Ok(CyclotomicCoeff { ring: ring.clone(), coeffs, prec: ring.full_prec() })
    }

    /// The fixed primitive m-th root of unity.
    pub fn zeta(ring: &Arc<CoeffRingDesc>) -> Self {
        CyclotomicCoeff { ring: ring.clone(), coeffs: ring.zeta_m.clone(), prec: ring.full_prec() }
    }

    /// ζ_d^k with ζ_d = ζ_m^{m/d}; requires d | m.
    pub fn root_of_unity(ring: &Arc<CoeffRingDesc>, d: u64, k: i64) -> Result<Self> {
        if d == 0 || ring.m % d != 0 {
            return Err(Error::InvalidArgument(format!("{d} does not divide the cyclotomic index {}", ring.m)));
        }
        let exp = (k.rem_euclid(d as i64) as u64) * (ring.m / d);
        Ok(Self::zeta(ring).pow(exp))
    }

    pub fn uniformizer(ring: &Arc<CoeffRingDesc>) -> Self {
        let mut coeffs = vec![0; ring.degree()];
        if ring.ramification > 1 {
            coeffs[ring.residue_degree] = 1;
        } else {
            coeffs[0] = ring.p % ring.zp.modulus;
        }
        CyclotomicCoeff { ring: ring.clone(), coeffs, prec: ring.full_prec() }
    }

    pub fn ring(&self) -> &Arc<CoeffRingDesc> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = self.prec.min(prec);
        self
    }

    /// The constant coefficient, meaningful when the element lies in Zp.
    pub fn constant_term(&self) -> u64 {
        self.coeffs[0]
    }

    fn check_ring(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "coefficient ring mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let zp = &self.ring.zp;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| zp.add(a, b)).collect();
        CyclotomicCoeff { ring: self.ring.clone(), coeffs, prec: self.prec.min(other.prec) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        let zp = &self.ring.zp;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| zp.sub(a, b)).collect();
        CyclotomicCoeff { ring: self.ring.clone(), coeffs, prec: self.prec.min(other.prec) }
    }

    pub fn neg(&self) -> Self {
        let zp = &self.ring.zp;
        let coeffs = self.coeffs.iter().map(|&a| zp.neg(a)).collect();
        CyclotomicCoeff { ring: self.ring.clone(), coeffs, prec: self.prec }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let coeffs = self.ring.mul_raw(&self.coeffs, &other.coeffs);
        CyclotomicCoeff { ring: self.ring.clone(), coeffs, prec: self.prec.min(other.prec) }
    }

    pub fn scale(&self, factor: u64) -> Self {
        let zp = &self.ring.zp;
        let factor = factor % zp.modulus;
        let coeffs = self.coeffs.iter().map(|&a| zp.mul(a, factor)).collect();
        CyclotomicCoeff { ring: self.ring.clone(), coeffs, prec: self.prec }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::one(&self.ring).with_prec(self.prec);
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

    pub fn valuation(&self) -> Valuation {
        let f = self.ring.residue_degree;
        let e = self.ring.ramification as u32;
        let mut best = u32::MAX;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let j = (idx / f) as u32;
            let v = e * vp_u64(c, self.ring.p) + j;
            best = best.min(v);
        }
        if best >= self.prec {
            Valuation::Infinity
        } else {
            Valuation::Finite(best)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation() == Valuation::Infinity
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Equality modulo π^prec with prec the smaller of the two precisions.
    pub fn equals_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Reduction modulo π^prec to the canonical representative.
    pub fn reduced(&self) -> Vec<u64> {
        let f = self.ring.residue_degree;
        let e = self.ring.ramification as u32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                let j = (idx / f) as u32;
                if j >= self.prec {
                    return 0;
                }
                let digits = (self.prec - j).div_ceil(e);
                if digits >= self.ring.n {
                    c
                } else {
                    c % self.ring.p.pow(digits)
                }
            })
            .collect()
    }

    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotInvertible(format!("element of valuation {} is not a unit", self.valuation())));
        }
        let ring = &self.ring;
        let f = ring.residue_degree;
        let q = ring.p.pow(f as u32);
        let a0 = &self.coeffs[..f];
        let inv0 = ring.u_pow(a0, q - 2);
        let mut y = vec![0u64; ring.degree()];
        y[..f].copy_from_slice(&inv0);
        let mut y = CyclotomicCoeff { ring: ring.clone(), coeffs: y, prec: ring.full_prec() };
        let x = CyclotomicCoeff { ring: ring.clone(), coeffs: self.coeffs.clone(), prec: ring.full_prec() };
        let two = Self::from_int(ring, 2);
        let mut reached = 1u32;
        while reached < ring.full_prec() {
            y = y.mul(&two.sub(&x.mul(&y)));
            reached *= 2;
        }
        Ok(y.with_prec(self.prec))
    }

    /// Division by π of an element of positive valuation.
    fn div_pi(&self) -> Self {
        let ring = &self.ring;
        let zp = &ring.zp;
        let p = ring.p;
        let f = ring.residue_degree;
        let e = ring.ramification;
        let new_prec = self.prec.saturating_sub(1);
        if e == 1 {
            let coeffs = self.coeffs.iter().map(|&c| c / p).collect();
            return CyclotomicCoeff { ring: ring.clone(), coeffs, prec: new_prec };
        }
        let mut out = vec![0u64; ring.degree()];
        for j in 1..e {
            out[(j - 1) * f..j * f].copy_from_slice(&self.coeffs[j * f..(j + 1) * f]);
        }
        let a0_over_p: Vec<u64> = self.coeffs[..f].iter().map(|&c| c / p).collect();
        // p/π = -(π^{e-1} + c_{e-1} π^{e-2} + ... + c_1)
        for l in 1..=e {
            let c = if l == e { 1 } else { ring.eisenstein_poly[l] };
            if c == 0 {
                continue;
            }
            let slot = (l - 1) * f;
            for i in 0..f {
                out[slot + i] = zp.sub(out[slot + i], zp.mul(a0_over_p[i], c));
            }
        }
        CyclotomicCoeff { ring: ring.clone(), coeffs: out, prec: new_prec }
    }

    /// Returns (v, u) with self = π^v · u and u a unit; `None` for zero.
    pub fn unit_part(&self) -> Option<(u32, Self)> {
        let v = self.valuation().finite()?;
        let mut x = self.clone();
        for _ in 0..v {
            x = x.div_pi();
        }
        Some((v, x))
    }

    /// Teichmüller representative ω(a) in Zp ⊂ O of a residue a mod p.
    pub fn teichmuller_lift(ring: &Arc<CoeffRingDesc>, a: i64) -> Result<Self> {
        let p = ring.p as i64;
        if a.rem_euclid(p) == 0 {
            return Err(Error::InvalidArgument(format!("{a} is divisible by p = {p}")));
        }
        let zp = &ring.zp;
        let mut x = zp.from_i64(a);
        for _ in 0..ring.n {
            x = zp.pow(x, ring.p);
        }
        let mut coeffs = vec![0; ring.degree()];
        coeffs[0] = x;
        Ok(CyclotomicCoeff { ring: ring.clone(), coeffs, prec: ring.full_prec() })
    }

    /// p-adic logarithm of a principal unit. The series is summed at a raised
    /// working precision so that the result is exact modulo the input
    /// precision.
    pub fn padic_log(&self) -> Result<Self> {
        let ring = &self.ring;
        let one = Self::one(ring);
        let y = self.sub(&one);
        let vy = match y.valuation() {
            Valuation::Infinity => return Ok(Self::zero(ring).with_prec(self.prec)),
            Valuation::Finite(0) => {
                return Err(Error::InvalidArgument("logarithm requires v(x - 1) >= 1".into()));
            }
            Valuation::Finite(v) => v,
        };
        let e = ring.ramification as u32;
        if (vy as u64) * (ring.p - 1) <= e as u64 {
            return Err(Error::PrecisionExhausted(format!(
                "logarithm is not integral for v(x - 1) = {vy} <= e/(p-1)"
            )));
        }
        let target = ring.full_prec();
        let mut last_k = 1u64;
        let ilog = |k: u64| -> u32 { (k as f64).log(ring.p as f64).floor() as u32 + 1 };
        while (last_k as u32) * vy < target + e * ilog(last_k) {
            last_k += 1;
        }
        let extra = (1..=last_k).map(|k| vp_u64(k, ring.p)).max().unwrap_or(0);
        let work = ring.with_precision(ring.n + extra)?;
        let wy = CyclotomicCoeff { ring: work.clone(), coeffs: y.coeffs.clone(), prec: work.full_prec() };
        let wzp = &work.zp;
        let mut power = wy.clone();
        let mut total = CyclotomicCoeff::zero(&work);
        for k in 1..=last_k {
            let v = vp_u64(k, ring.p);
            let unit = k / ring.p.pow(v);
            let unit_inv = wzp.inv(unit % wzp.modulus).expect("unit part of k is invertible");
            let pv = ring.p.pow(v);
            let coeffs: Vec<u64> = power.coeffs.iter().map(|&c| wzp.mul(c / pv, unit_inv)).collect();
            let term = CyclotomicCoeff { ring: work.clone(), coeffs, prec: work.full_prec() };
            total = if k % 2 == 1 { total.add(&term) } else { total.sub(&term) };
            power = power.mul(&wy);
        }
        let coeffs = total.coeffs.iter().map(|&c| c % ring.zp.modulus).collect();
        Ok(CyclotomicCoeff { ring: ring.clone(), coeffs, prec: self.prec })
    }

    /// Interpret an element of Zp ⊂ O as an integer in [0, p^N).
    pub fn as_zp(&self) -> Option<u64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.ring.p,
            "N": self.ring.n,
            "m": self.ring.m,
            "coeffs": self.reduced().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "prec": self.prec,
        })
    }

    pub fn from_json(ring: &Arc<CoeffRingDesc>, value: &Value) -> Result<Self> {
        let coeffs = value
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Schema("missing coeffs".into()))?
            .iter()
            .map(|c| match c {
                Value::String(s) => s.parse::<u64>().map_err(|e| Error::Schema(e.to_string())),
                Value::Number(n) => n.as_u64().ok_or_else(|| Error::Schema("bad coefficient".into())),
                _ => Err(Error::Schema("bad coefficient".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        let prec = value.get("prec").and_then(|p| p.as_u64()).unwrap_or(ring.full_prec() as u64) as u32;
        Self::from_coeffs(ring, coeffs, prec)
    }

    /// Lift to a ring of the same index with another precision.
    pub fn change_precision(&self, target: &Arc<CoeffRingDesc>) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| c % target.zp.modulus).collect();
        let prec = self.prec.min(target.full_prec());
        CyclotomicCoeff { ring: target.clone(), coeffs, prec }
    }

    pub fn to_bigint_lift(&self) -> Option<BigInt> {
        self.as_zp().map(BigInt::from)
    }
}
