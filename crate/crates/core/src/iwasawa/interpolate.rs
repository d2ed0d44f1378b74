//! Recovering a polynomial in t from its values at t = u^m − 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::vp_bigint;
use crate::error::{Error, Result};
use crate::grp::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation<S> {
    pub nodes: Vec<BigInt>,
    /// Lowest degree first.
    pub coeffs: Vec<S>,
    /// v_p of the Vandermonde determinant of the nodes used.
    pub vandermonde_valuation: u32,
    /// N − v_p(det V) when the values were known modulo p^N.
    pub certified_precision: Option<u32>,
}

/// u^m − 1 for each m.
pub fn interpolation_nodes(u: &BigInt, exponents: &[u32]) -> Vec<BigInt> {
    exponents.iter().map(|&m| u.pow(m) - BigInt::one()).collect()
}

pub fn vandermonde_valuation(p: u64, nodes: &[BigInt]) -> Result<u32> {
    let mut total = 0u32;
    for i in 0..nodes.len() {
        for k in i + 1..nodes.len() {
            let diff = &nodes[k] - &nodes[i];
            total += vp_bigint(&diff, p).ok_or_else(|| Error::InvalidArgument("coincident interpolation nodes".into()))?;
        }
    }
    Ok(total)
}

/// Exact inverse of the Vandermonde matrix V[i][k] = x_i^k.
pub fn vandermonde_inverse(nodes: &[BigInt]) -> Result<Vec<Vec<BigRational>>> {
    let n = nodes.len();
    let mut aug: Vec<Vec<BigRational>> = nodes
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row: Vec<BigRational> = (0..n).map(|k| BigRational::from_integer(x.pow(k as u32))).collect();
            row.extend((0..n).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| Error::InvalidArgument("coincident interpolation nodes".into()))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = &*x - &(&factor * y);
            }
        }
    }
    // aug = [I | V^{-1}], rows indexed by the unknown coefficient.
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// The polynomial of degree < t_prec through (node_i, value_i), using the
/// first t_prec nodes; `input_precision` is N when the values are only
/// known modulo p^N.
pub fn interpolate_from_values<S: Scalar>(
    p: u64,
    nodes: &[BigInt],
    values: &[S],
    t_prec: usize,
    input_precision: Option<u32>,
) -> Result<Interpolation<S>> {
    if nodes.len() != values.len() {
        return Err(Error::InvalidArgument("one value per node is required".into()));
    }
    if t_prec == 0 || nodes.len() < t_prec {
        return Err(Error::InvalidArgument(format!("need at least {t_prec} sample points, got {}", nodes.len())));
    }
    let used = &nodes[..t_prec];
    let valuation = vandermonde_valuation(p, used)?;
    let certified_precision = match input_precision {
        Some(n) if n <= valuation => {
            return Err(Error::PrecisionExhausted(format!(
                "values known mod p^{n} but the Vandermonde determinant has valuation {valuation}"
            )))
        }
        Some(n) => Some(n - valuation),
        None => None,
    };
    let inverse = vandermonde_inverse(used)?;
    let proto = &values[0];
    let mut coeffs = Vec::with_capacity(t_prec);
    for row in &inverse {
        let mut acc = proto.zero_like();
        for (w, v) in row.iter().zip(values) {
            if w.is_zero() {
                continue;
            }
            let weight = proto
                .from_rational_like(w)
                .ok_or_else(|| Error::NotInvertible("interpolation weight leaves the coefficient domain".into()))?;
            acc = acc.plus(&weight.times(v));
        }
        coeffs.push(acc);
    }
    Ok(Interpolation { nodes: used.to_vec(), coeffs, vandermonde_valuation: valuation, certified_precision })
}

pub fn evaluate<S: Scalar>(coeffs: &[S], point: &BigInt) -> S {
    let proto = &coeffs[0];
    let x = proto.from_rational_like(&BigRational::from_integer(point.clone())).expect("integers embed");
    coeffs.iter().rev().fold(proto.zero_like(), |acc, c| acc.times(&x).plus(c))
}

/// Reduction of a p-integral rational modulo p^k.
pub fn rational_mod(value: &BigRational, p: u64, k: u32) -> Option<u64> {
    let modulus = BigInt::from(p).pow(k);
    let den = value.denom();
    if (den % BigInt::from(p)).is_zero() {
        return None;
    }
    let den_mod = ((den % &modulus) + &modulus) % &modulus;
    let inv = den_mod.modinv(&modulus)?;
    let mut num = value.numer() % &modulus;
    if num.is_negative() {
        num += &modulus;
    }
    let r = (num * inv) % &modulus;
    u64::try_from(r).ok()
}
