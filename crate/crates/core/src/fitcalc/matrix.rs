//! Determinants and characteristic polynomials over commutative truncated
//! algebras, division free.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fitcalc::howell::solve_left;
use crate::grp::{TruncAlgebra, TruncElem};

pub type RingMatrix = Vec<Vec<TruncElem>>;

pub fn identity(alg: &Arc<TruncAlgebra>, n: usize) -> RingMatrix {
    (0..n)
        .map(|i| (0..n).map(|k| if i == k { TruncElem::one(alg) } else { TruncElem::zero(alg) }).collect())
        .collect()
}

pub fn is_square(a: &RingMatrix) -> bool {
    a.iter().all(|row| row.len() == a.len())
}

pub fn mat_mul(a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    (0..inner).fold(TruncElem::zero(row[0].alg()), |acc, k| acc.add(&row[k].mul(&b[k][c])))
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &RingMatrix) -> RingMatrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|c| a.iter().map(|row| row[c].clone()).collect()).collect()
}

pub fn map_entries(a: &RingMatrix, f: impl Fn(&TruncElem) -> Result<TruncElem>) -> Result<RingMatrix> {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

/// Cofactor expansion along the first row.
pub fn det_laplace(a: &RingMatrix) -> TruncElem {
    let n = a.len();
    assert!(n > 0, "determinant of an empty matrix needs an algebra");
    if n == 1 {
        return a[0][0].clone();
    }
    if n == 2 {
        return a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    }
    let mut acc = TruncElem::zero(a[0][0].alg());
    for col in 0..n {
        if a[0][col].is_zero() {
            continue;
        }
        let minor: RingMatrix = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = a[0][col].mul(&det_laplace(&minor));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Coefficients of det(X·I − A), lowest degree first (monic, length n+1),
/// by Berkowitz's algorithm.
pub fn charpoly_berkowitz(alg: &Arc<TruncAlgebra>, a: &RingMatrix) -> Vec<TruncElem> {
    let n = a.len();
    // highest degree first during the recursion
    let mut poly = vec![TruncElem::one(alg)];
    for r in 0..n {
        let mut column = vec![TruncElem::one(alg), a[r][r].neg()];
        if r > 0 {
            let mut current: Vec<TruncElem> = (0..r).map(|i| a[i][r].clone()).collect();
            for _ in 0..r {
                let value = (0..r).fold(TruncElem::zero(alg), |acc, k| acc.add(&a[r][k].mul(&current[k])));
                column.push(value.neg());
                current = (0..r)
                    .map(|i| (0..r).fold(TruncElem::zero(alg), |acc, k| acc.add(&a[i][k].mul(&current[k]))))
                    .collect();
            }
        }
        let mut next = vec![TruncElem::zero(alg); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (k, coeff) in poly.iter().enumerate() {
                if i >= k && i - k < column.len() {
                    *slot = slot.add(&column[i - k].mul(coeff));
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    poly
}

pub fn det_berkowitz(alg: &Arc<TruncAlgebra>, a: &RingMatrix) -> TruncElem {
    let n = a.len();
    if n == 0 {
        return TruncElem::one(alg);
    }
    let poly = charpoly_berkowitz(alg, a);
    if n % 2 == 0 {
        poly[0].clone()
    } else {
        poly[0].neg()
    }
}

pub fn det(alg: &Arc<TruncAlgebra>, a: &RingMatrix) -> TruncElem {
    match a.len() {
        0 => TruncElem::one(alg),
        1..=5 => det_laplace(a),
        _ => det_berkowitz(alg, a),
    }
}

pub fn adjugate(alg: &Arc<TruncAlgebra>, a: &RingMatrix) -> RingMatrix {
    let n = a.len();
    if n == 1 {
        return vec![vec![TruncElem::one(alg)]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let minor: RingMatrix = a
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != k)
                        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, x)| x.clone()).collect())
                        .collect();
                    let value = det(alg, &minor);
                    if (i + k) % 2 == 0 {
                        value
                    } else {
                        value.neg()
                    }
                })
                .collect()
        })
        .collect()
}

/// Inverse of a unit of the truncated algebra, by linear algebra.
pub fn invert_element(x: &TruncElem) -> Result<TruncElem> {
    let alg = x.alg();
    let rows: Vec<Vec<u64>> = (0..alg.dim()).map(|i| x.mul(&TruncElem::basis(alg, i)).into_data()).collect();
    let one = TruncElem::one(alg);
    let coeffs = solve_left(alg.zp(), &rows, one.data()).ok_or_else(|| Error::NotInvertible("element is not a unit".into()))?;
    TruncElem::from_data(alg, coeffs)
}

pub fn invert_matrix(alg: &Arc<TruncAlgebra>, a: &RingMatrix) -> Result<RingMatrix> {
    let d = det(alg, a);
    let d_inv = invert_element(&d)?;
    Ok(adjugate(alg, a).into_iter().map(|row| row.into_iter().map(|x| x.mul(&d_inv)).collect()).collect())
}

/// Evaluate Σ c_i X^i at X = value.
pub fn eval_poly(poly: &[TruncElem], value: &TruncElem) -> TruncElem {
    let mut acc = TruncElem::zero(value.alg());
    for c in poly.iter().rev() {
        acc = acc.mul(value).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::AbGroup;

    fn elem(alg: &Arc<TruncAlgebra>, v: i64) -> TruncElem {
        TruncElem::from_int(alg, v)
    }

    #[test]
    fn berkowitz_matches_laplace() {
        let alg = TruncAlgebra::group_ring(3, 4, &AbGroup::cyclic(2)).unwrap();
        let sigma = TruncElem::group_element(&alg, 1);
        let a: RingMatrix = vec![
            vec![elem(&alg, 2), sigma.clone(), elem(&alg, 5)],
            vec![elem(&alg, 7).add(&sigma), elem(&alg, 1), elem(&alg, 0)],
            vec![sigma.scale(4), elem(&alg, 3), elem(&alg, 11)],
        ];
        assert_eq!(det_laplace(&a), det_berkowitz(&alg, &a));
        let poly = charpoly_berkowitz(&alg, &a);
        assert_eq!(poly.len(), 4);
        assert_eq!(poly[3], TruncElem::one(&alg));
    }

    #[test]
    fn rank_one_and_identity_charpolys() {
        let alg = TruncAlgebra::group_ring(5, 3, &AbGroup::trivial()).unwrap();
        let poly = charpoly_berkowitz(&alg, &vec![vec![elem(&alg, 7)]]);
        assert_eq!(poly, vec![elem(&alg, -7), elem(&alg, 1)]);
        let id = identity(&alg, 3);
        let poly = charpoly_berkowitz(&alg, &id);
        assert_eq!(poly, vec![elem(&alg, -1), elem(&alg, 3), elem(&alg, -3), elem(&alg, 1)]);
        assert_eq!(det(&alg, &id), elem(&alg, 1));
    }

    #[test]
    fn inverse_of_unit_in_group_ring() {
        let alg = TruncAlgebra::group_ring(3, 3, &AbGroup::cyclic(3)).unwrap();
        let x = elem(&alg, 1).add(&TruncElem::group_element(&alg, 1).scale(3));
        let inv = invert_element(&x).unwrap();
        assert_eq!(x.mul(&inv), elem(&alg, 1));
        assert!(invert_element(&elem(&alg, 3)).is_err());
    }
}
