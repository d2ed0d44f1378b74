//! Howell normal form of row spans over the chain ring Z/p^N.
//!
//! Rows may carry an augmented right part: pivoting only looks at the first
//! `left` columns, and rows whose left part vanishes are returned
//! separately. With the augmentation being an identity block, those rows
//! span the left kernel.

use crate::arith::ModRing;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub zp: ModRing,
    pub width: usize,
    pub left: usize,
    /// (pivot column, valuation of the pivot entry p^v).
    pub pivots: Vec<(usize, u32)>,
    pub rows: Vec<Vec<u64>>,
    /// Rows whose left part is zero, full width.
    pub residual: Vec<Vec<u64>>,
}

fn axpy(zp: &ModRing, target: &mut [u64], factor: u64, row: &[u64]) {
    if factor == 0 {
        return;
    }
    for (t, &r) in target.iter_mut().zip(row) {
        if r != 0 {
            *t = zp.sub(*t, zp.mul(factor, r));
        }
    }
}

pub fn echelon(zp: &ModRing, rows: Vec<Vec<u64>>, width: usize, left: usize) -> Echelon {
    let modulus = zp.modulus;
    let mut work: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x % modulus).collect::<Vec<u64>>())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut out_rows: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..left {
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in work.iter().enumerate() {
            if r[col] != 0 {
                let v = zp.valuation(r[col]);
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        let mut prow = work.swap_remove(bi);
        let pv = zp.p.pow(v);
        let unit = prow[col] / pv;
        let inv = zp.inv(unit).expect("quotient by the pivot valuation is a unit");
        for x in prow.iter_mut() {
            *x = zp.mul(*x, inv);
        }
        for r in work.iter_mut() {
            if r[col] != 0 {
                let q = r[col] / pv;
                axpy(zp, r, q, &prow);
            }
        }
        if v > 0 {
            let factor = zp.p.pow(zp.n - v);
            let closure: Vec<u64> = prow.iter().map(|&x| zp.mul(x, factor)).collect();
            if closure.iter().any(|&x| x != 0) {
                work.push(closure);
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        out_rows.push(prow);
        pivots.push((col, v));
    }
    for i in 0..out_rows.len() {
        let (col, v) = pivots[i];
        let pv = zp.p.pow(v);
        let (above, rest) = out_rows.split_at_mut(i);
        let prow = &rest[0];
        for row in above.iter_mut() {
            let e = row[col];
            if e >= pv {
                axpy(zp, row, e / pv, prow);
            }
        }
    }
    Echelon { zp: *zp, width, left, pivots, rows: out_rows, residual: work }
}

/// Howell form of the span of `rows` (no augmentation).
pub fn howell(zp: &ModRing, rows: Vec<Vec<u64>>, width: usize) -> Echelon {
    echelon(zp, rows, width, width)
}

impl Echelon {
    /// Reduce `v` by the pivot rows; returns the remainder and the
    /// multipliers used (one per pivot row).
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let zp = &self.zp;
        let mut x: Vec<u64> = v.iter().map(|&c| c % zp.modulus).collect();
        let mut certificate = vec![0u64; self.rows.len()];
        for (i, (row, &(col, val))) in self.rows.iter().zip(&self.pivots).enumerate() {
            let e = x[col];
            if e == 0 {
                continue;
            }
            let pv = zp.p.pow(val);
            if e % pv != 0 {
                continue;
            }
            let q = e / pv;
            axpy(zp, &mut x, q, row);
            certificate[i] = q;
        }
        (x, certificate)
    }

    /// Span membership over the left part.
    pub fn contains(&self, v: &[u64]) -> bool {
        let (rest, _) = self.reduce(v);
        rest[..self.left].iter().all(|&c| c == 0)
    }

    /// |span| = ∏ p^{N - v_i}, as the exponent Σ (N - v_i).
    pub fn log_order(&self) -> u64 {
        self.pivots.iter().map(|&(_, v)| (self.zp.n - v) as u64).sum()
    }

    /// Canonical basis restricted to the left part.
    pub fn left_rows(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|r| r[..self.left].to_vec()).collect()
    }

    /// Right parts of the rows with vanishing left part.
    pub fn kernel_rows(&self) -> Vec<Vec<u64>> {
        self.residual.iter().map(|r| r[self.left..].to_vec()).collect()
    }
}

/// Left kernel of the matrix with the given rows: all x with Σ x_i row_i = 0.
pub fn left_kernel(zp: &ModRing, rows: &[Vec<u64>], width: usize) -> Vec<Vec<u64>> {
    let count = rows.len();
    let augmented: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.resize(width, 0);
            a.extend((0..count).map(|k| u64::from(k == i)));
            a
        })
        .collect();
    let ech = echelon(zp, augmented, width + count, width);
    ech.kernel_rows()
}

/// Express `target` as Σ c_i rows_i if possible.
pub fn solve_left(zp: &ModRing, rows: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let width = target.len();
    let count = rows.len();
    let augmented: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend((0..count).map(|k| u64::from(k == i)));
            a
        })
        .collect();
    let ech = echelon(zp, augmented, width + count, width);
    let mut padded = target.to_vec();
    padded.extend(std::iter::repeat(0).take(count));
    let (rest, _) = ech.reduce(&padded);
    if rest[..width].iter().any(|&c| c != 0) {
        return None;
    }
    // rest = padded - Σ q_i row_i, so target = Σ (−rest_right)_i rows_i.
    Some(rest[width..].iter().map(|&c| zp.neg(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn howell_of_three_and_nine() {
        let zp = ModRing::new(3, 5).unwrap();
        let a = howell(&zp, vec![vec![3], vec![9]], 1);
        let b = howell(&zp, vec![vec![3]], 1);
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.log_order(), 4);
    }

    #[test]
    fn closure_row_is_added() {
        // span of (3, 1) over Z/9 contains 3·(3,1) = (0, 3).
        let zp = ModRing::new(3, 2).unwrap();
        let h = howell(&zp, vec![vec![3, 1]], 2);
        assert_eq!(h.rows, vec![vec![3, 1], vec![0, 3]]);
        assert!(h.contains(&[0, 3]));
        assert!(!h.contains(&[0, 1]));
    }

    #[test]
    fn kernel_and_solve() {
        let zp = ModRing::new(3, 3).unwrap();
        let rows = vec![vec![3, 0], vec![0, 9], vec![6, 9]];
        let ker = left_kernel(&zp, &rows, 2);
        for k in &ker {
            let combo: Vec<u64> = (0..2)
                .map(|c| (0..3).fold(0, |acc, i| zp.add(acc, zp.mul(k[i], rows[i][c]))))
                .collect();
            assert_eq!(combo, vec![0, 0]);
        }
        let coeffs = solve_left(&zp, &rows, &[12, 18]).unwrap();
        let combo: Vec<u64> =
            (0..2).map(|c| (0..3).fold(0, |acc, i| zp.add(acc, zp.mul(coeffs[i], rows[i][c])))).collect();
        assert_eq!(combo, vec![12, 18]);
        assert!(solve_left(&zp, &rows, &[1, 0]).is_none());
    }
}
