//! Abstract p-adic 1-motives [L → J] with L = Z^r, J = (Qp/Zp)^s and a
//! finite abelian group acting on both (row-vector convention, λ ↦ λ·A).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::arith::{is_prime, vp_bigint};
use crate::error::{Error, Result};
use crate::grp::AbGroup;

pub type IntMatrix = Vec<Vec<i64>>;

fn identity_int(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect()
}

fn big_mat(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    a.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn big_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..cols).map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum()).collect())
        .collect()
}

pub(crate) fn int_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> Result<IntMatrix> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    (0..inner).try_fold(0i64, |acc, k| {
                        row[k].checked_mul(b[k][c]).and_then(|x| acc.checked_add(x))
                    })
                    .ok_or_else(|| Error::SizeLimit("integer matrix product".into()))
                })
                .collect()
        })
        .collect()
}

/// Entries of a matrix of fractions reduced into [0, 1).
fn reduce_mod_one(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

fn rat_times_int(delta: &[Vec<BigRational>], a: &IntMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    delta
        .iter()
        .map(|row| {
            (0..cols)
                .map(|c| row.iter().zip(a).map(|(x, arow)| x * BigRational::from_integer(BigInt::from(arow[c]))).sum())
                .collect()
        })
        .collect()
}

fn int_times_rat(a: &IntMatrix, delta: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|arow| {
            (0..cols)
                .map(|c| arow.iter().zip(delta).map(|(&x, drow)| BigRational::from_integer(BigInt::from(x)) * &drow[c]).sum())
                .collect()
        })
        .collect()
}

/// Integer matrix of an exactly integral rational matrix.
fn integral(mat: &[Vec<BigRational>]) -> Option<IntMatrix> {
    mat.iter()
        .map(|row| {
            row.iter()
                .map(|x| if x.is_integer() { i64::try_from(x.to_integer()).ok() } else { None })
                .collect()
        })
        .collect()
}

fn check_square(mats: &[IntMatrix], size: usize, what: &str) -> Result<()> {
    if mats.iter().any(|m| m.len() != size || m.iter().any(|r| r.len() != size)) {
        return Err(Error::InvalidArgument(format!("{what} action matrices must be {size}x{size}")));
    }
    Ok(())
}

/// Exact check that the generator matrices commute and have the orders of
/// the cyclic factors they act through.
fn check_action(mats: &[IntMatrix], group: &AbGroup, size: usize, what: &str) -> Result<()> {
    if mats.len() != group.rank() {
        return Err(Error::InvalidArgument(format!("{what}: one matrix per cyclic generator is required")));
    }
    check_square(mats, size, what)?;
    let id = big_mat(&identity_int(size));
    for (a, &order) in mats.iter().zip(&group.cyclic_orders) {
        let base = big_mat(a);
        let mut power = id.clone();
        for _ in 0..order {
            power = big_mul(&power, &base, size, size);
        }
        if power != id {
            return Err(Error::InvalidArgument(format!("{what}: a generator matrix does not have order dividing {order}")));
        }
    }
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if int_mul(a, b, size, size)? != int_mul(b, a, size, size)? {
                return Err(Error::InvalidArgument(format!("{what}: generator matrices do not commute")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PadicOneMotive {
    p: u64,
    group: AbGroup,
    rank: usize,
    corank: usize,
    l_action: Vec<IntMatrix>,
    j_action: Vec<IntMatrix>,
    delta: Vec<Vec<BigRational>>,
}

impl PadicOneMotive {
    /// δ is r×s with entries in Qp/Zp given by fractions a/p^k; `group.j`,
    /// when present, is the involution j.
    pub fn new(
        p: u64,
        group: AbGroup,
        rank: usize,
        corank: usize,
        l_action: Vec<IntMatrix>,
        j_action: Vec<IntMatrix>,
        delta: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if delta.len() != rank || delta.iter().any(|row| row.len() != corank) {
            return Err(Error::InvalidArgument("δ must be an r×s matrix".into()));
        }
        check_action(&l_action, &group, rank, "L")?;
        check_action(&j_action, &group, corank, "J")?;
        let mut reduced = Vec::with_capacity(rank);
        for row in &delta {
            let mut out = Vec::with_capacity(corank);
            for x in row {
                let den = x.denom();
                let k = vp_bigint(den, p).unwrap_or(0);
                if *den != BigInt::from(p).pow(k) {
                    return Err(Error::InvalidArgument(format!("δ entry {x} is not of the form a/p^k")));
                }
                out.push(reduce_mod_one(x));
            }
            reduced.push(out);
        }
        let motive = PadicOneMotive { p, group, rank, corank, l_action, j_action, delta: reduced };
        motive.gluing_matrices()?;
        Ok(motive)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn l_action(&self) -> &[IntMatrix] {
        &self.l_action
    }

    pub fn j_action(&self) -> &[IntMatrix] {
        &self.j_action
    }

    pub fn delta(&self) -> &[Vec<BigRational>] {
        &self.delta
    }

    pub fn has_involution(&self) -> bool {
        self.group.j.is_some()
    }

    /// W = δ·A_J − A_L·δ for each generator, integral exactly when δ is
    /// equivariant. It is the J[p^n]-component of σ applied to the
    /// canonical lifts (δ/p^n, e_i), independent of n.
    pub fn gluing_matrices(&self) -> Result<Vec<IntMatrix>> {
        self.l_action
            .iter()
            .zip(&self.j_action)
            .map(|(al, aj)| {
                let left = rat_times_int(&self.delta, aj, self.corank);
                let right = int_times_rat(al, &self.delta, self.corank);
                let diff: Vec<Vec<BigRational>> =
                    left.iter().zip(&right).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
                integral(&diff).ok_or_else(|| Error::InvalidArgument("δ is not G-equivariant modulo 1".into()))
            })
            .collect()
    }

    /// Block matrices [[A_J, 0], [W, A_L]] of the generators on coordinates
    /// (c | d) of c·(J-basis)/p^n + Σ d_i (δ_i/p^n, e_i).
    pub fn block_actions(&self) -> Result<Vec<IntMatrix>> {
        let size = self.corank + self.rank;
        let gluing = self.gluing_matrices()?;
        Ok((0..self.group.rank())
            .map(|g| {
                let mut block = vec![vec![0i64; size]; size];
                for i in 0..self.corank {
                    block[i][..self.corank].copy_from_slice(&self.j_action[g][i]);
                }
                for i in 0..self.rank {
                    block[self.corank + i][..self.corank].copy_from_slice(&gluing[g][i]);
                    block[self.corank + i][self.corank..].copy_from_slice(&self.l_action[g][i]);
                }
                block
            })
            .collect())
    }

    /// A group element as a product of generator powers applied to row
    /// vectors of size `size` with the given generator matrices, mod `modulus`.
    pub(crate) fn element_matrix(&self, gens: &[IntMatrix], size: usize, g: &[u64], modulus: u64) -> Vec<Vec<u64>> {
        let reduce = |x: i64| x.rem_euclid(modulus as i64) as u64;
        let mut acc: Vec<Vec<u64>> = (0..size).map(|i| (0..size).map(|k| u64::from(i == k) % modulus).collect()).collect();
        for (mat, &e) in gens.iter().zip(g) {
            let m: Vec<Vec<u64>> = mat.iter().map(|r| r.iter().map(|&x| reduce(x)).collect()).collect();
            for _ in 0..e {
                acc = (0..size)
                    .map(|i| {
                        (0..size)
                            .map(|c| {
                                (0..size).fold(0u128, |s, k| (s + acc[i][k] as u128 * m[k][c] as u128) % modulus as u128)
                                    as u64
                            })
                            .collect()
                    })
                    .collect();
            }
        }
        acc
    }

    /// The split motive [L → J] with δ = 0 and the same actions.
    pub fn split(&self) -> Self {
        PadicOneMotive { delta: vec![vec![BigRational::zero(); self.corank]; self.rank], ..self.clone() }
    }

    pub fn to_json(&self) -> Value {
        let frac = |x: &BigRational| {
            if x.is_zero() {
                "0".to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        json!({
            "p": self.p,
            "group": self.group.cyclic_orders,
            "j": self.group.j,
            "r": self.rank,
            "s": self.corank,
            "L_action": self.l_action,
            "J_action": self.j_action,
            "delta": self.delta.iter().map(|row| row.iter().map(frac).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Schema(format!("motive literal: {what}"));
        let p = value.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))?;
        let rank = value.get("r").and_then(Value::as_u64).ok_or_else(|| bad("missing r"))? as usize;
        let corank = value.get("s").and_then(Value::as_u64).ok_or_else(|| bad("missing s"))? as usize;
        let orders: Vec<u64> = match value.get("group") {
            Some(v) => serde_json::from_value(v.clone()).map_err(|_| bad("group must list cyclic orders"))?,
            None => vec![],
        };
        let j: Option<Vec<u64>> = match value.get("j") {
            Some(Value::Null) | None => None,
            Some(v) => Some(serde_json::from_value(v.clone()).map_err(|_| bad("j must be an exponent vector"))?),
        };
        let group = AbGroup::new(orders, j)?;
        let mats = |key: &str, size: usize| -> Result<Vec<IntMatrix>> {
            match value.get(key) {
                Some(v) => serde_json::from_value(v.clone()).map_err(|_| bad(&format!("{key} must be integer matrices"))),
                None => Ok(vec![identity_int(size); group.rank()]),
            }
        };
        let l_action = mats("L_action", rank)?;
        let j_action = mats("J_action", corank)?;
        let delta = match value.get("delta") {
            Some(v) => {
                let rows: Vec<Vec<String>> =
                    serde_json::from_value(v.clone()).map_err(|_| bad("delta must be rows of fraction strings"))?;
                rows.iter()
                    .map(|row| row.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?
            }
            None => vec![vec![BigRational::zero(); corank]; rank],
        };
        if delta.len() != rank || delta.iter().any(|row| row.len() != corank) {
            return Err(bad("delta must be r×s"));
        }
        Self::new(p, group, rank, corank, l_action, j_action, delta)
    }
}

pub fn parse_fraction(text: &str) -> Result<BigRational> {
    let err = || Error::Schema(format!("not a fraction: {text}"));
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// A random unimodular integer matrix with small entries.
fn random_unimodular<R: Rng>(rng: &mut R, size: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut forward = identity_int(size);
    let mut inverse = identity_int(size);
    if size < 2 {
        return (forward, inverse);
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..size);
        let b = (a + rng.gen_range(1..size)) % size;
        let k: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // row_a += k·row_b on the forward side, column_b −= k·column_a on the inverse
        for c in 0..size {
            forward[a][c] += k * forward[b][c];
        }
        for row in inverse.iter_mut() {
            row[b] -= k * row[a];
        }
    }
    (forward, inverse)
}

/// A random motive with G = ⟨j⟩ of order 2: j acts by ±1 eigenvalues in
/// random bases and δ pairs only eigenvectors of equal sign.
pub fn random_motive<R: Rng>(rng: &mut R, p: u64, rank: usize, corank: usize, max_exp: u32) -> Result<PadicOneMotive> {
    let signs_l: Vec<i64> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let signs_j: Vec<i64> = (0..corank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let diag = |signs: &[i64]| -> IntMatrix {
        (0..signs.len()).map(|i| (0..signs.len()).map(|k| if i == k { signs[i] } else { 0 }).collect()).collect()
    };
    let (pl, pl_inv) = random_unimodular(rng, rank, 2 * rank);
    let (qj, qj_inv) = random_unimodular(rng, corank, 2 * corank);
    let a_l = int_mul(&int_mul(&pl, &diag(&signs_l), rank, rank)?, &pl_inv, rank, rank)?;
    let a_j = int_mul(&int_mul(&qj, &diag(&signs_j), corank, corank)?, &qj_inv, corank, corank)?;
    let mut raw = vec![vec![BigRational::zero(); corank]; rank];
    for i in 0..rank {
        for k in 0..corank {
            if signs_l[i] == signs_j[k] {
                let e = rng.gen_range(0..=max_exp);
                let den = BigInt::from(p).pow(e);
                let num = BigInt::from(rng.gen_range(0..p.pow(e).max(1)));
                raw[i][k] = BigRational::new(num, den);
            }
        }
    }
    let big = |m: &IntMatrix| -> Vec<Vec<BigRational>> {
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
    };
    let mul_rat = |a: &[Vec<BigRational>], b: &[Vec<BigRational>], cols: usize| -> Vec<Vec<BigRational>> {
        a.iter().map(|row| (0..cols).map(|c| row.iter().zip(b).map(|(x, brow)| x * &brow[c]).sum()).collect()).collect()
    };
    let delta = mul_rat(&mul_rat(&big(&pl), &raw, corank), &big(&qj_inv), corank);
    let group = AbGroup::new(vec![2], Some(vec![1]))?;
    PadicOneMotive::new(p, group, rank, corank, vec![a_l], vec![a_j], delta)
}

/// A morphism (λ, ι): M₁ → M₂ of motives, λ: L₁ → L₂ and ι: J₁ → J₂ as
/// integer matrices, compatible with δ and with the actions.
#[derive(Debug, Clone, PartialEq)]
pub struct MotiveMorphism {
    pub lattice: IntMatrix,
    pub divisible: IntMatrix,
}

impl MotiveMorphism {
    pub fn new(source: &PadicOneMotive, target: &PadicOneMotive, lattice: IntMatrix, divisible: IntMatrix) -> Result<Self> {
        if source.p != target.p || source.group != target.group {
            return Err(Error::InvalidArgument("motives over different data".into()));
        }
        let (r1, s1, r2, s2) = (source.rank, source.corank, target.rank, target.corank);
        if lattice.len() != r1 || lattice.iter().any(|r| r.len() != r2) {
            return Err(Error::InvalidArgument("λ must be r₁×r₂".into()));
        }
        if divisible.len() != s1 || divisible.iter().any(|r| r.len() != s2) {
            return Err(Error::InvalidArgument("ι must be s₁×s₂".into()));
        }
        for g in 0..source.group.rank() {
            if int_mul(&source.l_action[g], &lattice, r1, r2)? != int_mul(&lattice, &target.l_action[g], r2, r2)? {
                return Err(Error::InvalidArgument("λ is not equivariant".into()));
            }
            if int_mul(&source.j_action[g], &divisible, s1, s2)? != int_mul(&divisible, &target.j_action[g], s2, s2)? {
                return Err(Error::InvalidArgument("ι is not equivariant".into()));
            }
        }
        let morphism = MotiveMorphism { lattice, divisible };
        morphism.correction(source, target)?;
        Ok(morphism)
    }

    /// V = δ₁·ι − λ·δ₂, integral exactly when ι∘δ₁ = δ₂∘λ modulo 1.
    pub fn correction(&self, source: &PadicOneMotive, target: &PadicOneMotive) -> Result<IntMatrix> {
        let left = rat_times_int(&source.delta, &self.divisible, target.corank);
        let right = int_times_rat(&self.lattice, &target.delta, target.corank);
        let diff: Vec<Vec<BigRational>> =
            left.iter().zip(&right).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        integral(&diff).ok_or_else(|| Error::InvalidArgument("morphism does not commute with δ".into()))
    }

    /// The endomorphism given by the action of a group element.
    pub fn group_action(motive: &PadicOneMotive, g: &[u64]) -> Result<Self> {
        let mut lattice = identity_int(motive.rank);
        let mut divisible = identity_int(motive.corank);
        for (gen, &e) in g.iter().enumerate() {
            for _ in 0..e {
                lattice = int_mul(&lattice, &motive.l_action[gen], motive.rank, motive.rank)?;
                divisible = int_mul(&divisible, &motive.j_action[gen], motive.corank, motive.corank)?;
            }
        }
        Self::new(motive, motive, lattice, divisible)
    }

    pub fn scalar(motive: &PadicOneMotive, k: i64) -> Result<Self> {
        let scale = |n: usize| -> IntMatrix { (0..n).map(|i| (0..n).map(|c| if i == c { k } else { 0 }).collect()).collect() };
        Self::new(motive, motive, scale(motive.rank), scale(motive.corank))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn validation() {
        let z2 = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        assert!(matches!(
            PadicOneMotive::new(2, AbGroup::trivial(), 0, 0, vec![], vec![], vec![]),
            Err(Error::InvalidPrime(2))
        ));
        // δ must be a/p^k
        assert!(PadicOneMotive::new(5, AbGroup::trivial(), 1, 1, vec![], vec![], vec![vec![q(1, 3)]]).is_err());
        // j = 1 on L, −1 on J forces 2δ ∈ Z
        assert!(PadicOneMotive::new(5, z2.clone(), 1, 1, vec![vec![vec![1]]], vec![vec![vec![-1]]], vec![vec![q(1, 5)]])
            .is_err());
        // a generator matrix of the wrong order
        assert!(PadicOneMotive::new(5, z2.clone(), 1, 0, vec![vec![vec![2]]], vec![vec![]], vec![vec![]]).is_err());
        let ok = PadicOneMotive::new(5, z2, 1, 1, vec![vec![vec![-1]]], vec![vec![vec![-1]]], vec![vec![q(7, 5)]]).unwrap();
        assert_eq!(ok.delta()[0][0], q(2, 5));
        assert_eq!(ok.gluing_matrices().unwrap(), vec![vec![vec![0]]]);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..5 {
            let motive = random_motive(&mut rng, 3, 2, 3, 2).unwrap();
            let back = PadicOneMotive::from_json(&motive.to_json()).unwrap();
            assert_eq!(back, motive);
        }
        let literal = serde_json::json!({
            "p": 5, "r": 1, "s": 1, "group": [2], "j": [1],
            "L_action": [[[-1]]], "J_action": [[[-1]]], "delta": [["3/25"]]
        });
        let motive = PadicOneMotive::from_json(&literal).unwrap();
        assert_eq!(motive.delta()[0][0], q(3, 25));
        assert!(motive.has_involution());
        assert!(PadicOneMotive::from_json(&serde_json::json!({"p": 5, "r": 1})).is_err());
    }

    #[test]
    fn random_motives_are_equivariant() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..20 {
            let motive = random_motive(&mut rng, 7, 3, 3, 3).unwrap();
            assert!(motive.gluing_matrices().is_ok());
            assert_eq!(motive.split().gluing_matrices().unwrap(), vec![vec![vec![0; 3]; 3]]);
        }
    }

    #[test]
    fn morphisms() {
        let mut rng = StdRng::seed_from_u64(4);
        let motive = random_motive(&mut rng, 5, 2, 2, 2).unwrap();
        assert!(MotiveMorphism::group_action(&motive, &[1]).is_ok());
        assert!(MotiveMorphism::scalar(&motive, 3).is_ok());
        // λ = 0, ι = 1 is compatible with δ only when δ = 0
        let zero_lattice = vec![vec![0; 2]; 2];
        let id = vec![vec![1, 0], vec![0, 1]];
        let glued = motive.delta().iter().flatten().any(|x| !x.is_zero());
        assert_eq!(MotiveMorphism::new(&motive, &motive, zero_lattice, id).is_ok(), !glued);
    }
}
