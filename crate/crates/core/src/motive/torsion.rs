//! Torsion points M[p^n], the transition maps between levels, Tate modules
//! at finite precision and the ± splitting under j.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::ModRing;
use crate::error::{Error, Result};
use crate::fitcalc::howell::howell;
use crate::fitcalc::module::{is_exact_at, ZMatrix};
use crate::fitcalc::{FiniteModule, ModuleMap};
use crate::grp::TruncAlgebra;

use super::one_motive::{IntMatrix, MotiveMorphism, PadicOneMotive};

fn identity_z(n: usize) -> ZMatrix {
    (0..n).map(|i| (0..n).map(|k| u64::from(i == k)).collect()).collect()
}

fn reduce_int(mat: &IntMatrix, modulus: u64) -> ZMatrix {
    mat.iter().map(|r| r.iter().map(|&x| x.rem_euclid(modulus as i64) as u64).collect()).collect()
}

fn mat_mul_mod(zp: &ModRing, a: &ZMatrix, b: &ZMatrix, cols: usize) -> ZMatrix {
    a.iter()
        .map(|row| {
            (0..cols).map(|c| row.iter().zip(b).fold(0, |acc, (&x, brow)| zp.add(acc, zp.mul(x, brow[c])))).collect()
        })
        .collect()
}

fn vec_mat_mod(zp: &ModRing, v: &[u64], a: &ZMatrix, cols: usize) -> Vec<u64> {
    (0..cols).map(|c| v.iter().zip(a).fold(0, |acc, (&x, row)| zp.add(acc, zp.mul(x, row[c])))).collect()
}

/// Matrices of all group elements (indexed as basis elements of Z/p^n[G]).
fn element_actions(motive: &PadicOneMotive, gens: &[IntMatrix], size: usize, modulus: u64) -> Vec<ZMatrix> {
    motive.group().elements().iter().map(|g| motive.element_matrix(gens, size, g, modulus)).collect()
}

fn full_module(alg: &Arc<TruncAlgebra>, size: usize, actions: Vec<ZMatrix>) -> Result<FiniteModule> {
    FiniteModule::new(alg, size, actions, identity_z(size), vec![])
}

#[derive(Debug, Clone)]
pub struct TorsionGroup {
    pub level: u32,
    pub rank: usize,
    pub corank: usize,
    /// Generator actions on coordinates (c | d) modulo p^n.
    pub generator_actions: Vec<ZMatrix>,
    pub module: FiniteModule,
    pub divisible_part: FiniteModule,
    pub lattice_part: FiniteModule,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// M[p^n] = {(x, λ) : p^n·x = δ(λ)} ⊗ Z/p^n on the basis of J[p^n] and the
/// canonical lifts (δ(e_i)/p^n, e_i).
pub fn torsion_points(motive: &PadicOneMotive, n: u32) -> Result<TorsionGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("the level must be at least 1".into()));
    }
    let p = motive.p();
    let alg = TruncAlgebra::group_ring(p, n, motive.group())?;
    let modulus = alg.zp().modulus;
    let (r, s) = (motive.rank(), motive.corank());
    let blocks = motive.block_actions()?;
    let module = full_module(&alg, s + r, element_actions(motive, &blocks, s + r, modulus))?;
    let divisible_part = full_module(&alg, s, element_actions(motive, motive.j_action(), s, modulus))?;
    let lattice_part = full_module(&alg, r, element_actions(motive, motive.l_action(), r, modulus))?;
    let include: ZMatrix = (0..s).map(|i| (0..s + r).map(|k| u64::from(i == k)).collect()).collect();
    let project: ZMatrix = (0..s + r).map(|i| (0..r).map(|k| u64::from(i == s + k)).collect()).collect();
    let inclusion = ModuleMap::new(&divisible_part, &module, include)?;
    let projection = ModuleMap::new(&module, &lattice_part, project)?;
    Ok(TorsionGroup {
        level: n,
        rank: r,
        corank: s,
        generator_actions: blocks.iter().map(|b| reduce_int(b, modulus)).collect(),
        module,
        divisible_part,
        lattice_part,
        inclusion,
        projection,
    })
}

impl TorsionGroup {
    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        self.module.alg()
    }

    /// log_p |M[p^n]|.
    pub fn log_order(&self) -> u64 {
        self.module.log_order()
    }

    pub fn order_formula_holds(&self) -> bool {
        self.log_order() == u64::from(self.level) * (self.rank + self.corank) as u64
    }

    /// 0 → J[p^n] → M[p^n] → L ⊗ Z/p^n → 0.
    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.inclusion.is_injective()?
            && self.projection.is_surjective()?
            && is_exact_at(&self.inclusion, &self.projection)?)
    }

    /// Whether the sequence splits G-equivariantly: some equivariant section
    /// L ⊗ Z/p^n → M[p^n] exists, i.e. the lifts can be corrected by a
    /// Z/p^n-matrix X with A_J-conjugation killing the gluing.
    pub fn splits_equivariantly(&self) -> bool {
        let zp = *self.alg().zp();
        let (r, s) = (self.rank, self.corank);
        if r == 0 || s == 0 {
            return true;
        }
        // unknowns X (r×s); section e_i ↦ (X_i | e_i) is equivariant iff
        // X·A_J + W = A_L·X for every generator.
        let unknowns = r * s;
        let mut rows: Vec<Vec<u64>> = vec![vec![0u64; 0]; unknowns + 1];
        for block in &self.generator_actions {
            for i in 0..r {
                for c in 0..s {
                    // coefficient of X[a][b] in (X·A_J − A_L·X)[i][c]
                    for (idx, row) in rows.iter_mut().take(unknowns).enumerate() {
                        let (a, b) = (idx / s, idx % s);
                        let mut coeff = 0;
                        if a == i {
                            coeff = zp.add(coeff, block[b][c]);
                        }
                        if b == c {
                            coeff = zp.sub(coeff, block[s + i][s + a]);
                        }
                        row.push(coeff);
                    }
                    rows[unknowns].push(block[s + i][c]);
                }
            }
        }
        let width = rows[0].len();
        if width == 0 {
            return true;
        }
        // solvable iff (−W) lies in the row span of the coefficient rows
        let target: Vec<u64> = rows[unknowns].iter().map(|&x| zp.neg(x)).collect();
        let span = howell(&zp, rows[..unknowns].to_vec(), width);
        span.contains(&target)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "r": self.rank,
            "s": self.corank,
            "log_p_order": self.log_order(),
            "generator_actions": self.generator_actions,
        })
    }
}

/// A Z/p-linear map between levels on (c | d)-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMap {
    pub source_level: u32,
    pub target_level: u32,
    pub p: u64,
    pub matrix: ZMatrix,
}

/// M[p^m] ↠ M[p^n], (x, λ) ⊗ 1 ↦ (p^{m−n}x, λ) ⊗ 1: the identity on
/// coordinates reduced mod p^n.
pub fn transition_down(motive: &PadicOneMotive, m: u32, n: u32) -> Result<TransitionMap> {
    if n > m || n == 0 {
        return Err(Error::InvalidArgument(format!("cannot go down from level {m} to {n}")));
    }
    let size = motive.rank() + motive.corank();
    Ok(TransitionMap { source_level: m, target_level: n, p: motive.p(), matrix: identity_z(size) })
}

/// M[p^n] ↪ M[p^m], (x, λ) ⊗ 1 ↦ (x, p^{m−n}λ) ⊗ 1: multiplication by
/// p^{m−n} on coordinates.
pub fn transition_up(motive: &PadicOneMotive, n: u32, m: u32) -> Result<TransitionMap> {
    if n > m || n == 0 {
        return Err(Error::InvalidArgument(format!("cannot go up from level {n} to {m}")));
    }
    let size = motive.rank() + motive.corank();
    let factor = motive.p().pow(m - n);
    let matrix = (0..size).map(|i| (0..size).map(|k| if i == k { factor } else { 0 }).collect()).collect();
    Ok(TransitionMap { source_level: n, target_level: m, p: motive.p(), matrix })
}

impl TransitionMap {
    fn target_ring(&self) -> Result<ModRing> {
        ModRing::new(self.p, self.target_level)
    }

    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        let zp = self.target_ring()?;
        let v: Vec<u64> = v.iter().map(|&x| x % zp.modulus).collect();
        Ok(vec_mat_mod(&zp, &v, &self.matrix, self.matrix.len()))
    }

    pub fn compose(&self, after: &TransitionMap) -> Result<TransitionMap> {
        if self.target_level != after.source_level {
            return Err(Error::InvalidArgument("levels do not chain".into()));
        }
        let zp = after.target_ring()?;
        let reduce = |m: &ZMatrix| -> ZMatrix { m.iter().map(|r| r.iter().map(|&x| x % zp.modulus).collect()).collect() };
        let matrix = mat_mul_mod(&zp, &reduce(&self.matrix), &reduce(&after.matrix), after.matrix.len());
        Ok(TransitionMap { source_level: self.source_level, target_level: after.target_level, p: self.p, matrix })
    }

    /// Commutes with every generator action of the motive.
    pub fn is_equivariant(&self, motive: &PadicOneMotive) -> Result<bool> {
        let zp = self.target_ring()?;
        let size = self.matrix.len();
        for block in motive.block_actions()? {
            let a = reduce_int(&block, zp.modulus);
            let m: ZMatrix = self.matrix.iter().map(|r| r.iter().map(|&x| x % zp.modulus).collect()).collect();
            if mat_mul_mod(&zp, &a, &m, size) != mat_mul_mod(&zp, &m, &a, size) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn image_log_order(&self) -> Result<u64> {
        let zp = self.target_ring()?;
        let rows = self.matrix.iter().map(|r| r.iter().map(|&x| x % zp.modulus).collect()).collect();
        Ok(howell(&zp, rows, self.matrix.len()).log_order())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image_log_order()? == u64::from(self.target_level) * self.matrix.len() as u64)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.image_log_order()? == u64::from(self.source_level) * self.matrix.len() as u64)
    }
}

/// The map M₁[p^n] → M₂[p^n] induced by a morphism: [[ι, 0], [V, λ]] with
/// V = δ₁·ι − λ·δ₂.
pub fn morphism_on_torsion(
    source: &PadicOneMotive,
    target: &PadicOneMotive,
    morphism: &MotiveMorphism,
    n: u32,
) -> Result<ZMatrix> {
    let modulus = ModRing::new(source.p(), n)?.modulus;
    let correction = morphism.correction(source, target)?;
    let (r1, s1, r2, s2) = (source.rank(), source.corank(), target.rank(), target.corank());
    let mut out = vec![vec![0u64; s2 + r2]; s1 + r1];
    let reduce = |x: i64| x.rem_euclid(modulus as i64) as u64;
    for i in 0..s1 {
        for c in 0..s2 {
            out[i][c] = reduce(morphism.divisible[i][c]);
        }
    }
    for i in 0..r1 {
        for c in 0..s2 {
            out[s1 + i][c] = reduce(correction[i][c]);
        }
        for c in 0..r2 {
            out[s1 + i][s2 + c] = reduce(morphism.lattice[i][c]);
        }
    }
    Ok(out)
}

/// T_p(M)/p^n: free of rank r + s over Z/p^n with the G-action read from
/// the inverse system M[p^k], k ≤ n.
#[derive(Debug, Clone)]
pub struct TateModule {
    pub precision: u32,
    pub rank: usize,
    pub corank: usize,
    pub generator_actions: Vec<ZMatrix>,
    pub module: FiniteModule,
}

pub fn tate_module(motive: &PadicOneMotive, n: u32) -> Result<TateModule> {
    if n == 0 {
        return Err(Error::InvalidArgument("the precision must be at least 1".into()));
    }
    let top = torsion_points(motive, n)?;
    for k in 1..n {
        let lower = torsion_points(motive, k)?;
        let down = transition_down(motive, k + 1, k)?;
        if !down.is_surjective()? || !down.is_equivariant(motive)? {
            return Err(Error::Inconsistent(format!("transition {} → {k} is not a G-surjection", k + 1)));
        }
        let reduced: Vec<ZMatrix> = top
            .generator_actions
            .iter()
            .map(|a| a.iter().map(|r| r.iter().map(|&x| x % lower.alg().zp().modulus).collect()).collect())
            .collect();
        if reduced != lower.generator_actions {
            return Err(Error::Inconsistent(format!("level {k} is not the reduction of level {n}")));
        }
    }
    Ok(TateModule {
        precision: n,
        rank: motive.rank(),
        corank: motive.corank(),
        generator_actions: top.generator_actions,
        module: top.module,
    })
}

impl TateModule {
    pub fn total_rank(&self) -> usize {
        self.rank + self.corank
    }

    pub fn to_json(&self) -> Value {
        json!({
            "precision": self.precision,
            "r": self.rank,
            "s": self.corank,
            "generator_actions": self.generator_actions,
        })
    }

    /// Generator actions reduced mod p^k.
    pub fn reduction(&self, k: u32) -> Result<Vec<ZMatrix>> {
        if k == 0 || k > self.precision {
            return Err(Error::PrecisionExhausted(format!("reduction to p^{k} from p^{}", self.precision)));
        }
        let modulus = ModRing::new(self.module.alg().p(), k)?.modulus;
        Ok(self
            .generator_actions
            .iter()
            .map(|a| a.iter().map(|r| r.iter().map(|&x| x % modulus).collect()).collect())
            .collect())
    }

    /// T_p(M) ⊗ Z/p^k ≅ M[p^k] on the shared coordinates.
    pub fn reduces_to_torsion(&self, motive: &PadicOneMotive, k: u32) -> Result<bool> {
        let torsion = torsion_points(motive, k)?;
        Ok(self.reduction(k)? == torsion.generator_actions && torsion.order_formula_holds())
    }

    /// 0 → T_p(J) → T_p(M) → L ⊗ Zp → 0 at this precision: T_p(J) spans the
    /// first s coordinates and is stable.
    pub fn divisible_part_is_stable(&self) -> bool {
        let s = self.corank;
        self.generator_actions.iter().all(|a| (0..s).all(|i| a[i][s..].iter().all(|&x| x == 0)))
    }
}

/// M^± = ½(1 ± j)·M as submodules of an ambient module.
#[derive(Debug, Clone)]
pub struct PmSplit {
    pub plus: FiniteModule,
    pub minus: FiniteModule,
}

impl PmSplit {
    pub fn log_orders(&self) -> (u64, u64) {
        (self.plus.log_order(), self.minus.log_order())
    }
}

fn j_matrix(motive: &PadicOneMotive, gens: &[IntMatrix], size: usize, modulus: u64) -> Result<ZMatrix> {
    let j = motive.group().j.clone().ok_or_else(|| Error::Hypothesis("the motive carries no involution j".into()))?;
    Ok(motive.element_matrix(gens, size, &j, modulus))
}

fn split_with(module: &FiniteModule, j: &ZMatrix) -> Result<PmSplit> {
    let zp = *module.zp();
    let half = zp.inv(2).ok_or_else(|| Error::InvalidPrime(2))?;
    let size = j.len();
    let idempotent = |sign: bool| -> Vec<Vec<u64>> {
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|k| {
                        let id = u64::from(i == k);
                        let v = if sign { zp.add(id, j[i][k]) } else { zp.sub(id, j[i][k]) };
                        zp.mul(v, half)
                    })
                    .collect()
            })
            .collect()
    };
    let sub = |rows: Vec<Vec<u64>>| FiniteModule::new(module.alg(), size, module.actions().to_vec(), rows, vec![]);
    Ok(PmSplit { plus: sub(idempotent(true))?, minus: sub(idempotent(false))? })
}

/// The ± parts of M[p^n], of J[p^n] and of L ⊗ Z/p^n.
#[derive(Debug, Clone)]
pub struct TorsionPmSplit {
    pub total: PmSplit,
    pub divisible: PmSplit,
    pub lattice: PmSplit,
}

pub fn split_pm(motive: &PadicOneMotive, torsion: &TorsionGroup) -> Result<TorsionPmSplit> {
    let modulus = torsion.alg().zp().modulus;
    let (r, s) = (motive.rank(), motive.corank());
    let total = split_with(&torsion.module, &j_matrix(motive, &motive.block_actions()?, s + r, modulus)?)?;
    let divisible = split_with(&torsion.divisible_part, &j_matrix(motive, motive.j_action(), s, modulus)?)?;
    let lattice = split_with(&torsion.lattice_part, &j_matrix(motive, motive.l_action(), r, modulus)?)?;
    Ok(TorsionPmSplit { total, divisible, lattice })
}

pub fn split_pm_tate(motive: &PadicOneMotive, tate: &TateModule) -> Result<PmSplit> {
    let modulus = tate.module.alg().zp().modulus;
    let size = tate.total_rank();
    split_with(&tate.module, &j_matrix(motive, &motive.block_actions()?, size, modulus)?)
}

impl TorsionPmSplit {
    /// M = M⁺ ⊕ M⁻: the orders multiply out and the parts span M.
    pub fn is_direct(&self, torsion: &TorsionGroup) -> bool {
        let (plus, minus) = self.total.log_orders();
        let zp = *torsion.alg().zp();
        let dim = torsion.rank + torsion.corank;
        let mut rows = self.total.plus.span().rows.clone();
        rows.extend(self.total.minus.span().rows.iter().cloned());
        plus + minus == torsion.log_order() && howell(&zp, rows, dim).log_order() == torsion.log_order()
    }

    /// 0 → J^± → M^± → L^± → 0 stays exact for both signs.
    pub fn is_exact(&self, torsion: &TorsionGroup) -> bool {
        let check = |j: &FiniteModule, m: &FiniteModule, l: &FiniteModule| {
            let included = j.span().rows.iter().all(|v| m.contains(&torsion.inclusion.apply(v)));
            let projected = m.span().rows.iter().all(|v| l.contains(&torsion.projection.apply(v)));
            included && projected && j.log_order() + l.log_order() == m.log_order()
        };
        check(&self.divisible.plus, &self.total.plus, &self.lattice.plus)
            && check(&self.divisible.minus, &self.total.minus, &self.lattice.minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::AbGroup;
    use crate::motive::one_motive::random_motive;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn trivial_motive(p: u64, r: usize, s: usize, delta: Vec<Vec<BigRational>>) -> PadicOneMotive {
        PadicOneMotive::new(p, AbGroup::trivial(), r, s, vec![], vec![], delta).unwrap()
    }

    /// Z/3 acting on J = (Q3/Z3)^2 through an order-3 matrix, trivially on
    /// L = Z, glued by δ = (1/3, 2/3).
    fn order_three_motive(glued: bool) -> PadicOneMotive {
        let delta = if glued { vec![vec![q(1, 3), q(2, 3)]] } else { vec![vec![q(0, 1), q(0, 1)]] };
        PadicOneMotive::new(3, AbGroup::cyclic(3), 1, 2, vec![vec![vec![1]]], vec![vec![vec![0, 1], vec![-1, -1]]], delta)
            .unwrap()
    }

    fn delta_rep(motive: &PadicOneMotive) -> Vec<Vec<BigRational>> {
        motive.delta().to_vec()
    }

    /// Fraction-level element (x mod 1, λ) for coordinates (c | d) at level n.
    fn realize(motive: &PadicOneMotive, v: &[u64], n: u32) -> (Vec<BigRational>, Vec<BigInt>) {
        let s = motive.corank();
        let pn = BigInt::from(motive.p()).pow(n);
        let delta = delta_rep(motive);
        let mut x: Vec<BigRational> = (0..s).map(|k| BigRational::new(BigInt::from(v[k]), pn.clone())).collect();
        let lambda: Vec<BigInt> = v[s..].iter().map(|&d| BigInt::from(d)).collect();
        for (i, d) in lambda.iter().enumerate() {
            for k in 0..s {
                x[k] += &delta[i][k] * BigRational::from_integer(d.clone()) / BigRational::from_integer(pn.clone());
            }
        }
        (x, lambda)
    }

    /// Coordinates at level n of a fraction-level element of the fibre product.
    fn coordinates(motive: &PadicOneMotive, x: &[BigRational], lambda: &[BigInt], n: u32) -> Vec<u64> {
        let s = motive.corank();
        let pn = BigInt::from(motive.p()).pow(n);
        let delta = delta_rep(motive);
        let mut out = Vec::new();
        for k in 0..s {
            let mut residual = x[k].clone();
            for (i, d) in lambda.iter().enumerate() {
                residual -= &delta[i][k] * BigRational::from_integer(d.clone()) / BigRational::from_integer(pn.clone());
            }
            let scaled = residual * BigRational::from_integer(pn.clone());
            assert!(scaled.is_integer(), "residual outside J[p^n]");
            let c = ((scaled.to_integer() % &pn) + &pn) % &pn;
            out.push(u64::try_from(c).unwrap());
        }
        for d in lambda {
            out.push(u64::try_from(((d % &pn) + &pn) % &pn).unwrap());
        }
        out
    }

    fn act(motive: &PadicOneMotive, gen: usize, x: &[BigRational], lambda: &[BigInt]) -> (Vec<BigRational>, Vec<BigInt>) {
        let aj = &motive.j_action()[gen];
        let al = &motive.l_action()[gen];
        let x2 = (0..motive.corank())
            .map(|c| x.iter().zip(aj).map(|(xi, row)| xi * BigRational::from_integer(BigInt::from(row[c]))).sum())
            .collect();
        let l2 = (0..motive.rank()).map(|c| lambda.iter().zip(al).map(|(li, row)| li * row[c]).sum()).collect();
        (x2, l2)
    }

    fn random_vector(rng: &mut StdRng, size: usize, modulus: u64) -> Vec<u64> {
        (0..size).map(|_| rng.gen_range(0..modulus)).collect()
    }

    fn check_action_against_fractions(motive: &PadicOneMotive, n: u32, rng: &mut StdRng) {
        let torsion = torsion_points(motive, n).unwrap();
        let zp = *torsion.alg().zp();
        let size = motive.rank() + motive.corank();
        for _ in 0..12 {
            let v = random_vector(rng, size, zp.modulus);
            let (x, lambda) = realize(motive, &v, n);
            for gen in 0..motive.group().rank() {
                let (x2, l2) = act(motive, gen, &x, &lambda);
                let expected = coordinates(motive, &x2, &l2, n);
                assert_eq!(vec_mat_mod(&zp, &v, &torsion.generator_actions[gen], size), expected);
            }
        }
    }

    #[test]
    fn divisible_only_and_lattice_only() {
        // r = 0, s = 1: J[p] = Z/p
        let motive = PadicOneMotive::from_json(&serde_json::json!({"p": 5, "r": 0, "s": 1})).unwrap();
        let torsion = torsion_points(&motive, 1).unwrap();
        assert_eq!(torsion.log_order(), 1);
        assert!(torsion.is_exact().unwrap());
        // r = 1, s = 0, δ = 0: L ⊗ Z/p^2, cyclic of order p^2
        let motive = PadicOneMotive::from_json(&serde_json::json!({"p": 5, "r": 1, "s": 0})).unwrap();
        let torsion = torsion_points(&motive, 2).unwrap();
        assert_eq!(torsion.log_order(), 2);
        assert!(torsion.module.contains(&[1]) && !torsion.module.is_trivial_class(&[5]));
    }

    #[test]
    fn glued_rank_one_motive() {
        let p = 5;
        let motive = trivial_motive(p, 1, 1, vec![vec![q(1, 5)]]);
        let torsion = torsion_points(&motive, 1).unwrap();
        assert_eq!(torsion.log_order(), 2);
        // enumerate the p^2 elements through their fraction-level realisations
        let mut orders = std::collections::BTreeMap::new();
        for c in 0..p {
            for d in 0..p {
                let (x, lambda) = realize(&motive, &[c, d], 1);
                let mut order = 1u64;
                loop {
                    let k = BigInt::from(order);
                    let xs: Vec<BigRational> = x.iter().map(|t| t * BigRational::from_integer(k.clone())).collect();
                    let ls: Vec<BigInt> = lambda.iter().map(|t| t * &k).collect();
                    if coordinates(&motive, &xs, &ls, 1).iter().all(|&t| t == 0) {
                        break;
                    }
                    order += 1;
                }
                *orders.entry(order).or_insert(0) += 1;
            }
        }
        assert_eq!(orders.get(&1), Some(&1));
        assert_eq!(orders.get(&p), Some(&(p * p - 1)));
        assert!(torsion.is_exact().unwrap());
        assert!(torsion.splits_equivariantly());
    }

    #[test]
    fn equivariant_extension_class() {
        for n in 1..=2 {
            assert!(!torsion_points(&order_three_motive(true), n).unwrap().splits_equivariantly());
            assert!(torsion_points(&order_three_motive(false), n).unwrap().splits_equivariantly());
        }
    }

    #[test]
    fn action_matches_fraction_arithmetic() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=3 {
            check_action_against_fractions(&order_three_motive(true), n, &mut rng);
        }
        for _ in 0..6 {
            let motive = random_motive(&mut rng, 3, 2, 2, 2).unwrap();
            for n in 1..=3 {
                check_action_against_fractions(&motive, n, &mut rng);
            }
        }
    }

    #[test]
    fn order_formula_and_exactness() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..5 {
            let motive = random_motive(&mut rng, 5, 2, 1, 2).unwrap();
            for n in 1..=3 {
                let torsion = torsion_points(&motive, n).unwrap();
                assert!(torsion.order_formula_holds());
                assert!(torsion.is_exact().unwrap());
            }
        }
    }

    #[test]
    fn transitions() {
        let motive = order_three_motive(true);
        let same = transition_down(&motive, 2, 2).unwrap();
        assert_eq!(same, transition_up(&motive, 2, 2).unwrap());
        assert_eq!(same.matrix, identity_z(3));
        let down = transition_down(&motive, 3, 1).unwrap();
        let up = transition_up(&motive, 1, 3).unwrap();
        assert!(down.is_surjective().unwrap() && !down.is_injective().unwrap());
        assert!(up.is_injective().unwrap() && !up.is_surjective().unwrap());
        assert!(down.is_equivariant(&motive).unwrap() && up.is_equivariant(&motive).unwrap());
        let round = up.compose(&down).unwrap();
        assert_eq!(round.apply(&[1, 2, 0]).unwrap(), vec![0, 0, 0]);
        let round = transition_up(&motive, 2, 3).unwrap().compose(&transition_down(&motive, 3, 2).unwrap()).unwrap();
        assert_eq!(round.apply(&[1, 2, 4]).unwrap(), vec![3, 6, 3]);
        assert!(transition_down(&motive, 1, 2).is_err());
        assert!(transition_up(&motive, 2, 1).is_err());
    }

    #[test]
    fn transitions_match_fraction_arithmetic() {
        let mut rng = StdRng::seed_from_u64(17);
        let motive = random_motive(&mut rng, 3, 2, 2, 2).unwrap();
        let p = BigInt::from(3);
        for (m, n) in [(3u32, 1u32), (3, 2), (2, 1)] {
            let shift = p.pow(m - n);
            let down = transition_down(&motive, m, n).unwrap();
            let up = transition_up(&motive, n, m).unwrap();
            for _ in 0..10 {
                let v = random_vector(&mut rng, 4, 3u64.pow(m));
                let (x, lambda) = realize(&motive, &v, m);
                let xs: Vec<BigRational> = x.iter().map(|t| t * BigRational::from_integer(shift.clone())).collect();
                assert_eq!(down.apply(&v).unwrap(), coordinates(&motive, &xs, &lambda, n));
                let w = random_vector(&mut rng, 4, 3u64.pow(n));
                let (x, lambda) = realize(&motive, &w, n);
                let ls: Vec<BigInt> = lambda.iter().map(|t| t * &shift).collect();
                assert_eq!(up.apply(&w).unwrap(), coordinates(&motive, &x, &ls, m));
            }
        }
    }

    #[test]
    fn naturality() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..4 {
            let motive = random_motive(&mut rng, 3, 2, 2, 2).unwrap();
            let morphisms =
                [MotiveMorphism::group_action(&motive, &[1]).unwrap(), MotiveMorphism::scalar(&motive, 4).unwrap()];
            for f in &morphisms {
                let (m, n) = (3u32, 1u32);
                let fm = morphism_on_torsion(&motive, &motive, f, m).unwrap();
                let fnn = morphism_on_torsion(&motive, &motive, f, n).unwrap();
                let zm = ModRing::new(3, m).unwrap();
                let zn = ModRing::new(3, n).unwrap();
                let down = transition_down(&motive, m, n).unwrap();
                let up = transition_up(&motive, n, m).unwrap();
                for _ in 0..8 {
                    let v = random_vector(&mut rng, 4, zm.modulus);
                    let left = down.apply(&vec_mat_mod(&zm, &v, &fm, 4)).unwrap();
                    let right = vec_mat_mod(&zn, &down.apply(&v).unwrap(), &fnn, 4);
                    assert_eq!(left, right);
                    let w = random_vector(&mut rng, 4, zn.modulus);
                    let left = vec_mat_mod(&zm, &up.apply(&w).unwrap(), &fm, 4);
                    let right = up.apply(&vec_mat_mod(&zn, &w, &fnn, 4)).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn tate_modules() {
        let motive = PadicOneMotive::new(5, AbGroup::cyclic(2), 0, 1, vec![vec![]], vec![vec![vec![-1]]], vec![]).unwrap();
        let tate = tate_module(&motive, 2).unwrap();
        assert_eq!(tate.total_rank(), 1);
        assert_eq!(tate.generator_actions, vec![vec![vec![24]]]);
        let split = PadicOneMotive::new(
            5,
            AbGroup::cyclic(2),
            1,
            1,
            vec![vec![vec![1]]],
            vec![vec![vec![-1]]],
            vec![vec![BigRational::zero()]],
        )
        .unwrap();
        assert_eq!(tate_module(&split, 2).unwrap().generator_actions, vec![vec![vec![24, 0], vec![0, 1]]]);
        let glued = order_three_motive(true);
        let tate = tate_module(&glued, 3).unwrap();
        assert_eq!(tate.total_rank(), 3);
        assert!(tate.divisible_part_is_stable());
        for k in 1..=3 {
            assert!(tate.reduces_to_torsion(&glued, k).unwrap());
        }
        assert!(tate.reduction(4).is_err());
    }

    #[test]
    fn plus_minus_parts() {
        let trivial_j = PadicOneMotive::new(
            3,
            AbGroup::new(vec![2], Some(vec![1])).unwrap(),
            1,
            1,
            vec![vec![vec![1]]],
            vec![vec![vec![1]]],
            vec![vec![q(1, 3)]],
        )
        .unwrap();
        let torsion = torsion_points(&trivial_j, 2).unwrap();
        let parts = split_pm(&trivial_j, &torsion).unwrap();
        assert_eq!(parts.total.log_orders(), (4, 0));
        let negative = PadicOneMotive::new(
            3,
            AbGroup::new(vec![2], Some(vec![1])).unwrap(),
            0,
            2,
            vec![vec![]],
            vec![vec![vec![-1, 0], vec![0, -1]]],
            vec![],
        )
        .unwrap();
        let torsion = torsion_points(&negative, 1).unwrap();
        assert_eq!(split_pm(&negative, &torsion).unwrap().total.log_orders(), (0, 2));
        let no_j = order_three_motive(true);
        let torsion = torsion_points(&no_j, 1).unwrap();
        assert!(matches!(split_pm(&no_j, &torsion), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn random_splittings() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..5 {
            let motive = random_motive(&mut rng, 5, 3, 2, 2).unwrap();
            for n in 1..=2 {
                let torsion = torsion_points(&motive, n).unwrap();
                let parts = split_pm(&motive, &torsion).unwrap();
                let (plus, minus) = parts.total.log_orders();
                assert_eq!(plus + minus, torsion.log_order());
                assert!(parts.is_direct(&torsion));
                assert!(parts.is_exact(&torsion));
            }
            let top = split_pm(&motive, &torsion_points(&motive, 2).unwrap()).unwrap();
            let bottom = split_pm(&motive, &torsion_points(&motive, 1).unwrap()).unwrap();
            let down = transition_down(&motive, 2, 1).unwrap();
            for v in &top.total.plus.span().rows {
                assert!(bottom.total.plus.contains(&down.apply(v).unwrap()));
            }
            for v in &top.total.minus.span().rows {
                assert!(bottom.total.minus.contains(&down.apply(v).unwrap()));
            }
            let tate = tate_module(&motive, 2).unwrap();
            let tate_parts = split_pm_tate(&motive, &tate).unwrap();
            assert_eq!(tate_parts.log_orders(), top.total.log_orders());
        }
    }

    #[test]
    fn rejects_level_zero() {
        let motive = order_three_motive(false);
        assert!(torsion_points(&motive, 0).is_err());
        assert!(tate_module(&motive, 0).is_err());
    }
}
