//! Finite modules over a truncated algebra R, realised as subquotients V/W
//! of an ambient (Z/p^N)^D on which each basis element of R acts by a
//! matrix (row-vector convention, v ↦ v·A).

use std::sync::Arc;

use crate::arith::ModRing;
use crate::error::{Error, Result};
use crate::fitcalc::howell::{howell, left_kernel, Echelon};
use crate::fitcalc::ideal::IdealHandle;
use crate::fitcalc::matrix::RingMatrix;
use crate::fitcalc::presentation::Presentation;
use crate::grp::{TruncAlgebra, TruncElem};

pub type ZMatrix = Vec<Vec<u64>>;

#[derive(Debug, Clone)]
pub struct FiniteModule {
    alg: Arc<TruncAlgebra>,
    dim: usize,
    actions: Arc<Vec<ZMatrix>>,
    span: Echelon,
    sub: Echelon,
}

fn vec_mat(zp: &ModRing, v: &[u64], mat: &ZMatrix, cols: usize) -> Vec<u64> {
    let mut out = vec![0u64; cols];
    for (i, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (slot, &a) in out.iter_mut().zip(&mat[i]) {
            if a != 0 {
                *slot = zp.add(*slot, zp.mul(x, a));
            }
        }
    }
    out
}

fn transpose_z(mat: &ZMatrix, rows: usize, cols: usize) -> ZMatrix {
    (0..cols).map(|c| (0..rows).map(|r| mat[r][c]).collect()).collect()
}

/// Annihilator of a span under the standard pairing: all φ with φ·u = 0.
fn orthogonal(zp: &ModRing, rows: &[Vec<u64>], dim: usize) -> Vec<Vec<u64>> {
    if rows.is_empty() {
        return (0..dim).map(|i| (0..dim).map(|k| u64::from(i == k)).collect()).collect();
    }
    let matrix: Vec<Vec<u64>> = (0..dim).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
    left_kernel(zp, &matrix, rows.len())
}

/// Matrix of R^cols → R^rows, e_i ↦ Σ_k h[k][i] e_k, in row-vector form on
/// the Z/p^N-coordinates (i·dim + b).
pub fn ring_matrix_to_z(alg: &Arc<TruncAlgebra>, h: &RingMatrix, rows: usize, cols: usize) -> ZMatrix {
    let dim = alg.dim();
    let mut out = vec![vec![0u64; rows * dim]; cols * dim];
    for i in 0..cols {
        for b in 0..dim {
            let basis = TruncElem::basis(alg, b);
            for k in 0..rows {
                let image = basis.mul(&h[k][i]);
                out[i * dim + b][k * dim..(k + 1) * dim].copy_from_slice(image.data());
            }
        }
    }
    out
}

fn free_actions(alg: &Arc<TruncAlgebra>, rank: usize) -> Vec<ZMatrix> {
    let dim = alg.dim();
    (0..dim)
        .map(|b| {
            let gen = TruncElem::basis(alg, b);
            let mut mat = vec![vec![0u64; rank * dim]; rank * dim];
            for c in 0..dim {
                let image = TruncElem::basis(alg, c).mul(&gen);
                for i in 0..rank {
                    mat[i * dim + c][i * dim..(i + 1) * dim].copy_from_slice(image.data());
                }
            }
            mat
        })
        .collect()
}

impl FiniteModule {
    pub fn new(
        alg: &Arc<TruncAlgebra>,
        dim: usize,
        actions: Vec<ZMatrix>,
        span_rows: Vec<Vec<u64>>,
        sub_rows: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if actions.len() != alg.dim() || actions.iter().any(|a| a.len() != dim || a.iter().any(|r| r.len() != dim)) {
            return Err(Error::InvalidArgument(format!(
                "expected {} action matrices of size {dim}x{dim}",
                alg.dim()
            )));
        }
        Self::build(alg, dim, Arc::new(actions), span_rows, sub_rows)
    }

    fn build(
        alg: &Arc<TruncAlgebra>,
        dim: usize,
        actions: Arc<Vec<ZMatrix>>,
        mut span_rows: Vec<Vec<u64>>,
        sub_rows: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if span_rows.iter().chain(&sub_rows).any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("vector length differs from the ambient rank".into()));
        }
        span_rows.extend(sub_rows.iter().cloned());
        let zp = *alg.zp();
        let span = r_closure(&zp, &actions, span_rows, dim);
        let sub = r_closure(&zp, &actions, sub_rows, dim);
        Ok(FiniteModule { alg: alg.clone(), dim, actions, span, sub })
    }

    fn sibling(&self, span_rows: Vec<Vec<u64>>, sub_rows: Vec<Vec<u64>>) -> Result<Self> {
        Self::build(&self.alg, self.dim, self.actions.clone(), span_rows, sub_rows)
    }

    /// coker(R^n → R^m) for a presentation.
    pub fn from_presentation(pres: &Presentation) -> Self {
        let alg = pres.alg();
        let m = pres.generators();
        let dim = alg.dim();
        let ambient = m * dim;
        let actions = free_actions(alg, m);
        let span: Vec<Vec<u64>> = (0..ambient).map(|i| (0..ambient).map(|k| u64::from(i == k)).collect()).collect();
        let relations: Vec<Vec<u64>> = (0..pres.relations())
            .map(|j| {
                let mut v = Vec::with_capacity(ambient);
                for i in 0..m {
                    v.extend_from_slice(pres.entry(i, j).data());
                }
                v
            })
            .collect();
        Self::build(alg, ambient, Arc::new(actions), span, relations).expect("dimensions agree by construction")
    }

    pub fn zero(alg: &Arc<TruncAlgebra>) -> Self {
        Self::from_presentation(&Presentation::free(alg, 0))
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        &self.alg
    }

    pub fn ambient_rank(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[ZMatrix] {
        &self.actions
    }

    pub fn span(&self) -> &Echelon {
        &self.span
    }

    pub fn sub(&self) -> &Echelon {
        &self.sub
    }

    pub fn zp(&self) -> &ModRing {
        self.alg.zp()
    }

    /// log_p of the order.
    pub fn log_order(&self) -> u64 {
        self.span.log_order() - self.sub.log_order()
    }

    pub fn is_zero(&self) -> bool {
        self.log_order() == 0
    }

    pub fn act_basis(&self, v: &[u64], b: usize) -> Vec<u64> {
        vec_mat(self.zp(), v, &self.actions[b], self.dim)
    }

    pub fn act(&self, v: &[u64], r: &TruncElem) -> Vec<u64> {
        let zp = self.zp();
        let mut out = vec![0u64; self.dim];
        for (b, &c) in r.data().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let image = self.act_basis(v, b);
            for (slot, x) in out.iter_mut().zip(image) {
                *slot = zp.add(*slot, zp.mul(c, x));
            }
        }
        out
    }

    /// Whether v represents the zero class.
    pub fn is_trivial_class(&self, v: &[u64]) -> bool {
        self.sub.contains(v)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.span.contains(v)
    }

    pub fn is_killed_by(&self, r: &TruncElem) -> bool {
        self.span.rows.iter().all(|v| self.sub.contains(&self.act(v, r)))
    }

    /// The module is a genuine Zp-module only if p^{N-1} already kills it.
    pub fn check_precision(&self) -> Result<()> {
        let zp = self.zp();
        let factor = zp.p_power(zp.n - 1);
        let killed = self.span.rows.iter().all(|v| {
            let scaled: Vec<u64> = v.iter().map(|&x| zp.mul(x, factor)).collect();
            self.sub.contains(&scaled)
        });
        if killed {
            Ok(())
        } else {
            Err(Error::PrecisionExhausted(format!(
                "module is not killed by p^{}; raise the working precision",
                zp.n - 1
            )))
        }
    }

    /// R-generators greedily chosen from the canonical basis of V.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        let zp = *self.zp();
        let mut gens = Vec::new();
        let mut current = self.sub.clone();
        for candidate in &self.span.rows {
            if current.contains(candidate) {
                continue;
            }
            gens.push(candidate.clone());
            let mut rows = current.rows.clone();
            rows.push(candidate.clone());
            current = r_closure(&zp, &self.actions, rows, self.dim);
            if current.log_order() == self.span.log_order() {
                break;
            }
        }
        gens
    }

    /// A finite presentation over R: greedy generators, relations from the
    /// kernel of R^s → V/W, greedily thinned to R-generators.
    pub fn present(&self) -> Result<Presentation> {
        let alg = &self.alg;
        let zp = *self.zp();
        let dim = alg.dim();
        let gens = self.generators();
        let s = gens.len();
        if s == 0 {
            return Ok(Presentation::free(alg, 0));
        }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(s * dim + self.sub.rows.len());
        for g in &gens {
            for b in 0..dim {
                rows.push(self.act_basis(g, b));
            }
        }
        rows.extend(self.sub.rows.iter().cloned());
        let kernel = left_kernel(&zp, &rows, self.dim);
        let free_dim = s * dim;
        let relation_vectors: Vec<Vec<u64>> =
            kernel.into_iter().map(|k| k[..free_dim].to_vec()).filter(|k| k.iter().any(|&x| x != 0)).collect();
        let free_actions = free_actions(alg, s);
        let full = r_closure(&zp, &free_actions, relation_vectors, free_dim);
        let mut chosen: Vec<Vec<u64>> = Vec::new();
        let mut current = howell(&zp, vec![], free_dim);
        for candidate in &full.rows {
            if current.contains(candidate) {
                continue;
            }
            chosen.push(candidate.clone());
            current = r_closure(&zp, &free_actions, chosen.clone(), free_dim);
            if current.log_order() == full.log_order() {
                break;
            }
        }
        let matrix: RingMatrix = (0..s)
            .map(|i| {
                chosen
                    .iter()
                    .map(|rel| TruncElem::from_data(alg, rel[i * dim..(i + 1) * dim].to_vec()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Presentation::new(alg, s, chosen.len(), matrix)
    }

    pub fn fitting_ideal(&self) -> Result<IdealHandle> {
        self.present()?.fitting_ideal()
    }

    /// All r ∈ R with r·V ⊆ W.
    pub fn annihilator(&self) -> Result<IdealHandle> {
        let alg = &self.alg;
        let zp = *self.zp();
        let gens = &self.span.rows;
        if gens.is_empty() {
            return Ok(IdealHandle::unit(alg));
        }
        let dim = alg.dim();
        let block = self.dim;
        let width = block * gens.len();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for b in 0..dim {
            let mut row = Vec::with_capacity(width);
            for v in gens {
                row.extend(self.act_basis(v, b));
            }
            rows.push(row);
        }
        for slot in 0..gens.len() {
            for w in &self.sub.rows {
                let mut row = vec![0u64; width];
                row[slot * block..(slot + 1) * block].copy_from_slice(w);
                rows.push(row);
            }
        }
        let kernel = left_kernel(&zp, &rows, width);
        let elems = kernel
            .into_iter()
            .map(|k| TruncElem::from_data(alg, k[..dim].to_vec()))
            .collect::<Result<Vec<_>>>()?;
        IdealHandle::from_generators(alg, elems)
    }

    /// Hom(M, Qp/Zp) ≅ Hom(M, Z/p^N) with the covariant action (rφ)(x) = φ(rx)
    /// or, over a group ring, the contravariant one (gφ)(x) = φ(g^{-1}x).
    pub fn dual(&self, covariant: bool) -> Result<Self> {
        let alg = &self.alg;
        let zp = *self.zp();
        if !covariant && (alg.d() != 1 || alg.t_prec != 1) {
            return Err(Error::InvalidArgument("the contravariant dual needs a group ring over Z/p^N".into()));
        }
        let actions: Vec<ZMatrix> = (0..alg.dim())
            .map(|b| {
                let source = if covariant { b } else { alg.neg_idx(b) };
                transpose_z(&self.actions[source], self.dim, self.dim)
            })
            .collect();
        let span = orthogonal(&zp, &self.sub.rows, self.dim);
        let sub = orthogonal(&zp, &self.span.rows, self.dim);
        Self::build(alg, self.dim, Arc::new(actions), span, sub)
    }

    /// M(n): each group element g acts by c(g)^n·g; `c_values` are the images
    /// of the cyclic generators in (Z/p^N)^×.
    pub fn tate_twist(&self, c_values: &[u64], n: i64) -> Result<Self> {
        let alg = &self.alg;
        if alg.d() != 1 || alg.t_prec != 1 {
            return Err(Error::InvalidArgument("Tate twists act on group-ring modules".into()));
        }
        let zp = *self.zp();
        let factors = group_character_values(alg, &zp, c_values, n)?;
        let actions: Vec<ZMatrix> = self
            .actions
            .iter()
            .zip(&factors)
            .map(|(mat, &f)| mat.iter().map(|row| row.iter().map(|&x| zp.mul(x, f)).collect()).collect())
            .collect();
        Self::build(alg, self.dim, Arc::new(actions), self.span.rows.clone(), self.sub.rows.clone())
    }

    /// Direct sum with block-diagonal actions.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.alg.same_shape(&other.alg) {
            return Err(Error::RingMismatch("summands over different rings".into()));
        }
        let dim = self.dim + other.dim;
        let actions: Vec<ZMatrix> = self
            .actions
            .iter()
            .zip(other.actions.iter())
            .map(|(a, b)| {
                let mut mat = vec![vec![0u64; dim]; dim];
                for i in 0..self.dim {
                    mat[i][..self.dim].copy_from_slice(&a[i]);
                }
                for i in 0..other.dim {
                    mat[self.dim + i][self.dim..].copy_from_slice(&b[i]);
                }
                mat
            })
            .collect();
        let embed_left = |r: &Vec<u64>| {
            let mut v = r.clone();
            v.resize(dim, 0);
            v
        };
        let embed_right = |r: &Vec<u64>| {
            let mut v = vec![0u64; self.dim];
            v.extend_from_slice(r);
            v
        };
        let span = self.span.rows.iter().map(embed_left).chain(other.span.rows.iter().map(embed_right)).collect();
        let sub = self.sub.rows.iter().map(embed_left).chain(other.sub.rows.iter().map(embed_right)).collect();
        Self::build(&self.alg, dim, Arc::new(actions), span, sub)
    }
}

/// c(g)^n for every group element g, from the generator values.
pub fn group_character_values(alg: &TruncAlgebra, zp: &ModRing, c_values: &[u64], n: i64) -> Result<Vec<u64>> {
    if c_values.len() != alg.group.rank() {
        return Err(Error::InvalidArgument("c-data must give a value on every cyclic generator".into()));
    }
    let mut gen_pows = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let base = if n >= 0 { c % zp.modulus } else { zp.inv(c).ok_or_else(|| Error::NotInvertible("c-value".into()))? };
        gen_pows.push(zp.pow(base, n.unsigned_abs()));
    }
    Ok((0..alg.gsize())
        .map(|g| {
            alg.group.element(g).iter().zip(&gen_pows).fold(1 % zp.modulus, |acc, (&e, &v)| zp.mul(acc, zp.pow(v, e)))
        })
        .collect())
}

/// Howell form of the R-span (Z/p^N-span of all translates) of `rows`.
pub fn r_closure(zp: &ModRing, actions: &[ZMatrix], rows: Vec<Vec<u64>>, dim: usize) -> Echelon {
    let base = howell(zp, rows, dim);
    let mut all = Vec::with_capacity(base.rows.len() * actions.len());
    for v in &base.rows {
        for a in actions {
            all.push(vec_mat(zp, v, a, dim));
        }
    }
    all.extend(base.rows.iter().cloned());
    howell(zp, all, dim)
}

/// An R-linear map between finite modules, given on ambient coordinates.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: FiniteModule,
    pub target: FiniteModule,
    pub matrix: ZMatrix,
}

impl ModuleMap {
    pub fn new(source: &FiniteModule, target: &FiniteModule, matrix: ZMatrix) -> Result<Self> {
        if !source.alg.same_shape(&target.alg) {
            return Err(Error::RingMismatch("map between modules over different rings".into()));
        }
        if matrix.len() != source.dim || matrix.iter().any(|r| r.len() != target.dim) {
            return Err(Error::InvalidArgument("map matrix has the wrong shape".into()));
        }
        let map = ModuleMap { source: source.clone(), target: target.clone(), matrix };
        map.validate()?;
        Ok(map)
    }

    fn apply_raw(&self, v: &[u64]) -> Vec<u64> {
        vec_mat(self.source.zp(), v, &self.matrix, self.target.dim)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.apply_raw(v)
    }

    fn validate(&self) -> Result<()> {
        let zp = *self.source.zp();
        for v in &self.source.span.rows {
            let image = self.apply_raw(v);
            if !self.target.span.contains(&image) {
                return Err(Error::InvalidArgument("image leaves the target module".into()));
            }
            for b in 0..self.source.alg.dim() {
                let lhs = self.apply_raw(&self.source.act_basis(v, b));
                let rhs = self.target.act_basis(&image, b);
                let diff: Vec<u64> = lhs.iter().zip(&rhs).map(|(&x, &y)| zp.sub(x, y)).collect();
                if !self.target.sub.contains(&diff) {
                    return Err(Error::InvalidArgument("map is not R-linear".into()));
                }
            }
        }
        for w in &self.source.sub.rows {
            if !self.target.sub.contains(&self.apply_raw(w)) {
                return Err(Error::InvalidArgument("map is not well defined on the quotient".into()));
            }
        }
        Ok(())
    }

    /// Map between presentation modules induced by a ring matrix
    /// R^{m_s} → R^{m_t}; the caller's matrix must carry relations to
    /// relations (checked).
    pub fn from_ring_matrix(source: &FiniteModule, target: &FiniteModule, h: &RingMatrix) -> Result<Self> {
        let alg = &source.alg;
        let dim = alg.dim();
        let rows = target.dim / dim;
        let cols = source.dim / dim;
        if h.len() != rows || h.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ring matrix has the wrong shape".into()));
        }
        Self::new(source, target, ring_matrix_to_z(alg, h, rows, cols))
    }

    pub fn kernel(&self) -> Result<FiniteModule> {
        let zp = *self.source.zp();
        let gens = &self.source.span.rows;
        let mut rows: Vec<Vec<u64>> = gens.iter().map(|v| self.apply_raw(v)).collect();
        rows.extend(self.target.sub.rows.iter().cloned());
        let kernel = left_kernel(&zp, &rows, self.target.dim);
        let count = gens.len();
        let span: Vec<Vec<u64>> = kernel
            .into_iter()
            .map(|k| {
                let mut v = vec![0u64; self.source.dim];
                for (c, g) in k[..count].iter().zip(gens) {
                    if *c == 0 {
                        continue;
                    }
                    for (slot, &x) in v.iter_mut().zip(g) {
                        *slot = zp.add(*slot, zp.mul(*c, x));
                    }
                }
                v
            })
            .collect();
        self.source.sibling(span, self.source.sub.rows.clone())
    }

    pub fn image(&self) -> Result<FiniteModule> {
        let span = self.source.span.rows.iter().map(|v| self.apply_raw(v)).collect();
        self.target.sibling(span, self.target.sub.rows.clone())
    }

    pub fn cokernel(&self) -> Result<FiniteModule> {
        let mut sub: Vec<Vec<u64>> = self.source.span.rows.iter().map(|v| self.apply_raw(v)).collect();
        sub.extend(self.target.sub.rows.iter().cloned());
        self.target.sibling(self.target.span.rows.clone(), sub)
    }

    /// Inclusion of a submodule-quotient sharing the ambient space.
    pub fn inclusion(sub: &FiniteModule, ambient: &FiniteModule) -> Result<Self> {
        let id: ZMatrix = (0..sub.dim).map(|i| (0..sub.dim).map(|k| u64::from(i == k)).collect()).collect();
        Self::new(sub, ambient, id)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_zero())
    }
}

/// Exactness at the middle of A → B → C: im f + W_B = ker g.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    let middle = &f.target;
    if middle.dim != g.source.dim {
        return Err(Error::InvalidArgument("maps do not compose".into()));
    }
    let zp = *middle.zp();
    let image = f.image()?;
    let kernel = g.kernel()?;
    let lhs = howell(&zp, image.span.rows.iter().chain(&middle.sub.rows).cloned().collect(), middle.dim);
    let rhs = howell(&zp, kernel.span.rows.iter().chain(&middle.sub.rows).cloned().collect(), middle.dim);
    Ok(lhs.rows == rhs.rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::AbGroup;

    fn z3(n: u32) -> Arc<TruncAlgebra> {
        TruncAlgebra::group_ring(3, n, &AbGroup::trivial()).unwrap()
    }

    #[test]
    fn cyclic_module_orders() {
        let alg = z3(6);
        let int = |v| TruncElem::from_int(&alg, v);
        let pres = Presentation::diagonal(&alg, &[int(3), int(9)]).unwrap();
        let module = FiniteModule::from_presentation(&pres);
        assert_eq!(module.log_order(), 3);
        assert_eq!(module.fitting_ideal().unwrap(), IdealHandle::principal(&int(27)));
        assert_eq!(module.annihilator().unwrap(), IdealHandle::principal(&int(9)));
        let dual = module.dual(true).unwrap();
        assert_eq!(dual.log_order(), 3);
        assert_eq!(dual.fitting_ideal().unwrap(), IdealHandle::principal(&int(27)));
    }

    #[test]
    fn sign_module_dual_keeps_action() {
        let g = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        let alg = TruncAlgebra::group_ring(3, 4, &g).unwrap();
        // Z/3 with j acting by -1: R/(3, 1 + j).
        let rel = |data: Vec<u64>| TruncElem::from_data(&alg, data).unwrap();
        let pres = Presentation::from_matrix(&alg, vec![vec![rel(vec![3, 0]), rel(vec![1, 1])]]).unwrap();
        let module = FiniteModule::from_presentation(&pres);
        assert_eq!(module.log_order(), 1);
        for covariant in [true, false] {
            let dual = module.dual(covariant).unwrap();
            assert_eq!(dual.log_order(), 1);
            assert!(dual.is_killed_by(&rel(vec![1, 1])));
            assert_eq!(dual.fitting_ideal().unwrap(), module.fitting_ideal().unwrap());
        }
    }

    #[test]
    fn kernel_and_cokernel_of_multiplication_by_three() {
        let alg = z3(5);
        let int = |v| TruncElem::from_int(&alg, v);
        let z9 = FiniteModule::from_presentation(&Presentation::diagonal(&alg, &[int(9)]).unwrap());
        let map = ModuleMap::from_ring_matrix(&z9, &z9, &vec![vec![int(3)]]).unwrap();
        assert_eq!(map.kernel().unwrap().log_order(), 1);
        assert_eq!(map.cokernel().unwrap().log_order(), 1);
        assert_eq!(map.image().unwrap().log_order(), 1);
        assert!(is_exact_at(&ModuleMap::inclusion(&map.kernel().unwrap(), &z9).unwrap(), &map).unwrap());
    }

    #[test]
    fn precision_guard() {
        let alg = z3(3);
        let int = |v| TruncElem::from_int(&alg, v);
        let ok = FiniteModule::from_presentation(&Presentation::diagonal(&alg, &[int(9)]).unwrap());
        assert!(ok.check_precision().is_ok());
        let bad = FiniteModule::from_presentation(&Presentation::diagonal(&alg, &[int(27)]).unwrap());
        assert!(bad.check_precision().is_err());
    }
}
