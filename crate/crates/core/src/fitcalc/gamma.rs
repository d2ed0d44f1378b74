//! Free R[G]-modules with a γ-action, their Fitting ideals over the
//! Iwasawa algebra (γ ↦ 1+t) and Tate-twisted characteristic polynomials.

use std::sync::Arc;

use crate::coeff::make_coeff_ring;
use crate::error::{Error, Result};
use crate::fitcalc::ideal::IdealHandle;
use crate::fitcalc::matrix::{charpoly_berkowitz, eval_poly, invert_matrix, transpose, RingMatrix};
use crate::fitcalc::module::group_character_values;
use crate::fitcalc::presentation::Presentation;
use crate::grp::{enumerate_characters, TruncAlgebra, TruncElem};

#[derive(Debug, Clone)]
pub struct GammaModule {
    alg: Arc<TruncAlgebra>,
    action: RingMatrix,
}

/// Multiply the coefficient of each group element g by factors[g].
pub fn scale_group_blocks(x: &TruncElem, factors: &[u64]) -> TruncElem {
    let alg = x.alg();
    let zp = alg.zp();
    let d = alg.d();
    let mut data = x.data().to_vec();
    for deg in 0..alg.t_prec {
        for (g, &f) in factors.iter().enumerate() {
            let start = alg.index(deg, g, 0);
            for c in &mut data[start..start + d] {
                *c = zp.mul(*c, f);
            }
        }
    }
    TruncElem::from_data(alg, data).expect("same algebra")
}

/// t_n on the group part: g ↦ c(g)^n·g.
pub fn twist_group_part(x: &TruncElem, c_values: &[u64], n: i64) -> Result<TruncElem> {
    let alg = x.alg();
    let factors = group_character_values(alg, alg.zp(), c_values, n)?;
    Ok(scale_group_blocks(x, &factors))
}

fn signed_pow(alg: &TruncAlgebra, base: u64, n: i64) -> Result<u64> {
    let zp = alg.zp();
    let b = if n >= 0 { base % zp.modulus } else { zp.inv(base).ok_or_else(|| Error::NotInvertible("u".into()))? };
    Ok(zp.pow(b, n.unsigned_abs()))
}

impl GammaModule {
    pub fn new(alg: &Arc<TruncAlgebra>, action: RingMatrix) -> Result<Self> {
        if alg.t_prec != 1 {
            return Err(Error::InvalidArgument("γ-modules live over a group ring".into()));
        }
        if action.iter().any(|row| row.len() != action.len()) {
            return Err(Error::InvalidArgument("action matrix must be square".into()));
        }
        if !action.is_empty() {
            invert_matrix(alg, &action).map_err(|_| Error::NotInvertible("γ-action matrix".into()))?;
        }
        Ok(GammaModule { alg: alg.clone(), action })
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self) -> &RingMatrix {
        &self.action
    }

    /// det(X − A), lowest degree first.
    pub fn charpoly(&self) -> Vec<TruncElem> {
        charpoly_berkowitz(&self.alg, &self.action)
    }

    fn series_alg(&self, t_prec: usize) -> Result<Arc<TruncAlgebra>> {
        self.alg.with_t_prec(t_prec)
    }

    fn lift_poly(&self, poly: &[TruncElem], target: &Arc<TruncAlgebra>) -> Result<Vec<TruncElem>> {
        poly.iter().map(|c| c.pad_t(target.t_prec)?.reinterpret(target)).collect()
    }

    /// F(1+t) for F the characteristic polynomial.
    pub fn gamma_series(&self, t_prec: usize) -> Result<TruncElem> {
        let target = self.series_alg(t_prec)?;
        let poly = self.lift_poly(&self.charpoly(), &target)?;
        let one_plus_t = TruncElem::one(&target).add(&TruncElem::t(&target));
        Ok(eval_poly(&poly, &one_plus_t))
    }

    /// Λ^r →((1+t)·1 − A) Λ^r → M → 0.
    pub fn presentation(&self, t_prec: usize) -> Result<Presentation> {
        let target = self.series_alg(t_prec)?;
        let r = self.rank();
        let one_plus_t = TruncElem::one(&target).add(&TruncElem::t(&target));
        let mut matrix: RingMatrix = Vec::with_capacity(r);
        for i in 0..r {
            let mut row = Vec::with_capacity(r);
            for k in 0..r {
                let a = self.action[i][k].pad_t(t_prec)?.reinterpret(&target)?;
                row.push(if i == k { one_plus_t.sub(&a) } else { a.neg() });
            }
            matrix.push(row);
        }
        Presentation::new(&target, r, r, matrix)
    }

    /// The matrix of γ on V(n): u^n·t_{−n}(A), or on V*(n) with A replaced by
    /// ι((A^{-1})^T).
    pub fn twisted_action(&self, c_values: &[u64], u: u64, n: i64, dual: bool) -> Result<RingMatrix> {
        let base = if dual {
            let inv = invert_matrix(&self.alg, &self.action)?;
            transpose(&inv).into_iter().map(|row| row.into_iter().map(|x| x.invert_group()).collect()).collect()
        } else {
            self.action.clone()
        };
        let un = signed_pow(&self.alg, u, n)?;
        base.iter()
            .map(|row| row.iter().map(|x| Ok(twist_group_part(x, c_values, -n)?.scale(un))).collect())
            .collect()
    }

    pub fn twisted_charpoly(&self, c_values: &[u64], u: u64, n: i64, dual: bool) -> Result<Vec<TruncElem>> {
        let action = self.twisted_action(c_values, u, n, dual)?;
        Ok(charpoly_berkowitz(&self.alg, &action))
    }

    /// Per odd-or-even character χ of G: whether χ(P_{V(n)}(γ)) generates the
    /// same ideal of O_χ[t]/(p^N, t^M) as χ(t_{−n}(P_V(γ))) (or, for the dual,
    /// χ((ι∘t_n)(P_V(γ)))).
    pub fn twist_association(&self, c_values: &[u64], u: u64, n: i64, dual: bool, t_prec: usize) -> Result<Vec<bool>> {
        let target = self.series_alg(t_prec)?;
        let zp = *self.alg.zp();
        let one_plus_t = TruncElem::one(&target).add(&TruncElem::t(&target));
        let lhs_poly = self.lift_poly(&self.twisted_charpoly(c_values, u, n, dual)?, &target)?;
        let lhs = eval_poly(&lhs_poly, &one_plus_t);
        let base_poly: Vec<TruncElem> = self
            .charpoly()
            .iter()
            .map(|c| if dual { twist_group_part(&c.invert_group(), c_values, n) } else { twist_group_part(c, c_values, -n) })
            .collect::<Result<_>>()?;
        let base_poly = self.lift_poly(&base_poly, &target)?;
        let point = if dual {
            let inv: Vec<u64> = (0..t_prec).map(|k| if k % 2 == 0 { 1 } else { zp.modulus - 1 }).collect();
            TruncElem::from_zp_series(&target, &inv).scale(signed_pow(&self.alg, u, n)?)
        } else {
            one_plus_t.scale(signed_pow(&self.alg, u, -n)?)
        };
        let rhs = eval_poly(&base_poly, &point);
        let exponent = self.alg.group.exponent();
        let coeff = make_coeff_ring(zp.p, zp.n, exponent)?;
        let char_alg = TruncAlgebra::new(&coeff, &crate::grp::AbGroup::trivial(), t_prec)?;
        enumerate_characters(&self.alg.group)
            .iter()
            .map(|chi| {
                let l = IdealHandle::principal(&lhs.apply_character(chi, &char_alg)?);
                let r = IdealHandle::principal(&rhs.apply_character(chi, &char_alg)?);
                l.equals(&r)
            })
            .collect()
    }
}

/// Fit_Λ(M) = (F(1+t)) by the characteristic polynomial.
pub fn fit_gamma_module(module: &GammaModule, t_prec: usize) -> Result<IdealHandle> {
    Ok(IdealHandle::principal(&module.gamma_series(t_prec)?))
}

/// Fit_Λ(M) from the minors of the explicit Λ-presentation.
pub fn fit_gamma_module_minors(module: &GammaModule, t_prec: usize) -> Result<IdealHandle> {
    module.presentation(t_prec)?.fitting_ideal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::AbGroup;

    #[test]
    fn rank_one_examples() {
        let alg = TruncAlgebra::group_ring(3, 5, &AbGroup::trivial()).unwrap();
        let module = GammaModule::new(&alg, vec![vec![TruncElem::from_int(&alg, 4)]]).unwrap();
        let fit = fit_gamma_module(&module, 4).unwrap();
        let series = alg.with_t_prec(4).unwrap();
        let expected = TruncElem::t(&series).sub(&TruncElem::from_int(&series, 3));
        assert_eq!(fit, IdealHandle::principal(&expected));
        assert_eq!(fit, fit_gamma_module_minors(&module, 4).unwrap());
        let trivial = GammaModule::new(&alg, vec![vec![TruncElem::from_int(&alg, 1)]]).unwrap();
        assert_eq!(fit_gamma_module(&trivial, 4).unwrap(), IdealHandle::principal(&TruncElem::t(&series)));
    }

    #[test]
    fn twisted_rank_one_trivial_action() {
        let g = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        let alg = TruncAlgebra::group_ring(3, 5, &g).unwrap();
        let module = GammaModule::new(&alg, vec![vec![TruncElem::one(&alg)]]).unwrap();
        let c = [alg.zp().from_i64(-1)];
        let poly = module.twisted_charpoly(&c, 4, 1, false).unwrap();
        assert_eq!(poly, vec![TruncElem::from_int(&alg, -4), TruncElem::one(&alg)]);
        assert_eq!(module.twisted_charpoly(&c, 4, 0, false).unwrap(), module.charpoly());
    }

    #[test]
    fn association_on_rank_two() {
        let g = AbGroup::new(vec![2], Some(vec![1])).unwrap();
        let alg = TruncAlgebra::group_ring(3, 5, &g).unwrap();
        let e = |a: u64, b: u64| TruncElem::from_data(&alg, vec![a, b]).unwrap();
        let module = GammaModule::new(&alg, vec![vec![e(1, 3), e(0, 1)], vec![e(3, 0), e(4, 0)]]).unwrap();
        let c = [alg.zp().from_i64(-1)];
        for n in [-1, 1, 2] {
            for dual in [false, true] {
                let verdicts = module.twist_association(&c, 4, n, dual, 5).unwrap();
                assert!(verdicts.iter().all(|&v| v), "n = {n}, dual = {dual}");
            }
        }
    }
}
