//! Verification predicates for the Fitting-ideal calculus, and random
//! generators of presentations, γ-modules and four-term sequences.

use std::sync::Arc;

use rand::Rng;

use crate::coeff::make_coeff_ring;
use crate::error::{Error, Result};
use crate::fitcalc::gamma::GammaModule;
use crate::fitcalc::ideal::IdealHandle;
use crate::fitcalc::matrix::{adjugate, det, mat_mul, RingMatrix};
use crate::fitcalc::module::{is_exact_at, FiniteModule, ModuleMap};
use crate::fitcalc::presentation::Presentation;
use crate::grp::{enumerate_characters, AbGroup, TruncAlgebra, TruncElem};

/// Fit_{R'}(M ⊗ R') = ρ(Fit_R(M))·R'.
pub fn check_base_change(
    pres: &Presentation,
    target: &Arc<TruncAlgebra>,
    rho: impl Fn(&TruncElem) -> Result<TruncElem>,
) -> Result<bool> {
    let lhs = pres.map_ring(target, &rho)?.fitting_ideal()?;
    let rhs = pres.fitting_ideal()?.map(target, &rho)?;
    lhs.equals(&rhs)
}

/// Whether x has nonzero image under every character of G at the working
/// precision, so that x is a non zero-divisor of Zp[G].
pub fn is_nonzero_divisor(x: &TruncElem) -> Result<bool> {
    let alg = x.alg();
    let coeff = make_coeff_ring(alg.p(), alg.n(), alg.group.exponent())?;
    let target = TruncAlgebra::new(&coeff, &AbGroup::trivial(), alg.t_prec)?;
    for chi in enumerate_characters(&alg.group) {
        if x.apply_character(&chi, &target)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Square presentation with a non zero-divisor determinant (pd ≤ 1).
pub fn is_square_nonsingular(pres: &Presentation) -> Result<bool> {
    if !pres.is_square() {
        return Ok(false);
    }
    if pres.generators() == 0 {
        return Ok(true);
    }
    is_nonzero_divisor(&det(pres.alg(), pres.matrix()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnFitVerdict {
    pub ann_power_in_fit: bool,
    pub fit_in_ann: bool,
}

/// Ann^m ⊆ Fit ⊆ Ann with m the number of generators of the presentation.
pub fn check_ann_fit(module: &FiniteModule) -> Result<AnnFitVerdict> {
    let pres = module.present()?;
    let fit = pres.fitting_ideal()?;
    let ann = module.annihilator()?;
    let power = ann.power(pres.generators() as u32)?;
    Ok(AnnFitVerdict { ann_power_in_fit: power.is_subset_of(&fit)?, fit_in_ann: fit.is_subset_of(&ann)? })
}

/// M ↠ M' ⇒ Fit(M) ⊆ Fit(M').
pub fn check_surjection_monotone(map: &ModuleMap) -> Result<bool> {
    if !map.is_surjective()? {
        return Err(Error::InvalidArgument("map is not surjective".into()));
    }
    map.source.fitting_ideal()?.is_subset_of(&map.target.fitting_ideal()?)
}

/// 0 → A → P → P' → A' → 0 with P, P' given by presentations; A and A'
/// are the kernel and cokernel of the middle map.
#[derive(Debug, Clone)]
pub struct FourTermSequence {
    pub pres_p: Presentation,
    pub pres_p_prime: Presentation,
    pub a: FiniteModule,
    pub p: FiniteModule,
    pub p_prime: FiniteModule,
    pub a_prime: FiniteModule,
    pub first: ModuleMap,
    pub middle: ModuleMap,
    pub last: ModuleMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourTermVerdict {
    pub exact: bool,
    pub pd_ok: bool,
    /// Fit(A^∨)·Fit(P') = Fit(A')·Fit(P).
    pub identity_holds: bool,
    /// Fit(A^∨)·Fit(P') = Fit(A)·Fit(P), reported for comparison.
    pub literal_holds: bool,
}

impl FourTermSequence {
    /// The sequence induced by a ring matrix h: R^m → R^{m'} carrying the
    /// relations of P into those of P'.
    pub fn from_middle_map(pres_p: &Presentation, pres_p_prime: &Presentation, h: &RingMatrix) -> Result<Self> {
        let p = FiniteModule::from_presentation(pres_p);
        let p_prime = FiniteModule::from_presentation(pres_p_prime);
        p.check_precision()?;
        p_prime.check_precision()?;
        let middle = ModuleMap::from_ring_matrix(&p, &p_prime, h)?;
        let a = middle.kernel()?;
        let a_prime = middle.cokernel()?;
        let first = ModuleMap::inclusion(&a, &p)?;
        let last = ModuleMap::inclusion(&p_prime, &a_prime)?;
        Ok(FourTermSequence {
            pres_p: pres_p.clone(),
            pres_p_prime: pres_p_prime.clone(),
            a,
            p,
            p_prime,
            a_prime,
            first,
            middle,
            last,
        })
    }

    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.first.is_injective()?
            && is_exact_at(&self.first, &self.middle)?
            && is_exact_at(&self.middle, &self.last)?
            && self.last.is_surjective()?)
    }
}

pub fn check_four_term(seq: &FourTermSequence) -> Result<FourTermVerdict> {
    let exact = seq.is_exact()?;
    if !exact {
        return Err(Error::NotExact("image and kernel differ in the four-term sequence".into()));
    }
    let pd_ok = is_square_nonsingular(&seq.pres_p)? && is_square_nonsingular(&seq.pres_p_prime)?;
    if !pd_ok {
        return Err(Error::Hypothesis("P and P' need square nonsingular presentations".into()));
    }
    let fit_a_dual = seq.a.dual(true)?.fitting_ideal()?;
    let fit_a = seq.a.fitting_ideal()?;
    let fit_a_prime = seq.a_prime.fitting_ideal()?;
    let fit_p = seq.pres_p.fitting_ideal()?;
    let fit_p_prime = seq.pres_p_prime.fitting_ideal()?;
    let lhs = fit_a_dual.product(&fit_p_prime)?;
    Ok(FourTermVerdict {
        exact,
        pd_ok,
        identity_holds: lhs.equals(&fit_a_prime.product(&fit_p)?)?,
        literal_holds: lhs.equals(&fit_a.product(&fit_p)?)?,
    })
}

/// Random element with Z-coefficients in [−bound, bound] on each basis vector.
pub fn random_element<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, bound: i64) -> TruncElem {
    let zp = alg.zp();
    let data = (0..alg.dim()).map(|_| zp.from_i64(rng.gen_range(-bound..=bound))).collect();
    TruncElem::from_data(alg, data).expect("dimension matches")
}

pub fn random_matrix<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, rows: usize, cols: usize, bound: i64) -> RingMatrix {
    (0..rows).map(|_| (0..cols).map(|_| random_element(rng, alg, bound)).collect()).collect()
}

/// Random presentation (at most max×max) whose module is a genuine finite
/// Zp[G]-module at the working precision.
pub fn random_presentation<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, max: usize) -> Presentation {
    loop {
        let m = rng.gen_range(1..=max);
        let n = rng.gen_range(m..=max);
        let mut matrix = random_matrix(rng, alg, m, n, 4);
        for (i, row) in matrix.iter_mut().enumerate() {
            if rng.gen_bool(0.5) {
                row[i] = row[i].add(&TruncElem::from_int(alg, 3));
            }
        }
        let pres = Presentation::new(alg, m, n, matrix).expect("shape");
        if FiniteModule::from_presentation(&pres).check_precision().is_ok() {
            return pres;
        }
    }
}

pub fn random_gamma_module<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, rank: usize) -> GammaModule {
    loop {
        let action = random_matrix(rng, alg, rank, rank, 4);
        if let Ok(module) = GammaModule::new(alg, action) {
            return module;
        }
    }
}

pub fn random_nonsingular<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, m: usize, bound: i64) -> RingMatrix {
    loop {
        let mat = random_matrix(rng, alg, m, m, bound);
        if is_nonzero_divisor(&det(alg, &mat)).unwrap_or(false) {
            return mat;
        }
    }
}

/// Random exact sequence: P' = coker D', H arbitrary nonsingular,
/// D = adj(H)·D'·Y so that H·D = D'·(det H·Y) and h is induced by H.
pub fn random_four_term<R: Rng>(rng: &mut R, alg: &Arc<TruncAlgebra>, max_rank: usize) -> FourTermSequence {
    loop {
        let m = rng.gen_range(1..=max_rank);
        let d_prime = random_nonsingular(rng, alg, m, 2);
        let h = random_nonsingular(rng, alg, m, 2);
        let y = random_nonsingular(rng, alg, m, 1);
        let d = mat_mul(&mat_mul(&adjugate(alg, &h), &d_prime), &y);
        let Ok(pres_p) = Presentation::from_matrix(alg, d) else { continue };
        let Ok(pres_p_prime) = Presentation::from_matrix(alg, d_prime) else { continue };
        if let Ok(seq) = FourTermSequence::from_middle_map(&pres_p, &pres_p_prime, &h) {
            return seq;
        }
    }
}

/// Both sides of Fit(M(n)) = t_{−n}(Fit(M)) and Ann(M(n)) = t_{−n}(Ann(M)).
pub fn check_twisting(module: &FiniteModule, c_values: &[u64], n: i64) -> Result<(bool, bool)> {
    let twisted = module.tate_twist(c_values, n)?;
    let alg = module.alg();
    let untwist = |x: &TruncElem| crate::fitcalc::gamma::twist_group_part(x, c_values, -n);
    let fit = twisted.fitting_ideal()?.equals(&module.fitting_ideal()?.map(alg, untwist)?)?;
    let ann = twisted.annihilator()?.equals(&module.annihilator()?.map(alg, untwist)?)?;
    Ok((fit, ann))
}

pub fn ideal_membership(x: &TruncElem, ideal: &IdealHandle) -> Result<bool> {
    ideal.contains(x)
}

pub fn ideal_equal(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    a.equals(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn sign_group() -> AbGroup {
        AbGroup::new(vec![2], Some(vec![1])).unwrap()
    }

    #[test]
    fn multiplication_by_three_sequence() {
        let alg = TruncAlgebra::group_ring(3, 6, &AbGroup::trivial()).unwrap();
        let int = |v| TruncElem::from_int(&alg, v);
        let z9 = Presentation::diagonal(&alg, &[int(9)]).unwrap();
        let seq = FourTermSequence::from_middle_map(&z9, &z9, &vec![vec![int(3)]]).unwrap();
        let verdict = check_four_term(&seq).unwrap();
        assert!(verdict.identity_holds && verdict.literal_holds);
    }

    #[test]
    fn literal_form_fails_when_orders_of_a_and_a_prime_differ() {
        // 0 → 0 → Z/3 → Z/9 → Z/3 → 0, the map being multiplication by 3.
        let alg = TruncAlgebra::group_ring(3, 6, &AbGroup::trivial()).unwrap();
        let int = |v| TruncElem::from_int(&alg, v);
        let z3 = Presentation::diagonal(&alg, &[int(3)]).unwrap();
        let z9 = Presentation::diagonal(&alg, &[int(9)]).unwrap();
        let seq = FourTermSequence::from_middle_map(&z3, &z9, &vec![vec![int(3)]]).unwrap();
        assert!(seq.a.is_zero());
        let verdict = check_four_term(&seq).unwrap();
        assert!(verdict.identity_holds);
        assert!(!verdict.literal_holds);
    }

    #[test]
    fn random_four_term_sequences_satisfy_the_identity() {
        let alg = TruncAlgebra::group_ring(3, 8, &sign_group()).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let seq = random_four_term(&mut rng, &alg, 2);
            assert!(check_four_term(&seq).unwrap().identity_holds);
        }
    }

    #[test]
    fn base_change_under_characters() {
        let alg = TruncAlgebra::group_ring(3, 6, &sign_group()).unwrap();
        let target = TruncAlgebra::new(&make_coeff_ring(3, 6, 2).unwrap(), &AbGroup::trivial(), 1).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let pres = random_presentation(&mut rng, &alg, 3);
        for chi in enumerate_characters(&alg.group) {
            assert!(check_base_change(&pres, &target, |x| x.apply_character(&chi, &target)).unwrap());
        }
        assert!(check_base_change(&pres, &alg, |x| Ok(x.clone())).unwrap());
    }

    #[test]
    fn ann_fit_and_twisting_on_random_modules() {
        let alg = TruncAlgebra::group_ring(3, 6, &sign_group()).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        let minus_one = alg.zp().from_i64(-1);
        for _ in 0..5 {
            let module = FiniteModule::from_presentation(&random_presentation(&mut rng, &alg, 3));
            let verdict = check_ann_fit(&module).unwrap();
            assert!(verdict.ann_power_in_fit && verdict.fit_in_ann);
            assert_eq!(check_twisting(&module, &[minus_one], 1).unwrap(), (true, true));
        }
    }
}
