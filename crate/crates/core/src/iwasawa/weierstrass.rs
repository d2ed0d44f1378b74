//! μ-invariants, Weierstrass preparation per character, equivariant
//! reassembly over admissible quotients, and association in divisibility.

use std::sync::Arc;

use crate::arith::gcd;
use crate::coeff::{make_coeff_ring, CoeffRingDesc, CyclotomicCoeff, Valuation};
use crate::error::{Error, Result};
use crate::fitcalc::howell::{howell, solve_left};
use crate::grp::{enumerate_characters, AbGroup, Character, CycloRational, TruncAlgebra, TruncElem};

/// A set F of characters closed under Gal(Q̄p/Qp); 𝔞 = Zp[G]/∩_{χ∈F} ker χ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleQuotient {
    group: AbGroup,
    characters: Vec<Character>,
}

/// Exponents a ∈ (Z/E)^× realising Gal(Qp(ζ_E)/Qp).
pub fn galois_exponents(p: u64, exponent: u64) -> Vec<u64> {
    let e = exponent.max(1);
    let mut tame = e;
    while tame % p == 0 {
        tame /= p;
    }
    let mut frobenius = vec![1 % tame];
    let mut x = p % tame;
    while !frobenius.contains(&x) {
        frobenius.push(x);
        x = x * p % tame;
    }
    (1..=e).filter(|&a| gcd(a, e) == 1 && frobenius.contains(&(a % tame))).collect()
}

pub fn galois_orbit(p: u64, chi: &Character) -> Vec<Character> {
    let mut orbit: Vec<Character> = Vec::new();
    for a in galois_exponents(p, chi.group().exponent()) {
        let image = chi.pow(a as i64);
        if !orbit.contains(&image) {
            orbit.push(image);
        }
    }
    orbit
}

impl AdmissibleQuotient {
    pub fn new(p: u64, group: &AbGroup, characters: Vec<Character>) -> Result<Self> {
        if characters.is_empty() {
            return Err(Error::InvalidArgument("an admissible quotient needs at least one character".into()));
        }
        for chi in &characters {
            if chi.group() != group {
                return Err(Error::RingMismatch("character of a different group".into()));
            }
            if galois_orbit(p, chi).iter().any(|c| !characters.contains(c)) {
                return Err(Error::InvalidArgument("character set is not closed under Galois conjugation".into()));
            }
        }
        Ok(AdmissibleQuotient { group: group.clone(), characters })
    }

    /// Zp[G]⁻: all odd characters.
    pub fn minus(p: u64, group: &AbGroup) -> Result<Self> {
        if group.j_index().is_none() {
            return Err(Error::InvalidArgument("the minus quotient needs a complex conjugation".into()));
        }
        Self::new(p, group, enumerate_characters(group).into_iter().filter(|c| c.is_odd()).collect())
    }

    pub fn all(p: u64, group: &AbGroup) -> Result<Self> {
        Self::new(p, group, enumerate_characters(group))
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    /// One character per Galois orbit, in enumeration order.
    pub fn orbit_representatives(&self, p: u64) -> Vec<(Character, usize)> {
        let mut seen: Vec<Character> = Vec::new();
        let mut reps = Vec::new();
        for chi in &self.characters {
            if seen.contains(chi) {
                continue;
            }
            let orbit = galois_orbit(p, chi);
            reps.push((chi.clone(), orbit.len()));
            seen.extend(orbit);
        }
        reps
    }

    /// e_𝔞 = Σ_{χ∈F} e_χ in Z/p^N[G][t]/(t^M).
    pub fn idempotent(&self, alg: &Arc<TruncAlgebra>) -> Result<TruncElem> {
        let order = self.group.order() as i64;
        let exponent = self.group.exponent();
        let mut coeffs = vec![CycloRational::zero(exponent); self.group.order()];
        for chi in &self.characters {
            for (idx, slot) in coeffs.iter_mut().enumerate() {
                let value = chi.value_cyclo(&self.group.element(self.group.neg_idx(idx)));
                *slot = slot.add(&value.embed(exponent)?);
            }
        }
        let zp = alg.zp();
        let inv = zp
            .inv(zp.from_i64(order))
            .ok_or_else(|| Error::NotInvertible("|G| is divisible by p".into()))?;
        let mut data = vec![0u64; alg.dim()];
        for (g, c) in coeffs.iter().enumerate() {
            let rational = c
                .as_rational()
                .ok_or_else(|| Error::InvalidArgument("character set is not Galois stable".into()))?;
            data[alg.index(0, g, 0)] = zp.mul(zp.from_rational(&rational)?, inv);
        }
        TruncElem::from_data(alg, data)
    }
}

/// O_χ[t]/(p^N, t^M) large enough for all characters of the group.
pub fn character_algebra(alg: &TruncAlgebra) -> Result<Arc<TruncAlgebra>> {
    let coeff = make_coeff_ring(alg.p(), alg.n(), alg.group.exponent())?;
    TruncAlgebra::new(&coeff, &AbGroup::trivial(), alg.t_prec)
}

fn coefficient_valuation(x: &TruncElem, deg: usize) -> Valuation {
    x.block_coeff(deg, 0).valuation()
}

/// π-adic μ of a one-variable series at truncation; None if it vanishes.
pub fn series_mu(x: &TruncElem) -> Option<u32> {
    (0..x.alg().t_prec).filter_map(|deg| coefficient_valuation(x, deg).finite()).min()
}

/// Index of the first unit coefficient.
pub fn series_lambda(x: &TruncElem) -> Option<usize> {
    (0..x.alg().t_prec).find(|&deg| coefficient_valuation(x, deg) == Valuation::Finite(0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuReport {
    /// (character exponents, μ at truncation or None when χ(F) ≡ 0).
    pub per_character: Vec<(Vec<u64>, Option<u32>)>,
}

impl MuReport {
    pub fn mu(&self) -> Option<u32> {
        self.per_character.iter().filter_map(|(_, m)| *m).min()
    }

    pub fn mu_is_zero(&self) -> bool {
        self.per_character.iter().all(|(_, m)| *m == Some(0))
    }
}

pub fn mu_invariant(x: &TruncElem, quotient: &AdmissibleQuotient) -> Result<MuReport> {
    let target = character_algebra(x.alg())?;
    let mut per_character = Vec::new();
    for chi in quotient.characters() {
        let image = x.apply_character(chi, &target)?;
        let mu = series_mu(&image);
        if mu.is_none() {
            return Err(Error::Indeterminate(format!(
                "χ = {:?} kills the series modulo (p^{}, t^{})",
                chi.exps(),
                x.alg().n(),
                x.alg().t_prec
            )));
        }
        per_character.push((chi.exps().to_vec(), mu));
    }
    Ok(MuReport { per_character })
}

/// Classical decomposition x = unit·poly in O[t]/(p^N, t^M).
#[derive(Debug, Clone, PartialEq)]
pub struct CharWeierstrass {
    pub lambda: usize,
    /// poly is determined modulo π^certified.
    pub certified: u32,
    pub poly: TruncElem,
    pub unit: TruncElem,
}

/// Weierstrass decomposition of a one-variable series with μ = 0.
///
/// The Weierstrass polynomial is read off the Howell form of the ideal (x),
/// coordinates ordered by decreasing degree: the row with pivot at t^λ is
/// the reduced monic generator. Low-degree elements of the truncated ideal
/// lie in π^K with K = min(N·e, ⌊M/λ⌋), which bounds the certification.
pub fn weierstrass_series(x: &TruncElem) -> Result<CharWeierstrass> {
    let alg = x.alg();
    if alg.gsize() != 1 {
        return Err(Error::InvalidArgument("per-character preparation takes a one-variable series".into()));
    }
    let m = alg.t_prec;
    let lambda = match series_lambda(x) {
        Some(l) => l,
        None => {
            return Err(match series_mu(x) {
                None => Error::Indeterminate("series vanishes at truncation".into()),
                Some(mu) => Error::NonzeroMu(format!(
                    "no unit coefficient below t^{m}: μ = {mu} at truncation, or λ ≥ M"
                )),
            })
        }
    };
    let d = alg.d();
    let zp = *alg.zp();
    let dim = alg.dim();
    let full = alg.n() * alg.coeff.ramification as u32;
    let certified = if lambda == 0 { full } else { full.min((m / lambda) as u32) };
    let to_col = |idx: usize| (m - 1 - idx / d) * d + idx % d;
    let rows: Vec<Vec<u64>> = (0..dim)
        .map(|b| {
            let image = x.mul(&TruncElem::basis(alg, b));
            let mut row = vec![0u64; dim];
            for (idx, &c) in image.data().iter().enumerate() {
                row[to_col(idx)] = c;
            }
            row
        })
        .collect();
    let ech = howell(&zp, rows, dim);
    let lead = to_col(lambda * d);
    let position = ech
        .pivots
        .iter()
        .position(|&(col, v)| col == lead && v == 0)
        .ok_or_else(|| Error::Indeterminate("no monic generator of degree λ in the truncated ideal".into()))?;
    let row = &ech.rows[position];
    let mut data = vec![0u64; dim];
    for idx in 0..dim {
        data[idx] = row[to_col(idx)];
    }
    let poly = TruncElem::from_data(alg, data)?;
    let factor_rows: Vec<Vec<u64>> = (0..dim).map(|b| poly.mul(&TruncElem::basis(alg, b)).into_data()).collect();
    let unit_data = solve_left(&zp, &factor_rows, x.data())
        .ok_or_else(|| Error::Indeterminate("series is not a multiple of its Weierstrass polynomial at truncation".into()))?;
    let unit = TruncElem::from_data(alg, unit_data)?;
    if !unit.block_coeff(0, 0).is_unit() {
        return Err(Error::Indeterminate("cofactor is not a unit at truncation".into()));
    }
    Ok(CharWeierstrass { lambda, certified, poly, unit })
}

/// Equivariant preparation over an admissible quotient 𝔞: per-character
/// data on Galois orbit representatives and the reassembled U, f with
/// U·f = e_𝔞·F.
#[derive(Debug, Clone)]
pub struct EqWeierstrass {
    pub per_character: Vec<(Character, CharWeierstrass)>,
    pub unit: TruncElem,
    pub poly: TruncElem,
}

impl EqWeierstrass {
    pub fn lambdas(&self) -> Vec<(Vec<u64>, usize)> {
        self.per_character.iter().map(|(c, w)| (c.exps().to_vec(), w.lambda)).collect()
    }

    pub fn certified(&self) -> u32 {
        self.per_character.iter().map(|(_, w)| w.certified).min().unwrap_or(0)
    }
}

fn trace(ring: &Arc<CoeffRingDesc>, x: &[u64]) -> u64 {
    let zp = ring.zp;
    let d = ring.degree();
    let mut acc = 0u64;
    for i in 0..d {
        let mut basis = vec![0u64; d];
        basis[i] = 1;
        acc = zp.add(acc, ring.mul_raw(x, &basis)[i]);
    }
    acc
}

/// Σ_{χ∈F} e_χ·y_χ from one value per Galois orbit, via traces:
/// coefficient at g is 1/|G| Σ_reps (|orbit|/[O:Zp])·Tr(χ(g)^{-1}·y_χ).
fn reassemble(source: &Arc<TruncAlgebra>, reps: &[(Character, usize, TruncElem)]) -> Result<TruncElem> {
    let zp = *source.zp();
    let group = &source.group;
    let gsize = group.order();
    let inv_g = zp.inv(zp.from_i64(gsize as i64)).ok_or_else(|| Error::NotInvertible("|G| is divisible by p".into()))?;
    let mut data = vec![0u64; source.dim()];
    for (chi, orbit_len, y) in reps {
        let ring = y.alg().coeff.clone();
        let d = ring.degree();
        let stabiliser = d / orbit_len;
        let inv_s = zp
            .inv(zp.from_i64(stabiliser as i64))
            .ok_or_else(|| Error::NotInvertible("Galois stabiliser order divisible by p".into()))?;
        let big = chi.value_order();
        for g in 0..gsize {
            let k = chi.value_exponent_idx(g) as i64;
            let root = CyclotomicCoeff::root_of_unity(&ring, big, -k)?;
            for deg in 0..source.t_prec {
                let value = y.block_coeff(deg, 0).mul(&root);
                let tr = trace(&ring, value.coeffs());
                let idx = source.index(deg, g, 0);
                data[idx] = zp.add(data[idx], zp.mul(zp.mul(tr, inv_s), inv_g));
            }
        }
    }
    TruncElem::from_data(source, data)
}

pub fn weierstrass_prepare(x: &TruncElem, quotient: &AdmissibleQuotient) -> Result<EqWeierstrass> {
    let alg = x.alg();
    if alg.d() != 1 {
        return Err(Error::InvalidArgument("equivariant preparation expects Zp[G] coefficients".into()));
    }
    let target = character_algebra(alg)?;
    let mut per_character = Vec::new();
    let mut unit_parts = Vec::new();
    let mut poly_parts = Vec::new();
    for (chi, orbit_len) in quotient.orbit_representatives(alg.p()) {
        let w = weierstrass_series(&x.apply_character(&chi, &target)?)?;
        unit_parts.push((chi.clone(), orbit_len, w.unit.clone()));
        poly_parts.push((chi.clone(), orbit_len, w.poly.clone()));
        per_character.push((chi, w));
    }
    let unit = reassemble(alg, &unit_parts)?;
    let poly = reassemble(alg, &poly_parts)?;
    let expected = quotient.idempotent(alg)?.mul(x);
    if unit.mul(&poly) != expected {
        return Err(Error::Indeterminate("reassembled decomposition does not reproduce e·F".into()));
    }
    Ok(EqWeierstrass { per_character, unit, poly })
}

/// Whether x ∼ y in 𝔞[[t]] at truncation: per character μ = 0 on both sides,
/// equal λ, and Weierstrass polynomials agreeing to the certified precision.
pub fn associated_check(x: &TruncElem, y: &TruncElem, quotient: &AdmissibleQuotient) -> Result<bool> {
    let target = character_algebra(x.alg())?;
    for chi in quotient.characters() {
        let fx = x.apply_character(chi, &target)?;
        let fy = y.apply_character(chi, &target)?;
        for (side, f) in [("first", &fx), ("second", &fy)] {
            match series_mu(f) {
                Some(0) => {}
                other => {
                    return Err(Error::NonzeroMu(format!(
                        "{side} series has μ = {other:?} at χ = {:?}",
                        chi.exps()
                    )))
                }
            }
        }
        let wx = weierstrass_series(&fx)?;
        let wy = weierstrass_series(&fy)?;
        if wx.lambda != wy.lambda {
            return Ok(false);
        }
        let precision = wx.certified.min(wy.certified);
        let diff = wx.poly.sub(&wy.poly);
        for deg in 0..wx.lambda {
            if let Valuation::Finite(v) = coefficient_valuation(&diff, deg) {
                if v < precision {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
