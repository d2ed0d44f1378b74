//! Abelian fields K ⊆ Q(ζ_f) as quotients G = (Z/f)^× / H, with the Artin
//! map tabulated on residues and the cyclotomic tower over K.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::arith::{divisors, factorize, gcd, lcm, mult_order, pow_mod, prime_divisors};
use crate::error::{Error, Result};
use crate::grp::AbGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianField {
    conductor: u64,
    group: AbGroup,
    /// Group index of σ_a for each residue a mod f; None off the units.
    artin: Vec<Option<usize>>,
}

/// Generators of (Z/f)^× with their orders, one per cyclic factor of the
/// CRT decomposition (two for 2^k, k ≥ 3).
fn unit_generators(f: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (q, k) in factorize(f) {
        let qk = q.pow(k);
        let rest = f / qk;
        let lift = |g: u64| -> u64 {
            // g mod q^k, 1 mod rest
            (0..rest.max(1)).map(|i| g + i * qk).find(|a| rest == 1 || a % rest == 1 % rest).expect("CRT lift")
        };
        let mut local = Vec::new();
        if q == 2 {
            if k >= 2 {
                local.push((qk - 1, 2));
            }
            if k >= 3 {
                local.push((5, qk / 4));
            }
        } else {
            let phi = (q - 1) * qk / q;
            let g = (2..qk).find(|&g| gcd(g, q) == 1 && mult_order(g, qk) == Some(phi)).expect("primitive root");
            local.push((g, phi));
        }
        for (g, order) in local {
            out.push((lift(g) % f, order));
        }
    }
    out
}

/// Exponent vector of every unit with respect to `gens`.
fn discrete_log_table(f: u64, gens: &[(u64, u64)]) -> Vec<Option<Vec<i64>>> {
    let mut table = vec![None; f as usize];
    let total: u64 = gens.iter().map(|&(_, d)| d).product();
    for mut idx in 0..total {
        let mut exps = vec![0i64; gens.len()];
        let mut value = 1 % f;
        for (slot, &(g, d)) in exps.iter_mut().zip(gens) {
            let e = idx % d;
            idx /= d;
            *slot = e as i64;
            value = (value as u128 * pow_mod(g, e, f) as u128 % f as u128) as u64;
        }
        table[value as usize] = Some(exps);
    }
    table
}

/// Diagonal of the Smith form of `rows` together with the column transform
/// V, so that Z^c / rowspan ≅ ⊕ Z/d_i through x ↦ x·V.
fn smith_columns(mut rows: Vec<Vec<i128>>, cols: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let mut transform: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|k| i128::from(i == k)).collect()).collect();
    let nrows = rows.len();
    let mut diag = vec![0i128; cols];
    for t in 0..cols.min(nrows) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (r, row) in rows.iter().enumerate().skip(t) {
                for (c, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.map_or(true, |(br, bc)| x.abs() < rows[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else {
                return (diag, transform);
            };
            rows.swap(t, br);
            for row in rows.iter_mut() {
                row.swap(t, bc);
            }
            for row in transform.iter_mut() {
                row.swap(t, bc);
            }
            let pivot = rows[t][t];
            let mut clean = true;
            for r in t + 1..nrows {
                let q = rows[r][t].div_euclid(pivot);
                if q != 0 {
                    for c in t..cols {
                        rows[r][c] -= q * rows[t][c];
                    }
                }
                clean &= rows[r][t] == 0;
            }
            for c in t + 1..cols {
                let q = rows[t][c].div_euclid(pivot);
                if q != 0 {
                    for row in rows.iter_mut() {
                        row[c] -= q * row[t];
                    }
                    for row in transform.iter_mut() {
                        row[c] -= q * row[t];
                    }
                }
                clean &= rows[t][c] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..nrows).find(|&r| (t + 1..cols).any(|c| rows[r][c] % pivot != 0));
            match offender {
                Some(r) => {
                    for c in t..cols {
                        rows[t][c] += rows[r][c];
                    }
                }
                None => {
                    diag[t] = pivot.abs();
                    break;
                }
            }
        }
    }
    (diag, transform)
}

impl AbelianField {
    /// The fixed field of {σ_a : in_kernel(a)} inside Q(ζ_f).
    pub fn from_kernel(conductor: u64, in_kernel: impl Fn(u64) -> bool) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::InvalidArgument("conductor must be positive".into()));
        }
        let f = conductor;
        let gens = unit_generators(f);
        let dlog = discrete_log_table(f, &gens);
        let mut relations: Vec<Vec<i128>> = gens
            .iter()
            .enumerate()
            .map(|(i, &(_, d))| (0..gens.len()).map(|k| if k == i { d as i128 } else { 0 }).collect())
            .collect();
        for a in 0..f {
            if let Some(exps) = &dlog[a as usize] {
                if in_kernel(a) {
                    relations.push(exps.iter().map(|&e| e as i128).collect());
                }
            }
        }
        let (diag, transform) = smith_columns(relations, gens.len());
        let kept: Vec<usize> = (0..gens.len()).filter(|&i| diag[i] > 1).collect();
        let orders: Vec<u64> = kept.iter().map(|&i| diag[i] as u64).collect();
        let plain = AbGroup::new(orders.clone(), None)?;
        let image = |exps: &[i64]| -> Vec<u64> {
            kept.iter()
                .map(|&c| {
                    let v: i128 = exps.iter().zip(&transform).map(|(&e, row)| e as i128 * row[c]).sum();
                    v.rem_euclid(diag[c]) as u64
                })
                .collect()
        };
        let artin: Vec<Option<usize>> =
            dlog.iter().map(|entry| entry.as_ref().map(|exps| plain.index_of(&image(exps)))).collect();
        for a in 0..f {
            if let Some(idx) = artin[a as usize] {
                if (idx == 0) != in_kernel(a) {
                    return Err(Error::InvalidArgument(format!("the kernel set mod {f} is not a subgroup")));
                }
            }
        }
        let minus_one = artin[((f + f - 1) % f) as usize].expect("−1 is a unit");
        let j = if minus_one == 0 { None } else { Some(plain.element(minus_one)) };
        let group = AbGroup::new(orders, j)?;
        Ok(AbelianField { conductor: f, group, artin })
    }

    /// Fixed field of the subgroup generated by `gens`.
    pub fn from_subgroup(conductor: u64, gens: &[u64]) -> Result<Self> {
        let members = subgroup_closure(conductor, gens)?;
        Self::from_kernel(conductor, |a| members.contains(&a))
    }

    pub fn cyclotomic(conductor: u64) -> Result<Self> {
        Self::from_kernel(conductor, |a| a == 1 % conductor)
    }

    pub fn rationals() -> Self {
        Self::from_kernel(1, |_| true).expect("trivial field")
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.order()
    }

    pub fn is_totally_real(&self) -> bool {
        self.group.j.is_none()
    }

    /// Index of σ_a, None unless gcd(a, f) = 1.
    pub fn artin(&self, a: i64) -> Option<usize> {
        self.artin[a.rem_euclid(self.conductor as i64) as usize]
    }

    pub fn artin_table(&self) -> &[Option<usize>] {
        &self.artin
    }

    /// Frobenius of an unramified prime ℓ.
    pub fn frobenius(&self, ell: u64) -> Result<usize> {
        if self.conductor % ell != 0 {
            return Ok(self.artin(ell as i64).expect("unit"));
        }
        if self.minimal_conductor() % ell == 0 {
            return Err(Error::InvalidArgument(format!("{ell} ramifies in K")));
        }
        self.primitive().frobenius(ell)
    }

    /// Restriction Gal(K/Q) → Gal(K'/Q) for a subfield K', by group index.
    pub fn restriction_map(&self, sub: &AbelianField) -> Result<Vec<usize>> {
        let sub = sub.primitive();
        if self.conductor % sub.conductor != 0 {
            return Err(Error::InvalidArgument("the target field is not visible at this conductor".into()));
        }
        let mut out: Vec<Option<usize>> = vec![None; self.degree()];
        for a in 0..self.conductor {
            let Some(g) = self.artin[a as usize] else { continue };
            let image = sub.artin[(a % sub.conductor) as usize].expect("unit");
            match out[g] {
                None => out[g] = Some(image),
                Some(prev) if prev != image => {
                    return Err(Error::InvalidArgument("the target field is not a subfield".into()));
                }
                _ => {}
            }
        }
        Ok(out.into_iter().map(|g| g.expect("surjective")).collect())
    }

    /// Residues a mod f with σ_a = 1.
    pub fn kernel(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&a| self.artin[a as usize] == Some(0)).collect()
    }

    pub fn minimal_conductor(&self) -> u64 {
        let f = self.conductor;
        for d in divisors(f) {
            let trivial = (0..f).all(|a| a % d != 1 % d || self.artin[a as usize].map_or(true, |g| g == 0));
            if trivial {
                return d;
            }
        }
        f
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        prime_divisors(self.minimal_conductor())
    }

    /// The same field presented at its minimal conductor.
    pub fn primitive(&self) -> Self {
        self.at_conductor(self.minimal_conductor()).expect("minimal conductor")
    }

    /// The same field presented at conductor `target`, which must be a
    /// multiple or a divisor (through which K still factors) of f.
    pub fn at_conductor(&self, target: u64) -> Result<Self> {
        let f0 = self.minimal_conductor();
        if target % f0 != 0 {
            return Err(Error::InvalidArgument(format!("K is not contained in Q(zeta_{target})")));
        }
        let f = self.conductor;
        let artin = (0..target)
            .map(|b| {
                if gcd(b, target) != 1 {
                    return None;
                }
                let residue = b % f0;
                (0..f)
                    .find(|&a| a % f0 == residue && self.artin[a as usize].is_some())
                    .and_then(|a| self.artin[a as usize])
            })
            .collect();
        Ok(AbelianField { conductor: target, group: self.group.clone(), artin })
    }

    /// K(μ_p), presented at conductor lcm(f_0, p).
    pub fn with_mu_p(&self, p: u64) -> Result<Self> {
        let base = self.primitive();
        let f0 = base.conductor;
        let big = lcm(f0, p);
        Self::from_kernel(big, |a| a % p == 1 % p && base.artin[(a % f0) as usize] == Some(0))
    }

    pub fn contains_mu_p(&self, p: u64) -> bool {
        self.conductor % p == 0 && self.kernel().iter().all(|&a| a % p == 1 % p)
    }

    /// The n-th layer K_n = K·Q_n of the cyclotomic Zp-extension, with
    /// Gal(K_n/Q) = G × Z/p^n: σ_a ↦ (σ_{a mod f}, k) where ⟨a⟩ = u^k,
    /// u = 1 + p. Requires p^2 ∤ f_0.
    pub fn tower_level(&self, p: u64, n: u32) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidPrime(p));
        }
        let base = self.primitive();
        let f0 = base.conductor;
        if f0 % (p * p) == 0 {
            return Err(Error::InvalidArgument(format!("p^2 divides the conductor {f0}")));
        }
        let pn = p.pow(n);
        let ppow = pn * p;
        let big = lcm(f0, ppow);
        let group = base.group.times_cyclic(pn);
        let logs = gamma_logs(p, n);
        let artin = (0..big)
            .map(|a| {
                if gcd(a, big) != 1 {
                    return None;
                }
                let g = base.artin[(a % f0) as usize]?;
                Some(g * pn as usize + logs[(a % ppow) as usize] as usize)
            })
            .collect();
        Ok(AbelianField { conductor: big, group, artin })
    }

    /// ω(σ) on the cyclic generators when μ_p ⊆ K, as residues mod p^n_prec.
    pub fn teichmuller_values(&self, p: u64, n_prec: u32) -> Result<Vec<u64>> {
        if !self.contains_mu_p(p) {
            return Err(Error::InvalidArgument(format!("K does not contain mu_{p}")));
        }
        let modulus = p.pow(n_prec);
        let mut out = Vec::with_capacity(self.group.rank());
        for i in 0..self.group.rank() {
            let mut unit = vec![0u64; self.group.rank()];
            unit[i] = 1;
            let target = self.group.index_of(&unit);
            let a = (0..self.conductor).find(|&a| self.artin[a as usize] == Some(target)).expect("surjective");
            out.push(pow_mod(a % p, p.pow(n_prec.saturating_sub(1)), modulus));
        }
        Ok(out)
    }

    /// Largest w such that G_K acts trivially on μ_w^{⊗m}.
    pub fn twisted_invariant_order(&self, m: u32) -> u64 {
        let f = self.conductor;
        let kernel = self.kernel();
        let bound = 2 * m as u64 * self.degree() as u64 + 2;
        let mut w = 1u64;
        for ell in crate::arith::primes_up_to(bound) {
            let mut e = 0u32;
            loop {
                let q = ell.pow(e + 1);
                let big = lcm(f, q);
                let holds = (0..big)
                    .filter(|&a| gcd(a, big) == 1 && kernel.contains(&(a % f)))
                    .all(|a| pow_mod(a % q, m as u64, q) == 1 % q);
                if !holds {
                    break;
                }
                e += 1;
            }
            w *= ell.pow(e);
        }
        w
    }

    /// {"conductor": f, "H": [...]}; H lists generators of the kernel.
    pub fn from_json(value: &Value) -> Result<Self> {
        let conductor = value
            .get("conductor")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("field needs a positive integer conductor".into()))?;
        let gens: Vec<u64> = match value.get("H") {
            None => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_i64()
                        .map(|a| a.rem_euclid(conductor as i64) as u64)
                        .ok_or_else(|| Error::Schema("H entries must be integers".into()))
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(Error::Schema("H must be an array".into())),
        };
        Self::from_subgroup(conductor, &gens)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conductor": self.conductor,
            "H": self.kernel(),
            "group": self.group.cyclic_orders,
            "j": self.group.j,
        })
    }
}

/// k with ⟨a⟩ = u^k mod p^{n+1}, tabulated over residues mod p^{n+1}.
fn gamma_logs(p: u64, n: u32) -> Vec<u64> {
    let pn = p.pow(n);
    let ppow = pn * p;
    let u = 1 + p;
    let mut log_u = vec![u64::MAX; ppow as usize];
    let mut x = 1u64;
    for e in 0..pn {
        log_u[x as usize] = e;
        x = x * u % ppow;
    }
    let inv = crate::arith::inv_mod((p - 1) % pn.max(1), pn.max(1)).unwrap_or(0);
    (0..ppow)
        .map(|a| {
            if a % p == 0 {
                return 0;
            }
            let e = log_u[pow_mod(a, p - 1, ppow) as usize];
            if pn == 1 {
                0
            } else {
                (e as u128 * inv as u128 % pn as u128) as u64
            }
        })
        .collect()
}

pub fn subgroup_closure(conductor: u64, gens: &[u64]) -> Result<BTreeSet<u64>> {
    let f = conductor;
    let mut members: BTreeSet<u64> = BTreeSet::from([1 % f]);
    for &g in gens {
        let g = g % f;
        if gcd(g, f) != 1 {
            return Err(Error::InvalidArgument(format!("{g} is not a unit mod {f}")));
        }
        let mut frontier: Vec<u64> = members.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            let y = (x as u128 * g as u128 % f as u128) as u64;
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(members)
}

/// Every abelian K ≠ Q of exact conductor f ≤ max_conductor, one
/// presentation per field.
pub fn enumerate_fields(max_conductor: u64) -> Vec<AbelianField> {
    let mut out = Vec::new();
    for f in 3..=max_conductor {
        if f % 4 == 2 {
            continue;
        }
        let units: Vec<u64> = (1..f).filter(|&a| gcd(a, f) == 1).collect();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut candidates = vec![Vec::new()];
        for i in 0..units.len() {
            candidates.push(vec![units[i]]);
            for k in i + 1..units.len() {
                candidates.push(vec![units[i], units[k]]);
                for l in k + 1..units.len() {
                    candidates.push(vec![units[i], units[k], units[l]]);
                }
            }
        }
        for gens in candidates {
            let members = subgroup_closure(f, &gens).expect("units");
            if members.len() == units.len() {
                continue;
            }
            let key: Vec<u64> = members.into_iter().collect();
            if !seen.insert(key.clone()) {
                continue;
            }
            let field = AbelianField::from_kernel(f, |a| key.binary_search(&a).is_ok()).expect("subgroup");
            if field.minimal_conductor() == f {
                out.push(field);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_field() {
        let k = AbelianField::cyclotomic(4).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(k.group().j_index(), Some(1));
        assert_eq!(k.frobenius(3).unwrap(), 1);
        assert_eq!(k.frobenius(5).unwrap(), 0);
        assert_eq!(k.ramified_primes(), vec![2]);
    }

    #[test]
    fn imaginary_quadratic_of_conductor_23() {
        let squares: Vec<u64> = (1..23).map(|a| a * a % 23).collect();
        let k = AbelianField::from_subgroup(23, &squares).unwrap();
        assert_eq!(k.degree(), 2);
        assert!(!k.is_totally_real());
        // 3 ≡ 7² mod 23
        assert_eq!(k.frobenius(3).unwrap(), 0);
        assert_eq!(k.frobenius(5).unwrap(), 1);
    }

    #[test]
    fn group_structure_of_full_cyclotomic_fields() {
        let k = AbelianField::cyclotomic(40).unwrap();
        let mut orders = k.group().cyclic_orders.clone();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 4]);
        assert_eq!(k.degree(), 16);
        let mut images: Vec<usize> = k.artin_table().iter().flatten().copied().collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 16);
    }

    #[test]
    fn artin_map_is_a_homomorphism() {
        let k = AbelianField::from_subgroup(39, &[4]).unwrap();
        let g = k.group().clone();
        for a in 1..39i64 {
            for b in 1..39i64 {
                if let (Some(x), Some(y)) = (k.artin(a), k.artin(b)) {
                    assert_eq!(k.artin(a * b), Some(g.add_idx(x, y)));
                }
            }
        }
    }

    #[test]
    fn minimal_conductor_and_reduction() {
        let k = AbelianField::cyclotomic(4).unwrap().at_conductor(12).unwrap();
        assert_eq!(k.minimal_conductor(), 4);
        assert_eq!(k.primitive(), AbelianField::cyclotomic(4).unwrap());
        // Q(√5) inside Q(ζ_5): kernel {±1}
        let real = AbelianField::from_subgroup(5, &[4]).unwrap();
        assert!(real.is_totally_real());
        assert_eq!(real.minimal_conductor(), 5);
    }

    #[test]
    fn tower_levels() {
        let k = AbelianField::cyclotomic(4).unwrap();
        let k1 = k.tower_level(3, 1).unwrap();
        assert_eq!(k1.conductor(), 36);
        assert_eq!(k1.group().cyclic_orders, vec![2, 3]);
        // 13 ≡ 1 mod 4 and 13 ≡ u mod 9
        assert_eq!(k1.artin(13), Some(1));
        assert_eq!(k1.artin(-1), Some(3));
        let hom_ok = (1..36i64).all(|a| {
            (1..36i64).all(|b| match (k1.artin(a), k1.artin(b)) {
                (Some(x), Some(y)) => k1.artin(a * b) == Some(k1.group().add_idx(x, y)),
                _ => true,
            })
        });
        assert!(hom_ok);
    }

    #[test]
    fn mu_p_adjunction() {
        let k = AbelianField::cyclotomic(4).unwrap();
        let km = k.with_mu_p(3).unwrap();
        assert_eq!(km.conductor(), 12);
        assert_eq!(km.degree(), 4);
        assert!(km.contains_mu_p(3));
        assert!(!k.contains_mu_p(3));
        let omega = km.teichmuller_values(3, 4).unwrap();
        assert!(omega.iter().all(|&c| c == 1 || c == 80));
    }

    #[test]
    fn restriction_to_subfield() {
        let big = AbelianField::cyclotomic(4).unwrap().with_mu_p(3).unwrap();
        let map = big.restriction_map(&AbelianField::cyclotomic(4).unwrap()).unwrap();
        assert_eq!(map.len(), 4);
        assert_eq!(map[big.artin(-1).unwrap()], 1);
        assert_eq!(map[big.artin(5).unwrap()], 0);
        assert!(AbelianField::cyclotomic(4).unwrap().restriction_map(&big).is_err());
    }

    #[test]
    fn twisted_invariants() {
        assert_eq!(AbelianField::rationals().twisted_invariant_order(1), 2);
        assert_eq!(AbelianField::rationals().twisted_invariant_order(2), 24);
        assert_eq!(AbelianField::cyclotomic(4).unwrap().twisted_invariant_order(1), 4);
        assert_eq!(AbelianField::cyclotomic(3).unwrap().twisted_invariant_order(1), 6);
    }

    #[test]
    fn small_conductor_census() {
        let fields = enumerate_fields(12);
        let mut labels: Vec<(u64, usize)> = fields.iter().map(|k| (k.conductor(), k.degree())).collect();
        labels.sort();
        // Q(√-3), Q(i), Q(ζ5), Q(√5), Q(ζ7), its cubic and quadratic
        // subfields, Q(ζ8) and its three quadratic subfields other than
        // Q(i), Q(ζ9) and its cubic subfield, Q(ζ11) and its subfields of
        // degree 2 and 5, Q(ζ12) and Q(√3)
        assert_eq!(
            labels,
            vec![
                (3, 2),
                (4, 2),
                (5, 2),
                (5, 4),
                (7, 2),
                (7, 3),
                (7, 6),
                (8, 2),
                (8, 2),
                (8, 4),
                (9, 3),
                (9, 6),
                (11, 2),
                (11, 5),
                (11, 10),
                (12, 2),
                (12, 4)
            ]
        );
    }
}
