use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::coeff::make_coeff_ring;
use crate::error::{Error, Result};
use crate::fitcalc::ideal::IdealHandle;
use crate::fitcalc::matrix::{det, RingMatrix};
use crate::grp::{AbGroup, TruncAlgebra, TruncElem};

pub const DEFAULT_MINOR_CAP: usize = 20_000;

/// R^n → R^m → M → 0; `matrix` has m rows (generators) and n columns
/// (relations).
#[derive(Debug, Clone)]
pub struct Presentation {
    alg: Arc<TruncAlgebra>,
    generators: usize,
    relations: usize,
    matrix: RingMatrix,
}

impl Presentation {
    pub fn new(alg: &Arc<TruncAlgebra>, generators: usize, relations: usize, matrix: RingMatrix) -> Result<Self> {
        if matrix.len() != generators || matrix.iter().any(|row| row.len() != relations) {
            return Err(Error::InvalidArgument(format!(
                "presentation matrix must be {generators} x {relations}"
            )));
        }
        for row in &matrix {
            for x in row {
                if !x.alg().same_shape(alg) {
                    return Err(Error::RingMismatch("matrix entry outside the presentation ring".into()));
                }
            }
        }
        Ok(Presentation { alg: alg.clone(), generators, relations, matrix })
    }

    pub fn from_matrix(alg: &Arc<TruncAlgebra>, matrix: RingMatrix) -> Result<Self> {
        let m = matrix.len();
        let n = matrix.first().map_or(0, |r| r.len());
        Self::new(alg, m, n, matrix)
    }

    pub fn free(alg: &Arc<TruncAlgebra>, rank: usize) -> Self {
        Presentation { alg: alg.clone(), generators: rank, relations: 0, matrix: vec![vec![]; rank] }
    }

    pub fn diagonal(alg: &Arc<TruncAlgebra>, entries: &[TruncElem]) -> Result<Self> {
        let n = entries.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|k| if i == k { entries[i].clone() } else { TruncElem::zero(alg) }).collect())
            .collect();
        Self::new(alg, n, n, matrix)
    }

    pub fn alg(&self) -> &Arc<TruncAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> usize {
        self.relations
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> &TruncElem {
        &self.matrix[row][col]
    }

    pub fn is_square(&self) -> bool {
        self.generators == self.relations
    }

    pub fn fitting_ideal(&self) -> Result<IdealHandle> {
        self.fitting_ideal_capped(DEFAULT_MINOR_CAP)
    }

    /// Ideal of the m×m minors, in lexicographic order of column subsets.
    pub fn fitting_ideal_capped(&self, cap: usize) -> Result<IdealHandle> {
        let m = self.generators;
        let n = self.relations;
        if m == 0 {
            return Ok(IdealHandle::unit(&self.alg));
        }
        if n < m {
            return Ok(IdealHandle::zero(&self.alg));
        }
        let count = binomial_usize(n, m);
        if count > cap {
            return Err(Error::SizeLimit(format!("{count} minors exceed the cap of {cap}")));
        }
        let mut minors = Vec::with_capacity(count);
        for cols in combinations(n, m) {
            let sub: RingMatrix =
                self.matrix.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
            let d = det(&self.alg, &sub);
            if !d.is_zero() {
                minors.push(d);
            }
        }
        IdealHandle::from_generators(&self.alg, minors)
    }

    /// Base change along a ring map applied entrywise.
    pub fn map_ring(&self, target: &Arc<TruncAlgebra>, f: impl Fn(&TruncElem) -> Result<TruncElem>) -> Result<Self> {
        let matrix = self.matrix.iter().map(|row| row.iter().map(&f).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Self::new(target, self.generators, self.relations, matrix)
    }

    /// Direct sum with the zero module presented by (1).
    pub fn pad_free_summand(&self) -> Self {
        let mut matrix: RingMatrix = self
            .matrix
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.push(TruncElem::zero(&self.alg));
                r
            })
            .collect();
        let mut last = vec![TruncElem::zero(&self.alg); self.relations];
        last.push(TruncElem::one(&self.alg));
        matrix.push(last);
        Presentation { alg: self.alg.clone(), generators: self.generators + 1, relations: self.relations + 1, matrix }
    }

    /// Append a relation that is an R-combination of existing ones.
    pub fn add_redundant_relation(&self, weights: &[TruncElem]) -> Self {
        let mut matrix = self.matrix.clone();
        for (i, row) in matrix.iter_mut().enumerate() {
            let value = (0..self.relations)
                .fold(TruncElem::zero(&self.alg), |acc, k| acc.add(&self.matrix[i][k].mul(&weights[k])));
            row.push(value);
        }
        Presentation { alg: self.alg.clone(), generators: self.generators, relations: self.relations + 1, matrix }
    }

    /// Column operation: col_target += r · col_source.
    pub fn add_column_multiple(&self, target: usize, source: usize, r: &TruncElem) -> Self {
        let mut out = self.clone();
        for row in out.matrix.iter_mut() {
            let add = row[source].mul(r);
            row[target] = row[target].add(&add);
        }
        out
    }

    /// Row operation: row_target += r · row_source.
    pub fn add_row_multiple(&self, target: usize, source: usize, r: &TruncElem) -> Self {
        let mut out = self.clone();
        let src = out.matrix[source].clone();
        for (slot, s) in out.matrix[target].iter_mut().zip(src) {
            *slot = slot.add(&s.mul(r));
        }
        out
    }

    pub fn swap_columns(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        for row in out.matrix.iter_mut() {
            row.swap(a, b);
        }
        out
    }

    pub fn scale_column(&self, col: usize, unit: &TruncElem) -> Self {
        let mut out = self.clone();
        for row in out.matrix.iter_mut() {
            row[col] = row[col].mul(unit);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": ring_to_json(&self.alg),
            "matrix": self.matrix.iter().map(|row| row.iter().map(elem_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let alg = ring_from_json(value.get("ring").ok_or_else(|| Error::Schema("missing ring".into()))?)?;
        let rows = value
            .get("matrix")
            .and_then(|m| m.as_array())
            .ok_or_else(|| Error::Schema("missing matrix".into()))?;
        let matrix: RingMatrix = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Schema("matrix rows must be arrays".into()))?
                    .iter()
                    .map(|e| elem_from_json(&alg, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let relations = value
            .get("relations")
            .and_then(|r| r.as_u64())
            .map(|r| r as usize)
            .unwrap_or_else(|| matrix.first().map_or(0, |r| r.len()));
        Self::new(&alg, matrix.len(), relations, matrix)
    }
}

pub fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(usize::MAX as u128) as usize
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - k + i {
                current[i] += 1;
                for l in i + 1..k {
                    current[l] = current[l - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

pub fn ring_to_json(alg: &TruncAlgebra) -> Value {
    json!({ "p": alg.p(), "N": alg.n(), "m": alg.coeff.m, "group": alg.group, "M": alg.t_prec })
}

pub fn ring_from_json(value: &Value) -> Result<Arc<TruncAlgebra>> {
    let p = value.get("p").and_then(|v| v.as_u64()).ok_or_else(|| Error::Schema("ring needs p".into()))?;
    let n = value.get("N").and_then(|v| v.as_u64()).ok_or_else(|| Error::Schema("ring needs N".into()))? as u32;
    let m = value.get("m").and_then(|v| v.as_u64()).unwrap_or(1);
    let t_prec = value.get("M").and_then(|v| v.as_u64()).unwrap_or(1) as usize;
    let group: AbGroup = match value.get("group") {
        Some(g) => {
            let parsed: AbGroup = serde_json::from_value(g.clone())?;
            AbGroup::new(parsed.cyclic_orders, parsed.j)?
        }
        None => AbGroup::trivial(),
    };
    TruncAlgebra::new(&make_coeff_ring(p, n, m)?, &group, t_prec)
}

/// Entries: an integer (scalar), or a map "a,b" or "a,b;k" (t^k) → integer.
pub fn elem_to_json(x: &TruncElem) -> Value {
    let alg = x.alg();
    if alg.d() != 1 {
        return x.to_json();
    }
    let mut map = Map::new();
    for deg in 0..alg.t_prec {
        for g in 0..alg.gsize() {
            let c = x.zp_coeff(deg, g);
            if c == 0 {
                continue;
            }
            let mut key = alg.group.element(g).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            if deg > 0 {
                key = format!("{key};{deg}");
            }
            map.insert(key, Value::String(alg.zp().signed(c).to_string()));
        }
    }
    Value::Object(map)
}

pub fn elem_from_json(alg: &Arc<TruncAlgebra>, value: &Value) -> Result<TruncElem> {
    let parse_int = |v: &Value| -> Result<i64> {
        match v {
            Value::Number(n) => n.as_i64().ok_or_else(|| Error::Schema("integer expected".into())),
            Value::String(s) => s.trim().parse::<i64>().map_err(|e| Error::Schema(e.to_string())),
            _ => Err(Error::Schema("integer expected".into())),
        }
    };
    match value {
        Value::Object(map) => {
            let mut out = TruncElem::zero(alg);
            for (key, v) in map {
                let (gpart, deg) = match key.split_once(';') {
                    Some((g, d)) => (g, d.trim().parse::<usize>().map_err(|e| Error::Schema(e.to_string()))?),
                    None => (key.as_str(), 0),
                };
                let exps: Vec<i64> = if gpart.trim().is_empty() {
                    vec![]
                } else {
                    gpart
                        .split(',')
                        .map(|s| s.trim().parse::<i64>().map_err(|e| Error::Schema(e.to_string())))
                        .collect::<Result<_>>()?
                };
                if exps.len() != alg.group.rank() {
                    return Err(Error::Schema(format!("group element key {key} has the wrong length")));
                }
                let g = alg.group.index_of(&alg.group.normalize_signed(&exps));
                out = out.add(&TruncElem::monomial(alg, deg, g, parse_int(v)?));
            }
            Ok(out)
        }
        other => Ok(TruncElem::from_int(alg, parse_int(other)?)),
    }
}
