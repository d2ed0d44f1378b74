//! Fixture ingestion. Class-group and cohomology data are never computed
//! here; they arrive as presentations with a mandatory provenance record.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fitcalc::{FiniteModule, Presentation};
use crate::grp::TruncElem;
use crate::lfun::AbelianField;

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub oracle: String,
    pub method: String,
    pub inputs: Value,
    pub outputs: Value,
}

impl Provenance {
    pub fn from_json(value: Option<&Value>) -> Result<Self> {
        let value = value.ok_or_else(|| Error::Schema("provenance is mandatory".into()))?;
        let text = |key: &str| -> Result<String> {
            match value.get(key).and_then(Value::as_str) {
                Some(s) if !s.trim().is_empty() => Ok(s.to_string()),
                _ => Err(Error::Schema(format!("provenance needs a nonempty \"{key}\""))),
            }
        };
        Ok(Provenance {
            oracle: text("oracle")?,
            method: text("method")?,
            inputs: value.get("inputs").cloned().unwrap_or(Value::Null),
            outputs: value.get("outputs").cloned().unwrap_or(Value::Null),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "oracle": self.oracle, "method": self.method, "inputs": self.inputs, "outputs": self.outputs })
    }
}

fn primes_field(value: &Value, key: &str) -> Result<Option<Vec<u64>>> {
    match value.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|_| Error::Schema(format!("\"{key}\" must be a list of primes"))),
    }
}

fn required<'a>(value: &'a Value, key: &str) -> Result<&'a Value> {
    value.get(key).ok_or_else(|| Error::Schema(format!("missing \"{key}\"")))
}

fn label_of(value: &Value) -> Result<String> {
    required(value, "label")?.as_str().map(str::to_string).ok_or_else(|| Error::Schema("label must be a string".into()))
}

/// The presentation must live over Z/p^N[G] for the field's G.
fn check_ring(pres: &Presentation, field: &AbelianField, p: u64) -> Result<()> {
    let alg = pres.alg();
    if alg.p() != p || alg.t_prec != 1 || alg.d() != 1 {
        return Err(Error::Schema(format!("module must be presented over Z/{p}^N[G]")));
    }
    if alg.group != *field.group() {
        return Err(Error::Schema("module group differs from the Galois group of the field".into()));
    }
    Ok(())
}

/// A finite Zp[G]-module on which j acts as −1.
#[derive(Debug, Clone)]
pub struct ClassModuleFixture {
    pub label: String,
    pub field: AbelianField,
    pub p: u64,
    pub presentation: Presentation,
    pub s_primes: Option<Vec<u64>>,
    pub t_primes: Option<Vec<u64>>,
    pub provenance: Provenance,
}

impl ClassModuleFixture {
    pub fn from_json(value: &Value) -> Result<Self> {
        let provenance = Provenance::from_json(value.get("provenance"))?;
        let field = AbelianField::from_json(required(value, "field")?)?;
        let p = required(value, "p")?.as_u64().ok_or_else(|| Error::Schema("p must be an integer".into()))?;
        let presentation = Presentation::from_json(required(value, "module")?)?;
        check_ring(&presentation, &field, p)?;
        let fixture = ClassModuleFixture {
            label: label_of(value)?,
            field,
            p,
            presentation,
            s_primes: primes_field(value, "S")?,
            t_primes: primes_field(value, "T")?,
            provenance,
        };
        fixture.validate()?;
        Ok(fixture)
    }

    pub fn module(&self) -> FiniteModule {
        FiniteModule::from_presentation(&self.presentation)
    }

    fn validate(&self) -> Result<()> {
        let module = self.module();
        module.check_precision().map_err(|e| Error::Schema(format!("module is not finite at this precision: {e}")))?;
        let alg = self.presentation.alg();
        let j = alg.group.j_index().ok_or_else(|| Error::Schema("the field must be imaginary".into()))?;
        let one_plus_j = TruncElem::one(alg).add(&TruncElem::group_element(alg, j));
        if !module.is_killed_by(&one_plus_j) {
            return Err(Error::Schema("j does not act as −1 on the module".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "class_module",
            "label": self.label,
            "field": { "conductor": self.field.conductor(), "H": self.field.kernel() },
            "p": self.p,
            "module": self.presentation.to_json(),
            "S": self.s_primes,
            "T": self.t_primes,
            "provenance": self.provenance.to_json(),
        })
    }
}

/// H² of the p-adic étale cohomology as a finite Zp[G]-module, with the
/// battery of T-sets whose δ_T(1−n) generate the annihilator of H¹_tors.
#[derive(Debug, Clone)]
pub struct CohFixture {
    pub label: String,
    pub field: AbelianField,
    pub p: u64,
    pub n: u32,
    pub h2: Presentation,
    pub s_primes: Option<Vec<u64>>,
    pub t_battery: Vec<Vec<u64>>,
    pub provenance: Provenance,
}

impl CohFixture {
    pub fn from_json(value: &Value) -> Result<Self> {
        let provenance = Provenance::from_json(value.get("provenance"))?;
        let field = AbelianField::from_json(required(value, "field")?)?;
        let p = required(value, "p")?.as_u64().ok_or_else(|| Error::Schema("p must be an integer".into()))?;
        let n = required(value, "n")?.as_u64().ok_or_else(|| Error::Schema("n must be an integer".into()))?;
        if n < 2 {
            return Err(Error::Schema("the twist n must be at least 2".into()));
        }
        let h2 = Presentation::from_json(required(value, "H2")?)?;
        check_ring(&h2, &field, p)?;
        FiniteModule::from_presentation(&h2)
            .check_precision()
            .map_err(|e| Error::Schema(format!("H² is not finite at this precision: {e}")))?;
        let t_battery = match value.get("T_battery") {
            None | Some(Value::Null) => Vec::new(),
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|_| Error::Schema("T_battery must be a list of prime lists".into()))?,
        };
        Ok(CohFixture {
            label: label_of(value)?,
            field,
            p,
            n: n as u32,
            h2,
            s_primes: primes_field(value, "S")?,
            t_battery,
            provenance,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "cohomology",
            "label": self.label,
            "field": { "conductor": self.field.conductor(), "H": self.field.kernel() },
            "p": self.p,
            "n": self.n,
            "H2": self.h2.to_json(),
            "S": self.s_primes,
            "T_battery": self.t_battery,
            "provenance": self.provenance.to_json(),
        })
    }
}

#[derive(Debug, Clone)]
pub enum Fixture {
    ClassModule(ClassModuleFixture),
    Cohomology(CohFixture),
    /// Parameter sets for the integrality, twist and EMC-shape checks.
    Parameters { kind: String, value: Value },
}

pub fn parse_fixture(value: &Value) -> Result<Fixture> {
    let kind = required(value, "kind")?.as_str().ok_or_else(|| Error::Schema("kind must be a string".into()))?;
    match kind {
        "class_module" => Ok(Fixture::ClassModule(ClassModuleFixture::from_json(value)?)),
        "cohomology" => Ok(Fixture::Cohomology(CohFixture::from_json(value)?)),
        "integrality" | "twist" | "emc_shape" => Ok(Fixture::Parameters { kind: kind.to_string(), value: value.clone() }),
        other => Err(Error::Schema(format!("unknown fixture kind \"{other}\""))),
    }
}

pub fn ingest_fixture(path: &Path) -> Result<Fixture> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    parse_fixture(&value)
}
