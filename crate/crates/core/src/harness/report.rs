//! Verification reports: statement, hypotheses, parameters, verdicts and
//! certificates, serialized deterministically.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::Result;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl HypothesisRecord {
    pub fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        HypothesisRecord { name: name.to_string(), holds, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub statement: String,
    pub hypotheses: Vec<HypothesisRecord>,
    pub parameters: Value,
    pub verdicts: Vec<(String, Verdict)>,
    pub certificates: Value,
}

impl CheckReport {
    pub fn new(check: &str, statement: &str, parameters: Value) -> Self {
        CheckReport {
            check: check.to_string(),
            statement: statement.to_string(),
            hypotheses: Vec::new(),
            parameters,
            verdicts: Vec::new(),
            certificates: Value::Object(Map::new()),
        }
    }

    pub fn hypothesis(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.hypotheses.push(HypothesisRecord::new(name, holds, detail));
    }

    pub fn verdict(&mut self, name: &str, verdict: Verdict) {
        self.verdicts.push((name.to_string(), verdict));
    }

    pub fn certificate(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.certificates {
            map.insert(key.to_string(), value);
        }
    }

    pub fn verdict_of(&self, name: &str) -> Option<Verdict> {
        self.verdicts.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn overall(&self) -> Verdict {
        Verdict::combine(self.verdicts.iter().map(|(_, v)| *v))
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Map<String, Value> =
            self.verdicts.iter().map(|(n, v)| (n.clone(), Value::String(v.label().to_string()))).collect();
        json!({
            "check": self.check,
            "statement": self.statement,
            "hypotheses": self.hypotheses.iter().map(|h| json!({
                "name": h.name,
                "holds": h.holds,
                "detail": h.detail,
            })).collect::<Vec<_>>(),
            "parameters": self.parameters,
            "verdicts": verdicts,
            "overall": self.overall().label(),
            "certificates": self.certificates,
        })
    }
}

/// Several reports under one overall verdict.
pub fn bundle(reports: &[CheckReport]) -> Value {
    let overall = Verdict::combine(reports.iter().map(CheckReport::overall));
    json!({
        "overall": overall.label(),
        "reports": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn emit_report(value: &Value, path: &Path) -> Result<()> {
    std::fs::write(path, render(value))?;
    Ok(())
}
