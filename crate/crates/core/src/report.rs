//! Versioned JSON report document shared by every subcommand.
//!
//! Object keys serialize in sorted order and floats in shortest round-trip
//! form, so the same input and tolerances give byte-identical output. The
//! JSON Schema lives in `schema/report.schema.json`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Shift,
    QuasinormalContinuation,
    Matrix,
    Toeplitz,
    Extension,
    Registry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    /// Operation-specific settings (orders, grids, `k_max`, ...).
    #[serde(default)]
    pub settings: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportVerdict {
    pub name: String,
    pub holds: bool,
    /// Full result of the underlying check.
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub subject: Subject,
    pub input: Value,
    pub tolerances: Tolerances,
    pub verdicts: Vec<ReportVerdict>,
}

impl ClassReportDocument {
    pub fn new(subject: Subject, input: Value, tolerances: Tolerances) -> Self {
        ClassReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").to_owned(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            subject,
            input,
            tolerances,
            verdicts: Vec::new(),
        }
    }

    pub fn push<T: Serialize>(&mut self, name: impl Into<String>, holds: bool, detail: &T) {
        self.verdicts.push(ReportVerdict {
            name: name.into(),
            holds,
            detail: serde_json::to_value(detail).expect("report details serialize"),
        });
    }

    pub fn verdict(&self, name: &str) -> Option<&ReportVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Summary table; the JSON form is the authoritative one.
    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "## {} report ({} {})\n\n| check | holds |\n|---|---|\n",
            serde_json::to_value(self.subject)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
            self.tool,
            self.tool_version
        );
        for v in &self.verdicts {
            let mark = if v.holds { "yes" } else { "no" };
            let _ = writeln!(out, "| {} | {mark} |", v.name);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trips() {
        let mut doc = ClassReportDocument::new(
            Subject::Matrix,
            serde_json::json!({"rows": 1}),
            Tolerances {
                tol: 1e-9,
                settings: Default::default(),
            },
        );
        doc.push("normal", true, &serde_json::json!({"residual": 0.0}));
        let back: ClassReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(doc.to_markdown().contains("| normal | yes |"));
        assert_eq!(doc.verdict("normal").map(|v| v.holds), Some(true));
    }
}
