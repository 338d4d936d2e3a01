use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;

/// Relative slack allowed when comparing a measurement with its bound.
pub const REPORT_SLACK: f64 = 1e-9;

/// Outcome of a bound check. `pass` holds exactly when
/// `measured <= theoretical * (1 + 1e-9)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub check: String,
    pub measured: f64,
    pub theoretical: f64,
    pub pass: bool,
    pub params: BTreeMap<String, f64>,
    pub breakdown: Vec<BreakdownRow>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub label: String,
    pub degree: Option<usize>,
    pub measured: f64,
    pub theoretical: f64,
}

impl BoundReport {
    pub fn new(check: &str, measured: f64, theoretical: f64) -> Self {
        Self {
            check: check.to_string(),
            measured,
            theoretical,
            pass: within(measured, theoretical),
            params: BTreeMap::new(),
            breakdown: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn rows(mut self, rows: Vec<BreakdownRow>) -> Self {
        self.breakdown = rows;
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub const CSV_HEADER: &'static str = "check,measured,theoretical,pass,params";

    /// One CSV row; parameters are packed as `name=value` pairs joined by `;`.
    pub fn csv_row(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
        format!(
            "{},{:e},{:e},{},{}",
            self.check,
            self.measured,
            self.theoretical,
            self.pass,
            params.join(";")
        )
    }
}

pub(crate) fn within(measured: f64, theoretical: f64) -> bool {
    measured <= theoretical * (1.0 + REPORT_SLACK)
}
