use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A stated closed-form value.
    ClosedForm,
    /// Holds by definition or elementary algebra.
    Identity,
    /// Computed by an independent numerical procedure.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub value: Value,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: Value,
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, measured: impl Serialize, expected: impl Serialize, source: Source) -> Self {
        Self {
            name: name.into(),
            passed,
            measured: to_value(measured),
            expected: Expected {
                value: to_value(expected),
                source,
            },
            tolerance: None,
            witness: None,
        }
    }

    /// `|measured - expected| <= tol`.
    pub fn close(name: impl Into<String>, measured: f64, expected: f64, tol: f64, source: Source) -> Self {
        let passed = (measured - expected).abs() <= tol;
        Self::new(name, passed, measured, expected, source).with_tolerance(tol)
    }

    /// `|measured - expected| <= tol |expected|`.
    pub fn relative(name: impl Into<String>, measured: f64, expected: f64, tol: f64, source: Source) -> Self {
        let passed = (measured - expected).abs() <= tol * expected.abs();
        Self::new(name, passed, measured, expected, source).with_tolerance(tol)
    }

    pub fn exact<T: Serialize + PartialEq>(name: impl Into<String>, measured: T, expected: T, source: Source) -> Self {
        let passed = measured == expected;
        Self::new(name, passed, measured, expected, source)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_witness(mut self, w: Option<Vec<f64>>) -> Self {
        self.witness = w;
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Deterministic: identical configurations give byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// The resolved parameters of the run.
    pub config: Value,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: impl Serialize, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            config: to_value(config),
            seed,
            checks: Vec::new(),
            data: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), to_value(value));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_only_when_every_check_does() {
        let mut r = Report::new("demo", serde_json::json!({"n": 2}), 0);
        assert!(r.passed);
        r.push(Check::close("a", 1.0 + 1e-10, 1.0, 1e-9, Source::Identity));
        r.push(Check::relative("b", 100.5, 100.0, 1e-2, Source::ClosedForm));
        assert!(r.passed);
        r.push(Check::exact("c", 3, 4, Source::Oracle));
        assert!(!r.passed);
        assert_eq!(r.failed().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["c"]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn unknown_report_fields_are_rejected() {
        let r = Report::new("demo", 0, 0).to_json().replacen("\"seed\"", "\"extra\": 1, \"seed\"", 1);
        assert!(Report::from_json(&r).is_err());
    }
}
