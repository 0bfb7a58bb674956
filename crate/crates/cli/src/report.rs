use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

/// One checked value against its oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub operation: String,
    pub inputs: BTreeMap<String, f64>,
    pub result: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub pass: bool,
    pub tol: f64,
}

impl Entry {
    /// `|result - oracle| / |oracle|` (absolute when the oracle is 0); a
    /// non-finite value on either side fails.
    pub fn compare(
        operation: &str,
        inputs: &[(&str, f64)],
        result: f64,
        oracle: f64,
        tol: f64,
    ) -> Self {
        let rel_err = rel_diff(result, oracle);
        Entry {
            operation: operation.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            result,
            oracle,
            rel_err,
            pass: rel_err <= tol,
            tol,
        }
    }

    /// Entry for a computation that raised an error.
    pub fn failed(operation: &str, inputs: &[(&str, f64)], tol: f64) -> Self {
        Entry::compare(operation, inputs, f64::NAN, f64::NAN, tol)
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    if !(a.is_finite() && b.is_finite()) {
        return f64::INFINITY;
    }
    let d = (a - b).abs();
    if b == 0.0 {
        d
    } else {
        d / b.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub max_rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(entries: Vec<Entry>) -> Self {
        let passed = entries.iter().filter(|e| e.pass).count();
        let max_rel_err = entries.iter().map(|e| e.rel_err).fold(0.0, f64::max);
        Report {
            summary: Summary {
                total: entries.len(),
                passed,
                max_rel_err,
            },
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn to_json(&self) -> io::Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("operation,inputs,result,oracle,rel_err,pass\n");
        for e in &self.entries {
            let inputs: Vec<String> = e
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={}", number(*v)))
                .collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.operation,
                inputs.join(";"),
                number(e.result),
                number(e.oracle),
                number(e.rel_err),
                e.pass
            );
        }
        out
    }
}

/// Shortest round-trip decimal; non-finite values spelled out.
fn number(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).unwrap_or_default()
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
