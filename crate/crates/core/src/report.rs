//! Structured outcome of a verifier: named numeric tables plus pass/fail
//! checks against declared bounds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bound {
    AtMost { max: f64 },
    AtLeast { min: f64 },
    Between { lo: f64, hi: f64 },
    Within { target: f64, tol: f64 },
}

impl Bound {
    pub fn at_most(max: f64) -> Self {
        Bound::AtMost { max }
    }

    pub fn at_least(min: f64) -> Self {
        Bound::AtLeast { min }
    }

    pub fn between(lo: f64, hi: f64) -> Self {
        Bound::Between { lo, hi }
    }

    pub fn within(target: f64, tol: f64) -> Self {
        Bound::Within { target, tol }
    }

    /// A missing observation never passes.
    pub fn admits(&self, observed: Option<f64>) -> bool {
        let Some(v) = observed.filter(|v| !v.is_nan()) else {
            return false;
        };
        match *self {
            Bound::AtMost { max } => v <= max,
            Bound::AtLeast { min } => v >= min,
            Bound::Between { lo, hi } => lo <= v && v <= hi,
            Bound::Within { target, tol } => (v - target).abs() <= tol,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Bound::AtMost { max } => write!(f, "<= {max}"),
            Bound::AtLeast { min } => write!(f, ">= {min}"),
            Bound::Between { lo, hi } => write!(f, "in [{lo}, {hi}]"),
            Bound::Within { target, tol } => write!(f, "= {target} ± {tol}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: Option<f64>,
    pub bound: Bound,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, observed: f64, bound: Bound) -> Self {
        let observed = Some(observed).filter(|v| v.is_finite());
        Self {
            name: name.into(),
            passed: bound.admits(observed),
            observed,
            bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl ReportTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Non-finite cells are stored as missing.
    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width mismatch in {}",
            self.name
        );
        self.rows.push(
            row.iter()
                .map(|&v| Some(v).filter(|v| v.is_finite()))
                .collect(),
        );
    }

    pub fn push_opt(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width mismatch in {}",
            self.name
        );
        self.rows.push(
            row.into_iter()
                .map(|v| v.filter(|v| v.is_finite()))
                .collect(),
        );
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub tables: Vec<ReportTable>,
    pub checks: Vec<Check>,
    /// Wall-clock time; left unset by the verifiers so reports stay
    /// byte-identical between runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            parameters: BTreeMap::new(),
            tables: Vec::new(),
            checks: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, observed: f64, bound: Bound) -> &mut Self {
        self.checks.push(Check::new(name, observed, bound));
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&ReportTable> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn get_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every stored flag agrees with re-evaluating its bound.
    pub fn flags_consistent(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.bound.admits(c.observed) == c.passed)
    }
}
