//! Named pass/fail check lists returned by the verification routines.

use serde_json::json;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &'static str, passed: bool) {
        self.checks.push(Check {
            name,
            passed,
            detail: None,
        });
    }

    pub fn push_detail(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: Some(detail.into()),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .checks
            .iter()
            .map(|c| {
                let mut o = json!({"check": c.name, "passed": c.passed});
                if let Some(d) = &c.detail {
                    o["detail"] = json!(d);
                }
                o
            })
            .collect::<Vec<_>>())
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            write!(f, "{:<28} {}", c.name, if c.passed { "ok" } else { "FAIL" })?;
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
