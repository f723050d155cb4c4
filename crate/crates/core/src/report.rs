//! Violation reports shared by all checkers.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub witnesses: Vec<String>,
    pub detail: String,
}

impl Violation {
    pub fn new(check: &str, witnesses: Vec<String>, detail: impl Into<String>) -> Self {
        Violation { check: check.to_string(), r: None, t: None, witnesses, detail: detail.into() }
    }

    /// Attaches a generator pair (0-based).
    pub fn with_pair(mut self, r: usize, t: usize) -> Self {
        self.r = Some(r);
        self.t = Some(t);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.check)?;
        if let (Some(r), Some(t)) = (self.r, self.t) {
            write!(f, " (r,t)=({},{})", r + 1, t + 1)?;
        }
        if !self.witnesses.is_empty() {
            write!(f, " at {}", self.witnesses.join(", "))?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Number of individual checks run and the violations found.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one check; the violation is only built when the check fails.
    pub fn check(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.checks += 1;
        if !ok {
            self.violations.push(violation());
        }
    }

    pub fn push(&mut self, v: Violation) {
        self.checks += 1;
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }

    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return write!(f, "pass ({} checks)", self.checks);
        }
        writeln!(f, "{} violation(s) in {} checks", self.violations.len(), self.checks)?;
        for v in self.violations.iter().take(50) {
            writeln!(f, "  {v}")?;
        }
        if self.violations.len() > 50 {
            writeln!(f, "  ... {} more", self.violations.len() - 50)?;
        }
        Ok(())
    }
}
