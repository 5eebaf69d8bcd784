//! Check reports shared by every validator and verifier.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// One named property with its outcome. Failures always carry a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        });
    }

    /// Records a single pass/fail outcome; the witness is only built on failure.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness());
        }
    }

    /// One passing entry when `violations` is empty, otherwise one failing entry per violation.
    pub fn axiom(&mut self, name: &str, violations: Vec<String>) {
        if violations.is_empty() {
            self.pass(name);
        } else {
            for v in violations {
                self.fail(name, v);
            }
        }
    }

    /// Appends another report, prefixing its check names.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}.{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// True if some failing check has exactly this name, or ends with `.name`.
    pub fn failed(&self, name: &str) -> bool {
        let suffix = format!(".{name}");
        self.failures().any(|c| c.name == name || c.name.ends_with(&suffix))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                Some(w) => writeln!(f, "{} {}: {}", c.status, c.name, w)?,
                None => writeln!(f, "{} {}", c.status, c.name)?,
            }
        }
        Ok(())
    }
}
