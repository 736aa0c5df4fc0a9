//! Verification reports shared by the checkers and the CLI.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedOutOfAssumption,
    NoQualifyingInstances,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedOutOfAssumption => "skipped-out-of-assumption",
            Status::NoQualifyingInstances => "no-qualifying-instances",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Name of the statement the check exercises.
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// Number of instances (pairs, edges, vertices, ...) examined.
    #[serde(default)]
    pub instances: usize,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            counterexample: None,
            instances: 0,
        }
    }

    /// Records one examined instance; the first failure is kept as the
    /// counterexample.
    pub fn observe(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.status != Status::Fail {
            self.status = Status::Fail;
            self.counterexample = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.counterexample = Some(witness.into());
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// Marks a passing check with nothing to examine.
    pub fn vacuous_if_empty(mut self) -> Self {
        if self.instances == 0 && self.status == Status::Pass {
            self.status = Status::NoQualifyingInstances;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub vacuous: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub instance: String,
    pub checks: Vec<Check>,
    pub totals: Totals,
}

impl Report {
    pub fn new(suite: impl Into<String>, instance: impl Into<String>) -> Self {
        Self { suite: suite.into(), instance: instance.into(), checks: Vec::new(), totals: Totals::default() }
    }

    pub fn push(&mut self, check: Check) {
        match check.status {
            Status::Pass => self.totals.pass += 1,
            Status::Fail => self.totals.fail += 1,
            Status::SkippedOutOfAssumption => self.totals.skipped += 1,
            Status::NoQualifyingInstances => self.totals.vacuous += 1,
        }
        self.checks.push(check);
    }

    /// Recomputes the totals after statuses were edited in place.
    pub fn retotal(&mut self) {
        let checks = std::mem::take(&mut self.checks);
        self.totals = Totals::default();
        for check in checks {
            self.push(check);
        }
    }

    pub fn extend(&mut self, other: Report) {
        for check in other.checks {
            self.push(check);
        }
    }

    pub fn passed(&self) -> bool {
        self.totals.fail == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} on {}", self.suite, self.instance)?;
        for c in &self.checks {
            write!(f, "  [{:>25}] {:<40} ({}, {} instances)", c.status.to_string(), c.name, c.anchor, c.instances)?;
            if let Some(cx) = &c.counterexample {
                write!(f, "\n      counterexample: {cx}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "  totals: {} pass, {} fail, {} skipped, {} vacuous",
            self.totals.pass, self.totals.fail, self.totals.skipped, self.totals.vacuous
        )
    }
}
