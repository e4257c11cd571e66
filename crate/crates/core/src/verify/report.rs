use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when `measured ≤ threshold`; NaN never passes.
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: measured <= threshold, measured, threshold }
    }

    /// Report-only measurement that always passes.
    pub fn info(name: impl Into<String>, measured: f64) -> Self {
        Self { name: name.into(), passed: true, measured, threshold: f64::INFINITY }
    }

    pub fn failed(name: impl Into<String>, threshold: f64) -> Self {
        Self { name: name.into(), passed: false, measured: f64::NAN, threshold }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} measured={:e} threshold={:e}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.measured,
            self.threshold
        )
    }
}

/// An ordered list of checks produced from one seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub seed: u64,
}

impl Report {
    pub fn new(seed: u64) -> Self {
        Self { checks: Vec::new(), seed }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
