//! Verification reports: per-identity outcomes with counterexample witnesses.
//!
//! Reports are plain data with a deterministic JSON form; nothing
//! time-dependent is recorded, so identical inputs give byte-identical JSON.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Witnesses kept per reading; further failures are only counted.
pub const MAX_WITNESSES: usize = 5;

/// A concrete instance where two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one reading of an identity over all checked instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingOutcome {
    pub reading: String,
    pub instances: u64,
    pub failures: u64,
    /// Instances on which this reading is not well-typed.
    pub skipped: u64,
    pub witnesses: Vec<Witness>,
}

impl ReadingOutcome {
    pub fn new(reading: impl Into<String>) -> Self {
        ReadingOutcome { reading: reading.into(), instances: 0, failures: 0, skipped: 0, witnesses: Vec::new() }
    }

    /// The reading holds on every instance it was evaluated on, and was
    /// well-typed on all of them.
    pub fn closes(&self) -> bool {
        self.failures == 0 && self.skipped == 0
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }
}

/// One checked identity or axiom family.
///
/// Most checks have a single reading. Identities whose sign or index conventions are
/// ambiguous carry one reading per interpretation; the check passes when at
/// least one reading closes on every instance, and the report names which.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Informational checks are reported but do not affect the verdict.
    pub gating: bool,
    pub readings: Vec<ReadingOutcome>,
}

impl CheckResult {
    pub fn single(name: impl Into<String>) -> Self {
        CheckResult { name: name.into(), gating: true, readings: vec![ReadingOutcome::new("single reading")] }
    }

    pub fn with_readings(name: impl Into<String>, readings: &[&str]) -> Self {
        CheckResult {
            name: name.into(),
            gating: true,
            readings: readings.iter().map(|r| ReadingOutcome::new(*r)).collect(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn main(&mut self) -> &mut ReadingOutcome {
        &mut self.readings[0]
    }

    pub fn reading(&mut self, name: &str) -> &mut ReadingOutcome {
        self.readings.iter_mut().find(|r| r.reading == name).unwrap_or_else(|| panic!("no reading {name:?}"))
    }

    pub fn passed(&self) -> bool {
        self.readings.iter().any(ReadingOutcome::closes)
    }

    pub fn closing_readings(&self) -> Vec<&str> {
        self.readings.iter().filter(|r| r.closes()).map(|r| r.reading.as_str()).collect()
    }

    pub fn instances(&self) -> u64 {
        self.readings.iter().map(|r| r.instances + r.skipped).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub subject: String,
    pub seed: Option<u64>,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, subject: impl Into<String>) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            subject: subject.into(),
            seed: None,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// All gating checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.gating).all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.gating && !c.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.gating && !c.passed())
    }

    /// Appends the checks and notes of another report.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Human-readable summary, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} for {}", self.suite, self.subject);
        if let Some(seed) = self.seed {
            out.push_str(&format!(" (seed {seed})"));
        }
        out.push('\n');
        for c in &self.checks {
            let status = match (c.passed(), c.gating) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "info",
            };
            let n = c.instances();
            out.push_str(&format!("  [{status}] {} ({n} instance{})", c.name, if n == 1 { "" } else { "s" }));
            if c.readings.len() > 1 {
                let closing = c.closing_readings();
                if closing.is_empty() {
                    out.push_str(" no reading closes");
                } else {
                    out.push_str(&format!(" closes under: {}", closing.join("; ")));
                }
            }
            out.push('\n');
            for r in &c.readings {
                if r.failures > 0 || r.skipped > 0 || c.readings.len() > 1 {
                    out.push_str(&format!(
                        "      {}: {} ok, {} failed, {} ill-typed\n",
                        r.reading,
                        r.instances - r.failures,
                        r.failures,
                        r.skipped
                    ));
                }
                for w in r.witnesses.iter().take(if c.gating && !c.passed() { MAX_WITNESSES } else { 1 }) {
                    if r.failures > 0 {
                        out.push_str(&format!("        at {}: {} != {}\n", w.instance, w.lhs, w.rhs));
                    }
                }
            }
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(if self.passed() { "result: PASS\n" } else { "result: FAIL\n" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Witness {
        Witness { instance: "i".into(), lhs: "a".into(), rhs: "b".into() }
    }

    #[test]
    fn any_closing_reading_passes() {
        let mut c = CheckResult::with_readings("f", &["one", "two"]);
        c.reading("one").record(false, w);
        c.reading("two").record(true, w);
        assert!(c.passed());
        assert_eq!(c.closing_readings(), vec!["two"]);
    }

    #[test]
    fn skipped_instances_prevent_closure() {
        let mut c = CheckResult::single("f");
        c.main().skip();
        assert!(!c.passed());
    }

    #[test]
    fn informational_checks_do_not_gate() {
        let mut r = VerificationReport::new("suite", "x");
        let mut c = CheckResult::single("bad").informational();
        c.main().record(false, w);
        r.push(c);
        assert!(r.passed());
        assert!(r.to_text().contains("[info] bad"));
    }

    #[test]
    fn witnesses_are_capped() {
        let mut o = ReadingOutcome::new("r");
        for _ in 0..20 {
            o.record(false, w);
        }
        assert_eq!(o.failures, 20);
        assert_eq!(o.witnesses.len(), MAX_WITNESSES);
    }
}
