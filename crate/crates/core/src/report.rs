//! Check records and reports.
//!
//! Machine format is one JSON object per line, records first, then a single
//! summary line. Field order is fixed so identical runs are byte-identical.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Outcome of a sampled check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(checked: usize) -> Self {
        Verdict { passed: true, checked, witness: None }
    }

    pub fn fail(checked: usize, witness: impl Into<String>) -> Self {
        Verdict { passed: false, checked, witness: Some(witness.into()) }
    }

    /// Combines verdicts; the first failure wins.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self.passed, other.passed) {
            (true, true) => Verdict::pass(self.checked + other.checked),
            (false, _) => self,
            (true, false) => Verdict { checked: self.checked + other.checked, ..other },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

impl Record {
    pub fn new(
        check: impl Into<String>,
        anchor: impl Into<String>,
        inputs: &str,
        expected: impl Into<String>,
        actual: impl Into<String>,
        passed: bool,
        witness: Option<String>,
    ) -> Self {
        let (status, witness) = if passed {
            (Status::Pass, None)
        } else {
            // a failing record always names what failed
            (Status::Fail, Some(witness.unwrap_or_else(|| inputs.to_string())))
        };
        Record {
            check: check.into(),
            anchor: anchor.into(),
            status,
            witness,
            inputs: digest(inputs),
            expected: expected.into(),
            actual: actual.into(),
        }
    }

    pub fn from_verdict(
        check: impl Into<String>,
        anchor: impl Into<String>,
        inputs: &str,
        verdict: &Verdict,
    ) -> Self {
        Record::new(
            check,
            anchor,
            inputs,
            "all samples hold",
            format!("{} samples, {}", verdict.checked, if verdict.passed { "all hold" } else { "violation" }),
            verdict.passed,
            verdict.witness.clone(),
        )
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Short stable digest of an input description.
pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: String,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct SummaryLine {
    summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Report { suite: suite.into(), seed, records: Vec::new() }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.passed()).count();
        Summary {
            suite: self.suite.clone(),
            seed: self.seed,
            total: self.records.len(),
            passed,
            failed: self.records.len() - passed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        let line = SummaryLine { summary: self.summary() };
        out.push_str(&serde_json::to_string(&line).expect("summary serializes"));
        out.push('\n');
        out
    }

    pub fn from_machine(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        let mut summary: Option<Summary> = None;
        for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            if let Ok(s) = serde_json::from_str::<SummaryLine>(line) {
                summary = Some(s.summary);
                continue;
            }
            let r: Record = serde_json::from_str(line)
                .map_err(|e| Error::Scenario(format!("report line {}: {e}", k + 1)))?;
            records.push(r);
        }
        let summary = summary.ok_or_else(|| Error::Scenario("report has no summary line".into()))?;
        Ok(Report { suite: summary.suite, seed: summary.seed, records })
    }

    pub fn to_table(&self) -> String {
        let width = self.records.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let anchor_width = self.records.iter().map(|r| r.anchor.len()).max().unwrap_or(6).max(6);
        let mut out = format!("{:<width$}  {:<anchor_width$}  STATUS\n", "CHECK", "ANCHOR");
        for r in &self.records {
            let status = if r.passed() { "pass" } else { "FAIL" };
            out.push_str(&format!("{:<width$}  {:<anchor_width$}  {status}", r.check, r.anchor));
            if let Some(w) = &r.witness {
                out.push_str(&format!("  witness: {w}"));
            }
            out.push('\n');
        }
        let s = self.summary();
        out.push_str(&format!(
            "suite={} seed={} total={} passed={} failed={}\n",
            s.suite, s.seed, s.total, s.passed, s.failed
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_round_trip() {
        let mut r = Report::new("th1", 7);
        r.push(Record::new("a", "th-1", "x", "1/1", "1/1", true, None));
        r.push(Record::new("b", "cor:2", "y", "1/1", "0/1", false, None));
        let text = r.to_machine();
        let back = Report::from_machine(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.summary().failed, 1);
        assert_eq!(r.records[1].witness.as_deref(), Some("y"));
    }

    #[test]
    fn verdict_combination() {
        let v = Verdict::pass(3).and(Verdict::fail(2, "w")).and(Verdict::pass(1));
        assert!(!v.passed);
        assert_eq!(v.witness.as_deref(), Some("w"));
    }
}
