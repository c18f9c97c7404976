//! Machine-readable results and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hofib::homology::HomologyGroup;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
}

impl Check {
    /// Passes iff there are no witnesses.
    pub fn from_witnesses(name: impl Into<String>, witnesses: Vec<String>) -> Self {
        let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
        Check { name: name.into(), verdict, witnesses }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRow {
    pub space: String,
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub valid_up_to: Option<usize>,
    pub checks: Vec<Check>,
    pub homology: Vec<HomologyRow>,
    /// Only filled in when timing was requested, so reports stay reproducible.
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            params: BTreeMap::new(),
            valid_up_to: None,
            checks: Vec::new(),
            homology: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&mut self, name: impl Into<String>, witnesses: Vec<String>) {
        self.checks.push(Check::from_witnesses(name, witnesses));
    }

    /// Adds the nonzero groups of a table.
    pub fn table(&mut self, space: &str, groups: &[HomologyGroup]) {
        for g in groups.iter().filter(|g| !g.is_zero()) {
            self.homology.push(HomologyRow {
                space: space.into(),
                degree: g.degree,
                free_rank: g.free_rank,
                torsion: g.torsion.iter().map(|t| t.to_u64().expect("torsion coefficient fits in 64 bits")).collect(),
            });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{}", self.command);
        for (k, v) in &self.params {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        if let Some(v) = self.valid_up_to {
            let _ = writeln!(out, "valid up to degree {v}");
        }
        let mut spaces: Vec<&str> = Vec::new();
        for r in &self.homology {
            if !spaces.contains(&r.space.as_str()) {
                spaces.push(&r.space);
            }
        }
        let base = match self.params.get("coefficients").map(String::as_str) {
            None | Some("Z") => "Z".to_string(),
            Some(c) => format!("({c})"),
        };
        for s in spaces {
            let _ = writeln!(out, "homology of {s}:");
            for r in self.homology.iter().filter(|r| r.space == s) {
                let mut parts = Vec::new();
                match r.free_rank {
                    0 => {}
                    1 => parts.push(base.clone()),
                    n => parts.push(format!("{base}^{n}")),
                }
                parts.extend(r.torsion.iter().map(|t| format!("Z/{t}")));
                let _ = writeln!(out, "  H_{} = {}", r.degree, parts.join(" + "));
            }
        }
        for c in &self.checks {
            let v = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{v} {}", c.name);
            for w in &c.witnesses {
                let _ = writeln!(out, "    {w}");
            }
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "took {ms} ms");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_json() {
        let r = Report::new("validate");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["command"], "validate");
        assert_eq!(v["checks"], serde_json::json!([]));
        assert_eq!(v["homology"], serde_json::json!([]));
        assert!(v["timing_ms"].is_null());
    }

    #[test]
    fn verdicts_are_lowercase() {
        let mut r = Report::new("x");
        r.check("a", vec![]);
        r.check("b", vec!["why".into()]);
        let text = r.to_json();
        assert!(text.contains("\"pass\"") && text.contains("\"fail\""));
        assert!(!r.passed());
    }
}
