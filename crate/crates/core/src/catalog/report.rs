//! JSON documents, text tables and per-theorem summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::checks::{run_catalog, Status, Suite, VerificationReport};
use super::{deta, theorem_slice, CatalogEntry, Theorem};

pub const TOOL: &str = "nilcontact";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub entries: usize,
    pub checks: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub info: usize,
}

impl Counts {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut c = Counts {
            checks: reports.len(),
            ..Counts::default()
        };
        let mut last: Option<&str> = None;
        for r in reports {
            if last != Some(r.entry.as_str()) {
                c.entries += 1;
                last = Some(&r.entry);
            }
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skip => c.skip += 1,
                Status::Info => c.info += 1,
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremLine {
    pub entry: String,
    pub expected: String,
    pub verdict: String,
    pub confirmed: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub total: usize,
    pub confirmed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub theorem: String,
    pub total: usize,
    pub confirmed: usize,
    /// Expected class to entry counts.
    pub classes: BTreeMap<String, ClassCount>,
    pub lines: Vec<TheoremLine>,
    /// Groups of entries whose `d eta` coincide.
    pub shared_cocycles: Vec<Vec<String>>,
    #[serde(skip)]
    pub reports: Vec<VerificationReport>,
}

impl TheoremSummary {
    pub fn all_confirmed(&self) -> bool {
        self.total > 0 && self.confirmed == self.total
    }
}

/// Runs every check on the entries of `theorem` and tallies verdicts.
pub fn reproduce_theorem(catalog: &[CatalogEntry], theorem: Theorem, seed: u64, timings: bool) -> TheoremSummary {
    let entries: Vec<CatalogEntry> = theorem_slice(catalog, theorem).into_iter().cloned().collect();
    let reports = run_catalog(&entries, Suite::All, seed, timings);
    let mut lines = Vec::new();
    let mut classes = BTreeMap::new();
    let mut sorted: Vec<&CatalogEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    for e in &sorted {
        let mine: Vec<&VerificationReport> = reports.iter().filter(|r| r.entry == e.key).collect();
        let expected = e.expected_class.map(|c| c.as_str().to_string()).unwrap_or_default();
        let verdicts: Vec<String> = mine
            .iter()
            .filter(|r| r.check.split('@').next() == Some("verdict"))
            .map(|r| r.residual.split(" (").next().unwrap_or("").to_string())
            .collect();
        let verdict = if verdicts.is_empty() {
            "none".to_string()
        } else {
            let mut v = verdicts.clone();
            v.dedup();
            v.join(",")
        };
        let confirmed = !verdicts.is_empty()
            && verdicts.iter().all(|v| *v == expected)
            && mine.iter().all(|r| matches!(r.status, Status::Pass | Status::Info));
        let count: &mut ClassCount = classes.entry(expected.clone()).or_default();
        count.total += 1;
        count.confirmed += usize::from(confirmed);
        lines.push(TheoremLine {
            entry: e.key.clone(),
            expected,
            verdict,
            confirmed,
            notes: e.notes.clone(),
        });
    }
    let mut by_deta: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for e in &sorted {
        if let Some(d) = deta(e) {
            by_deta.entry(d.to_string()).or_default().push(e.key.clone());
        }
    }
    let shared_cocycles = by_deta.into_values().filter(|v| v.len() > 1).collect();
    TheoremSummary {
        theorem: theorem.to_string(),
        total: lines.len(),
        confirmed: lines.iter().filter(|l| l.confirmed).count(),
        classes,
        lines,
        shared_cocycles,
        reports,
    }
}

#[derive(Serialize)]
struct Document<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    command: &'a str,
    reports: &'a [VerificationReport],
    summary: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem: Option<&'a TheoremSummary>,
}

/// Pretty JSON with keys in a fixed order; byte-identical for equal inputs.
pub fn to_json(command: &str, seed: u64, reports: &[VerificationReport], theorem: Option<&TheoremSummary>) -> String {
    let doc = Document {
        tool: TOOL,
        version: VERSION,
        seed,
        command,
        reports,
        summary: Counts::of(reports),
        theorem,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn to_table(reports: &[VerificationReport]) -> String {
    let we = reports.iter().map(|r| r.entry.len()).max().unwrap_or(5).max(5);
    let wc = reports.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:we$}  {:wc$}  {:6}  residual", "entry", "check", "status");
    for r in reports {
        let mut line = format!("{:we$}  {:wc$}  {:6}  {}", r.entry, r.check, r.status.as_str(), r.residual);
        if let Some(ms) = r.wall_ms {
            let _ = write!(line, "  [{ms} ms]");
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let c = Counts::of(reports);
    let _ = writeln!(
        out,
        "{} entries, {} checks: {} pass, {} fail, {} skip, {} info",
        c.entries, c.checks, c.pass, c.fail, c.skip, c.info
    );
    out
}

pub fn theorem_table(s: &TheoremSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Theorem {}: {}/{} entries confirmed", s.theorem, s.confirmed, s.total);
    for (class, n) in &s.classes {
        let _ = writeln!(out, "  {class}: {}/{} confirmed", n.confirmed, n.total);
    }
    for l in &s.lines {
        let mark = if l.confirmed { "ok" } else { "FAILED" };
        let _ = writeln!(out, "  {:14} {:16} {:6} {}", l.entry, l.verdict, mark, l.notes.join(" | "));
    }
    for g in &s.shared_cocycles {
        let _ = writeln!(out, "  same d eta: {}", g.join(", "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{embedded_catalog, find};
    use crate::catalog::checks::run_checks;

    #[test]
    fn json_is_stable() {
        let c = embedded_catalog();
        let reps = run_checks(find(&c, "g24_1").unwrap(), Suite::Jacobi, 0, false);
        let a = to_json("jacobi", 0, &reps, None);
        assert_eq!(a, to_json("jacobi", 0, &reps, None));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["tool"], "nilcontact");
        assert_eq!(v["reports"][0]["status"], "pass");
        assert!(v["reports"][0].get("wall_ms").is_none());
        assert!(a.find("\"tool\"").unwrap() < a.find("\"summary\"").unwrap());
    }

    #[test]
    fn counts_and_table() {
        let c = embedded_catalog();
        let reps = run_checks(find(&c, "h14").unwrap(), Suite::All, 0, false);
        let n = Counts::of(&reps);
        assert_eq!(n.entries, 1);
        assert_eq!(n.fail, 0);
        assert!(to_table(&reps).contains("base_curvature"));
    }
}
