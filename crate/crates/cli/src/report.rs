//! JSON run reports and CSV artifacts.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Everything a run writes to `<out>/<scenario>.json`. Wall time is kept out
/// so that identical inputs give byte-identical files.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub artifacts: Vec<String>,
    pub results: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(scenario: &str, params: BTreeMap<String, Value>) -> Self {
        Report {
            scenario: scenario.to_string(),
            params,
            checks: Vec::new(),
            artifacts: Vec::new(),
            results: BTreeMap::new(),
        }
    }

    /// `value < tol`.
    pub fn below(&mut self, name: &str, anchor: &str, value: f64, tol: f64) {
        self.push(name, anchor, value, tol, value < tol);
    }

    /// `value >= -floor`.
    pub fn at_least(&mut self, name: &str, anchor: &str, value: f64, floor: f64) {
        self.push(name, anchor, value, floor, value >= -floor);
    }

    /// `lo < value < hi`; the tolerance column records the band width.
    pub fn within(&mut self, name: &str, anchor: &str, value: f64, band: (f64, f64)) {
        let ok = value > band.0 && value < band.1;
        self.push(name, anchor, value, band.1 - band.0, ok);
        self.result(&format!("{} band", name), serde_json::json!([band.0, band.1]));
    }

    /// A boolean check, stored as value 1 or 0.
    pub fn holds(&mut self, name: &str, anchor: &str, ok: bool) {
        self.push(name, anchor, if ok { 1.0 } else { 0.0 }, 0.0, ok);
    }

    fn push(&mut self, name: &str, anchor: &str, value: f64, tolerance: f64, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            paper_anchor: anchor.to_string(),
            value,
            tolerance,
            pass: pass && value.is_finite(),
        });
    }

    pub fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.to_string(), v);
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn write(&self, out: &Path) -> std::io::Result<PathBuf> {
        fs::create_dir_all(out)?;
        let path = out.join(format!("{}.json", self.scenario));
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }

    /// Plain-text summary, one line per check.
    pub fn summary(&self) -> String {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let mut s = format!(
            "{} {}: {}/{} checks\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.scenario,
            passed,
            self.checks.len()
        );
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {:<44} value {:>12.4e}  tol {:>9.1e}\n",
                if c.pass { "ok" } else { "!!" },
                c.name,
                c.value,
                c.tolerance
            ));
        }
        if let Some(Value::String(e)) = self.results.get("error") {
            s.push_str(&format!("  error: {}\n", e));
        }
        s
    }
}

/// Writes `<out>/<scenario>_<stem>.csv` and records it as an artifact.
pub fn write_csv(
    report: &mut Report,
    out: &Path,
    stem: &str,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    fs::create_dir_all(out)?;
    let name = format!("{}_{}.csv", report.scenario, stem);
    let mut w = csv::Writer::from_path(out.join(&name))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    report.artifacts.push(name);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_values_never_pass() {
        let mut r = Report::new("x", BTreeMap::new());
        r.below("nan", "a", f64::NAN, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn empty_reports_fail() {
        assert!(!Report::new("x", BTreeMap::new()).passed());
    }

    #[test]
    fn band_checks_are_open() {
        let mut r = Report::new("x", BTreeMap::new());
        r.within("ratio", "a", 3.0, (3.0, 5.0));
        assert!(!r.passed());
    }
}
