//! Suite reports in text and JSON form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

impl Measurement {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
            expected: None,
        }
    }

    pub fn expecting(label: impl Into<String>, value: f64, expected: f64) -> Self {
        Self {
            label: label.into(),
            value,
            expected: Some(expected),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    /// Models, states or gates checked.
    pub checked: usize,
    /// Worst deviation observed, against the case's own tolerance.
    pub residual: f64,
    pub tolerance: f64,
    pub measurements: Vec<Measurement>,
}

impl CaseReport {
    pub fn new(id: impl Into<String>, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            passed: true,
            detail: String::new(),
            checked: 0,
            residual: 0.0,
            tolerance,
            measurements: Vec::new(),
        }
    }

    /// Records a deviation; the case fails once any exceeds the tolerance.
    pub fn residual(&mut self, r: f64) {
        if r.is_nan() || r > self.tolerance {
            self.passed = false;
        }
        if r.is_nan() || r > self.residual {
            self.residual = r;
        }
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.passed = false;
        let why = why.into();
        if self.detail.is_empty() {
            self.detail = why;
        } else if !self.detail.contains(&why) {
            self.detail.push_str("; ");
            self.detail.push_str(&why);
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        if self.detail.is_empty() {
            self.detail = text.into();
        }
    }
}

/// Wall-clock data, kept apart so the rest of a report is reproducible.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub cases_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub cases: Vec<CaseReport>,
    pub timing: Timing,
}

impl Report {
    pub fn new(
        suite: &str,
        seed: u64,
        trials: usize,
        cases: Vec<CaseReport>,
        timing: Timing,
    ) -> Self {
        Self {
            suite: suite.into(),
            seed,
            trials,
            tolerance: crate::tol::semantic(),
            passed: cases.iter().all(|c| c.passed),
            cases,
            timing,
        }
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// JSON without the timing object.
    pub fn to_json_untimed(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable report");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("serializable report")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (seed {}, {} trials, tol {:e})",
            self.suite, self.seed, self.trials, self.tolerance
        );
        for c in &self.cases {
            let _ = write!(
                out,
                "{} {:<18} checked {:>5}  residual {:.3e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.checked,
                c.residual
            );
            if let Some(ms) = self.timing.cases_ms.get(&c.id) {
                let _ = write!(out, "  {ms:.0} ms");
            }
            out.push('\n');
            for m in &c.measurements {
                match m.expected {
                    Some(e) => {
                        let _ =
                            writeln!(out, "       {} = {:.12} (expected {e})", m.label, m.value);
                    }
                    None => {
                        let _ = writeln!(out, "       {} = {:.12}", m.label, m.value);
                    }
                }
            }
            if !c.detail.is_empty() {
                let _ = writeln!(out, "       {}", c.detail);
            }
        }
        let _ = writeln!(
            out,
            "{}: {} of {} cases passed",
            if self.passed { "ok" } else { "FAILED" },
            self.cases.len() - self.failures(),
            self.cases.len()
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_decide_status() {
        let mut c = CaseReport::new("x", 1e-9);
        c.residual(1e-12);
        assert!(c.passed);
        c.residual(1e-6);
        assert!(!c.passed);
        assert_eq!(c.residual, 1e-6);
        let mut d = CaseReport::new("y", 1e-9);
        d.residual(f64::NAN);
        assert!(!d.passed);
    }

    #[test]
    fn untimed_json_drops_timing() {
        let timing = Timing {
            total_ms: 3.0,
            ..Timing::default()
        };
        let r = Report::new("s", 1, 2, vec![CaseReport::new("a", 1e-9)], timing);
        assert!(r.to_json().contains("timing"));
        assert!(!r.to_json_untimed().contains("timing"));
        assert!(r.passed);
        assert!(r.to_text().contains("PASS a"));
    }
}
