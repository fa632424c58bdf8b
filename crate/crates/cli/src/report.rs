//! Report assembly and rendering.

use std::fmt::Write as _;
use std::time::Instant;

use algebench_core::Error;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Skipped,
    GuardExceeded,
    Fail,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::GuardExceeded => "GUARD",
        }
    }
}

/// One check. A failing finding always carries its witness in `detail`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub label: String,
    pub status: Status,
    pub summary: String,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub label: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub samples: u64,
    pub status: Status,
    pub findings: Vec<Finding>,
    /// Wall-clock times, kept out of the deterministic body.
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn finding(&self, label: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.label == label)
    }

    /// The report without timings. Identical inputs and seed give identical
    /// bytes.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value["timings"] = serde_json::to_value(&self.timings).expect("timings serialize");
        serde_json::to_string_pretty(&value).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} (seed {})",
            self.command,
            self.inputs.join(" "),
            self.seed
        );
        for (f, t) in self.findings.iter().zip(&self.timings) {
            let _ = writeln!(
                out,
                "{:5} {}: {} [{:.1} ms]",
                f.status.tag(),
                f.label,
                f.summary,
                t.millis
            );
            if f.status != Status::Pass {
                let _ = writeln!(out, "      {}", f.detail);
            }
        }
        let _ = writeln!(out, "status: {}", self.status.tag());
        out
    }
}

/// Collects findings and their timings for one command.
pub struct ReportBuilder {
    report: Report,
}

/// What a check returns: pass flag, one-line summary and structured detail.
pub type Outcome = (bool, String, Value);

impl ReportBuilder {
    pub fn new(command: &str, inputs: Vec<String>, seed: u64, samples: u64) -> Self {
        ReportBuilder {
            report: Report {
                command: command.to_string(),
                inputs,
                seed,
                samples,
                status: Status::Pass,
                findings: Vec::new(),
                timings: Vec::new(),
            },
        }
    }

    /// Runs one check. Guard overflows and non-basis frames become findings;
    /// other errors abort the command.
    pub fn check(
        &mut self,
        label: &str,
        run: impl FnOnce() -> Result<Outcome, CliError>,
    ) -> Result<bool, CliError> {
        let start = Instant::now();
        let (status, summary, detail) = match run() {
            Ok((ok, summary, detail)) => (
                if ok { Status::Pass } else { Status::Fail },
                summary,
                detail,
            ),
            Err(CliError::Core(e @ Error::GuardExceeded { .. })) => {
                (Status::GuardExceeded, e.to_string(), Value::Null)
            }
            Err(CliError::Core(e @ (Error::NotABasis(_) | Error::Cycle(_)))) => {
                (Status::Fail, e.to_string(), Value::String(e.to_string()))
            }
            Err(e) => return Err(e),
        };
        self.push(label, status, summary, detail, start);
        Ok(status == Status::Pass)
    }

    pub fn push(
        &mut self,
        label: &str,
        status: Status,
        summary: String,
        detail: Value,
        start: Instant,
    ) {
        self.report.findings.push(Finding {
            label: label.to_string(),
            status,
            summary,
            detail,
        });
        self.report.timings.push(Timing {
            label: label.to_string(),
            millis: start.elapsed().as_secs_f64() * 1e3,
        });
    }

    /// Overall status: any failure fails, then guard overflows, then skips.
    pub fn finish(mut self) -> Report {
        self.report.status = self
            .report
            .findings
            .iter()
            .map(|f| f.status)
            .max()
            .unwrap_or(Status::Pass);
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_precedence() {
        let mut b = ReportBuilder::new("t", vec![], 0, 1);
        b.check("a", || Ok((true, "ok".into(), Value::Null)))
            .unwrap();
        b.check("b", || Err(CliError::Core(Error::guard("x", 2, 1))))
            .unwrap();
        let r = b.finish();
        assert_eq!(r.status, Status::GuardExceeded);
        assert_eq!(r.findings[1].status, Status::GuardExceeded);

        let mut b = ReportBuilder::new("t", vec![], 0, 1);
        b.check("a", || Err(CliError::Core(Error::guard("x", 2, 1))))
            .unwrap();
        b.check("b", || Ok((false, "no".into(), Value::Null)))
            .unwrap();
        assert_eq!(b.finish().status, Status::Fail);
    }

    #[test]
    fn other_errors_abort() {
        let mut b = ReportBuilder::new("t", vec![], 0, 1);
        assert!(b.check("a", || Err(CliError::Usage("bad".into()))).is_err());
    }

    #[test]
    fn body_excludes_timings() {
        let mut b = ReportBuilder::new("t", vec![], 0, 1);
        b.check("a", || Ok((true, "ok".into(), Value::Null)))
            .unwrap();
        let r = b.finish();
        assert!(!r.body_json().contains("millis"));
        assert!(r.to_json().contains("millis"));
    }
}
