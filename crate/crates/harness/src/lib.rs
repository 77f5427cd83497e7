//! Benchmarks and the acceptance gate for the tentlab workspace.
//!
//! The library holds the reporting used by the `acceptance` target: each
//! criterion records named checks, and the suite prints one line per criterion.

use std::fmt::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks recorded by one criterion.
#[derive(Debug, Default)]
pub struct Report {
    checks: Vec<Check>,
}

impl Report {
    pub fn check(
        &mut self,
        label: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        self.checks.push(Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

pub type CriterionFn = fn(&mut Report);

pub struct Criterion {
    pub number: u32,
    pub title: &'static str,
    pub run: CriterionFn,
}

/// Run one criterion, turning a panic into a failed check.
pub fn evaluate(criterion: &Criterion) -> Report {
    let mut report = Report::default();
    let outcome = catch_unwind(AssertUnwindSafe(|| (criterion.run)(&mut report)));
    if let Err(payload) = outcome {
        let message = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        report.check("completed without panicking", false, message);
    }
    report
}

/// `criterion N (title): PASS` or `FAIL` followed by the failing checks.
pub fn summary_line(criterion: &Criterion, report: &Report, seconds: f64) -> String {
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let mut line = format!(
        "criterion {:>2} ({}): {verdict} [{seconds:.2}s]",
        criterion.number, criterion.title
    );
    for c in report.checks().iter().filter(|c| !c.passed) {
        let _ = write!(line, "\n    failed: {}: {}", c.label, c.detail);
    }
    line
}

/// Evaluate every criterion in order and print one line each.
pub fn run_suite(criteria: &[Criterion]) -> ExitCode {
    let mut failed = 0;
    for criterion in criteria {
        let started = Instant::now();
        let report = evaluate(criterion);
        println!(
            "{}",
            summary_line(criterion, &report, started.elapsed().as_secs_f64())
        );
        if !report.passed() {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
