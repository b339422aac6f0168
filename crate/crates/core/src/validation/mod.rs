//! Independent checks on analytic solutions: conservation laws, reference
//! problems with known closed forms, and a Yee FDTD integrator used as a
//! convergence oracle.

pub mod conservation;
pub mod fdtd;
pub mod golden;

use std::fmt::Write as _;

pub use conservation::{check_divergence, check_energy, ConservationReport, DivergenceReport};
pub use fdtd::{fdtd_convergence, fdtd_step, ConvergenceRow, FdtdState};
pub use golden::{golden_examples, GoldenProblem};

/// One thresholded measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// A list of checks plus free-form diagnostic notes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    /// Records `value <= threshold`. NaN fails.
    pub fn at_most(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        let passed = value <= threshold;
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            passed,
        });
        passed
    }

    /// Records `lo <= value <= hi`, stored with the distance outside the band.
    pub fn within(&mut self, name: impl Into<String>, value: f64, lo: f64, hi: f64) -> bool {
        let passed = (lo..=hi).contains(&value);
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold: if value < lo { lo } else { hi },
            passed,
        });
        passed
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `name = value` lines followed by `name.status = pass|fail` lines and
    /// `note = ...` lines.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "fail" };
            let _ = writeln!(out, "{} = {:e}", c.name, c.value);
            let _ = writeln!(out, "{}.threshold = {:e}", c.name, c.threshold);
            let _ = writeln!(out, "{}.status = {status}", c.name);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note = {n}");
        }
        let _ = writeln!(
            out,
            "overall = {}",
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}
