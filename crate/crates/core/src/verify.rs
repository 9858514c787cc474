//! Branch-by-branch comparison of the simulated pose superposition against
//! the classical enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::circuit::{build_unified, resource_counts, GateKind};
use crate::error::Result;
use crate::grid::{decode_branches, encode_state, ControlSetting, OccupancyGrid, RegisterLayout, StageOptions};
use crate::oracle::{enumerate_poses, PoseSet};
use crate::sim::run;

/// Largest accepted difference between rescaled simulated and oracle weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;
/// Largest accepted deviation of a branch's probability mass from `2^-h`.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub total_branches: usize,
    pub matched: usize,
    pub max_weight_deviation: f64,
    pub mismatches: Vec<(ControlSetting, String)>,
    pub passed: bool,
}

impl VerificationReport {
    /// `verify PASS|FAIL branches=<n> matched=<n> maxdev=<e>`
    pub fn summary_line(&self) -> String {
        format!(
            "verify {} branches={} matched={} maxdev={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.total_branches,
            self.matched,
            self.max_weight_deviation
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for (setting, why) in &self.mismatches {
            writeln!(f, "  mismatch {setting}: {why}")?;
        }
        Ok(())
    }
}

/// Runs the circuit path (encode, build, simulate, decode) and the oracle
/// path for `grid` and compares every branch.
pub fn verify(grid: &OccupancyGrid, layout: &RegisterLayout, options: &StageOptions) -> Result<VerificationReport> {
    let expected = enumerate_poses(grid, options)?;
    verify_against(grid, layout, options, &expected)
}

/// Like [`verify`], but against a caller-supplied pose set.
pub fn verify_against(
    grid: &OccupancyGrid,
    layout: &RegisterLayout,
    options: &StageOptions,
    expected: &PoseSet,
) -> Result<VerificationReport> {
    let circuit = build_unified(layout, options)?;
    let hadamards = resource_counts(&circuit).count(GateKind::H);
    let state = run(&circuit, &encode_state(grid, layout)?)?;
    let branches = decode_branches(&state, layout, grid.max_abs_weight())?;
    let expected_mass = 0.5f64.powi(hadamards as i32);

    let simulated: BTreeMap<ControlSetting, (OccupancyGrid, f64)> = branches
        .into_iter()
        .map(|b| (b.setting, (b.grid, b.mass)))
        .collect();
    let keys: BTreeSet<ControlSetting> = simulated.keys().chain(expected.poses().keys()).copied().collect();

    let outcomes: Vec<(ControlSetting, f64, Option<String>)> = keys
        .into_par_iter()
        .map(|key| match (simulated.get(&key), expected.get(&key)) {
            (Some(_), None) => (key, 0.0, Some("branch absent from the oracle".to_string())),
            (None, Some(_)) => (key, 0.0, Some("branch absent from the simulated state".to_string())),
            (None, None) => unreachable!(),
            (Some((got, mass)), Some(want)) => {
                let dev = got.max_deviation(want);
                let mut problems = Vec::new();
                let same_cells = got.len() == want.len() && got.cells().all(|(c, _)| want.weight(c) != 0.0);
                if !same_cells {
                    problems.push(format!(
                        "occupied cells differ ({} simulated, {} expected)",
                        got.len(),
                        want.len()
                    ));
                }
                if dev.is_nan() || dev >= WEIGHT_TOLERANCE {
                    problems.push(format!("weight deviation {dev:.3e}"));
                }
                if (mass - expected_mass).abs() > MASS_TOLERANCE {
                    problems.push(format!("probability mass {mass:e}, expected {expected_mass:e}"));
                }
                let why = (!problems.is_empty()).then(|| problems.join("; "));
                (key, dev, why)
            }
        })
        .collect();

    let mut report = VerificationReport {
        total_branches: outcomes.len(),
        matched: 0,
        max_weight_deviation: 0.0,
        mismatches: Vec::new(),
        passed: false,
    };
    for (key, dev, why) in outcomes {
        report.max_weight_deviation = report.max_weight_deviation.max(dev);
        match why {
            None => report.matched += 1,
            Some(why) => report.mismatches.push((key, why)),
        }
    }
    report.passed =
        report.matched == report.total_branches && report.max_weight_deviation < WEIGHT_TOLERANCE;
    Ok(report)
}
