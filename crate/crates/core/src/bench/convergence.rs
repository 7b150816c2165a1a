//! Convergence studies over uniform refinement levels.

use serde::{Deserialize, Serialize};

use super::cases::{solve_level, StudyConfig};
use super::largedef::{run_largedef, LargeDefConfig};

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h: f64,
    pub dofs: usize,
    pub l2_error: f64,
    /// Observed order against the previous level; `None` on the first level
    /// or after a failed level.
    pub rate: Option<f64>,
    /// Failure message when the level could not be solved.
    pub status: Option<String>,
}

/// Results of a convergence study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub config: StudyConfig,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Rate between the last two levels.
    pub fn final_rate(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.rate)
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.status.is_some())
    }
}

/// Observed convergence order between two levels.
pub fn observed_rate(e0: f64, e1: f64, h0: f64, h1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

/// Solves levels `0..levels` and tabulates errors and rates. Failing levels
/// are recorded with their error message instead of aborting the study.
///
/// For the large-deformation cases the error column holds `‖u_w − u_c‖`
/// between the weak and the conforming solution.
pub fn run_convergence(config: &StudyConfig) -> ConvergenceReport {
    if let Some(load_case) = config.case.load_case() {
        let mut ld = LargeDefConfig::new(load_case);
        ld.p = config.p;
        ld.base = config.ratio[0] * config.base;
        ld.levels = config.levels;
        ld.dual_refinement = config.dual_refinement;
        let rows = run_largedef(&ld)
            .into_iter()
            .map(|r| ConvergenceRow {
                level: r.level,
                h: r.h,
                dofs: r.dofs,
                l2_error: r.relative_error,
                rate: r.rate,
                status: r.status,
            })
            .collect();
        return ConvergenceReport { config: config.clone(), rows };
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(config.levels);
    for level in 0..config.levels {
        let h = config.mesh_size(level);
        let row = match solve_level(config, level) {
            Ok(sol) => {
                let rate = rows
                    .last()
                    .filter(|prev| prev.status.is_none())
                    .map(|prev| observed_rate(prev.l2_error, sol.error, prev.h, h));
                ConvergenceRow { level, h, dofs: sol.dofs, l2_error: sol.error, rate, status: None }
            }
            Err(e) => ConvergenceRow { level, h, dofs: 0, l2_error: f64::NAN, rate: None, status: Some(e.to_string()) },
        };
        rows.push(row);
    }
    ConvergenceReport { config: config.clone(), rows }
}
