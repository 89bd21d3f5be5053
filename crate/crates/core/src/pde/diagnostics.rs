use serde::Serialize;

use crate::error::{Error, Result};
use crate::pde::newton::{newton_solve, HalfStripSolution, NewtonConfig};
use crate::pde::problem::{HalfStripProblem, StripGeometry};
use crate::profile::ProfileSpec;

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    /// `max_x u − min_x u` on every row, bottom to top.
    pub row_defects: Vec<f64>,
    pub worst_row: usize,
    pub worst_defect: f64,
    /// Defect of each Newton iterate, starting with the initial guess.
    pub defect_history: Vec<f64>,
    /// Running minimum of `defect_history`; nonincreasing by construction.
    pub best_so_far: Vec<f64>,
}

pub fn symmetry_diagnostic(solution: &HalfStripSolution) -> SymmetryReport {
    let nx = solution.problem.geometry.nx;
    let row_defects: Vec<f64> = solution
        .field
        .chunks(nx)
        .map(|row| {
            let lo = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .collect();
    let (worst_row, worst_defect) =
        row_defects
            .iter()
            .cloned()
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (k, d)| if d > best.1 { (k, d) } else { best },
            );
    let defect_history: Vec<f64> = solution.history.iter().map(|h| h.symmetry_defect).collect();
    let best_so_far = defect_history
        .iter()
        .scan(f64::INFINITY, |m, d| {
            *m = m.min(*d);
            Some(*m)
        })
        .collect();
    SymmetryReport {
        row_defects,
        worst_row,
        worst_defect,
        defect_history,
        best_so_far,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub nz: usize,
    pub h: f64,
    /// Max error over rows with `z ≥ H/4`.
    pub smooth_error: f64,
    /// Max error over all rows.
    pub full_error: f64,
    pub newton_iters: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log error` against `log h`.
    pub smooth_order: f64,
    pub full_order: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct StudyConfig {
    pub nx: usize,
    pub length: f64,
    pub singular_correction: bool,
    pub newton: NewtonConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            nx: 1,
            length: 1.0,
            singular_correction: true,
            newton: NewtonConfig {
                tol: 1e-13,
                ..NewtonConfig::default()
            },
        }
    }
}

/// Solves the x-independent problem for each `nz` and compares the row means
/// with the 1-D profile of `spec` sampled at the same heights.
pub fn convergence_study(
    spec: &ProfileSpec,
    nz_list: &[usize],
    height: f64,
    cfg: &StudyConfig,
) -> Result<ConvergenceTable> {
    spec.gamma.require_existence()?;
    if nz_list.len() < 2 {
        return Err(Error::Domain(
            "a convergence study needs at least two resolutions".into(),
        ));
    }
    let mut rows = Vec::with_capacity(nz_list.len());
    for &nz in nz_list {
        let geometry = StripGeometry {
            length: cfg.length,
            height,
            nx: cfg.nx,
            nz,
        };
        let mut problem = HalfStripProblem::from_profile(spec, geometry, 0.0, 0)?;
        problem.singular_correction = cfg.singular_correction;
        let solution = newton_solve(&problem, &cfg.newton)?;
        let reference = problem
            .reference
            .as_ref()
            .expect("profile-based problem has a reference");
        let means = solution.row_means();
        let mut full: f64 = 0.0;
        for (m, r) in means.iter().zip(reference) {
            full = full.max((m - r).abs());
        }
        rows.push(ConvergenceRow {
            nz,
            h: geometry.hz(),
            smooth_error: solution.profile_error,
            full_error: full,
            newton_iters: solution.newton_iters,
        });
    }
    let smooth_order = fitted_order(rows.iter().map(|r| (r.h, r.smooth_error)));
    let full_order = fitted_order(rows.iter().map(|r| (r.h, r.full_error)));
    Ok(ConvergenceTable {
        rows,
        smooth_order,
        full_order,
    })
}

/// Least-squares slope of `log e` against `log h`.
pub fn fitted_order(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::GammaParam;

    #[test]
    fn constant_field_has_zero_defect() {
        let spec = ProfileSpec::from_energy(GammaParam::new(3.0).unwrap(), 0.5).unwrap();
        let geometry = StripGeometry {
            length: 2.0,
            height: 2.0,
            nx: 4,
            nz: 11,
        };
        let problem = HalfStripProblem::from_profile(&spec, geometry, 0.0, 0).unwrap();
        let snap = HalfStripSolution::from_field(&problem, problem.start_field()).unwrap();
        let report = symmetry_diagnostic(&snap);
        assert!(report.row_defects.iter().all(|d| *d == 0.0));
        assert_eq!(report.worst_defect, 0.0);
    }

    #[test]
    fn order_fit_recovers_power_law() {
        let order = fitted_order([0.1, 0.05, 0.025].iter().map(|h| (*h, 3.0 * h * h)));
        assert!((order - 2.0).abs() < 1e-12);
    }
}
