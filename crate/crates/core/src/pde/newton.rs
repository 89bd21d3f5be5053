//! Damped Newton iteration for the half-strip system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pde::assemble::{assemble, Discretization};
use crate::pde::problem::HalfStripProblem;

#[derive(Debug, Clone, Copy)]
pub struct NewtonConfig {
    /// Target for the scaled residual (see [`Discretization::scaled_residual_max`]).
    pub tol: f64,
    pub max_iterations: usize,
    /// Smallest damping factor tried before giving up on a step.
    pub min_damping: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 60,
            min_damping: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterateRecord {
    pub residual: f64,
    pub symmetry_defect: f64,
    pub damping: f64,
}

#[derive(Debug, Clone)]
pub struct HalfStripSolution {
    pub problem: HalfStripProblem,
    /// Full field including boundary rows, row-major (`k·nx + i`).
    pub field: Vec<f64>,
    pub residual_max: f64,
    pub newton_iters: usize,
    pub symmetry_defect: f64,
    /// Max over rows with `z ≥ H/4` of |row mean − reference|; NaN without
    /// a reference.
    pub profile_error: f64,
    /// The positivity floor clamped at least one node in the last step.
    pub floor_activated: bool,
    /// Residual and symmetry defect of every iterate, starting with the
    /// initial guess.
    pub history: Vec<IterateRecord>,
}

impl HalfStripSolution {
    /// Diagnostics for an arbitrary field, e.g. an unconverged snapshot.
    pub fn from_field(problem: &HalfStripProblem, field: Vec<f64>) -> Result<Self> {
        let disc = assemble(problem)?;
        let r = disc.residual(&field);
        let residual_max = disc.scaled_residual_max(&field, &r);
        let defect = field_symmetry_defect(&field, problem.geometry.nx);
        Ok(Self {
            profile_error: profile_error(problem, &field),
            problem: problem.clone(),
            field,
            residual_max,
            newton_iters: 0,
            symmetry_defect: defect,
            floor_activated: false,
            history: vec![IterateRecord {
                residual: residual_max,
                symmetry_defect: defect,
                damping: 0.0,
            }],
        })
    }

    /// Column-averaged row values.
    pub fn row_means(&self) -> Vec<f64> {
        let nx = self.problem.geometry.nx;
        self.field
            .chunks(nx)
            .map(|row| row.iter().sum::<f64>() / nx as f64)
            .collect()
    }
}

/// `max_z (max_x u − min_x u)` over all rows.
pub fn field_symmetry_defect(field: &[f64], nx: usize) -> f64 {
    field
        .chunks(nx)
        .map(|row| {
            let (lo, hi) = row
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(*v), hi.max(*v))
                });
            hi - lo
        })
        .fold(0.0, f64::max)
}

fn profile_error(problem: &HalfStripProblem, field: &[f64]) -> f64 {
    let Some(reference) = &problem.reference else {
        return f64::NAN;
    };
    let geom = problem.geometry;
    let nx = geom.nx;
    let mut err: f64 = 0.0;
    for (k, row) in field.chunks(nx).enumerate() {
        if geom.z(k) >= 0.25 * geom.height {
            let mean = row.iter().sum::<f64>() / nx as f64;
            err = err.max((mean - reference[k]).abs());
        }
    }
    err
}

fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves the problem by Newton's method with backtracking on the residual
/// norm and a positivity floor.
pub fn newton_solve(problem: &HalfStripProblem, cfg: &NewtonConfig) -> Result<HalfStripSolution> {
    let disc: Discretization = assemble(problem)?;
    let nx = problem.geometry.nx;
    let mut u = problem.start_field();
    let mut floor_hit = disc.clamp(&mut u);
    let mut r = disc.residual(&u);
    let mut history = Vec::new();
    let mut iters = 0;
    let mut last_damping = 0.0;
    loop {
        let scaled = disc.scaled_residual_max(&u, &r);
        history.push(IterateRecord {
            residual: scaled,
            symmetry_defect: field_symmetry_defect(&u, nx),
            damping: last_damping,
        });
        if scaled <= cfg.tol {
            break;
        }
        if iters >= cfg.max_iterations {
            return Err(non_convergence(iters, &history));
        }
        let chol = disc.jacobian(&u).factor()?;
        let mut delta: Vec<f64> = r.iter().map(|v| -v).collect();
        chol.solve_in_place(&mut delta);

        let merit0 = norm2(&r);
        let mut lambda = 1.0;
        loop {
            let mut trial = u.clone();
            for (t, d) in trial[nx..].iter_mut().zip(&delta) {
                *t += lambda * d;
            }
            let hit = disc.clamp(&mut trial);
            let r_trial = disc.residual(&trial);
            let merit = norm2(&r_trial);
            if merit.is_finite() && merit <= (1.0 - 1e-4 * lambda) * merit0 {
                u = trial;
                r = r_trial;
                floor_hit = hit;
                break;
            }
            lambda *= 0.5;
            if lambda < cfg.min_damping {
                return Err(non_convergence(iters + 1, &history));
            }
        }
        last_damping = lambda;
        iters += 1;
    }
    let residual_max = history.last().map(|h| h.residual).unwrap_or(f64::NAN);
    let defect = field_symmetry_defect(&u, nx);
    Ok(HalfStripSolution {
        profile_error: profile_error(problem, &u),
        problem: problem.clone(),
        field: u,
        residual_max,
        newton_iters: iters,
        symmetry_defect: defect,
        floor_activated: floor_hit,
        history,
    })
}

fn non_convergence(iterations: usize, history: &[IterateRecord]) -> Error {
    let residual_history: Vec<f64> = history.iter().map(|h| h.residual).collect();
    Error::NonConvergence {
        iterations,
        best_residual: residual_history
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min),
        residual_history,
    }
}
