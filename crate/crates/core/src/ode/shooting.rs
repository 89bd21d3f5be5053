//! Direct integration of `v'' = −v^(−γ)` as a first-order system, started
//! from the boundary series.
//!
//! Energy conservation is the accuracy monitor, and it constrains where the
//! integration may start: an integrator with relative accuracy δ perturbs
//! the first integral by about `|F(v)|·δ`, and `|F(v)| ~ v^(1−γ)/(γ−1)`
//! blows up at the boundary. The start height is therefore the smaller of
//! the height where `|F| = 8·max(1, E)/(γ−1)` and the height where the
//! series variable reaches `x = ¼`; the matching time is clamped to
//! `[10⁻⁶, 10⁻¹]·t_max` as long as the series still converges there. Nodes
//! below the start are taken from the series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{Dopri5, QuadConfig, StepControl};
use crate::ode::grid::profile_grid;
use crate::ode::quadrature::time_of_value;
use crate::ode::series::{
    expansion_variable, series_time, series_value, validity_limit, SERIES_X_MAX,
};
use crate::profile::ProfileSpec;
use crate::sampled::{energy_drift, relative_residual, Method, SampledProfile};

#[derive(Debug, Clone, Copy)]
pub struct ShootingConfig {
    pub control: StepControl,
    /// Start time; chosen automatically when `None`.
    pub t0: Option<f64>,
    /// Allowed relative disagreement between the series start and the
    /// quadrature time of the same height.
    pub start_gate_rtol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            control: StepControl {
                rel_tol: 1e-12,
                abs_tol: 1e-15,
                ..StepControl::default()
            },
            t0: None,
            start_gate_rtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShootingReport {
    pub t0: f64,
    pub v0: f64,
    pub terminal_slope: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Debug, Clone)]
pub struct ShootingOutcome {
    pub profile: SampledProfile,
    pub report: ShootingReport,
}

/// Automatic start time for a run ending at `t_max`.
pub fn default_start_time(spec: &ProfileSpec, t_max: f64) -> Result<f64> {
    spec.gamma.require_existence()?;
    let g = spec.gamma.value();
    let v_energy = (8.0 * spec.energy.max(1.0)).powf(-1.0 / (g - 1.0));
    let v_start = v_energy.min(validity_limit(spec, 0.25));
    let t_cap = series_time(spec, v_start).unwrap_or(f64::INFINITY);
    let mut t0 = t_cap.min(0.1 * t_max);
    let t_lo = 1e-6 * t_max;
    if t0 < t_lo {
        if let Ok(v_lo) = series_value(spec, t_lo) {
            if expansion_variable(spec, v_lo) <= SERIES_X_MAX {
                t0 = t_lo;
            }
        }
    }
    Ok(t0)
}

/// Shooting on the default grid layout.
pub fn shooting_integrate(
    spec: &ProfileSpec,
    t_max: f64,
    n: usize,
    cfg: &ShootingConfig,
) -> Result<ShootingOutcome> {
    let grid = profile_grid(t_max, n)?;
    shooting_on_grid(spec, &grid, cfg)
}

pub fn shooting_on_grid(
    spec: &ProfileSpec,
    grid: &[f64],
    cfg: &ShootingConfig,
) -> Result<ShootingOutcome> {
    spec.gamma.require_existence()?;
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "grid must start at 0 and increase strictly".into(),
        ));
    }
    let t_max = *grid.last().expect("nonempty grid");
    let t0 = match cfg.t0 {
        Some(t0) if t0 > 0.0 && t0 <= t_max => t0,
        Some(t0) => return Err(Error::Domain(format!("t0 = {t0:e} must lie in (0, t_max]"))),
        None => default_start_time(spec, t_max)?,
    };
    let v0 = series_value(spec, t0)?;
    let vp0 = spec.slope_at_value(v0);

    let t_quad = time_of_value(spec, v0, &QuadConfig::default())?;
    if (t_quad - t0).abs() > cfg.start_gate_rtol * t0 {
        return Err(Error::Step(format!(
            "series start disagrees with quadrature at t0 = {t0:e} (quadrature gives {t_quad:e})"
        )));
    }

    let g = spec.gamma.value();
    let rhs = move |_t: f64, y: &[f64; 2]| [y[1], -y[0].powf(-g)];
    let solver = Dopri5::new(cfg.control);

    let n = grid.len();
    let mut values = vec![0.0; n];
    let mut slopes = vec![f64::INFINITY; n];
    let mut first_integrated = n;
    let mut t = t0;
    let mut y = [v0, vp0];
    let mut h = (cfg.control.h_init * t0).max(f64::MIN_POSITIVE);
    let (mut accepted, mut rejected) = (0, 0);
    for i in 1..n {
        let ti = grid[i];
        if ti < t0 {
            let v = series_value(spec, ti)?;
            values[i] = v;
            slopes[i] = spec.slope_at_value(v);
            continue;
        }
        first_integrated = first_integrated.min(i);
        if ti > t {
            let adv = solver.advance(&rhs, t, y, ti, h, |s| s[0] > 0.0, |_| false)?;
            t = adv.t;
            y = adv.y;
            h = adv.h_next;
            accepted += adv.accepted;
            rejected += adv.rejected;
        }
        values[i] = y[0];
        slopes[i] = y[1];
    }

    let mut drift = energy_drift(g, spec.energy, &[v0], &[vp0]);
    if first_integrated < n {
        drift = drift.max(energy_drift(
            g,
            spec.energy,
            &values[first_integrated..],
            &slopes[first_integrated..],
        ));
    }
    let terminal_slope = slopes[n - 1];
    Ok(ShootingOutcome {
        profile: SampledProfile {
            spec: *spec,
            residual_max: relative_residual(g, grid, &values),
            energy_drift: drift,
            grid: grid.to_vec(),
            values,
            slopes,
            method: Method::Shooting,
        },
        report: ShootingReport {
            t0,
            v0,
            terminal_slope,
            accepted_steps: accepted,
            rejected_steps: rejected,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::GammaParam;

    fn spec(gv: f64, e: f64) -> ProfileSpec {
        ProfileSpec::from_energy(GammaParam::new(gv).unwrap(), e).unwrap()
    }

    #[test]
    fn normalized_gamma3_against_closed_form() {
        let out =
            shooting_integrate(&spec(3.0, 0.5), 100.0, 1001, &ShootingConfig::default()).unwrap();
        let p = &out.profile;
        for (t, v) in p.grid.iter().zip(&p.values).skip(1) {
            let exact = (t * t + 2.0 * t).sqrt();
            assert!((v - exact).abs() <= 1e-8 * exact, "t={t}: {v} vs {exact}");
        }
        let expected = 101.0 / 10200f64.sqrt();
        assert!((out.report.terminal_slope - expected).abs() < 1e-9);
        assert!(p.energy_drift <= 1e-8, "drift {}", p.energy_drift);
    }

    #[test]
    fn explicit_start_time_is_honoured() {
        let cfg = ShootingConfig {
            t0: Some(1e-4),
            ..Default::default()
        };
        let out = shooting_integrate(&spec(3.0, 0.5), 10.0, 101, &cfg).unwrap();
        assert_eq!(out.report.t0, 1e-4);
        let bad = ShootingConfig {
            t0: Some(20.0),
            ..Default::default()
        };
        assert!(shooting_integrate(&spec(3.0, 0.5), 10.0, 101, &bad).is_err());
    }

    #[test]
    fn start_time_stays_inside_run() {
        for (gv, e) in [(1.05, 10.0), (1.5, 0.0), (6.0, 10.0), (3.0, 1e-6)] {
            let s = spec(gv, e);
            let t0 = default_start_time(&s, 50.0).unwrap();
            assert!(t0 > 0.0 && t0 <= 5.0, "gamma {gv}, E {e}: t0 = {t0}");
            assert!(series_value(&s, t0).is_ok());
        }
    }
}
