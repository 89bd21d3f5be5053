//! Profiles from the first integral: `t(v)` by quadrature, then inverted.
//!
//! Separating `v' = √(2E + c·v^(1−γ))`, `c = 2/(γ−1)`, gives
//!
//! ```text
//! t(v) = ∫₀^v dw / √(2E + c·w^(1−γ)).
//! ```
//!
//! Near `w = 0` the integrand behaves like `w^((γ−1)/2)/√c`, with unbounded
//! derivatives for γ < 3. Substituting `w = s^q`, `q = 2/(γ+1)` turns the
//! piece below the crossover `c·w^(1−γ) = 2E` into
//! `q ∫ ds / √(c + 2E·s^(2(γ−1)/(γ+1)))`, which is bounded with a nonzero
//! limit at `s = 0`. Above the crossover the original integrand is already
//! smooth and nearly constant.

use crate::error::{Error, Result};
use crate::numerics::{integrate, solve_bracketed, QuadConfig, RootConfig};
use crate::ode::grid::profile_grid;
use crate::profile::{power_coefficient, ProfileSpec};
use crate::sampled::{energy_drift, relative_residual, Method, SampledProfile};

/// Time at which the profile `spec` reaches height `v`.
pub fn time_of_value(spec: &ProfileSpec, v: f64, cfg: &QuadConfig) -> Result<f64> {
    spec.gamma.require_existence()?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(format!("time_of_value needs v > 0, got {v}")));
    }
    let g = spec.gamma.value();
    let e = spec.energy;
    let c = 2.0 / (g - 1.0);
    let crossover = if e > 0.0 {
        (c / (2.0 * e)).powf(1.0 / (g - 1.0))
    } else {
        f64::INFINITY
    };
    let w_split = v.min(crossover);

    let q = 2.0 / (g + 1.0);
    let alpha = 2.0 * (g - 1.0) / (g + 1.0);
    let s_split = w_split.powf((g + 1.0) / 2.0);
    let inner = integrate(
        |s: f64| q / (c + 2.0 * e * s.powf(alpha)).sqrt(),
        0.0,
        s_split,
        cfg,
    )?;
    let mut t = inner.value;
    if v > w_split {
        let outer = integrate(
            |w: f64| 1.0 / (2.0 * e + c * w.powf(1.0 - g)).sqrt(),
            w_split,
            v,
            cfg,
        )?;
        t += outer.value;
    }
    Ok(t)
}

/// Inverts [`time_of_value`]: the height `v(t)`, searching upward from
/// `lower` (any known lower bound, e.g. the previous grid node).
pub fn value_at_time(spec: &ProfileSpec, t: f64, lower: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    // The power branch is a lower bound for every member of the family.
    let a = power_coefficient(spec.gamma)?;
    let mut lo = lower.max(a * t.powf(spec.gamma.boundary_exponent()));
    let f = |v: f64| time_of_value(spec, v, cfg).map(|tv| tv - t);
    if f(lo)? >= 0.0 {
        // Already at (or numerically past) the target.
        return Ok(lo);
    }
    let mut hi = lo * 2.0;
    let mut grown = 0;
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        grown += 1;
        if grown > 2000 || !hi.is_finite() {
            return Err(Error::numerics("could not bracket v(t)", hi));
        }
    }
    let root_cfg = RootConfig {
        x_rel_tol: 2.0 * f64::EPSILON,
        x_abs_tol: 0.0,
        max_iterations: 300,
    };
    solve_bracketed(f, lo, hi, &root_cfg)
}

/// Builds the profile of `spec` on an arbitrary increasing grid starting
/// at `t = 0`.
pub fn profile_on_grid(
    spec: &ProfileSpec,
    grid: &[f64],
    cfg: &QuadConfig,
) -> Result<SampledProfile> {
    spec.gamma.require_existence()?;
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "grid must start at 0 and increase strictly".into(),
        ));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    values.push(0.0);
    slopes.push(f64::INFINITY);
    let mut prev = 0.0;
    for &t in &grid[1..] {
        let v = value_at_time(spec, t, prev, cfg)?;
        values.push(v);
        slopes.push(spec.slope_at_value(v));
        prev = v;
    }
    let g = spec.gamma.value();
    Ok(SampledProfile {
        spec: *spec,
        residual_max: relative_residual(g, grid, &values),
        energy_drift: energy_drift(g, spec.energy, &values, &slopes),
        grid: grid.to_vec(),
        values,
        slopes,
        method: Method::Quadrature,
    })
}

/// Profile on the default grid layout over `[0, t_max]` with `n` nodes.
pub fn profile_build(spec: &ProfileSpec, t_max: f64, n: usize) -> Result<SampledProfile> {
    let grid = profile_grid(t_max, n)?;
    profile_on_grid(spec, &grid, &QuadConfig::default())
}
