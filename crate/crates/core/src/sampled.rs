//! Discretized 1-D profiles and their quality measures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{antiderivative_unchecked, GammaParam, ProfileSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    Shooting,
    ClosedForm,
}

/// Samples `(t_i, v_i, v'_i)` of one family member on `0 = t_0 < … < t_n`.
///
/// `v'_0` is `+∞`: every profile leaves the boundary with infinite slope.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    pub spec: ProfileSpec,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub method: Method,
    /// Max relative defect of `-v'' = v^(-γ)` with `v''` from three-point
    /// differences; see [`relative_residual`].
    pub residual_max: f64,
    /// `max |½v'² + F(v) − E| / max(1, |E|)` over the nodes the method
    /// produced by integration (all nodes for quadrature/closed form).
    pub energy_drift: f64,
}

impl SampledProfile {
    pub fn gamma(&self) -> GammaParam {
        self.spec.gamma
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Checks the structural invariants: grid increasing, `v_0 = 0`, `v`
    /// increasing, `v'` nonincreasing and not below the asymptotic slope.
    /// `slope_tol` is the relative slack allowed on the slope conditions.
    pub fn check_shape(&self, slope_tol: f64) -> Result<()> {
        let n = self.grid.len();
        if n < 2 || self.values.len() != n || self.slopes.len() != n {
            return Err(Error::Spec(
                "profile arrays must have equal length >= 2".into(),
            ));
        }
        if self.grid[0] != 0.0 || self.values[0] != 0.0 {
            return Err(Error::Spec("profile must start at t = 0 with v = 0".into()));
        }
        let m = self.spec.slope_inf;
        for i in 1..n {
            if self.grid[i] <= self.grid[i - 1] {
                return Err(Error::Spec(format!("grid not increasing at node {i}")));
            }
            if !(self.values[i] > self.values[i - 1]) {
                return Err(Error::Spec(format!("values not increasing at node {i}")));
            }
            let s = self.slopes[i];
            if s > self.slopes[i - 1] * (1.0 + slope_tol) {
                return Err(Error::Spec(format!("slope increases at node {i}")));
            }
            if s < m * (1.0 - slope_tol) {
                return Err(Error::Spec(format!(
                    "slope {s} below asymptotic slope {m} at node {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Max over interior nodes of `|−v''_h − v^(−γ)| / v^(−γ)`, where `v''_h`
/// is the nonuniform three-point second difference. When the grid starts at
/// `t = 0` the node next to it is skipped, since `v''` is unbounded there.
/// Returns 0 when no node qualifies.
pub fn relative_residual(gamma: f64, grid: &[f64], values: &[f64]) -> f64 {
    let n = grid.len();
    let first = if grid.first() == Some(&0.0) { 2 } else { 1 };
    let mut worst: f64 = 0.0;
    for i in first..n.saturating_sub(1) {
        let hm = grid[i] - grid[i - 1];
        let hp = grid[i + 1] - grid[i];
        let d2 =
            2.0 * ((values[i + 1] - values[i]) / hp - (values[i] - values[i - 1]) / hm) / (hp + hm);
        let source = values[i].powf(-gamma);
        worst = worst.max((-d2 - source).abs() / source);
    }
    worst
}

/// `max_i |½v'_i² + F(v_i) − E| / max(1, |E|)` over the given nodes
/// (nodes with non-finite slope or nonpositive value are skipped).
pub fn energy_drift(gamma: f64, energy: f64, values: &[f64], slopes: &[f64]) -> f64 {
    values
        .iter()
        .zip(slopes)
        .filter(|(v, s)| **v > 0.0 && s.is_finite())
        .map(|(&v, &s)| (0.5 * s * s + antiderivative_unchecked(gamma, v) - energy).abs())
        .fold(0.0, f64::max)
        / energy.abs().max(1.0)
}

/// Applies `u(t) = λ^(−2/(γ+1)) v(λ t)` to a sampled profile: the grid is
/// divided by `λ`, values multiplied by `λ^(−2/(γ+1))` and slopes by
/// `λ^((γ−1)/(γ+1))`. Composes as a group action: rescaling by `λ₁` then
/// `λ₂` equals rescaling by `λ₁λ₂`.
pub fn rescale(base: &SampledProfile, lambda: f64) -> Result<SampledProfile> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let gamma = base.gamma();
    let value_scale = lambda.powf(-gamma.boundary_exponent());
    let slope_scale = lambda.powf(gamma.slope_exponent());
    let spec = if base.spec.is_power_branch() {
        base.spec
    } else {
        ProfileSpec::from_slope(gamma, base.spec.slope_inf * slope_scale)?
    };
    let grid: Vec<f64> = base.grid.iter().map(|t| t / lambda).collect();
    let values: Vec<f64> = base.values.iter().map(|v| v * value_scale).collect();
    let slopes: Vec<f64> = base.slopes.iter().map(|s| s * slope_scale).collect();
    // Energy differences scale like slope², so the absolute drift does too.
    let drift_abs = base.energy_drift * base.spec.energy.abs().max(1.0) * slope_scale * slope_scale;
    Ok(SampledProfile {
        residual_max: relative_residual(gamma.value(), &grid, &values),
        energy_drift: drift_abs / spec.energy.abs().max(1.0),
        spec,
        grid,
        values,
        slopes,
        method: base.method,
    })
}

/// Maps a sampled profile onto the family member `spec` by rescaling.
/// Both must belong to the same γ and be off the power branch.
pub fn scaling_apply(spec: &ProfileSpec, base: &SampledProfile) -> Result<SampledProfile> {
    if spec.gamma != base.gamma() {
        return Err(Error::Spec(format!(
            "gamma mismatch: target {} vs base {}",
            spec.gamma.value(),
            base.gamma().value()
        )));
    }
    if spec.is_power_branch() || base.spec.is_power_branch() {
        return Err(Error::Spec(
            "the power branch is a fixed point of the scaling".into(),
        ));
    }
    let mut out = rescale(base, spec.lambda / base.spec.lambda)?;
    out.spec = *spec;
    Ok(out)
}
