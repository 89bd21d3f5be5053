//! Near-boundary expansion of the profiles.
//!
//! Writing the integrand of `t(v)` as `w^((γ−1)/2)/√c · (1 + x(w))^(−½)` with
//! `c = 2/(γ−1)` and `x(w) = E(γ−1)·w^(γ−1)`, the binomial series integrates
//! term by term:
//!
//! ```text
//! t(v) = v^a/√c · Σ_k  C(−½, k) x(v)^k / (a + k(γ−1)),    a = (γ+1)/2,
//! ```
//!
//! convergent for `x(v) < 1`. Keeping `k ≤ 1` and inverting gives the
//! two-term start
//!
//! ```text
//! v(t) ≈ A(γ) t^(2/(γ+1)) · (1 + c₁ t^(2(γ−1)/(γ+1))),   c₁ = E(γ−1)A^(γ−1)/(3γ−1),
//! ```
//!
//! since `A^a = a√c`; the leading coefficient is E-independent. The full sum
//! is inverted with Newton's method (`dt/dv = 1/v'`) for starts where the
//! two-term form is not accurate enough.

use crate::error::{Error, Result};
use crate::profile::{power_coefficient, ProfileSpec};

/// Largest `x(v)` at which the full series is evaluated.
pub const SERIES_X_MAX: f64 = 0.5;

/// Largest relative size of the correction term accepted by [`series_start`].
pub const TWO_TERM_MAX_CORRECTION: f64 = 1e-4;

/// Coefficient `c₁` and exponent of the first correction.
pub fn first_correction(spec: &ProfileSpec) -> Result<(f64, f64)> {
    let a = power_coefficient(spec.gamma)?;
    let g = spec.gamma.value();
    let c1 = spec.energy * (g - 1.0) * a.powf(g - 1.0) / (3.0 * g - 1.0);
    Ok((c1, 2.0 * (g - 1.0) / (g + 1.0)))
}

/// Two-term start `(v(t₀), v'(t₀))`; the slope comes from the first
/// integral at the returned value.
pub fn series_start(spec: &ProfileSpec, t0: f64) -> Result<(f64, f64)> {
    if !(t0 > 0.0) {
        return Err(Error::Domain(format!(
            "series start needs t0 > 0, got {t0}"
        )));
    }
    let a = power_coefficient(spec.gamma)?;
    let (c1, alpha) = first_correction(spec)?;
    let correction = c1 * t0.powf(alpha);
    if correction.abs() >= TWO_TERM_MAX_CORRECTION {
        return Err(Error::Step(format!(
            "t0 = {t0:e} too large for the two-term start (correction {correction:e}); use a smaller t0"
        )));
    }
    let v = a * t0.powf(spec.gamma.boundary_exponent()) * (1.0 + correction);
    Ok((v, spec.slope_at_value(v)))
}

/// `x(v) = E(γ−1)v^(γ−1)`, the expansion variable.
pub fn expansion_variable(spec: &ProfileSpec, v: f64) -> f64 {
    let g = spec.gamma.value();
    spec.energy * (g - 1.0) * v.powf(g - 1.0)
}

/// Height below which `x(v) ≤ x_max`.
pub fn validity_limit(spec: &ProfileSpec, x_max: f64) -> f64 {
    if spec.energy == 0.0 {
        return f64::INFINITY;
    }
    let g = spec.gamma.value();
    (x_max / (spec.energy * (g - 1.0))).powf(1.0 / (g - 1.0))
}

/// `t(v)` from the full series. `None` when `x(v) > SERIES_X_MAX`.
pub fn series_time(spec: &ProfileSpec, v: f64) -> Option<f64> {
    let x = expansion_variable(spec, v);
    if !(v > 0.0) || x > SERIES_X_MAX {
        return None;
    }
    let g = spec.gamma.value();
    let a = 0.5 * (g + 1.0);
    let c = 2.0 / (g - 1.0);
    let mut binom = 1.0;
    let mut xk = 1.0;
    let mut sum = 1.0 / a;
    for k in 1..400 {
        let kf = k as f64;
        binom *= -(2.0 * kf - 1.0) / (2.0 * kf);
        xk *= x;
        let term = binom * xk / (a + kf * (g - 1.0));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    Some(v.powf(a) / c.sqrt() * sum)
}

/// `v(t)` from the full series, inverted by Newton's method.
pub fn series_value(spec: &ProfileSpec, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let a = power_coefficient(spec.gamma)?;
    let mut v = a * t.powf(spec.gamma.boundary_exponent());
    for _ in 0..100 {
        let tv = series_time(spec, v).ok_or_else(|| {
            Error::Step(format!(
                "t = {t:e} lies outside the convergence region of the boundary series"
            ))
        })?;
        let step = (tv - t) * spec.slope_at_value(v);
        v -= step;
        if step.abs() <= 2.0 * f64::EPSILON * v.abs() {
            return Ok(v);
        }
    }
    Err(Error::numerics(
        "Newton inversion of the boundary series stalled",
        t,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::GammaParam;

    fn spec(gv: f64, e: f64) -> ProfileSpec {
        ProfileSpec::from_energy(GammaParam::new(gv).unwrap(), e).unwrap()
    }

    #[test]
    fn power_branch_has_no_correction() {
        let (v, _) = series_start(&spec(3.0, 0.0), 1e-6).unwrap();
        assert!((v - 2f64.sqrt() * 1e-3).abs() < 1e-18);
    }

    #[test]
    fn normalized_gamma3_matches_closed_form() {
        let s = spec(3.0, 0.5);
        assert!((first_correction(&s).unwrap().0 - 0.25).abs() < 1e-15);
        let t0 = 1e-6;
        let (v, vp) = series_start(&s, t0).unwrap();
        let exact = (t0 * t0 + 2.0 * t0).sqrt();
        assert!((v - exact).abs() <= 1e-8 * exact);
        let exact_slope = (t0 + 1.0) / exact;
        assert!((vp - exact_slope).abs() <= 1e-8 * exact_slope);
    }

    #[test]
    fn leading_coefficient_is_energy_independent() {
        let t0 = 1e-6f64;
        for e in [0.0, 0.5, 2.0, 8.0] {
            let (v, _) = series_start(&spec(3.0, e), t0).unwrap();
            assert!((v / t0.sqrt() - 2f64.sqrt()).abs() < 1e-4);
        }
    }

    #[test]
    fn large_start_rejected() {
        assert!(matches!(
            series_start(&spec(3.0, 0.5), 0.1),
            Err(Error::Step(_))
        ));
    }

    #[test]
    fn full_series_inverts_closed_form() {
        let s = spec(3.0, 0.5);
        // x(v) = v² here, so the series holds up to v ≈ 0.7.
        for t in [1e-9, 1e-4, 0.01, 0.2] {
            let v = series_value(&s, t).unwrap();
            let exact = (t * t + 2.0 * t).sqrt();
            assert!((v - exact).abs() <= 4e-15 * exact, "t={t}: {v} vs {exact}");
        }
        assert!(series_value(&s, 5.0).is_err());
        assert!(series_time(&s, 1.0).is_none());
    }
}
