//! Far-field behaviour of a sampled profile.
//!
//! Along a profile `v'² = m² + c·v^(1−γ)` exactly, so regressing `v'²` on
//! `v^(1−γ)` over the tail and reading off the intercept extrapolates the
//! slope to `t = ∞`. The decay exponent of `v' − m` is then fitted in
//! log-log coordinates over the last decade; for `m > 0` it should be close
//! to `1 − γ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampled::SampledProfile;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoteEstimate {
    pub slope_inf: f64,
    pub rate: f64,
    pub nodes_used: usize,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

pub fn asymptote_estimate(profile: &SampledProfile) -> Result<AsymptoteEstimate> {
    let t_max = *profile
        .grid
        .last()
        .ok_or_else(|| Error::Domain("empty profile".into()))?;
    let g = profile.gamma().value();
    let tail: Vec<usize> = (0..profile.len())
        .filter(|&i| {
            profile.grid[i] >= 0.1 * t_max
                && profile.values[i] > 0.0
                && profile.slopes[i].is_finite()
        })
        .collect();
    if tail.len() < 4 {
        return Err(Error::numerics(
            format!(
                "only {} nodes in the last decade; extend t_max or add nodes",
                tail.len()
            ),
            tail.len() as f64,
        ));
    }
    let m_spec = profile.spec.slope_inf;
    let last_slope = profile.slopes[*tail.last().expect("tail nonempty")];
    if m_spec > 0.0 && last_slope > 1.1 * m_spec {
        return Err(Error::numerics(
            format!("tail too short: final slope {last_slope} not within 10% of {m_spec}"),
            last_slope / m_spec - 1.0,
        ));
    }

    let xs: Vec<f64> = tail
        .iter()
        .map(|&i| profile.values[i].powf(1.0 - g))
        .collect();
    let ys: Vec<f64> = tail.iter().map(|&i| profile.slopes[i].powi(2)).collect();
    let (intercept, _) = least_squares(&xs, &ys);
    let slope_inf = intercept.max(0.0).sqrt();

    let mut lt = Vec::with_capacity(tail.len());
    let mut le = Vec::with_capacity(tail.len());
    for &i in &tail {
        let excess = profile.slopes[i] - slope_inf;
        if excess > 0.0 {
            lt.push(profile.grid[i].ln());
            le.push(excess.ln());
        }
    }
    if lt.len() < 3 {
        return Err(Error::numerics(
            "slope excess vanished in the tail; cannot fit a rate",
            0.0,
        ));
    }
    let (_, rate) = least_squares(&lt, &le);
    Ok(AsymptoteEstimate {
        slope_inf,
        rate,
        nodes_used: tail.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::quadrature::profile_build;
    use crate::profile::{GammaParam, ProfileSpec};

    fn spec(gv: f64, e: f64) -> ProfileSpec {
        ProfileSpec::from_energy(GammaParam::new(gv).unwrap(), e).unwrap()
    }

    #[test]
    fn normalized_gamma3_rate_is_minus_two() {
        let p = profile_build(&spec(3.0, 0.5), 100.0, 1001).unwrap();
        let est = asymptote_estimate(&p).unwrap();
        assert!((est.slope_inf - 1.0).abs() < 1e-9, "{}", est.slope_inf);
        assert!((est.rate + 2.0).abs() < 0.15, "{}", est.rate);
    }

    #[test]
    fn gamma2_rate_is_minus_one() {
        let p = profile_build(&spec(2.0, 0.5), 200.0, 801).unwrap();
        let est = asymptote_estimate(&p).unwrap();
        assert!((est.slope_inf - 1.0).abs() < 1e-8);
        assert!((est.rate + 1.0).abs() < 0.15, "{}", est.rate);
    }

    #[test]
    fn power_branch_slope_goes_to_zero() {
        let p = profile_build(&spec(3.0, 0.0), 100.0, 401).unwrap();
        let est = asymptote_estimate(&p).unwrap();
        assert!(est.slope_inf < 1e-6, "{}", est.slope_inf);
        // v' ~ t^(-(γ-1)/(γ+1)) on the power branch
        assert!((est.rate + 0.5).abs() < 0.05, "{}", est.rate);
    }

    #[test]
    fn short_tail_is_rejected() {
        let p = profile_build(&spec(3.0, 0.5), 2.0, 5).unwrap();
        assert!(matches!(
            asymptote_estimate(&p),
            Err(Error::Numerics { .. })
        ));
    }
}
