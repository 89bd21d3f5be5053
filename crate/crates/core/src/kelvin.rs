//! Kelvin transform `û(x) = |x|^(2−N) u(x/|x|²)` and a sampled check of
//! the transformed equation `−Δû = |x|^(−β) û^(−γ)`, `β = N + 2 + γ(N−2)`,
//! for the power solution extended to `ℝᴺ₊` as a function of `x_N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{power_coefficient, GammaParam};

/// Default finite-difference step for the sampled Laplacian.
pub const DEFAULT_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KelvinParams {
    pub dim: usize,
    pub gamma: GammaParam,
    pub beta: f64,
}

impl KelvinParams {
    pub fn new(dim: usize, gamma: GammaParam) -> Result<Self> {
        Ok(Self {
            dim,
            gamma,
            beta: kelvin_exponent(dim, gamma.value())?,
        })
    }

    pub fn is_consistent(&self) -> bool {
        kelvin_exponent(self.dim, self.gamma.value()).is_ok_and(|b| b == self.beta)
    }
}

pub fn kelvin_exponent(dim: usize, gamma: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let n = dim as f64;
    Ok(n + 2.0 + gamma * (n - 2.0))
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `|x|^(2−N)·u(x/|x|²)`.
pub fn kelvin_eval<F: Fn(&[f64]) -> f64>(u: F, x: &[f64]) -> Result<f64> {
    let dim = x.len();
    if dim < 2 {
        return Err(Error::Domain(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let r2 = norm_sq(x);
    if !(r2 > 0.0) || !r2.is_finite() {
        return Err(Error::Domain(
            "the Kelvin transform is singular at the origin".into(),
        ));
    }
    let y: Vec<f64> = x.iter().map(|v| v / r2).collect();
    let prefactor = if dim == 2 {
        1.0
    } else {
        r2.powf(0.5 * (2.0 - dim as f64))
    };
    Ok(prefactor * u(&y))
}

/// The power solution `A x_N^(2/(γ+1))` as a function on `ℝᴺ₊`.
pub fn power_field(gamma: GammaParam) -> Result<impl Fn(&[f64]) -> f64> {
    gamma.require_existence()?;
    let a = power_coefficient(gamma)?;
    let p = gamma.boundary_exponent();
    Ok(move |x: &[f64]| a * x[x.len() - 1].powf(p))
}

/// Relative defect of the transformed equation at `x`, with the Laplacian
/// from central differences of step `h`.
pub fn kelvin_defect(params: &KelvinParams, x: &[f64], h: f64) -> Result<f64> {
    let dim = params.dim;
    if x.len() != dim {
        return Err(Error::Domain(format!(
            "point has {} coordinates, expected {dim}",
            x.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(
            "finite-difference step must be positive".into(),
        ));
    }
    let r = norm_sq(x).sqrt();
    if x[dim - 1] <= 4.0 * h || r <= 4.0 * h {
        return Err(Error::Domain(format!(
            "sample point too close to the origin or the boundary for step {h:e}"
        )));
    }
    // The image of x lies at height x_N/|x|², so û is smooth near x.
    let u = power_field(params.gamma)?;
    let uhat = |p: &[f64]| kelvin_eval(&u, p);
    let centre = uhat(x)?;
    let mut lap = 0.0;
    let mut p = x.to_vec();
    for i in 0..dim {
        p[i] = x[i] + h;
        let plus = uhat(&p)?;
        p[i] = x[i] - h;
        let minus = uhat(&p)?;
        p[i] = x[i];
        lap += (plus - 2.0 * centre + minus) / (h * h);
    }
    let rhs = r.powf(-params.beta) * centre.powf(-params.gamma.value());
    Ok((-lap - rhs).abs() / rhs)
}

/// Largest relative defect over `points`.
pub fn kelvin_residual_sample(
    gamma: GammaParam,
    dim: usize,
    points: &[Vec<f64>],
    h: f64,
) -> Result<f64> {
    let params = KelvinParams::new(dim, gamma)?;
    points
        .iter()
        .map(|x| kelvin_defect(&params, x, h))
        .try_fold(0.0, |m, d| d.map(|d| f64::max(m, d)))
}

/// `n` points with `x_N ∈ [0.2, 1]`, tangential coordinates in `[−1, 1]`
/// and `|x| ≥ 0.3`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn sample_points(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut x: Vec<f64> = (0..dim - 1).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        x.push(rng.gen_range(0.2..=1.0));
        if norm_sq(&x) >= 0.09 {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct KelvinPoint {
    pub x: Vec<f64>,
    pub defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KelvinReport {
    pub dim: usize,
    pub gamma: f64,
    pub beta: f64,
    pub points: Vec<KelvinPoint>,
    pub order_estimate: f64,
}

/// Step pair for the order estimate, large enough that truncation error
/// dominates rounding in the second differences.
pub const ORDER_STEPS: (f64, f64) = (1e-2, 5e-3);

/// Defects at `h` for each point, plus the observed order from the maxima
/// at the steps in [`ORDER_STEPS`].
pub fn kelvin_report(
    gamma: GammaParam,
    dim: usize,
    points: &[Vec<f64>],
    h: f64,
) -> Result<KelvinReport> {
    let params = KelvinParams::new(dim, gamma)?;
    let pts = points
        .iter()
        .map(|x| {
            Ok(KelvinPoint {
                x: x.clone(),
                defect: kelvin_defect(&params, x, h)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let coarse = kelvin_residual_sample(gamma, dim, points, ORDER_STEPS.0)?;
    let fine = kelvin_residual_sample(gamma, dim, points, ORDER_STEPS.1)?;
    Ok(KelvinReport {
        dim,
        gamma: gamma.value(),
        beta: params.beta,
        points: pts,
        order_estimate: (coarse / fine).ln() / (ORDER_STEPS.0 / ORDER_STEPS.1).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: f64) -> GammaParam {
        GammaParam::new(v).unwrap()
    }

    #[test]
    fn exponent_values() {
        assert_eq!(kelvin_exponent(3, 3.0).unwrap(), 8.0);
        assert_eq!(kelvin_exponent(3, 1.0).unwrap(), 6.0);
        for gv in [0.5, 2.0, 7.25] {
            assert_eq!(kelvin_exponent(2, gv).unwrap(), 4.0);
        }
        assert!(kelvin_exponent(1, 3.0).is_err());
        assert!(KelvinParams::new(4, g(2.5)).unwrap().is_consistent());
    }

    #[test]
    fn involution_and_unit_sphere() {
        let u = |x: &[f64]| x[0] * x[0] + 3.0 * x[1] + x[2].exp();
        let x = [0.3, -0.7, 0.45];
        let twice = kelvin_eval(|y: &[f64]| kelvin_eval(u, y).unwrap(), &x).unwrap();
        assert!((twice - u(&x)).abs() <= 1e-14 * u(&x).abs());
        let on_sphere = [0.6, 0.0, 0.8];
        assert!((kelvin_eval(u, &on_sphere).unwrap() - u(&on_sphere)).abs() < 1e-15);
        assert!(kelvin_eval(u, &[0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn two_dimensional_prefactor_is_one() {
        let u = |x: &[f64]| x[1];
        let x = [0.5, 2.0];
        assert_eq!(kelvin_eval(u, &x).unwrap(), 2.0 / 4.25);
    }

    #[test]
    fn sample_defect_small_and_second_order() {
        let params = KelvinParams::new(3, g(3.0)).unwrap();
        let x = [0.3, 0.2, 0.5];
        assert!(kelvin_defect(&params, &x, 1e-4).unwrap() <= 1e-5);
        let a = kelvin_defect(&params, &x, 1e-2).unwrap();
        let b = kelvin_defect(&params, &x, 5e-3).unwrap();
        assert!((a / b - 4.0).abs() < 0.4, "ratio {}", a / b);
    }

    #[test]
    fn rejects_points_near_boundary() {
        let params = KelvinParams::new(2, g(3.0)).unwrap();
        assert!(kelvin_defect(&params, &[0.5, 1e-5], 1e-4).is_err());
    }
}
