//! Five-point discretization of `−Δu − u^(−γ) = 0` on the half-strip.
//!
//! The solution behaves like `A z^p`, `p = 2/(γ+1)`, at the wall, so its
//! second derivative is unbounded and the plain five-point stencil loses an
//! order there: the consistency error near the wall is `O(h^p)` and spreads
//! to the whole domain, giving first-order convergence. Because the power
//! solution `P(z) = A z^p` carries exactly that singular part, its discrete
//! residual `τ_k = −(P_{k+1} − 2P_k + P_{k−1})/h_z² − P_k^(−γ)` is known in
//! closed form. Subtracting `τ_k` from row `k` removes the leading singular
//! error and restores close to second-order convergence away from the wall.

use crate::error::Result;
use crate::numerics::SymBand;
use crate::pde::problem::{HalfStripProblem, StripGeometry};
use crate::profile::power_coefficient;

/// Relative floor `c·z^p` below which iterates are clamped, as a fraction of
/// the power coefficient.
pub const FLOOR_FRACTION: f64 = 1e-3;

/// Grid operator of a [`HalfStripProblem`]. Unknowns are the interior rows
/// `k = 1..nz−1`; unknown `(k−1)·nx + i` is node `(x_i, z_k)`.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub gamma: f64,
    pub geometry: StripGeometry,
    /// Per-row subtraction term (all zero without the correction).
    pub correction: Vec<f64>,
    /// Per-row positivity floor.
    pub floor: Vec<f64>,
}

pub fn assemble(problem: &HalfStripProblem) -> Result<Discretization> {
    problem.validate()?;
    let g = problem.gamma.value();
    let geom = problem.geometry;
    let a = power_coefficient(problem.gamma)?;
    let p = problem.gamma.boundary_exponent();
    let nz = geom.nz;
    let power: Vec<f64> = (0..nz).map(|k| a * geom.z(k).powf(p)).collect();
    let hz2 = geom.hz() * geom.hz();
    let mut correction = vec![0.0; nz];
    if problem.singular_correction {
        for k in 1..nz - 1 {
            correction[k] =
                -(power[k + 1] - 2.0 * power[k] + power[k - 1]) / hz2 - power[k].powf(-g);
        }
    }
    let floor = power.iter().map(|v| FLOOR_FRACTION * v).collect();
    Ok(Discretization {
        gamma: g,
        geometry: geom,
        correction,
        floor,
    })
}

impl Discretization {
    pub fn unknowns(&self) -> usize {
        self.geometry.nx * (self.geometry.nz - 2)
    }

    fn x_coefficient(&self) -> f64 {
        if self.geometry.nx > 1 {
            1.0 / (self.geometry.hx() * self.geometry.hx())
        } else {
            0.0
        }
    }

    /// Residual at every interior node of the full field `u` (boundary rows
    /// included in `u`).
    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        let cx = self.x_coefficient();
        let cz = 1.0 / (self.geometry.hz() * self.geometry.hz());
        let mut r = vec![0.0; self.unknowns()];
        for k in 1..nz - 1 {
            for i in 0..nx {
                let c = u[k * nx + i];
                let west = u[k * nx + (i + nx - 1) % nx];
                let east = u[k * nx + (i + 1) % nx];
                let lap = cx * (west - 2.0 * c + east)
                    + cz * (u[(k - 1) * nx + i] - 2.0 * c + u[(k + 1) * nx + i]);
                r[(k - 1) * nx + i] = -lap - c.powf(-self.gamma) - self.correction[k];
            }
        }
        r
    }

    /// Largest residual relative to the size of the terms it balances.
    pub fn scaled_residual_max(&self, u: &[f64], r: &[f64]) -> f64 {
        let nx = self.geometry.nx;
        let diag = 2.0 * self.x_coefficient() + 2.0 / (self.geometry.hz() * self.geometry.hz());
        r.iter()
            .enumerate()
            .map(|(j, rj)| {
                let k = j / nx + 1;
                let c = u[nx + j];
                rj.abs() / (diag * c + c.powf(-self.gamma) + self.correction[k].abs())
            })
            .fold(0.0, f64::max)
    }

    /// Jacobian `−Δ_h + γ u^(−γ−1)`, symmetric positive definite for `u > 0`.
    pub fn jacobian(&self, u: &[f64]) -> SymBand {
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        let cx = self.x_coefficient();
        let cz = 1.0 / (self.geometry.hz() * self.geometry.hz());
        let mut jac = SymBand::zeros(self.unknowns(), nx);
        for k in 1..nz - 1 {
            for i in 0..nx {
                let j = (k - 1) * nx + i;
                let c = u[k * nx + i];
                jac.add(
                    j,
                    j,
                    2.0 * cx + 2.0 * cz + self.gamma * c.powf(-self.gamma - 1.0),
                );
                if k > 1 {
                    jac.add(j, j - nx, -cz);
                }
                if nx > 1 {
                    // Lower neighbour in x (wrapping); each pair is visited once
                    // per occurrence, so nx = 2 correctly couples twice.
                    let west = (k - 1) * nx + (i + nx - 1) % nx;
                    if west < j {
                        jac.add(j, west, -cx);
                    }
                    let east = (k - 1) * nx + (i + 1) % nx;
                    if east < j {
                        jac.add(j, east, -cx);
                    }
                }
            }
        }
        jac
    }

    /// Clamps interior values to the floor; returns whether any node moved.
    pub fn clamp(&self, u: &mut [f64]) -> bool {
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        let mut hit = false;
        for k in 1..nz - 1 {
            for v in &mut u[k * nx..(k + 1) * nx] {
                if !(*v >= self.floor[k]) {
                    *v = self.floor[k];
                    hit = true;
                }
            }
        }
        hit
    }
}
