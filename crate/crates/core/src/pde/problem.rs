use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::QuadConfig;
use crate::ode::profile_on_grid;
use crate::profile::{GammaParam, ProfileSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LateralBc {
    Periodic,
}

/// Extent and resolution of the truncated half-strip `[0, L) × [0, H]`.
///
/// `nx` nodes are spaced `L/nx` apart with periodic wrap; `nz` nodes include
/// both `z = 0` and `z = H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripGeometry {
    pub length: f64,
    pub height: f64,
    pub nx: usize,
    pub nz: usize,
}

impl StripGeometry {
    pub fn hx(&self) -> f64 {
        self.length / self.nx as f64
    }

    pub fn hz(&self) -> f64 {
        self.height / (self.nz - 1) as f64
    }

    pub fn z(&self, k: usize) -> f64 {
        if k + 1 == self.nz {
            self.height
        } else {
            k as f64 * self.hz()
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 1 || self.nz < 3 {
            return Err(Error::Domain(format!(
                "need nx >= 1 and nz >= 3, got {} x {}",
                self.nx, self.nz
            )));
        }
        if !(self.height > 0.0 && self.height.is_finite())
            || !(self.length > 0.0 && self.length.is_finite())
        {
            return Err(Error::Domain("strip extents must be positive".into()));
        }
        Ok(())
    }
}

/// Discrete `−Δu = u^(−γ)` on the half-strip with `u = 0` at `z = 0`,
/// Dirichlet data on top and periodic sides. Fields are stored row by row:
/// entry `k·nx + i` is node `(x_i, z_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfStripProblem {
    pub gamma: GammaParam,
    pub geometry: StripGeometry,
    pub lateral_bc: LateralBc,
    pub top_values: Vec<f64>,
    pub bottom_value: f64,
    pub initial_guess: Vec<f64>,
    pub perturb_amplitude: f64,
    pub seed: u64,
    /// 1-D profile at each row, used for the profile error.
    pub reference: Option<Vec<f64>>,
    /// Subtract the discrete residual of the power solution `A z^(2/(γ+1))`
    /// from every row (see [`crate::pde::assemble`]).
    pub singular_correction: bool,
}

impl HalfStripProblem {
    /// Problem whose boundary data and reference come from the 1-D profile
    /// `spec`. The initial guess is that profile multiplied node by node by
    /// `1 + amplitude·ξ`, ξ uniform on `[−1, 1]` from a ChaCha8 stream seeded
    /// with `seed`.
    pub fn from_profile(
        spec: &ProfileSpec,
        geometry: StripGeometry,
        amplitude: f64,
        seed: u64,
    ) -> Result<Self> {
        spec.gamma.require_existence()?;
        geometry.validate()?;
        if !(0.0..1.0).contains(&amplitude) {
            return Err(Error::Domain(format!(
                "perturbation amplitude must lie in [0, 1), got {amplitude}"
            )));
        }
        let z: Vec<f64> = (0..geometry.nz).map(|k| geometry.z(k)).collect();
        let column = profile_on_grid(spec, &z, &QuadConfig::default())?.values;
        let (nx, nz) = (geometry.nx, geometry.nz);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut guess = vec![0.0; nx * nz];
        for k in 1..nz {
            for i in 0..nx {
                let factor = if k + 1 < nz && amplitude > 0.0 {
                    1.0 + amplitude * rng.gen_range(-1.0..=1.0)
                } else {
                    1.0
                };
                guess[k * nx + i] = column[k] * factor;
            }
        }
        let problem = Self {
            gamma: spec.gamma,
            geometry,
            lateral_bc: LateralBc::Periodic,
            top_values: vec![column[nz - 1]; nx],
            bottom_value: 0.0,
            initial_guess: guess,
            perturb_amplitude: amplitude,
            seed,
            reference: Some(column),
            singular_correction: true,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        self.gamma.require_existence()?;
        self.geometry.validate()?;
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        if self.top_values.len() != nx || self.top_values.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Domain(
                "top values must be positive, one per column".into(),
            ));
        }
        if self.bottom_value != 0.0 {
            return Err(Error::Domain(
                "the bottom boundary value is fixed at 0".into(),
            ));
        }
        if self.initial_guess.len() != nx * nz {
            return Err(Error::Domain("initial guess has the wrong size".into()));
        }
        if self.initial_guess[nx..nx * (nz - 1)]
            .iter()
            .any(|v| !(*v > 0.0) || !v.is_finite())
        {
            return Err(Error::Domain(
                "initial guess must be positive in the interior".into(),
            ));
        }
        if let Some(r) = &self.reference {
            if r.len() != nz {
                return Err(Error::Domain(
                    "reference column has the wrong length".into(),
                ));
            }
        }
        Ok(())
    }

    /// Initial guess with boundary rows overwritten by the boundary data.
    pub(crate) fn start_field(&self) -> Vec<f64> {
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        let mut u = self.initial_guess.clone();
        for i in 0..nx {
            u[i] = self.bottom_value;
            u[(nz - 1) * nx + i] = self.top_values[i];
        }
        u
    }

    /// Cyclic shift of the initial guess by `shift` columns.
    pub fn shifted(&self, shift: usize) -> Self {
        let (nx, nz) = (self.geometry.nx, self.geometry.nz);
        let mut out = self.clone();
        for k in 0..nz {
            for i in 0..nx {
                out.initial_guess[k * nx + (i + shift) % nx] = self.initial_guess[k * nx + i];
            }
        }
        for i in 0..nx {
            out.top_values[(i + shift) % nx] = self.top_values[i];
        }
        out
    }
}
