//! Positive solutions of `−Δu = u^(−γ)` on the half-space `{x_N > 0}` with
//! `u = 0` on the boundary.
//!
//! For γ > 1 every solution depends on `x_N` alone and is either the power
//! solution `A(γ)·x_N^(2/(γ+1))` or a rescaling `λ^(−2/(γ+1)) v(λ x_N)` of a
//! single normalized profile `v` with unit slope at infinity. For
//! 0 < γ ≤ 1 there are none. This crate builds those profiles numerically,
//! certifies extinction in the nonexistence regime, checks 1-D symmetry on a
//! discretized 2-D half-strip and samples the Kelvin-transform identity.
//!
//! Modules:
//! - [`profile`]: closed forms, the first-integral potential and the family
//!   parameters (energy, scaling, asymptotic slope).
//! - [`ode`]: profile construction, series start, asymptotics, extinction.
//! - [`pde`]: the 2-D half-strip Newton solver and diagnostics.
//! - [`kelvin`]: Kelvin transform and its transformed equation.
//! - [`io`]: CSV/JSON artifact formats.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod kelvin;
pub mod numerics;
pub mod ode;
pub mod pde;
pub mod profile;
pub mod sampled;

pub use error::{Error, Result};
pub use ode::{
    asymptote_estimate, extinction_detect, profile_build, series_start, shooting_integrate,
    time_of_value, AsymptoteEstimate, ExtinctionCertificate, ExtinctionOutcome, GlobalBranchReport,
    ShootingConfig,
};
pub use profile::{
    antiderivative, explicit_solution_eval, explicit_solution_jet, power_coefficient,
    regime_classify, spec_from, EnergyState, FamilyParam, GammaParam, ProfileSpec, Regime,
};
pub use sampled::{rescale, scaling_apply, Method, SampledProfile};
