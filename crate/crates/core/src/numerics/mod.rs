//! Small numerical kernels shared by the ODE and PDE code: adaptive
//! Gauss-Kronrod quadrature, bracketed scalar root-finding, a Dormand-Prince
//! 5(4) integrator and a banded Cholesky factorization.

pub mod band;
pub mod quadrature;
pub mod rk;
pub mod roots;

pub use band::{BandCholesky, SymBand};
pub use quadrature::{integrate, QuadConfig, QuadResult};
pub use rk::{Dopri5, StepControl};
pub use roots::{solve_bracketed, RootConfig};
