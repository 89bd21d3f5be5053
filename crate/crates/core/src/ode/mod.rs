//! The 1-D problem `−v'' = v^(−γ)`, `v(0) = 0`: profile construction by two
//! independent routes (first-integral quadrature and shooting), far-field
//! estimates, and extinction certificates for trajectories that die.

pub mod asymptote;
pub mod extinction;
pub mod grid;
pub mod quadrature;
pub mod series;
pub mod shooting;

pub use asymptote::{asymptote_estimate, AsymptoteEstimate};
pub use extinction::{
    extinction_detect, extinction_integrate, ExtinctionCertificate, ExtinctionMethod,
    ExtinctionOutcome, GlobalBranchReport,
};
pub use grid::profile_grid;
pub use quadrature::{profile_build, profile_on_grid, time_of_value, value_at_time};
pub use series::{series_start, series_value};
pub use shooting::{
    shooting_integrate, shooting_on_grid, ShootingConfig, ShootingOutcome, ShootingReport,
};
