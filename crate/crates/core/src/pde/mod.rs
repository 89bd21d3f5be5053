//! Finite-difference solver on the periodic half-strip `[0, L) × [0, H]`,
//! used to check numerically that solutions with x-independent boundary data
//! are themselves x-independent.

pub mod assemble;
pub mod diagnostics;
pub mod newton;
pub mod problem;

pub use assemble::{assemble, Discretization};
pub use diagnostics::{
    convergence_study, fitted_order, symmetry_diagnostic, ConvergenceTable, StudyConfig,
    SymmetryReport,
};
pub use newton::{
    field_symmetry_defect, newton_solve, HalfStripSolution, IterateRecord, NewtonConfig,
};
pub use problem::{HalfStripProblem, LateralBc, StripGeometry};
