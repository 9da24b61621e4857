//! Brute-force cross-check path: the reduced radial equation is integrated
//! numerically and matched at x0, with no Bessel functions involved.

pub mod ode;
mod phase;
mod shoot;

pub use phase::{asymptotic_basis, fit_asymptotic_phase};
pub use shoot::{
    bound_defect, bound_state_profile, exterior_log_derivative, interior_log_derivative, shoot_bound_state, BoundProfile,
    RadialSolution, Side, EXTERIOR_REACH, INNER_START,
};
