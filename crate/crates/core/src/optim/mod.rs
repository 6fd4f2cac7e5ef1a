//! Derivative-free minimization and numerical differentiation shared by the
//! ARMA and GARCH fitters.

mod hessian;
mod nelder_mead;
mod transform;

pub use hessian::{invert_spd, numerical_hessian, numerical_hessian_with_steps, SpdInverse};
pub use nelder_mead::{minimize, ObjectiveSpec, OptimResult, Termination, Tolerances};
pub use transform::Transform;
