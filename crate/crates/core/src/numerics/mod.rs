//! Special functions and quadrature behind the closed-form rates.

mod ergodic;
mod expint;
mod quadrature;

pub use ergodic::ergodic_log_gamma;
pub use expint::{exp_integral_e1, scaled_exp_integral_e1};
pub use quadrature::{integrate_1d, integrate_with_breakpoints, QuadratureSpec};
