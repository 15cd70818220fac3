//! Problem definitions and their exact or reference solutions.

mod burgers;
pub mod quadrature;
mod riemann;
mod sod;

pub use burgers::{burgers_exact, mms_forcing, steepening_exact, steepening_with, Advection, BurgersSpec, ExactPoint};
pub use riemann::{riemann_exact, star_state, Primitive, RiemannSolution, StarState};
pub use sod::{sod_conditions, ConditionSchedule, Side, SodPoint, SodSpec};
