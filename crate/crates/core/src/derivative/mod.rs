//! Connection-coefficient derivative operators.

mod operator;
mod stencil;

pub use operator::{apply, DerivativeOperator, Direction};
pub use stencil::{boundary_closures, check_pair, continuity, interior_connection_coefficients, StencilSpec};
