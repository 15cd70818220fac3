// Negated comparisons deliberately reject NaN; index loops mirror the math.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod derivative;
pub mod error;
pub mod grid;
pub mod lagrange;
pub mod newton;
pub mod problems;
pub mod scalar;
pub mod solver;
pub mod sparse;
pub mod study;
pub mod wavelet;

pub use error::{Error, Result};
pub use scalar::{Field, Rational, Real};

/// Double-precision instantiations of the generic types.
pub type Grid = grid::GridSpec<f64>;
pub type Field2D = wavelet::FieldGrid2D<f64>;
pub type Operator = derivative::DerivativeOperator<f64>;
pub type Tangent = sparse::SparseTangent<f64>;
pub type Newton = newton::NewtonConfig<f64>;
pub type Plan = newton::RecursionPlan<f64>;
pub type Burgers = assembly::BurgersSetup<f64>;
pub type Sod = assembly::SodSetup<f64>;
