//! Deslauriers–Dubuc interpolating wavelets: filters, dense fields and
//! one-level transforms in one and two dimensions.

mod field;
mod filter;
mod transform;

pub use field::{node_count, DetailField, FieldGrid2D, Subband};
pub use filter::{check_order, midpoint_weights, one_sided_weights, refinement_mask, FilterBank, SUPPORTED_ORDERS};
pub use transform::{bwt_1d, bwt_2d, estimate_error, fwt_1d, fwt_2d, prolongate, Transform2D};
