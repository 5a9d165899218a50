//! Numerical laboratory for the second-order renormalization group flow of
//! Riemannian metrics in low dimensions.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tensor contractions read best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cigar;
pub mod constant_curvature;
pub mod curvature3d;
pub mod error;
pub mod homogeneous;
pub mod ode;
pub mod roots;
pub mod special_functions;

pub use error::{Error, Result};
