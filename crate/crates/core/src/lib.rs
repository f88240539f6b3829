//! Feasibility solvers for closed sets given as finite unions of convex
//! pieces (plus a few nonconvex primitives), built around the
//! Douglas-Rachford splitting operator `T = (R_B R_A + I) / 2` and the method
//! of alternating projections.
//!
//! Beyond running the iterations, the crate classifies fixed points (weak
//! versus strong), certifies and samples a radius of attraction around strong
//! fixed points, detects discrete limit cycles, and reconstructs a
//! cylinder/double-spiral geometry on which the iteration has a continuous
//! limit cycle: bounded, vanishing steps, yet non-convergent, accumulating on
//! the whole base circle.

// `!(x > 0.0)`-style guards deliberately treat NaN parameters as invalid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod curve;
pub mod engine;
pub mod error;
pub mod lift;
pub mod pieces;
pub mod point;
pub mod rng;
pub mod scenario;
pub mod spiral;
pub mod trace;
pub mod union;

#[cfg(test)]
pub(crate) mod test_oracle;

pub use error::{Error, Result};
pub use point::Point;
