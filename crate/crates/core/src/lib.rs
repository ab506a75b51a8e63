//! Fractional maximal operators on lattices and on the line.
//!
//! The crate covers:
//!
//! * [`lattice`]: finitely supported functions on `Z^d`, forward gradients and norms.
//! * [`omega`]: convex bodies, their gauges, lattice-ball counting and geometric constants.
//! * [`discrete`]: centered and uncentered fractional maximal operators on `Z^d`,
//!   radius sets and the discrete fractional integral.
//! * [`variation`]: discrete and Riesz q-variation.
//! * [`continuous`]: the uncentered fractional maximal operator of step functions on `R`
//!   and box-kernel mollification.
//! * [`experiments`]: randomized verification harnesses, scaling fits and extremal search.

pub mod continuous;
pub mod discrete;
mod error;
pub mod experiments;
pub mod lattice;
pub(crate) mod num;
pub mod omega;
pub mod variation;

pub use error::{Error, Result};
