//! Exact computation, bounds, and certificates for the relaxation complexity
//! of finite lattice-convex sets: the fewest linear inequalities whose
//! solution set contains exactly the given integer points.
//!
//! All arithmetic is over arbitrary-precision rationals. Every separating
//! inequality returned by the library has been re-checked by substitution.

pub mod bounds;
mod cover;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod halfspace;
pub mod lattice;
pub mod lp;
pub mod rat;
pub mod rc2d;
pub mod relaxations;
pub mod separation;

pub use error::{Error, Result};
pub use halfspace::{lattice_points, HPolyhedron, Inequality};
pub use lattice::{IPoint, LatticeSet};
pub use rat::{Rat, RatPoint};
