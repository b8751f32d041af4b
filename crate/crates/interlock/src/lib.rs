//! Interlocked polygonal chains in explicit 3D coordinates.
//!
//! The crate builds a 16-link open chain that holds the shape of a rigid
//! trapezoid through corner tangles and jag gadgets, threads a 2-link chain
//! through its corners, verifies the confinement bounds that make the pair
//! hard to separate, and runs a randomized escape search as empirical
//! falsification pressure.

pub mod chain;
pub mod construct;
pub mod error;
pub mod geom;

pub use error::{Error, Result};
