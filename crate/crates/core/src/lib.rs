//! Exact closed-curve and Ising partition functions on finite graphs, computed
//! through Pfaffians of skew-symmetric matrices indexed by darts.
//!
//! Planar graphs need one real Pfaffian. Graphs embedded on other surfaces use
//! a Pfaffian with multicomplex coefficients, which expands into a sum of
//! complex (or, for orientable-derived schemes, real) Pfaffians.

pub mod algebra;
pub mod bits;
pub mod dart;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod kasteleyn;
pub mod partition;
pub mod pfaffian;

pub use error::{Error, Result};
