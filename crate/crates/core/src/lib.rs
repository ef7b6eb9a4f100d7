//! Numerical toolkit for power-weighted central block spaces on `R^n`.
//!
//! Functions are represented exactly as piecewise constants on the line or
//! as samples on a uniform lattice in dimension up to three. On top of that
//! live dyadic block decompositions, the classical operators of harmonic
//! analysis (maximal function, Hilbert transform family, Dirichlet partial
//! sums, Carleson operator) and harnesses that measure their boundedness.

pub mod error;
pub mod serde_ext;
pub mod quad;
pub mod operators;
pub mod blocks;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use spaces::{DyadicAnnulus, FunctionData, LatticeFunction, PiecewiseConstant1D, WeightParams};
