//! Function substrates, dyadic geometry and power-weighted norms.

mod function;
mod lattice;
mod params;
mod piecewise;
mod profile;
pub mod weight;

pub use function::FunctionData;
pub use lattice::LatticeFunction;
pub use params::{unit_ball_volume, DyadicAnnulus, WeightParams};
pub use piecewise::PiecewiseConstant1D;
pub use profile::{norm_profile, NormProfile, ProfileTerm};

/// `(int |f|^p |x|^alpha dx)^{1/p}`; infinite when the integral diverges.
pub fn weighted_lp_norm(f: &FunctionData, p: f64, alpha: f64) -> f64 {
    f.weighted_lp_norm(p, alpha)
}

/// `f * chi_{C_k}`.
pub fn restrict_to_annulus(f: &FunctionData, k: i32) -> FunctionData {
    f.restrict_to_annulus(k)
}
