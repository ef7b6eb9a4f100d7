//! Numerical harnesses with pass/fail verdicts.

pub mod all;
pub mod convergence;
pub mod decomposition;
pub mod fit;
pub mod inclusions;
pub mod report;
pub mod sharpness;
pub mod uniform;

pub use all::{run_theorem, verify_all, RunOptions, THEOREMS};
pub use convergence::{default_pointwise_grid, verify_norm_convergence, verify_pointwise_convergence, ConvergenceConfig};
pub use decomposition::{verify_decomposition_independence, DecompositionConfig, LinearOp};
pub use inclusions::{verify_ambient_inclusion, verify_coefficient_inclusion, verify_inclusions, InclusionConfig};
pub use report::{Comparison, Curve, Measurement, Verdict, VerificationReport};
pub use sharpness::{verify_hilbert_sharpness, verify_maximal_sharpness, SharpnessConfig};
pub use uniform::{block_operator_norm, verify_uniform_block_bound, UniformConfig, UniformOp};
