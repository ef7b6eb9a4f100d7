//! Maximal, singular-integral and partial-sum operators, evaluated exactly on
//! piecewise constants (and on lattices for the maximal function).

pub mod carleson;
pub mod dirichlet;
pub mod grid;
pub mod hilbert;
pub mod maximal;
pub mod report;
pub mod size;
pub mod special;

pub use carleson::{carleson, CarlesonOptions};
pub use dirichlet::{
    dirichlet_sn, dirichlet_sn_spectral, dirichlet_sn_via_hilbert, modulate, periodized_sn, PartialSums, PeriodicSamples,
    SpectralOptions, SpectralResult,
};
pub use grid::{EvalGrid, GeometricSchedule};
pub use hilbert::{hilbert, hilbert_maximal, hilbert_truncated};
pub use maximal::{hl_maximal, Maximal1D};
pub use report::OperatorReport;
pub use size::{check_size_conditions, SizeCondition, SizeConditionReport, SizeOperator};
pub use special::sine_integral;
