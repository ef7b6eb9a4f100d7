//! Convergence of `S_N f` to `f` in norm and pointwise.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blocks::{rl_norm_upper_bound, SearchStrategy, Space};
use crate::error::{Error, Result};
use crate::operators::carleson::{carleson_value, CarlesonOptions};
use crate::operators::{EvalGrid, GeometricSchedule, PartialSums};
use crate::quad::{weighted_lp_norm, PanelLayout, TailModel};
use crate::spaces::{FunctionData, PiecewiseConstant1D, WeightParams};

use super::report::{Comparison, VerificationReport};

/// Required decay `e(N_max) / e(N_min)`.
pub const NORM_DECAY: f64 = 0.05;
/// Required final pointwise sup error.
pub const POINTWISE_FINAL: f64 = 1e-3;
/// Required pointwise sup error at `N = 2^8`.
pub const POINTWISE_AT_256: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub schedule: Vec<f64>,
    /// Radius of the norm quadrature beyond which the far-field model is used.
    pub radius: f64,
    /// Gauss panels per period `1/N` of the oscillation.
    pub panels_per_period: f64,
    /// Truncation radius of the Carleson norm.
    pub carleson_radius: f64,
    /// Carleson frequencies `2^j` for `j` in this range.
    pub carleson_octaves: (i32, i32),
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            schedule: GeometricSchedule::powers(2.0, 0, 10).values().to_vec(),
            radius: 64.0,
            panels_per_period: 4.0,
            carleson_radius: 16.0,
            carleson_octaves: (-4, 10),
        }
    }
}

impl ConvergenceConfig {
    fn check(&self) -> Result<()> {
        GeometricSchedule::from_values(self.schedule.clone())?;
        if !(self.radius > 0.0 && self.carleson_radius > 0.0 && self.panels_per_period > 0.0) {
            return Err(Error::InvalidParams("radii and panel density must be positive".into()));
        }
        Ok(())
    }
}

fn piecewise(f: &FunctionData) -> Result<&PiecewiseConstant1D> {
    f.as_piecewise().ok_or_else(|| Error::Unsupported("partial sums are implemented on the line".into()))
}

/// Hypotheses of norm convergence on the line.
pub fn norm_convergence_hypotheses(params: &WeightParams) -> bool {
    let (p, s, a) = (params.p(), params.s(), params.alpha());
    params.n() == 1 && 1.0 < s && s.is_finite() && p <= s && -1.0 < a && a < p - 1.0
}

/// `||S_N f - f||_{L^p(|x|^alpha)}` by quadrature on `[-R, R]` plus the
/// far-field model of `S_N f`.
pub fn norm_error(sums: &PartialSums, params: &WeightParams, n: f64, radius: f64, panels_per_period: f64) -> f64 {
    let f = sums.function();
    let r = radius.max(2.0 * f.support_radius());
    let layout = PanelLayout::symmetric(r, f.breakpoints(), 1.0 / (panels_per_period * n));
    weighted_lp_norm(|x| sums.deviation(n, x), params.p(), params.alpha(), &layout, r, sums.far_field(n))
}

pub fn verify_norm_convergence(f: &FunctionData, params: &WeightParams, config: &ConvergenceConfig) -> Result<VerificationReport> {
    config.check()?;
    let g = piecewise(f)?;
    let sums = PartialSums::new(g);
    let mut report = VerificationReport::new("6.3", *params);
    let in_hyp = norm_convergence_hypotheses(params);
    let e: Vec<f64> = config
        .schedule
        .iter()
        .map(|&n| norm_error(&sums, params, n, config.radius, config.panels_per_period))
        .collect();
    let half = e.len() / 2;
    let decreasing = e[half..].windows(2).all(|w| w[1] < w[0]);
    let ratio = match (e.first(), e.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a,
        _ => 0.0,
    };
    report.curve("e", "N", "error", config.schedule.clone(), e.clone());
    report.flag("tail_decreasing", decreasing);
    report.scalar("decay_ratio", ratio);
    report.flag("divergent", e.iter().any(|v| v.is_infinite()));
    report.check("e eventually decreasing", "tail_decreasing", Comparison::IsTrue, 0.0, in_hyp);
    report.check("e(N_max) / e(N_min) below threshold", "decay_ratio", Comparison::Below, NORM_DECAY, in_hyp);
    report.provenance("config", config);
    Ok(report)
}

/// Default pointwise grid: 401 points on `[-(R + 2), R + 2]` kept `1/8`
/// away from the breakpoints.
pub fn default_pointwise_grid(f: &PiecewiseConstant1D) -> EvalGrid {
    let r = f.support_radius() + 2.0;
    EvalGrid::avoiding(f, EvalGrid::linspace(-r, r, 401), 0.125)
}

pub fn verify_pointwise_convergence(
    f: &FunctionData,
    params: &WeightParams,
    grid: &EvalGrid,
    config: &ConvergenceConfig,
) -> Result<VerificationReport> {
    config.check()?;
    let g = piecewise(f)?;
    grid.check(g)?;
    let sums = PartialSums::new(g);
    let mut report = VerificationReport::new("6.1.pointwise", *params);
    let sup: Vec<f64> = config
        .schedule
        .iter()
        .map(|&n| grid.points().iter().map(|&x| sums.deviation(n, x).abs()).fold(0.0, f64::max))
        .collect();
    let last = sup.last().copied().unwrap_or(0.0);
    report.curve("sup_error", "N", "sup_error", config.schedule.clone(), sup.clone());
    report.scalar("sup_error/final", last);
    report.check("sup error falls below 1e-3", "sup_error/final", Comparison::Below, POINTWISE_FINAL, true);
    if let Some(i) = config.schedule.iter().position(|&n| n == 256.0) {
        report.scalar("sup_error/N=256", sup[i]);
        report.check("sup error at N = 2^8 below 1e-2", "sup_error/N=256", Comparison::Below, POINTWISE_AT_256, true);
    }

    // C f >= |S_N f| at every grid point and scheduled N
    let opts = CarlesonOptions::default();
    let dominated = grid.points().iter().all(|&x| {
        let c = carleson_value(&sums, &config.schedule, x, opts).value;
        config.schedule.iter().all(|&n| c >= sums.value(n, x).abs())
    });
    report.flag("carleson_dominates", dominated);
    report.check("Carleson dominates every partial sum", "carleson_dominates", Comparison::IsTrue, 0.0, true);

    // empirical constant ||C f|| / ||f||_{RL}
    let (p, alpha) = (params.p(), params.alpha());
    let cs = GeometricSchedule::powers(2.0, config.carleson_octaves.0, config.carleson_octaves.1);
    let r = config.carleson_radius.max(2.0 * g.support_radius());
    let layout = PanelLayout::symmetric(r, g.breakpoints(), f64::INFINITY);
    let tail = TailModel::PowerLaw { amplitude: g.l1_norm() / PI, decay: 1.0 };
    let c_norm = weighted_lp_norm(|x| carleson_value(&sums, cs.values(), x, opts).value, p, alpha, &layout, r, tail);
    let rl = rl_norm_upper_bound(f, params, Space::Homogeneous, SearchStrategy::Greedy)?;
    report.scalar("carleson_norm", c_norm);
    report.scalar("rl_norm_upper_bound", rl);
    report.scalar("carleson_constant", if rl > 0.0 { c_norm / rl } else { 0.0 });
    report.provenance("config", config);
    report.provenance("grid_points", grid.len());
    report.provenance("grid_exclusion_radius", grid.exclusion_radius());
    report.provenance("carleson_schedule", cs.values());
    Ok(report)
}
