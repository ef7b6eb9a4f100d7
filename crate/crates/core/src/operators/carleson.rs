//! Carleson operator `Cf(x) = sup_N |S_N f(x)|` over a frequency schedule.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spaces::PiecewiseConstant1D;

use super::dirichlet::PartialSums;
use super::grid::{EvalGrid, GeometricSchedule};

/// Local refinement around the maximizing frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonOptions {
    /// Stop refining once a refinement step gains less than this.
    pub tolerance: f64,
    /// Maximum number of refinement steps per point.
    pub max_refinements: usize,
}

impl Default for CarlesonOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_refinements: 40 }
    }
}

/// Value and maximizing frequency at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarlesonValue {
    pub value: f64,
    pub argmax: f64,
}

/// Maximizes `|S_N f(x)|` over the schedule, then repeatedly halves the
/// logarithmic spacing on both sides of the current maximizer. Only
/// frequencies are added, so the value never decreases under refinement.
pub fn carleson_value(sums: &PartialSums, schedule: &[f64], x: f64, opts: CarlesonOptions) -> CarlesonValue {
    let eval = |n: f64| sums.value(n, x).abs();
    let mut best = CarlesonValue { value: 0.0, argmax: schedule[0] };
    let mut idx = 0;
    for (i, &n) in schedule.iter().enumerate() {
        let v = eval(n);
        if v > best.value {
            best = CarlesonValue { value: v, argmax: n };
            idx = i;
        }
    }
    let mut lo = if idx > 0 { schedule[idx - 1] } else { schedule[idx] };
    let mut hi = if idx + 1 < schedule.len() { schedule[idx + 1] } else { schedule[idx] };
    for _ in 0..opts.max_refinements {
        let c = best.argmax;
        let left = (lo * c).sqrt();
        let right = (c * hi).sqrt();
        let (vl, vr) = (eval(left), eval(right));
        let before = best.value;
        if vl > best.value && vl >= vr {
            best = CarlesonValue { value: vl, argmax: left };
            hi = c;
        } else if vr > best.value {
            best = CarlesonValue { value: vr, argmax: right };
            lo = c;
        } else {
            lo = left;
            hi = right;
        }
        if best.value - before < opts.tolerance && (hi / lo).ln() < 1e-9 {
            break;
        }
    }
    best
}

pub fn carleson_detailed(
    f: &PiecewiseConstant1D,
    schedule: &GeometricSchedule,
    grid: &EvalGrid,
    opts: CarlesonOptions,
) -> Result<Vec<CarlesonValue>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParams("empty frequency schedule".into()));
    }
    let sums = PartialSums::new(f);
    let s = schedule.values();
    Ok(grid.points().par_iter().map(|&x| carleson_value(&sums, s, x, opts)).collect())
}

/// `Cf` on a grid with default refinement.
pub fn carleson(f: &PiecewiseConstant1D, schedule: &GeometricSchedule, grid: &EvalGrid) -> Result<Vec<f64>> {
    Ok(carleson_detailed(f, schedule, grid, CarlesonOptions::default())?
        .into_iter()
        .map(|c| c.value)
        .collect())
}

/// Schedule maximum without refinement.
pub fn carleson_unrefined(sums: &PartialSums, schedule: &[f64], x: f64) -> f64 {
    schedule.iter().map(|&n| sums.value(n, x).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::special::sine_integral;
    use std::f64::consts::PI;

    #[test]
    fn gibbs_anchor() {
        let f = PiecewiseConstant1D::indicator(1.0, 2.0).unwrap();
        let want = 2.0 / PI * sine_integral(PI);
        // schedule that misses N = 1; refinement must find it
        let sched = GeometricSchedule::new(0.3, 50.0, 1.7).unwrap();
        let got = carleson(&f, &sched, &EvalGrid::new(vec![1.5])).unwrap()[0];
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn dominates_schedule_members() {
        let f = PiecewiseConstant1D::new(vec![-1.0, 0.0, 0.5], vec![1.0, -2.0]).unwrap();
        let sched = GeometricSchedule::with_default_ratio(0.25, 64.0).unwrap();
        let xs = vec![-2.0, -0.3, 0.2, 0.9, 3.0];
        let grid = EvalGrid::new(xs.clone());
        let c = carleson(&f, &sched, &grid).unwrap();
        let sums = PartialSums::new(&f);
        for (x, cv) in xs.iter().zip(&c) {
            for &n in sched.values() {
                assert!(*cv >= sums.value(n, *x).abs());
            }
        }
        let refined = carleson(&f, &sched.refined(), &grid).unwrap();
        for (a, b) in c.iter().zip(&refined) {
            assert!(*b >= a - 1e-9);
        }
    }

    #[test]
    fn zero_function() {
        let sched = GeometricSchedule::powers(2.0, 0, 4);
        let c = carleson(&PiecewiseConstant1D::zero(), &sched, &EvalGrid::new(vec![0.0, 1.0])).unwrap();
        assert_eq!(c, vec![0.0, 0.0]);
    }
}
