//! Hilbert transform `Hf(x) = p.v. (1/pi) int f(y) / (x - y) dy` of piecewise
//! constants, its truncations and its maximal function.
//!
//! A piece `v chi_[a,b]` contributes
//!
//! ```text
//! (v/pi) ln |(x - a) / (x - b)|
//! ```
//!
//! evaluated as `ln_1p` of the relative gap when `x` lies outside `[a, b]`.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::TailModel;
use crate::spaces::PiecewiseConstant1D;

use super::grid::{EvalGrid, GeometricSchedule};

/// `ln |(x - a)/(x - b)|` for `a < b`, `x` not an endpoint.
fn log_ratio(x: f64, a: f64, b: f64) -> f64 {
    if x > b {
        ((b - a) / (x - b)).ln_1p()
    } else if x < a {
        -((b - a) / (a - x)).ln_1p()
    } else {
        ((x - a) / (b - x)).ln()
    }
}

/// Pointwise value for an already simplified `f`; infinite at a jump.
pub fn hilbert_value(f: &PiecewiseConstant1D, x: f64) -> f64 {
    f.pieces().map(|(a, b, v)| v * log_ratio(x, a, b)).sum::<f64>() / PI
}

/// `Hf(x)`; errors when `x` sits on a jump of `f`.
pub fn hilbert_at(f: &PiecewiseConstant1D, x: f64) -> Result<f64> {
    let g = f.simplified();
    EvalGrid::new(vec![x]).check(&g)?;
    Ok(hilbert_value(&g, x))
}

/// `Hf` on a grid; errors naming the first abscissa inside the exclusion
/// zone of a jump.
pub fn hilbert(f: &PiecewiseConstant1D, grid: &EvalGrid) -> Result<Vec<f64>> {
    let g = f.simplified();
    grid.check(&g)?;
    Ok(grid.points().par_iter().map(|&x| hilbert_value(&g, x)).collect())
}

/// `(1/pi) int_{|x - y| > eps} f(y) / (x - y) dy`.
pub fn truncated_value(f: &PiecewiseConstant1D, eps: f64, x: f64) -> f64 {
    let (lo, hi) = (x - eps, x + eps);
    let mut s = 0.0;
    for (a, b, v) in f.pieces() {
        if v == 0.0 {
            continue;
        }
        let left_end = b.min(lo);
        if a < left_end {
            s += v * ((left_end - a) / (x - left_end)).ln_1p();
        }
        let right_start = a.max(hi);
        if right_start < b {
            s -= v * ((b - right_start) / (right_start - x)).ln_1p();
        }
    }
    s / PI
}

pub fn hilbert_truncated(f: &PiecewiseConstant1D, eps: f64, grid: &EvalGrid) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParams(format!("truncation radius must be positive, got {eps}")));
    }
    Ok(grid.points().par_iter().map(|&x| truncated_value(f, eps, x)).collect())
}

/// `sup_eps |H_eps f(x)|` over the schedule.
pub fn maximal_value(f: &PiecewiseConstant1D, eps: &[f64], x: f64) -> f64 {
    eps.iter().map(|&e| truncated_value(f, e, x).abs()).fold(0.0, f64::max)
}

pub fn hilbert_maximal(
    f: &PiecewiseConstant1D,
    schedule: &GeometricSchedule,
    grid: &EvalGrid,
) -> Result<Vec<f64>> {
    if schedule.is_empty() {
        return Err(Error::InvalidParams("empty truncation schedule".into()));
    }
    let eps = schedule.values();
    Ok(grid.points().par_iter().map(|&x| maximal_value(f, eps, x)).collect())
}

/// Leading far-field behaviour `|Hf(x)| ~ |mu_j| / (pi |x|^{j+1})` from the
/// first non-vanishing moment `mu_j`.
pub fn far_field(f: &PiecewiseConstant1D) -> TailModel {
    let scale = f.support_radius();
    let mass = f.l1_norm();
    if mass == 0.0 {
        return TailModel::Truncate;
    }
    for j in 0..4 {
        let mu = f.moment(j);
        if mu.abs() > 1e-12 * mass * scale.powi(j) {
            return TailModel::PowerLaw { amplitude: mu.abs() / PI, decay: j as f64 + 1.0 };
        }
    }
    TailModel::Truncate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(a: f64, b: f64) -> PiecewiseConstant1D {
        PiecewiseConstant1D::indicator(a, b).unwrap()
    }

    #[test]
    fn indicator_values() {
        let f = chi(1.0, 2.0);
        assert!((hilbert_at(&f, 4.0).unwrap() - 1.5f64.ln() / PI).abs() < 1e-16);
        assert!(hilbert_at(&f, 1.5).unwrap().abs() < 1e-16);
        assert!((hilbert_at(&chi(-1.0, 1.0), 3.0).unwrap() - 2f64.ln() / PI).abs() < 1e-16);
        assert!(hilbert_at(&f, 1.0).is_err());
    }

    #[test]
    fn merged_breakpoints_are_not_singular() {
        let f = chi(0.0, 1.0).add(&chi(1.0, 2.0));
        let raw = PiecewiseConstant1D::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(f.simplified(), raw.simplified());
        let v = hilbert_at(&raw, 1.0).unwrap();
        assert!((v - hilbert_at(&chi(0.0, 2.0), 1.0).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn truncation() {
        let f = chi(1.0, 2.0);
        assert_eq!(truncated_value(&f, 0.25, 1.5), 0.0);
        assert_eq!(truncated_value(&f, 10.0, 1.5), 0.0);
        let full = hilbert_value(&f, 4.0);
        assert!((truncated_value(&f, 1.0, 4.0) - full).abs() < 1e-16);
        // inside one piece the excluded window is symmetric and contributes nothing
        let x = 1.3;
        for eps in [0.2, 1e-3, 5e-4] {
            assert!((truncated_value(&f, eps, x) - hilbert_value(&f, x)).abs() < 1e-15);
        }
        assert!((truncated_value(&f, 0.5, x) - hilbert_value(&f, x)).abs() > 1e-3);
    }

    #[test]
    fn maximal_dominates() {
        let f = chi(1.0, 2.0).add(&chi(2.5, 3.0).scale(-2.0));
        let sched = GeometricSchedule::with_default_ratio(8.0, 1e-4).unwrap();
        let grid = EvalGrid::for_function(&f, vec![0.3, 1.7, 2.2, 5.0]).unwrap();
        let hs = hilbert(&f, &grid).unwrap();
        let ms = hilbert_maximal(&f, &sched, &grid).unwrap();
        for (h, m) in hs.iter().zip(&ms) {
            assert!(*m >= h.abs() - 1e-12);
        }
        let z = hilbert_maximal(&PiecewiseConstant1D::zero(), &sched, &grid).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn far_field_model() {
        let TailModel::PowerLaw { amplitude, decay } = far_field(&chi(1.0, 2.0)) else {
            panic!("expected a power law");
        };
        assert_eq!(decay, 1.0);
        assert!((amplitude - 1.0 / PI).abs() < 1e-16);
        let odd = chi(-1.0, 0.0).scale(-1.0).add(&chi(0.0, 1.0));
        assert!(matches!(far_field(&odd), TailModel::PowerLaw { decay, .. } if decay == 2.0));
    }
}
