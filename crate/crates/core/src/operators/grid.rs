use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::PiecewiseConstant1D;

/// Default exclusion radius as a fraction of the shortest piece.
pub const EXCLUSION_FRACTION: f64 = 1.0 / 1_048_576.0;

/// Default ratio between consecutive schedule entries.
pub const SCHEDULE_RATIO: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// Evaluation abscissae kept away from the breakpoints of an input function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalGrid {
    points: Vec<f64>,
    exclusion_radius: f64,
}

impl EvalGrid {
    /// A grid with no exclusion zone; only exact breakpoint hits are rejected
    /// by principal-value operators.
    pub fn new(points: Vec<f64>) -> Self {
        Self { points, exclusion_radius: 0.0 }
    }

    /// Checks every point against the breakpoints of `f` with the default
    /// radius.
    pub fn for_function(f: &PiecewiseConstant1D, points: Vec<f64>) -> Result<Self> {
        Self::with_radius(f, points, default_exclusion_radius(f))
    }

    pub fn with_radius(f: &PiecewiseConstant1D, points: Vec<f64>, radius: f64) -> Result<Self> {
        let grid = Self { points, exclusion_radius: radius };
        grid.check(f)?;
        Ok(grid)
    }

    /// Drops the points that fall inside the exclusion zone of `f`.
    pub fn avoiding(f: &PiecewiseConstant1D, points: Vec<f64>, radius: f64) -> Self {
        let kept = points
            .into_iter()
            .filter(|&x| distance_to_breakpoints(f, x) > radius)
            .collect();
        Self { points: kept, exclusion_radius: radius }
    }

    /// `count` equally spaced points on `[a, b]`.
    pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..count)
                .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn exclusion_radius(&self) -> f64 {
        self.exclusion_radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Errors with the first point closer than the radius to a jump of `f`,
    /// or sitting exactly on one.
    pub fn check(&self, f: &PiecewiseConstant1D) -> Result<()> {
        let jumps: Vec<f64> = f.simplified().jumps().iter().map(|j| j.0).collect();
        for &x in &self.points {
            let d = jumps.iter().fold(f64::INFINITY, |m, &b| m.min((x - b).abs()));
            if d == 0.0 || d <= self.exclusion_radius {
                return Err(Error::NumericalDomain {
                    x,
                    reason: format!(
                        "within {} of a breakpoint (exclusion radius {})",
                        d, self.exclusion_radius
                    ),
                });
            }
        }
        Ok(())
    }
}

/// `2^-20` times the shortest piece of `f`; zero for the zero function.
pub fn default_exclusion_radius(f: &PiecewiseConstant1D) -> f64 {
    let m = f.min_piece_length();
    if m.is_finite() {
        m * EXCLUSION_FRACTION
    } else {
        0.0
    }
}

pub fn distance_to_breakpoints(f: &PiecewiseConstant1D, x: f64) -> f64 {
    f.breakpoints().iter().fold(f64::INFINITY, |m, &b| m.min((x - b).abs()))
}

/// A positive geometric sequence, used for `eps` and `N` schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeometricSchedule {
    values: Vec<f64>,
}

impl GeometricSchedule {
    /// `start * ratio^j` up to `end` inclusive (within rounding); decreasing
    /// when `end < start`. `ratio > 1` is the spacing either way.
    pub fn new(start: f64, end: f64, ratio: f64) -> Result<Self> {
        if !(start > 0.0 && end > 0.0 && ratio > 1.0 && start.is_finite() && end.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "schedule needs positive finite endpoints and ratio > 1, got {start}, {end}, {ratio}"
            )));
        }
        let steps = ((end / start).ln().abs() / ratio.ln() + 1e-9).floor() as i32;
        let step = if end >= start { ratio } else { 1.0 / ratio };
        let values = (0..=steps).map(|j| start * step.powi(j)).collect();
        Ok(Self { values })
    }

    /// Powers `base^j` for `j` in `lo..=hi`; exact for `base = 2`.
    pub fn powers(base: f64, lo: i32, hi: i32) -> Self {
        Self { values: (lo..=hi).map(|j| base.powi(j)).collect() }
    }

    /// Default spacing `2^{1/4}` between `start` and `end`.
    pub fn with_default_ratio(start: f64, end: f64) -> Result<Self> {
        Self::new(start, end, SCHEDULE_RATIO)
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidParams("schedule entries must be positive".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Inserts the geometric mean between every pair of neighbours, so the
    /// old entries are a subset of the new ones.
    pub fn refined(&self) -> Self {
        let mut values = Vec::with_capacity(2 * self.values.len());
        for w in self.values.windows(2) {
            values.push(w[0]);
            values.push((w[0] * w[1]).sqrt());
        }
        values.extend(self.values.last());
        Self { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion() {
        let f = PiecewiseConstant1D::indicator(1.0, 2.0).unwrap();
        assert!(EvalGrid::for_function(&f, vec![1.5, 4.0]).is_ok());
        let err = EvalGrid::for_function(&f, vec![0.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::NumericalDomain { x, .. } if x == 2.0));
        assert!(EvalGrid::for_function(&f, vec![1.0 + 1e-7]).is_err());
        let g = EvalGrid::avoiding(&f, vec![0.5, 1.0, 1.5], 0.1);
        assert_eq!(g.points(), &[0.5, 1.5]);
    }

    #[test]
    fn schedules() {
        let s = GeometricSchedule::new(1.0, 16.0, 2.0).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 4.0, 8.0, 16.0]);
        let s = GeometricSchedule::new(1.0, 0.25, 2.0).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 0.25]);
        let s = GeometricSchedule::with_default_ratio(1.0, 2.0).unwrap();
        assert_eq!(s.values().len(), 5);
        assert!((s.values()[4] - 2.0).abs() < 1e-14);
        let r = GeometricSchedule::powers(2.0, 0, 2).refined();
        assert_eq!(r.values().len(), 5);
        assert!((r.values()[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!(GeometricSchedule::new(0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn linspace() {
        assert_eq!(EvalGrid::linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert!(EvalGrid::linspace(0.0, 1.0, 0).is_empty());
    }
}
