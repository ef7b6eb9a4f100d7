use crate::error::{Error, Result};

use super::params::DyadicAnnulus;
use super::weight;

/// A real function on the line that is constant on finitely many intervals.
///
/// `values[i]` is taken on `(breakpoints[i], breakpoints[i + 1])`; the
/// function vanishes outside `[breakpoints[0], breakpoints[m]]`. The empty
/// representation is the zero function. Values at breakpoints are immaterial
/// for every integral; point evaluation uses the left-closed convention and
/// [`PiecewiseConstant1D::midpoint_value`] gives the average of the one-sided
/// limits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseConstant1D {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant1D {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(Self::zero());
        }
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidFunction(format!(
                "expected m + 1 breakpoints for m >= 1 values, got {} breakpoints and {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if let Some(x) = breakpoints.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite breakpoint {x}")));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite value {v}")));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(format!(
                "breakpoints must be strictly increasing ({} >= {})",
                w[0], w[1]
            )));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `c` on `(a, b)`, zero elsewhere.
    pub fn constant_on(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c])
    }

    /// Indicator of `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::constant_on(a, b, 1.0)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates over `(left, right, value)` triples.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Closed hull of the nonzero pieces.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|&v| v != 0.0)?;
        let last = self.values.iter().rposition(|&v| v != 0.0)?;
        Some((self.breakpoints[first], self.breakpoints[last + 1]))
    }

    /// Largest `|x|` on the support, zero for the zero function.
    pub fn support_radius(&self) -> f64 {
        self.support().map_or(0.0, |(a, b)| a.abs().max(b.abs()))
    }

    pub fn min_piece_length(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        if self.values.is_empty() || x < self.breakpoints[0] || x >= *self.breakpoints.last()? {
            return None;
        }
        // last breakpoint <= x
        let i = self.breakpoints.partition_point(|&b| b <= x);
        Some(i - 1)
    }

    /// Point value with the left-closed convention `[x_i, x_{i+1})`.
    pub fn value_at(&self, x: f64) -> f64 {
        self.piece_index(x).map_or(0.0, |i| self.values[i])
    }

    pub fn left_limit(&self, x: f64) -> f64 {
        if self.values.is_empty() || x <= self.breakpoints[0] || x > *self.breakpoints.last().unwrap()
        {
            return 0.0;
        }
        let i = self.breakpoints.partition_point(|&b| b < x);
        self.values[i - 1]
    }

    pub fn right_limit(&self, x: f64) -> f64 {
        self.value_at(x)
    }

    /// Average of the one-sided limits; equals the value away from breakpoints.
    pub fn midpoint_value(&self, x: f64) -> f64 {
        0.5 * (self.left_limit(x) + self.right_limit(x))
    }

    /// Jump `v_i - v_{i-1}` at every breakpoint, with zero outside the support.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        let m = self.values.len();
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let right = if i < m { self.values[i] } else { 0.0 };
                let left = if i > 0 { self.values[i - 1] } else { 0.0 };
                (x, right - left)
            })
            .filter(|&(_, j)| j != 0.0)
            .collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `x -> f(x / factor)` for `factor > 0`.
    pub fn dilate(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "dilation factor must be positive");
        Self {
            breakpoints: self.breakpoints.iter().map(|x| x * factor).collect(),
            values: self.values.clone(),
        }
    }

    /// `x -> f(x - shift)`.
    pub fn translate(&self, shift: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|x| x + shift).collect(),
            values: self.values.clone(),
        }
    }

    fn merged_breakpoints(&self, extra: &[f64]) -> Vec<f64> {
        let mut pts: Vec<f64> = self.breakpoints.iter().chain(extra).copied().collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn resample(pts: Vec<f64>, value: impl Fn(f64) -> f64) -> Self {
        if pts.len() < 2 {
            return Self::zero();
        }
        let values = pts.windows(2).map(|w| value(0.5 * (w[0] + w[1]))).collect();
        Self { breakpoints: pts, values }.trimmed()
    }

    /// Same function with extra breakpoints inserted inside its hull.
    pub fn refine(&self, points: &[f64]) -> Self {
        let Some((&lo, &hi)) = self.breakpoints.first().zip(self.breakpoints.last()) else {
            return Self::zero();
        };
        let inner: Vec<f64> = points.iter().copied().filter(|&x| lo < x && x < hi).collect();
        let pts = self.merged_breakpoints(&inner);
        let values = pts.windows(2).map(|w| self.value_at(0.5 * (w[0] + w[1]))).collect();
        Self { breakpoints: pts, values }
    }

    pub fn add(&self, other: &Self) -> Self {
        let pts = self.merged_breakpoints(&other.breakpoints);
        Self::resample(pts, |x| self.value_at(x) + other.value_at(x))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Multiplies by the indicator of a finite union of intervals.
    pub fn restrict_to(&self, intervals: &[(f64, f64)]) -> Self {
        if self.values.is_empty() {
            return Self::zero();
        }
        let cuts: Vec<f64> = intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
        let pts = self.merged_breakpoints(&cuts);
        Self::resample(pts, |x| {
            if intervals.iter().any(|&(a, b)| a < x && x < b) {
                self.value_at(x)
            } else {
                0.0
            }
        })
    }

    /// `f * chi_{C_k}` with `C_k = {2^{k-1} < |x| <= 2^k}`.
    pub fn restrict_to_annulus(&self, k: i32) -> Self {
        let c = DyadicAnnulus::new(k, 1);
        let (r0, r1) = (c.inner_radius(), c.outer_radius());
        self.restrict_to(&[(-r1, -r0), (r0, r1)])
    }

    /// `f * chi_{C~_k}`: the annulus for `k >= 1`, the unit ball for `k = 0`.
    pub fn restrict_to_restricted_annulus(&self, k: i32) -> Self {
        if k == 0 {
            self.restrict_to(&[(-1.0, 1.0)])
        } else {
            self.restrict_to_annulus(k)
        }
    }

    /// `f * chi_{B_k}`.
    pub fn restrict_to_ball(&self, k: i32) -> Self {
        let r = 2f64.powi(k);
        self.restrict_to(&[(-r, r)])
    }

    /// Drops zero pieces at both ends.
    pub fn trimmed(&self) -> Self {
        match (
            self.values.iter().position(|&v| v != 0.0),
            self.values.iter().rposition(|&v| v != 0.0),
        ) {
            (Some(first), Some(last)) => Self {
                breakpoints: self.breakpoints[first..=last + 1].to_vec(),
                values: self.values[first..=last].to_vec(),
            },
            _ => Self::zero(),
        }
    }

    /// Trims and merges neighbouring pieces with equal values.
    pub fn simplified(&self) -> Self {
        let t = self.trimmed();
        if t.values.is_empty() {
            return t;
        }
        let mut bps = vec![t.breakpoints[0]];
        let mut vals: Vec<f64> = Vec::new();
        for (a, b, v) in t.pieces() {
            let _ = a;
            if vals.last() == Some(&v) {
                *bps.last_mut().unwrap() = b;
            } else {
                vals.push(v);
                bps.push(b);
            }
        }
        Self { breakpoints: bps, values: vals }
    }

    /// Sup of `|f - g|` over the common refinement.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let pts = self.merged_breakpoints(&other.breakpoints);
        pts.windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .map(|x| (self.value_at(x) - other.value_at(x)).abs())
            .fold(0.0, f64::max)
    }

    /// `||f||_{L^s}` (unweighted); `s = inf` gives the essential sup.
    pub fn lebesgue_norm(&self, s: f64) -> f64 {
        if s.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let sum: f64 = self.pieces().map(|(a, b, v)| v.abs().powf(s) * (b - a)).sum();
        sum.powf(1.0 / s)
    }

    /// `int |f|^p |x|^alpha dx`, infinite when the weight is not integrable on
    /// a piece where `f` is nonzero.
    pub fn weighted_power_integral(&self, p: f64, alpha: f64) -> f64 {
        self.pieces()
            .filter(|&(_, _, v)| v != 0.0)
            .map(|(a, b, v)| v.abs().powf(p) * weight::power_weight_integral(a, b, alpha))
            .sum()
    }

    /// `(int |f|^p |x|^alpha dx)^{1/p}`; `p = inf` gives the essential sup.
    pub fn weighted_lp_norm(&self, p: f64, alpha: f64) -> f64 {
        if p.is_infinite() {
            return self.lebesgue_norm(p);
        }
        self.weighted_power_integral(p, alpha).powf(1.0 / p)
    }

    /// `int y^j f(y) dy`.
    pub fn moment(&self, j: i32) -> f64 {
        self.pieces()
            .map(|(a, b, v)| v * (b.powi(j + 1) - a.powi(j + 1)) / (j + 1) as f64)
            .sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.pieces().map(|(a, b, v)| v.abs() * (b - a)).sum()
    }

    /// Smallest `K` such that the support lies in `B_K = [-2^K, 2^K]`.
    pub fn enclosing_ball_index(&self) -> Option<i32> {
        let r = self.support_radius();
        (r > 0.0).then(|| DyadicAnnulus::index_of_radius(r))
    }

    /// Largest `k` such that `f` is constant on each of `(-2^k, 0)` and
    /// `(0, 2^k)`; `None` when zero is an endpoint of the hull only through
    /// pieces that never reach it.
    pub fn flat_scale_near_origin(&self) -> i32 {
        let nearest = self
            .breakpoints
            .iter()
            .filter(|&&x| x != 0.0)
            .fold(f64::INFINITY, |m, &x| m.min(x.abs()));
        if nearest.is_infinite() {
            return i32::MAX;
        }
        // 2^k <= nearest
        let mut k = nearest.log2().floor() as i32;
        while 2f64.powi(k) > nearest {
            k -= 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(a: f64, b: f64) -> PiecewiseConstant1D {
        PiecewiseConstant1D::indicator(a, b).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(PiecewiseConstant1D::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(PiecewiseConstant1D::new(vec![1.0, 0.0], vec![1.0]).is_err());
        assert!(PiecewiseConstant1D::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
        assert!(PiecewiseConstant1D::new(vec![0.0, 1.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(PiecewiseConstant1D::new(vec![], vec![]).unwrap().is_zero());
    }

    #[test]
    fn point_values() {
        let f = PiecewiseConstant1D::new(vec![0.0, 1.0, 2.0], vec![3.0, -1.0]).unwrap();
        assert_eq!(f.value_at(-0.1), 0.0);
        assert_eq!(f.value_at(0.0), 3.0);
        assert_eq!(f.value_at(1.0), -1.0);
        assert_eq!(f.value_at(2.0), 0.0);
        assert_eq!(f.midpoint_value(1.0), 1.0);
        assert_eq!(f.midpoint_value(0.0), 1.5);
        assert_eq!(f.midpoint_value(2.0), -0.5);
        assert_eq!(f.jumps(), vec![(0.0, 3.0), (1.0, -4.0), (2.0, 1.0)]);
    }

    #[test]
    fn annulus_restrictions() {
        let r = chi(-1.0, 1.0).restrict_to_annulus(0);
        assert_eq!(r.breakpoints(), &[-1.0, -0.5, 0.5, 1.0]);
        assert_eq!(r.values(), &[1.0, 0.0, 1.0]);
        assert!(chi(1.0, 2.0).restrict_to_annulus(0).is_zero());
        let r = chi(0.0, 4.0).restrict_to_annulus(2);
        assert_eq!(r, chi(2.0, 4.0));
        let r = chi(-3.0, 0.25).restrict_to_restricted_annulus(0);
        assert_eq!(r, chi(-1.0, 0.25));
    }

    #[test]
    fn arithmetic() {
        let f = chi(0.0, 2.0).add(&chi(1.0, 3.0).scale(2.0));
        assert_eq!(f.breakpoints(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(f.values(), &[1.0, 3.0, 2.0]);
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.simplified(), f);
        let g = chi(0.0, 1.0).add(&chi(1.0, 2.0));
        assert_eq!(g.simplified(), chi(0.0, 2.0));
        assert_eq!(chi(1.0, 2.0).dilate(2.0), chi(2.0, 4.0));
        assert_eq!(chi(1.0, 2.0).translate(-1.0), chi(0.0, 1.0));
    }

    #[test]
    fn norms_and_moments() {
        let f = PiecewiseConstant1D::new(vec![0.0, 1.0, 3.0], vec![2.0, -1.0]).unwrap();
        assert!((f.lebesgue_norm(2.0) - 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.lebesgue_norm(f64::INFINITY), 2.0);
        assert_eq!(f.l1_norm(), 4.0);
        assert_eq!(f.moment(0), 0.0);
        assert_eq!(f.moment(1), 1.0 - 4.0);
        assert_eq!(f.support(), Some((0.0, 3.0)));
        assert_eq!(f.enclosing_ball_index(), Some(2));
    }

    #[test]
    fn flat_scale() {
        let f = PiecewiseConstant1D::new(vec![-0.3, 0.0, 0.2], vec![1.0, 2.0]).unwrap();
        assert_eq!(f.flat_scale_near_origin(), -3);
        assert_eq!(chi(-1.0, 1.0).flat_scale_near_origin(), 0);
    }
}
