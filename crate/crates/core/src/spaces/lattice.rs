use crate::error::{Error, Result};

use super::params::{unit_ball_volume, DyadicAnnulus};
use super::piecewise::PiecewiseConstant1D;
use super::weight::radial_integral;

/// A function sampled on the uniform cubic lattice of `[-L, L)^n`.
///
/// Cells are the closed-open boxes `prod [-L + i_d h, -L + (i_d + 1) h)`,
/// stored lexicographically with the last axis varying fastest. Since
/// `L / h` is an integer the origin is always a lattice vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    n: u32,
    h: f64,
    extent: f64,
    values: Vec<f64>,
}

impl LatticeFunction {
    pub fn new(n: u32, h: f64, extent: f64, values: Vec<f64>) -> Result<Self> {
        let side = Self::side_cells(n, h, extent)?;
        let expected = side.pow(n);
        if values.len() != expected {
            return Err(Error::InvalidFunction(format!(
                "lattice with {side} cells per axis in dimension {n} needs {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite lattice value {v}")));
        }
        Ok(Self { n, h, extent, values })
    }

    fn side_cells(n: u32, h: f64, extent: f64) -> Result<usize> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidFunction(format!("lattice dimension must be 1, 2 or 3, got {n}")));
        }
        if !(h.is_finite() && h > 0.0 && extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidFunction(format!("need positive h and L, got h = {h}, L = {extent}")));
        }
        let ratio = extent / h;
        let rounded = ratio.round();
        if rounded < 1.0 || (ratio - rounded).abs() > 1e-9 * ratio {
            return Err(Error::InvalidFunction(format!("L / h must be a positive integer, got {ratio}")));
        }
        Ok(2 * rounded as usize)
    }

    pub fn zeros(n: u32, h: f64, extent: f64) -> Result<Self> {
        let side = Self::side_cells(n, h, extent)?;
        Ok(Self { n, h, extent, values: vec![0.0; side.pow(n)] })
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(n: u32, h: f64, extent: f64, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut out = Self::zeros(n, h, extent)?;
        let mut c = [0.0; 3];
        for idx in 0..out.values.len() {
            out.center_into(idx, &mut c);
            out.values[idx] = f(&c[..n as usize]);
        }
        Ok(out)
    }

    /// One-dimensional lattice holding the exact cell averages of `f`.
    pub fn from_piecewise(f: &PiecewiseConstant1D, h: f64, extent: f64) -> Result<Self> {
        let mut out = Self::zeros(1, h, extent)?;
        for (a, b, v) in f.pieces() {
            let lo = ((a + extent) / h).floor().max(0.0) as usize;
            let hi = (((b + extent) / h).ceil() as usize).min(out.values.len());
            for i in lo..hi {
                let c0 = -extent + i as f64 * h;
                let overlap = (b.min(c0 + h) - a.max(c0)).max(0.0);
                out.values[i] += v * overlap / h;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn cells_per_axis(&self) -> usize {
        (2.0 * self.extent / self.h).round() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Per-axis indices of the flat index `idx`.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let side = self.cells_per_axis();
        let mut out = [0; 3];
        let mut rest = idx;
        for d in (0..self.n as usize).rev() {
            out[d] = rest % side;
            rest /= side;
        }
        out
    }

    fn center_into(&self, idx: usize, c: &mut [f64; 3]) {
        let mi = self.multi_index(idx);
        for d in 0..self.n as usize {
            c[d] = -self.extent + (mi[d] as f64 + 0.5) * self.h;
        }
    }

    pub fn cell_center(&self, idx: usize) -> Vec<f64> {
        let mut c = [0.0; 3];
        self.center_into(idx, &mut c);
        c[..self.n as usize].to_vec()
    }

    pub fn center_radius(&self, idx: usize) -> f64 {
        let mut c = [0.0; 3];
        self.center_into(idx, &mut c);
        c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Whether the cell has the origin as a vertex.
    pub fn touches_origin(&self, idx: usize) -> bool {
        let mut c = [0.0; 3];
        self.center_into(idx, &mut c);
        c[..self.n as usize].iter().all(|x| x.abs() < self.h)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    /// Keeps the cells whose center radius satisfies `keep`.
    pub fn restrict_by_radius(&self, keep: impl Fn(f64) -> bool) -> Self {
        let mut out = self.clone();
        for (idx, v) in out.values.iter_mut().enumerate() {
            if !keep(self.center_radius(idx)) {
                *v = 0.0;
            }
        }
        out
    }

    /// `f * chi_{C_k}` with membership decided by the cell-center radius.
    pub fn restrict_to_annulus(&self, k: i32) -> Self {
        let c = DyadicAnnulus::new(k, self.n);
        self.restrict_by_radius(|r| c.contains_radius(r))
    }

    pub fn restrict_to_restricted_annulus(&self, k: i32) -> Self {
        let c = DyadicAnnulus::new(k, self.n);
        self.restrict_by_radius(|r| c.restrict_contains_radius(r))
    }

    pub fn restrict_to_ball(&self, k: i32) -> Self {
        let r0 = 2f64.powi(k);
        self.restrict_by_radius(|r| r <= r0)
    }

    pub fn cell_measure(&self) -> f64 {
        self.h.powi(self.n as i32)
    }

    /// `int_cell |x|^alpha dx`. Cells at the origin use the midpoint of the
    /// lower and upper bounds obtained from the inscribed and circumscribed
    /// radial sectors; this is exact in one dimension.
    pub fn cell_weight(&self, idx: usize, alpha: f64) -> f64 {
        if !self.touches_origin(idx) {
            return self.center_radius(idx).powf(alpha) * self.cell_measure();
        }
        let n = self.n;
        let nf = n as f64;
        let orthant = 2f64.powi(-(n as i32));
        let inner = nf * unit_ball_volume(n) * orthant * radial_integral(0.0, self.h, alpha + nf - 1.0);
        if inner.is_infinite() {
            return f64::INFINITY;
        }
        let rest = self.cell_measure() * (1.0 - unit_ball_volume(n) * orthant);
        let r_far = self.h * nf.sqrt();
        let (w0, w1) = (self.h.powf(alpha), r_far.powf(alpha));
        inner + rest * 0.5 * (w0.min(w1) + w0.max(w1))
    }

    /// `int |f|^p |x|^alpha dx` over the lattice.
    pub fn weighted_power_integral(&self, p: f64, alpha: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(idx, &v)| v.abs().powf(p) * self.cell_weight(idx, alpha))
            .sum()
    }

    pub fn weighted_lp_norm(&self, p: f64, alpha: f64) -> f64 {
        if p.is_infinite() {
            return self.lebesgue_norm(p);
        }
        self.weighted_power_integral(p, alpha).powf(1.0 / p)
    }

    pub fn lebesgue_norm(&self, s: f64) -> f64 {
        if s.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let sum: f64 = self.values.iter().map(|v| v.abs().powf(s)).sum();
        (sum * self.cell_measure()).powf(1.0 / s)
    }

    pub fn l1_norm(&self) -> f64 {
        self.lebesgue_norm(1.0)
    }

    /// Largest center radius among nonzero cells.
    pub fn support_radius(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(idx, _)| self.center_radius(idx))
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.h != other.h || self.extent != other.extent {
            return Err(Error::InvalidFunction("lattice shapes differ".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LatticeFunction::zeros(4, 0.5, 1.0).is_err());
        assert!(LatticeFunction::zeros(1, 0.3, 1.0).is_err());
        assert!(LatticeFunction::new(2, 0.5, 1.0, vec![0.0; 15]).is_err());
        let f = LatticeFunction::new(2, 0.5, 1.0, vec![0.0; 16]).unwrap();
        assert_eq!(f.cells_per_axis(), 4);
    }

    #[test]
    fn geometry() {
        let f = LatticeFunction::zeros(2, 0.5, 1.0).unwrap();
        assert_eq!(f.cell_center(0), vec![-0.75, -0.75]);
        assert_eq!(f.cell_center(1), vec![-0.75, -0.25]);
        assert_eq!(f.multi_index(6), [1, 2, 0]);
        assert!(f.touches_origin(5));
        assert!(!f.touches_origin(0));
    }

    #[test]
    fn one_dimensional_norms_are_exact() {
        let g = PiecewiseConstant1D::indicator(0.0, 1.0).unwrap();
        let f = LatticeFunction::from_piecewise(&g, 1.0 / 64.0, 2.0).unwrap();
        // midpoint weights away from the origin
        let got = f.weighted_lp_norm(2.0, -0.5);
        assert!((got - 2f64.sqrt()).abs() < 1e-3);
        let got = f.weighted_lp_norm(1.0, 0.0);
        assert!((got - 1.0).abs() < 1e-15);
        assert!(f.weighted_lp_norm(1.0, -1.0).is_infinite());
    }

    #[test]
    fn origin_cell_bounds_bracket_the_truth() {
        // int_{[0,1]^2} |x|^{-1} dx = 2 ln(1 + sqrt 2)
        let exact = 2.0 * (1.0 + 2f64.sqrt()).ln();
        let f = LatticeFunction::zeros(2, 1.0, 1.0).unwrap();
        let got = f.cell_weight(3, -1.0);
        assert!((got - exact).abs() / exact < 0.05);
    }

    #[test]
    fn annulus_by_center_radius() {
        let f = LatticeFunction::from_fn(1, 0.25, 2.0, |_| 1.0).unwrap();
        let r = f.restrict_to_annulus(0);
        assert!((r.l1_norm() - 1.0).abs() < 1e-15);
        let r = f.restrict_to_restricted_annulus(0);
        assert!((r.l1_norm() - 2.0).abs() < 1e-15);
    }
}
