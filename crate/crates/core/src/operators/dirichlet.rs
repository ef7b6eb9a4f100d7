//! Dirichlet partial sums `S_N f = int_{-N}^{N} f^(xi) e^{2 pi i xi x} d xi`.
//!
//! For a piecewise constant with jumps `J_i` at `x_i`,
//!
//! ```text
//! S_N f(x) = (1/pi) sum_i J_i Si(2 pi N (x - x_i))
//!          = f_mid(x) + (1/pi) sum_i J_i (Si - sgn pi/2)(2 pi N (x - x_i))
//! ```
//!
//! where `f_mid` averages the one-sided limits. The second form yields
//! `S_N f - f` without cancellation.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::quad::TailModel;
use crate::spaces::PiecewiseConstant1D;

use super::grid::EvalGrid;
use super::special::si_tail;

/// Jumps of `f` prepared for repeated partial-sum evaluation.
#[derive(Debug, Clone)]
pub struct PartialSums {
    f: PiecewiseConstant1D,
    jumps: Vec<(f64, f64)>,
}

impl PartialSums {
    pub fn new(f: &PiecewiseConstant1D) -> Self {
        let f = f.simplified();
        let jumps = f.jumps();
        Self { f, jumps }
    }

    /// `S_N f(x) - f_mid(x)`.
    pub fn deviation(&self, n: f64, x: f64) -> f64 {
        let w = 2.0 * PI * n;
        self.jumps.iter().map(|&(xi, j)| j * si_tail(w * (x - xi))).sum::<f64>() / PI
    }

    pub fn value(&self, n: f64, x: f64) -> f64 {
        self.f.midpoint_value(x) + self.deviation(n, x)
    }

    pub fn function(&self) -> &PiecewiseConstant1D {
        &self.f
    }

    /// Far-field envelope of `S_N f`: `|Z| / (2 pi^2 N |x|)` with
    /// `Z = sum_i J_i e^{-2 pi i N x_i}`, or the next order when `Z = 0`.
    pub fn far_field(&self, n: f64) -> TailModel {
        let w = 2.0 * PI * n;
        let z: Complex64 = self
            .jumps
            .iter()
            .map(|&(xi, j)| j * Complex64::from_polar(1.0, -w * xi))
            .sum();
        let mass: f64 = self.jumps.iter().map(|j| j.1.abs()).sum();
        if mass == 0.0 {
            return TailModel::Truncate;
        }
        if z.norm() > 1e-12 * mass {
            return TailModel::Oscillating { amplitude: z.norm() / (2.0 * PI * PI * n), decay: 1.0 };
        }
        let z1: Complex64 = self
            .jumps
            .iter()
            .map(|&(xi, j)| j * xi * Complex64::from_polar(1.0, -w * xi))
            .sum();
        TailModel::Oscillating { amplitude: z1.norm() / (2.0 * PI * PI * n), decay: 2.0 }
    }
}

/// `S_N f` on a grid by the exact sine-integral formula.
pub fn dirichlet_sn(f: &PiecewiseConstant1D, n: f64, grid: &EvalGrid) -> Result<Vec<f64>> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParams(format!("N must be positive, got {n}")));
    }
    let s = PartialSums::new(f);
    Ok(grid.points().par_iter().map(|&x| s.value(n, x)).collect())
}

/// `e^{2 pi i N x} g(x)` on sample points `xs`.
pub fn modulate(g: &[Complex64], xs: &[f64], n: f64) -> Vec<Complex64> {
    g.iter()
        .zip(xs)
        .map(|(v, &x)| v * Complex64::from_polar(1.0, 2.0 * PI * n * x))
        .collect()
}

/// Samples on the torus `[-L/2, L/2)` at `x_j = -L/2 + j L / 2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    pub period: f64,
    pub values: Vec<f64>,
}

impl PeriodicSamples {
    pub fn abscissae(&self) -> Vec<f64> {
        let d = self.step();
        (0..self.values.len()).map(|j| -0.5 * self.period + j as f64 * d).collect()
    }

    pub fn step(&self) -> f64 {
        self.period / self.values.len() as f64
    }

    pub fn from_fn(m: u32, period: f64, f: impl Fn(f64) -> f64) -> Self {
        let len = 1usize << m;
        let d = period / len as f64;
        let values = (0..len).map(|j| f(-0.5 * period + j as f64 * d)).collect();
        Self { period, values }
    }

    /// Midpoint-convention samples of `f`; warns when the support reaches
    /// the cell boundary of the torus.
    pub fn of_piecewise(f: &PiecewiseConstant1D, m: u32, period: f64) -> (Self, Vec<String>) {
        let mut warnings = Vec::new();
        if let Some((a, b)) = f.support() {
            if a <= -0.5 * period || b >= 0.5 * period {
                warnings.push(format!(
                    "support [{a}, {b}] touches the period boundary +-{}",
                    0.5 * period
                ));
            }
        }
        (Self::from_fn(m, period, |x| f.midpoint_value(x)), warnings)
    }
}

/// Options for the spectral route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Combine resolutions `m + 1` and `m` to cancel the leading `O(h^2)`
    /// sampling error of jump discontinuities.
    pub richardson: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { richardson: true }
    }
}

/// Output of the spectral route.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Periodic Hilbert transform by the multiplier `-i sgn(k)`, with the
/// constant and Nyquist modes removed.
pub fn periodic_hilbert(g: &[Complex64]) -> Vec<Complex64> {
    banded_hilbert(g, 0)
}

/// Hilbert multiplier for samples whose spectrum was shifted down by
/// `shift` bins: bin `k` is read as the frequency in
/// `[-len/2 - shift, len/2 - shift)`, so no mode changes sign by wrapping.
fn banded_hilbert(g: &[Complex64], shift: i64) -> Vec<Complex64> {
    let len = g.len();
    let half = (len / 2) as i64;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut buf = g.to_vec();
    fwd.process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let kappa = (k as i64 + half + shift).rem_euclid(len as i64) - half - shift;
        let factor = if kappa == 0 || kappa == -half - shift {
            Complex64::new(0.0, 0.0)
        } else if kappa > 0 {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        *c *= factor;
    }
    inv.process(&mut buf);
    let scale = 1.0 / len as f64;
    buf.iter().map(|c| c * scale).collect()
}

/// `S_N f = -(i/2) (M^N H M^{-N} f - M^{-N} H M^N f)` on periodic samples.
///
/// With `H` the transform of multiplier `-i sgn(xi)` this combination has
/// multiplier `chi_{(-N, N)}` (half weight at `|xi| = N`). The modulations
/// are periodic only when `N L` is an integer.
pub fn dirichlet_sn_via_hilbert(samples: &PeriodicSamples, n: f64) -> Result<Vec<f64>> {
    let len = samples.values.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidParams(format!("need 2^m samples, got {len}")));
    }
    let nyquist = len as f64 / (2.0 * samples.period);
    if !(n > 0.0) || n >= nyquist {
        return Err(Error::NumericalDomain {
            x: n,
            reason: format!("N must lie in (0, {nyquist}) for {len} samples over period {}", samples.period),
        });
    }
    let bins = n * samples.period;
    if (bins - bins.round()).abs() > 1e-9 * bins.max(1.0) {
        return Err(Error::NumericalDomain {
            x: n,
            reason: format!("N L = {bins} must be an integer for periodic modulation"),
        });
    }
    let shift = bins.round() as i64;
    let xs = samples.abscissae();
    let f: Vec<Complex64> = samples.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let a = modulate(&banded_hilbert(&modulate(&f, &xs, -n), shift), &xs, n);
    let b = modulate(&banded_hilbert(&modulate(&f, &xs, n), -shift), &xs, -n);
    let half_i = Complex64::new(0.0, -0.5);
    Ok(a.iter().zip(&b).map(|(p, q)| (half_i * (p - q)).re).collect())
}

/// Spectral route applied to a piecewise constant sampled at resolution
/// `2^m` over period `period`.
pub fn dirichlet_sn_spectral(
    f: &PiecewiseConstant1D,
    n: f64,
    m: u32,
    period: f64,
    options: SpectralOptions,
) -> Result<SpectralResult> {
    let (coarse, warnings) = PeriodicSamples::of_piecewise(f, m, period);
    let abscissae = coarse.abscissae();
    let base = dirichlet_sn_via_hilbert(&coarse, n)?;
    let values = if options.richardson {
        let (fine, _) = PeriodicSamples::of_piecewise(f, m + 1, period);
        let fine_vals = dirichlet_sn_via_hilbert(&fine, n)?;
        base.iter()
            .enumerate()
            .map(|(j, c)| (4.0 * fine_vals[2 * j] - c) / 3.0)
            .collect()
    } else {
        base
    };
    Ok(SpectralResult { abscissae, values, warnings })
}

/// `sum_l S_N f(x + l L)`, the partial sum of the periodization of `f`,
/// summed symmetrically over `|l| <= images`.
///
/// When `N L` is an integer the images beyond the cutoff share the phase of
/// the leading far-field term, and their sum `~ -2 d / (L^2 (images + 1/2))`
/// per jump at offset `d` is added in closed form.
pub fn periodized_sn(sums: &PartialSums, n: f64, period: f64, x: f64, images: usize) -> f64 {
    let mut far = 0.0;
    for l in (1..=images).rev() {
        let d = l as f64 * period;
        // far images only carry the deviation part
        far += sums.deviation(n, x + d) + sums.deviation(n, x - d);
    }
    let bins = n * period;
    if (bins - bins.round()).abs() <= 1e-9 * bins.max(1.0) {
        let w = 2.0 * PI * n;
        let cut = images as f64 + 0.5;
        far += sums
            .jumps
            .iter()
            .map(|&(xi, j)| {
                let d = x - xi;
                -j * (w * d).cos() / (PI * w) * (-2.0 * d / (period * period * cut))
            })
            .sum::<f64>();
    }
    sums.value(n, x) + far
}
