//! Sharpness of the weight range for `M` and `H`.
//!
//! Each harness integrates the operator applied to a fixed indicator over
//! geometric families of truncated domains and reads off growth rates.
//! Divergence is always inferred from a fitted rate, never from a large
//! value.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::hilbert::hilbert_value;
use crate::operators::maximal::default_halfwidths;
use crate::operators::{hl_maximal, Maximal1D};
use crate::quad::{weighted_power_integral, PanelLayout};
use crate::spaces::{DyadicAnnulus, LatticeFunction, PiecewiseConstant1D, WeightParams};

use super::fit::{log_slope, power_exponent};
use super::report::{Comparison, VerificationReport};

/// Tolerance on fitted boundary slopes.
pub const SLOPE_TOLERANCE: f64 = 0.10;
/// Largest relative gap allowed between the two half-range inner slopes.
pub const INNER_STABILITY: f64 = 0.15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessConfig {
    /// Exponents `p`; the weights probed are derived from each.
    pub ps: Vec<f64>,
    /// Tail radii `2^j` for `j` in this range.
    pub tail_octaves: (i32, i32),
    /// Octaves of the refined slope refit, in half steps.
    pub refined_octaves: (i32, i32),
    /// Inner radii `2^{-j}` for `j` in this range.
    pub inner_octaves: (i32, i32),
    /// Lattice cell width for the one-dimensional lower bound check.
    pub lattice_h: f64,
    /// Lattice cell width in dimension two.
    pub lattice_h_2d: f64,
}

impl Default for SharpnessConfig {
    fn default() -> Self {
        Self {
            ps: vec![1.0],
            tail_octaves: (4, 12),
            refined_octaves: (4, 20),
            inner_octaves: (2, 20),
            lattice_h: 2f64.powi(-8),
            lattice_h_2d: 2f64.powi(-5),
        }
    }
}

fn octaves(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|j| 2f64.powi(j)).collect()
}

fn half_octaves(lo: i32, hi: i32) -> Vec<f64> {
    (2 * lo..=2 * hi).map(|j| 2f64.powf(j as f64 / 2.0)).collect()
}

fn check_ps(ps: &[f64]) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::InvalidParams("empty list of exponents".into()));
    }
    if let Some(p) = ps.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidParams(format!("p must be positive, got {p}")));
    }
    Ok(())
}

/// `int_{lo <= |x| <= hi} |g|^p |x|^alpha` with panel cuts at `sing`.
fn shell_integral(g: impl Fn(f64) -> f64 + Sync, p: f64, alpha: f64, lo: f64, hi: f64, sing: &[f64]) -> f64 {
    weighted_power_integral(g, p, alpha, &PanelLayout::shell(lo, hi, sing, f64::INFINITY))
}

/// `int_{lo <= x <= hi}` on the positive side only.
fn ray_integral(g: impl Fn(f64) -> f64 + Sync, p: f64, alpha: f64, lo: f64, hi: f64, sing: &[f64]) -> f64 {
    let layout = PanelLayout { intervals: vec![(lo, hi)], singular: sing.to_vec(), max_panel: f64::INFINITY };
    weighted_power_integral(g, p, alpha, &layout)
}

/// Range of `M` on `L^p(|x|^alpha)` for `f = chi_{[-1,1]}` and `chi_{C_0}`.
pub fn verify_maximal_sharpness(config: &SharpnessConfig) -> Result<VerificationReport> {
    check_ps(&config.ps)?;
    let p0 = config.ps[0];
    let mut report = VerificationReport::new("4.1", WeightParams::new(1, p0, 2.0, p0 - 1.0)?);
    let f = PiecewiseConstant1D::indicator(-1.0, 1.0)?;
    let m = Maximal1D::new(&f);
    let c0 = PiecewiseConstant1D::new(vec![-1.0, -0.5, 0.5, 1.0], vec![1.0, 0.0, 1.0])?;
    let mc0 = Maximal1D::new(&c0);
    let r0 = 2.0;
    for &p in &config.ps {
        let tag = format!("p{p}");
        let tail = |rp: f64, alpha: f64| shell_integral(|x| m.value(x), p, alpha, r0, rp, &[]);

        // interior: alpha in the middle of (-1, p - 1)
        let alpha = 0.5 * (p - 2.0);
        let radii = octaves(2, 14);
        let t: Vec<f64> = radii.iter().map(|&r| tail(r, alpha)).collect();
        let inc: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let shrink = inc.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
        let i10 = 10 - 2;
        let change = (t[i10 + 1] - t[i10]) / t[i10];
        report.curve(&format!("{tag}/interior/tail"), "R", "tail_integral", radii, t);
        report.scalar(&format!("{tag}/interior/alpha"), alpha);
        report.scalar(&format!("{tag}/interior/min_increment_shrink"), shrink);
        report.scalar(&format!("{tag}/interior/analytic_increment_shrink"), 2f64.powf(p - alpha - 1.0));
        report.scalar(&format!("{tag}/interior/relative_change_2^10_2^11"), change);
        report.check(
            &format!("{tag} interior tail increments shrink at least 2x per doubling"),
            &format!("{tag}/interior/min_increment_shrink"),
            Comparison::AtLeast,
            2.0,
            true,
        );
        report.check(
            &format!("{tag} interior tail changes under 5% from 2^10 to 2^11"),
            &format!("{tag}/interior/relative_change_2^10_2^11"),
            Comparison::Below,
            0.05,
            true,
        );

        // boundary alpha = p - 1: (Mf)^p |x|^alpha ~ 2^p / |x| on each side
        let alpha = p - 1.0;
        let target = 2.0 * 2f64.powf(p);
        let radii = octaves(config.tail_octaves.0, config.tail_octaves.1);
        let t: Vec<f64> = radii.iter().map(|&r| tail(r, alpha)).collect();
        let s = log_slope(&radii, &t);
        let fine = half_octaves(config.refined_octaves.0, config.refined_octaves.1);
        let tf: Vec<f64> = fine.iter().map(|&r| tail(r, alpha)).collect();
        let half = fine.len() / 2;
        let s_fine = log_slope(&fine[half..], &tf[half..]);
        report.curve(&format!("{tag}/boundary/tail"), "R", "tail_integral", radii.clone(), t.clone());
        report.scalar(&format!("{tag}/boundary/slope"), s);
        report.scalar(&format!("{tag}/boundary/slope_refined"), s_fine);
        report.scalar(&format!("{tag}/boundary/target"), target);
        report.flag(&format!("{tag}/boundary/refinement_moves_toward_target"), (s_fine - target).abs() <= (s - target).abs());
        report.check(
            &format!("{tag} boundary tail slope vs log R'"),
            &format!("{tag}/boundary/slope"),
            Comparison::RelWithin { target },
            SLOPE_TOLERANCE,
            true,
        );
        report.check(
            &format!("{tag} boundary slope refit moves toward target"),
            &format!("{tag}/boundary/refinement_moves_toward_target"),
            Comparison::IsTrue,
            0.0,
            true,
        );
        if p == 1.0 {
            // Mf = 2 / (|x| + 1) outside [-1, 1]
            let err = radii
                .iter()
                .zip(&t)
                .map(|(&r, v)| (v - 4.0 * ((r + 1.0) / (r0 + 1.0)).ln()).abs() / v)
                .fold(0.0, f64::max);
            report.scalar(&format!("{tag}/boundary/oracle_rel_error"), err);
            report.check(
                &format!("{tag} boundary tail matches 4 log((R'+1)/(R+1))"),
                &format!("{tag}/boundary/oracle_rel_error"),
                Comparison::Below,
                1e-9,
                true,
            );
        }

        // alpha = -1: int_{delta <= |x| <= 1} M(chi_{C_0})^p / |x| ~ log(1/delta)
        let deltas: Vec<f64> = (config.inner_octaves.0..=config.inner_octaves.1).map(|j| 2f64.powi(-j)).collect();
        let inner = |alpha: f64| -> Vec<f64> {
            deltas.iter().map(|&d| shell_integral(|x| mc0.value(x), p, alpha, d, 1.0, &[0.5])).collect()
        };
        let i1 = inner(-1.0);
        let inv: Vec<f64> = deltas.iter().map(|d| 1.0 / d).collect();
        let mid = deltas.len() / 2;
        let s_lo = log_slope(&inv[..=mid], &i1[..=mid]);
        let s_hi = log_slope(&inv[mid..], &i1[mid..]);
        let gap = (s_hi - s_lo).abs() / s_lo.abs().max(s_hi.abs());
        report.curve(&format!("{tag}/inner/alpha=-1"), "delta", "inner_integral", deltas.clone(), i1);
        report.scalar(&format!("{tag}/inner/slope_first_half"), s_lo);
        report.scalar(&format!("{tag}/inner/slope_second_half"), s_hi);
        report.scalar(&format!("{tag}/inner/slope_gap"), gap);
        report.flag(&format!("{tag}/inner/slopes_positive"), s_lo > 0.0 && s_hi > 0.0);
        report.check(&format!("{tag} inner growth slope positive"), &format!("{tag}/inner/slopes_positive"), Comparison::IsTrue, 0.0, true);
        report.check(
            &format!("{tag} inner growth slope stable"),
            &format!("{tag}/inner/slope_gap"),
            Comparison::Below,
            INNER_STABILITY,
            true,
        );
        // alpha < -1 grows like delta^{alpha + 1}
        let i15 = inner(-1.5);
        report.scalar(&format!("{tag}/inner/exponent_alpha=-1.5"), power_exponent(&deltas[mid..], &i15[mid..]));
        report.curve(&format!("{tag}/inner/alpha=-1.5"), "delta", "inner_integral", deltas.clone(), i15);
    }

    // lattice lower bound M(chi_{C_0}) >= 1/4 on B_0
    for (n, h) in [(1u32, config.lattice_h), (2, config.lattice_h_2d)] {
        let min = lattice_inner_minimum(n, h)?;
        report.scalar(&format!("lattice/n{n}/min_on_unit_ball"), min);
        report.check(&format!("lattice M(chi_C0) >= 1/4 on B_0 (n = {n})"), &format!("lattice/n{n}/min_on_unit_ball"), Comparison::AtLeast, 0.25, true);
    }
    report.provenance("config", config);
    report.provenance("tail_inner_radius", r0);
    Ok(report)
}

/// Minimum of the lattice `M(chi_{C_0})` over cells with center in `B_0`.
fn lattice_inner_minimum(n: u32, h: f64) -> Result<f64> {
    let c0 = DyadicAnnulus::new(0, n);
    let extent = 2.0;
    let f = LatticeFunction::from_fn(n, h, extent, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if c0.contains_radius(r) { 1.0 } else { 0.0 }
    })?;
    let m = hl_maximal(&f, &default_halfwidths(f.cells_per_axis()))?;
    let min = (0..m.values().len())
        .filter(|&i| m.center_radius(i) <= 1.0)
        .map(|i| m.values()[i])
        .fold(f64::INFINITY, f64::min);
    Ok(min)
}

/// Range of `H` on `L^p(|x|^alpha)` for `f = chi_{[1,2]}`.
pub fn verify_hilbert_sharpness(config: &SharpnessConfig) -> Result<VerificationReport> {
    check_ps(&config.ps)?;
    let p0 = config.ps[0];
    let mut report = VerificationReport::new("5.2", WeightParams::new(1, p0, 2.0, p0 - 1.0)?);
    let f = PiecewiseConstant1D::indicator(1.0, 2.0)?;
    let h = |x: f64| hilbert_value(&f, x);
    let sing = [1.0, 2.0];
    for &p in &config.ps {
        let tag = format!("p{p}");

        // boundary alpha = p - 1: |Hf|^p x^alpha ~ pi^{-p} / x
        let alpha = p - 1.0;
        let target = PI.powf(-p);
        let tail = |rp: f64| ray_integral(h, p, alpha, 3.0, rp, &sing);
        let radii = octaves(config.tail_octaves.0, config.tail_octaves.1);
        let t: Vec<f64> = radii.iter().map(|&r| tail(r)).collect();
        let s = log_slope(&radii, &t);
        let fine = half_octaves(config.refined_octaves.0, config.refined_octaves.1);
        let tf: Vec<f64> = fine.iter().map(|&r| tail(r)).collect();
        let half = fine.len() / 2;
        let s_fine = log_slope(&fine[half..], &tf[half..]);
        let two_sided: Vec<f64> = radii.iter().map(|&r| shell_integral(h, p, alpha, 3.0, r, &sing)).collect();
        report.scalar(&format!("{tag}/boundary/two_sided_slope"), log_slope(&radii, &two_sided));
        report.curve(&format!("{tag}/boundary/tail"), "R", "tail_integral", radii.clone(), t);
        report.scalar(&format!("{tag}/boundary/slope"), s);
        report.scalar(&format!("{tag}/boundary/slope_refined"), s_fine);
        report.scalar(&format!("{tag}/boundary/target"), target);
        report.flag(&format!("{tag}/boundary/refinement_moves_toward_target"), (s_fine - target).abs() <= (s - target).abs());
        report.check(
            &format!("{tag} boundary tail slope vs log R'"),
            &format!("{tag}/boundary/slope"),
            Comparison::RelWithin { target },
            SLOPE_TOLERANCE,
            true,
        );
        report.check(
            &format!("{tag} boundary slope refit moves toward target"),
            &format!("{tag}/boundary/refinement_moves_toward_target"),
            Comparison::IsTrue,
            0.0,
            true,
        );

        // above the boundary the tail grows like a power
        let above = alpha + 0.5;
        let ta: Vec<f64> = radii.iter().map(|&r| ray_integral(h, p, above, 3.0, r, &sing)).collect();
        report.scalar(&format!("{tag}/above/growth_exponent"), power_exponent(&radii[radii.len() / 2..], &ta[ta.len() / 2..]));
        report.scalar(&format!("{tag}/above/analytic_exponent"), above + 1.0 - p);

        // interior: both truncations settle
        let alpha = 0.5 * (p - 2.0);
        let tail_at = |j: i32| shell_integral(h, p, alpha, 2.0, 2f64.powi(j), &sing);
        let near_at = |j: i32| shell_integral(h, p, alpha, 2f64.powi(-j), 0.5, &[]);
        let (ja, jb) = (config.refined_octaves.1, config.refined_octaves.1 + 1);
        let tail_change = (tail_at(jb) - tail_at(ja)).abs() / tail_at(ja);
        let near_change = (near_at(jb) - near_at(ja)).abs() / near_at(ja);
        report.scalar(&format!("{tag}/interior/alpha"), alpha);
        report.scalar(&format!("{tag}/interior/tail_refinement_change"), tail_change);
        report.scalar(&format!("{tag}/interior/near_zero_refinement_change"), near_change);
        report.check(&format!("{tag} interior tail stabilizes"), &format!("{tag}/interior/tail_refinement_change"), Comparison::Below, 0.01, true);
        report.check(
            &format!("{tag} interior near-zero part stabilizes"),
            &format!("{tag}/interior/near_zero_refinement_change"),
            Comparison::Below,
            0.01,
            true,
        );

        // alpha = -1: |Hf| -> log 2 / pi at 0 on both sides
        let deltas: Vec<f64> = (config.inner_octaves.0..=config.inner_octaves.1 + 4).map(|j| 2f64.powi(-j)).collect();
        let near: Vec<f64> = deltas.iter().map(|&d| shell_integral(h, p, -1.0, d, 0.5, &[])).collect();
        let inv: Vec<f64> = deltas.iter().map(|d| 1.0 / d).collect();
        let s = log_slope(&inv, &near);
        let target = 2.0 * (LN_2 / PI).powf(p);
        report.curve(&format!("{tag}/inner/alpha=-1"), "delta", "near_zero_integral", deltas, near);
        report.scalar(&format!("{tag}/inner/slope"), s);
        report.check(
            &format!("{tag} near-zero growth at alpha = -1"),
            &format!("{tag}/inner/slope"),
            Comparison::RelWithin { target },
            SLOPE_TOLERANCE,
            true,
        );
    }

    // |Hf| on [0, 1/2]
    let xs: Vec<f64> = (0..=1000).map(|i| 0.5 * i as f64 / 1000.0).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| h(x).abs()).collect();
    let (imin, vmin) = vals.iter().copied().enumerate().fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
    report.scalar("near_zero/min_abs_hf", vmin);
    report.scalar("near_zero/argmin", xs[imin]);
    report.flag("near_zero/monotone", vals.windows(2).all(|w| w[1] >= w[0]));
    report.check("min |Hf| on [0, 1/2] equals log 2 / pi", "near_zero/min_abs_hf", Comparison::AbsWithin { target: LN_2 / PI }, 1e-12, true);
    report.check("|Hf| increasing on [0, 1/2]", "near_zero/monotone", Comparison::IsTrue, 0.0, true);
    report.provenance("config", config);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_default_run() {
        let r = verify_maximal_sharpness(&SharpnessConfig::default()).unwrap();
        let s = r.value("p1/boundary/slope").unwrap();
        assert!((s - 4.0).abs() < 0.4, "{s}");
        assert!(r.value("p1/boundary/oracle_rel_error").unwrap() < 1e-9);
        // increments shrink like 2^{1/2} per doubling, approached from below
        let shrink = r.value("p1/interior/min_increment_shrink").unwrap();
        assert!(shrink > 1.2 && shrink < 2f64.sqrt(), "{shrink}");
        assert!(!r.verdict("p1 interior tail increments shrink at least 2x per doubling").unwrap().pass.unwrap());
        assert!(r.value("lattice/n1/min_on_unit_ball").unwrap() >= 0.25);
    }

    #[test]
    fn hilbert_default_run() {
        let r = verify_hilbert_sharpness(&SharpnessConfig::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.value("near_zero/argmin"), Some(0.0));
        let g = r.value("p1/above/growth_exponent").unwrap();
        assert!((g - 0.5).abs() < 0.05, "{g}");
    }

    #[test]
    fn rejects_bad_exponents() {
        let cfg = SharpnessConfig { ps: vec![], ..Default::default() };
        assert!(verify_maximal_sharpness(&cfg).is_err());
        let cfg = SharpnessConfig { ps: vec![-1.0], ..Default::default() };
        assert!(verify_hilbert_sharpness(&cfg).is_err());
    }
}
