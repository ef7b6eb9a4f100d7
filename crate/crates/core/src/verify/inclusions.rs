//! Inclusion constants between block spaces and weighted Lebesgue spaces,
//! measured on seeded random piecewise constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{decompose_homogeneous, decompose_nonhomogeneous, rl_norm_upper_bound, SearchStrategy, Space};
use crate::error::{Error, Result};
use crate::spaces::{FunctionData, PiecewiseConstant1D, WeightParams};

use super::fit::spread;
use super::report::{Comparison, VerificationReport};

/// Seed-stability threshold on `max / min` of an empirical constant.
pub const SEED_STABILITY: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionConfig {
    /// `(p, s, alpha)` on the line.
    pub params_grid: Vec<(f64, f64, f64)>,
    pub seeds: Vec<u64>,
    /// Innermost annulus of the constructive homogeneous decomposition.
    pub k_min: i32,
    /// Support half width of the functions for the nonhomogeneous route.
    pub wide_radius: f64,
    /// Dilations `2^k` probed for the ambient constant.
    pub dilation_octaves: (i32, i32),
}

impl Default for InclusionConfig {
    fn default() -> Self {
        Self {
            params_grid: vec![(0.5, 2.0, -0.75), (1.0, 2.0, -0.5), (2.0, 2.0, -0.5)],
            seeds: (0..20).collect(),
            k_min: -60,
            wide_radius: 8.0,
            dilation_octaves: (-8, 8),
        }
    }
}

impl InclusionConfig {
    fn params(&self) -> Result<Vec<WeightParams>> {
        if self.params_grid.is_empty() {
            return Err(Error::InvalidParams("empty parameter grid".into()));
        }
        self.params_grid.iter().map(|&(p, s, a)| WeightParams::new(1, p, s, a)).collect()
    }
}

/// Piecewise constant on `[-r, r]` with 2 to 8 random interior breakpoints
/// and values `+-U[1/2, 1]`.
pub fn random_function(seed: u64, r: f64) -> PiecewiseConstant1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let interior = rng.random_range(2..=8);
    let mut bps: Vec<f64> = (0..interior).map(|_| rng.random_range(-r..r)).collect();
    bps.push(-r);
    bps.push(r);
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let values = (1..bps.len())
        .map(|_| {
            let v = rng.random_range(0.5..=1.0);
            if rng.random::<bool>() { -v } else { v }
        })
        .collect();
    PiecewiseConstant1D::new(bps, values).expect("sorted breakpoints")
}

fn tag(w: &WeightParams) -> String {
    format!("p{}_s{}_a{}", w.p(), w.s(), w.alpha())
}

/// `||f||_{L^p(|x|^alpha)}^{pbar} / ||f||_{RL}^{pbar}` across seeds and
/// dilations.
pub fn verify_ambient_inclusion(config: &InclusionConfig) -> Result<VerificationReport> {
    let grid = config.params()?;
    let mut report = VerificationReport::new("2.1", grid[0]);
    let parts = grid.par_iter().map(|w| ambient_point(w, config)).collect::<Result<Vec<_>>>()?;
    for part in parts {
        let t = tag(&part.params);
        report.absorb(&t, part);
    }
    report.provenance("config", config);
    Ok(report)
}

fn ambient_constant(f: &FunctionData, w: &WeightParams) -> Result<f64> {
    let pbar = w.pbar();
    let ub = rl_norm_upper_bound(f, w, Space::Homogeneous, SearchStrategy::Greedy)?;
    Ok(f.weighted_lp_norm(w.p(), w.alpha()).powf(pbar) / ub.powf(pbar))
}

fn ambient_point(w: &WeightParams, config: &InclusionConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("2.1", *w);
    let cs = config
        .seeds
        .iter()
        .map(|&seed| ambient_constant(&random_function(seed, 1.0).into(), w))
        .collect::<Result<Vec<f64>>>()?;
    let seeds: Vec<f64> = config.seeds.iter().map(|&s| s as f64).collect();
    r.scalar("ambient/max_constant", cs.iter().copied().fold(0.0, f64::max));
    r.scalar("ambient/seed_spread", spread(&cs));
    r.curve("ambient/constants", "seed", "constant", seeds, cs);
    let in_hyp = w.in_main_range();
    r.check("ambient constant stable across seeds", "ambient/seed_spread", Comparison::Below, SEED_STABILITY, in_hyp);

    if let Some(&seed) = config.seeds.first() {
        let f = random_function(seed, 1.0);
        let ks: Vec<i32> = (config.dilation_octaves.0..=config.dilation_octaves.1).collect();
        let ds = ks
            .iter()
            .map(|&k| ambient_constant(&f.dilate(2f64.powi(k)).into(), w))
            .collect::<Result<Vec<f64>>>()?;
        r.scalar("ambient/dilation_spread", spread(&ds));
        r.curve("ambient/dilation_constants", "k", "constant", ks.iter().map(|&k| k as f64).collect(), ds);
        r.check("ambient constant uniform under dilation", "ambient/dilation_spread", Comparison::Below, SEED_STABILITY, in_hyp);
    }
    Ok(r)
}

/// Coefficient costs of the constructive decompositions against Lebesgue
/// norms: the homogeneous route on `B_0` for `p < s`, and the
/// nonhomogeneous route for `alpha <= n (p/s - 1)`.
pub fn verify_coefficient_inclusion(config: &InclusionConfig) -> Result<VerificationReport> {
    let grid = config.params()?;
    let mut report = VerificationReport::new("2.2", grid[0]);
    let parts = grid.par_iter().map(|w| coefficient_point(w, config)).collect::<Result<Vec<_>>>()?;
    for part in parts {
        let t = tag(&part.params);
        report.absorb(&t, part);
    }
    report.provenance("config", config);
    Ok(report)
}

fn coefficient_point(w: &WeightParams, config: &InclusionConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("2.2", *w);
    let seeds: Vec<f64> = config.seeds.iter().map(|&s| s as f64).collect();
    let pbar = w.pbar();

    // ball route: sum |lambda_k|^pbar <= C ||f||_{L^s(|x|^alpha)}^pbar
    let ball_hyp = w.p() < w.s() && w.alpha() > -w.dim();
    if ball_hyp {
        let mut residual: f64 = 0.0;
        let cs = config
            .seeds
            .iter()
            .map(|&seed| {
                let f: FunctionData = random_function(seed, 1.0).into();
                let d = decompose_homogeneous(&f, w, config.k_min)?;
                residual = residual.max(d.residual_norm);
                Ok(d.coefficient_cost() / f.weighted_lp_norm(w.s(), w.alpha()).powf(pbar))
            })
            .collect::<Result<Vec<f64>>>()?;
        r.scalar("ball/max_constant", cs.iter().copied().fold(0.0, f64::max));
        r.scalar("ball/max_residual_norm", residual);
        r.scalar("ball/seed_spread", spread(&cs));
        r.curve("ball/constants", "seed", "constant", seeds.clone(), cs);
    } else {
        r.text("ball/skipped", "the ball route needs p < s");
        r.scalar("ball/seed_spread", f64::NAN);
    }
    r.check("ball coefficient constant stable across seeds", "ball/seed_spread", Comparison::Below, SEED_STABILITY, ball_hyp);

    // nonhomogeneous route: sum |lambda_k|^pbar <= C ||f||_{L^s}^pbar
    let cs = config
        .seeds
        .iter()
        .map(|&seed| {
            let f: FunctionData = random_function(seed, config.wide_radius).into();
            let d = decompose_nonhomogeneous(&f, w)?;
            Ok(d.coefficient_cost() / f.lebesgue_norm(w.s()).powf(pbar))
        })
        .collect::<Result<Vec<f64>>>()?;
    r.scalar("restricted/max_constant", cs.iter().copied().fold(0.0, f64::max));
    r.scalar("restricted/seed_spread", spread(&cs));
    r.curve("restricted/constants", "seed", "constant", seeds, cs);
    r.check(
        "restricted coefficient constant stable across seeds",
        "restricted/seed_spread",
        Comparison::Below,
        SEED_STABILITY,
        w.in_inclusion_range(),
    );
    Ok(r)
}

/// Both inclusion reports merged.
pub fn verify_inclusions(config: &InclusionConfig) -> Result<VerificationReport> {
    let grid = config.params()?;
    let mut report = VerificationReport::new("2.1+2.2", grid[0]);
    report.absorb("2.1", verify_ambient_inclusion(config)?);
    report.absorb("2.2", verify_coefficient_inclusion(config)?);
    Ok(report)
}
