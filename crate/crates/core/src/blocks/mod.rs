//! Central blocks: functions living on one dyadic annulus with an `L^s` size
//! bound tied to the annulus scale, and decompositions into them.

mod decompose;

pub use decompose::{
    decompose_annular, decompose_homogeneous, decompose_nonhomogeneous, rl_norm_upper_bound,
    split_decomposition, Decomposition, SearchStrategy, Space, Term,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{DyadicAnnulus, FunctionData, LatticeFunction, PiecewiseConstant1D, WeightParams};

/// Relative slack allowed in the size condition.
pub const SIZE_SLACK: f64 = 1e-10;

/// Number of equal-measure pieces in the random-sign shape.
pub const RANDOM_PIECES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub params: WeightParams,
    pub k: i32,
    /// Supported on `C~_k` (the whole unit ball for `k = 0`) instead of `C_k`.
    pub restrict_type: bool,
    pub data: FunctionData,
}

/// Outcome of [`validate_block`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockValidation {
    pub ok: bool,
    pub support_ok: bool,
    /// `||a||_{L^s}`.
    pub measured: f64,
    /// `|B_k|^{-alpha/(pn) - 1/p + 1/s}`.
    pub bound: f64,
    pub slack_ratio: f64,
    /// Offending regions: `x`-intervals in one dimension, ranges of cell
    /// center radii on lattices.
    pub leakage: Vec<(f64, f64)>,
}

impl Block {
    fn allowed(&self) -> FunctionData {
        if self.restrict_type {
            self.data.restrict_to_restricted_annulus(self.k)
        } else {
            self.data.restrict_to_annulus(self.k)
        }
    }
}

/// Checks the support and size conditions of a block.
pub fn validate_block(block: &Block) -> BlockValidation {
    let params = &block.params;
    let leak = block.data.sub(&block.allowed()).expect("same kind");
    let leakage = match &leak {
        FunctionData::Piecewise(g) => g.pieces().filter(|p| p.2 != 0.0).map(|p| (p.0, p.1)).collect(),
        FunctionData::Lattice(g) => {
            let radii: Vec<f64> = g
                .values()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, _)| g.center_radius(i))
                .collect();
            if radii.is_empty() {
                Vec::new()
            } else {
                vec![(radii.iter().copied().fold(f64::INFINITY, f64::min), radii.iter().copied().fold(0.0, f64::max))]
            }
        }
    };
    let measured = block.data.lebesgue_norm(params.s());
    let bound = params.block_bound(block.k);
    let support_ok = leakage.is_empty() && (!block.restrict_type || block.k >= 0);
    BlockValidation {
        ok: support_ok && measured <= bound * (1.0 + SIZE_SLACK),
        support_ok,
        measured,
        bound,
        slack_ratio: measured / bound,
        leakage,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum BlockShape {
    Indicator,
    /// `+-c` on a fixed partition into [`RANDOM_PIECES`] equal pieces.
    RandomSigns { seed: u64 },
}

/// The intervals making up `C_k` (or `C~_k`) on the line.
fn annulus_intervals(k: i32, restrict_type: bool) -> Vec<(f64, f64)> {
    let r1 = 2f64.powi(k);
    if restrict_type && k == 0 {
        return vec![(-1.0, 1.0)];
    }
    let r0 = 0.5 * r1;
    vec![(-r1, -r0), (r0, r1)]
}

fn canonical_1d(params: &WeightParams, k: i32, restrict_type: bool, shape: BlockShape) -> Result<Block> {
    if params.n() != 1 {
        return Err(Error::Unsupported("piecewise blocks live in dimension one".into()));
    }
    if restrict_type && k < 0 {
        return Err(Error::InvalidParams(format!("restrict-type blocks need k >= 0, got {k}")));
    }
    let intervals = annulus_intervals(k, restrict_type);
    let measure: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let c = params.block_bound(k) / measure.powf(params.inv_s());
    let per_side = RANDOM_PIECES / intervals.len();
    let mut rng = match shape {
        BlockShape::RandomSigns { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        BlockShape::Indicator => None,
    };
    let mut bps: Vec<f64> = Vec::new();
    let mut vals = Vec::new();
    for &(a, b) in &intervals {
        match bps.last() {
            Some(&end) if end < a => {
                vals.push(0.0);
                bps.push(a);
            }
            Some(_) => {}
            None => bps.push(a),
        }
        let h = (b - a) / per_side as f64;
        for i in 1..=per_side {
            let flip = rng.as_mut().is_some_and(|r| r.random::<bool>());
            let sign = if flip { -1.0 } else { 1.0 };
            vals.push(sign * c);
            bps.push(if i == per_side { b } else { a + i as f64 * h });
        }
    }
    let data = PiecewiseConstant1D::new(bps, vals)?;
    Ok(Block { params: *params, k, restrict_type, data: data.into() })
}

/// `c chi_{C_k}` or a random-sign variant, with `||a||_s` equal to the bound.
pub fn make_canonical_block(params: &WeightParams, k: i32, shape: BlockShape) -> Result<Block> {
    canonical_1d(params, k, false, shape)
}

/// Restrict-type analogue on `C~_k`, `k >= 0`.
pub fn make_canonical_restricted_block(params: &WeightParams, k: i32, shape: BlockShape) -> Result<Block> {
    canonical_1d(params, k, true, shape)
}

/// Indicator block on a lattice in dimension `params.n()`, with membership
/// by cell-center radius and `||a||_s` equal to the bound.
pub fn make_lattice_block(params: &WeightParams, k: i32, h: f64, extent: f64) -> Result<Block> {
    let c = DyadicAnnulus::new(k, params.n());
    let f = LatticeFunction::from_fn(params.n(), h, extent, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if c.contains_radius(r) { 1.0 } else { 0.0 }
    })?;
    let norm = f.lebesgue_norm(params.s());
    if norm == 0.0 {
        return Err(Error::InvalidParams(format!("lattice h = {h} resolves no cell of C_{k}")));
    }
    let data = f.scale(params.block_bound(k) / norm);
    Ok(Block { params: *params, k, restrict_type: false, data: data.into() })
}
