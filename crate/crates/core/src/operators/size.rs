//! Empirical probes of the size conditions that drive the block estimates.
//!
//! For a block `a` on `C_k` the probes measure
//!
//! ```text
//! outer decay    |Ta(x)| |x|^n / ||a||_1            on |x| >= 2^{k+1}
//! inner bound    |Ta(x)| 2^{kn} / ||a||_1           on |x| <= 2^{k-2}
//! kernel bound   |Ta(x)| / int |a(y)| |x-y|^{-n} dy  off the support
//! ```
//!
//! and report the largest ratio over the probe points. The centered
//! restrict-type variants use the same quantities with `x_0 = 0`.

use serde::{Deserialize, Serialize};

use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::spaces::PiecewiseConstant1D;

use super::hilbert::{hilbert_value, truncated_value};
use super::maximal::Maximal1D;

/// Points per side of the origin in each probe region.
pub const PROBES_PER_SIDE: usize = 128;

/// Decades (powers of two) spanned by a probe region.
const PROBE_SPAN: i32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SizeCondition {
    #[serde(rename = "3.1")]
    OuterDecay,
    #[serde(rename = "3.2")]
    InnerBound,
    #[serde(rename = "3.4")]
    CenteredOuterDecay,
    #[serde(rename = "3.5")]
    CenteredInnerBound,
    #[serde(rename = "3.6")]
    KernelBound,
}

impl SizeCondition {
    pub fn id(&self) -> &'static str {
        match self {
            Self::OuterDecay => "3.1",
            Self::InnerBound => "3.2",
            Self::CenteredOuterDecay => "3.4",
            Self::CenteredInnerBound => "3.5",
            Self::KernelBound => "3.6",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Ok(match id {
            "3.1" => Self::OuterDecay,
            "3.2" => Self::InnerBound,
            "3.4" => Self::CenteredOuterDecay,
            "3.5" => Self::CenteredInnerBound,
            "3.6" => Self::KernelBound,
            _ => return Err(Error::InvalidParams(format!("unknown size condition {id:?}"))),
        })
    }
}

/// Operators with exact one-dimensional evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SizeOperator {
    Maximal,
    Hilbert,
    HilbertTruncated { eps: f64 },
}

impl SizeOperator {
    fn evaluator<'a>(&self, f: &'a PiecewiseConstant1D) -> Box<dyn Fn(f64) -> f64 + Sync + 'a> {
        match *self {
            SizeOperator::Maximal => {
                let m = Maximal1D::new(f);
                Box::new(move |x| m.value(x))
            }
            SizeOperator::Hilbert => {
                let g = f.simplified();
                Box::new(move |x| hilbert_value(&g, x).abs())
            }
            SizeOperator::HilbertTruncated { eps } => Box::new(move |x| truncated_value(f, eps, x).abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeConditionReport {
    pub condition: SizeCondition,
    pub k: i32,
    pub region: String,
    pub c_emp: f64,
    pub probes: usize,
}

fn geometric_radii(lo: f64, hi: f64) -> Vec<f64> {
    let r = (hi / lo).powf(1.0 / (PROBES_PER_SIDE - 1) as f64);
    (0..PROBES_PER_SIDE).map(|i| lo * r.powi(i as i32)).collect()
}

fn symmetric(radii: &[f64]) -> Vec<f64> {
    radii.iter().flat_map(|&r| [-r, r]).collect()
}

/// `int |f(y)| / |x - y| dy` for `x` off the support of `f`.
fn kernel_integral(f: &PiecewiseConstant1D, x: f64) -> f64 {
    f.pieces()
        .filter(|p| p.2 != 0.0)
        .map(|(a, b, v)| {
            let d = if x > b { ((b - a) / (x - b)).ln_1p() } else { ((b - a) / (a - x)).ln_1p() };
            v.abs() * d
        })
        .sum()
}

/// Measures one size condition for `op` on a one-dimensional block.
pub fn check_size_conditions(op: SizeOperator, block: &Block, condition: SizeCondition) -> Result<SizeConditionReport> {
    let f = block
        .data
        .as_piecewise()
        .ok_or_else(|| Error::Unsupported("size probes need a piecewise constant block".into()))?;
    let k = block.k;
    let centered = matches!(condition, SizeCondition::CenteredOuterDecay | SizeCondition::CenteredInnerBound);
    if centered && k < 0 {
        return Err(Error::InvalidParams(format!("centered conditions need k >= 0, got {k}")));
    }
    let outer = || {
        // the unit-ball case of the centered condition probes |x| > 2
        let lo = if centered && k == 0 { 2.0 * (1.0 + 1e-12) } else { 2f64.powi(k + 1) };
        (symmetric(&geometric_radii(lo, lo * 2f64.powi(PROBE_SPAN))), format!("{lo} <= |x| <= {}", lo * 2f64.powi(PROBE_SPAN)))
    };
    let inner = || {
        let hi = 2f64.powi(k - 2);
        let lo = hi * 2f64.powi(-PROBE_SPAN);
        (symmetric(&geometric_radii(lo, hi)), format!("{lo} <= |x| <= {hi}"))
    };
    let (points, region) = match condition {
        SizeCondition::OuterDecay | SizeCondition::CenteredOuterDecay => outer(),
        SizeCondition::InnerBound => inner(),
        SizeCondition::CenteredInnerBound => {
            if k < 2 {
                return Err(Error::InvalidParams(format!("probe region of 3.5 is empty for k = {k}")));
            }
            inner()
        }
        SizeCondition::KernelBound => {
            let (mut o, ro) = outer();
            let (i, ri) = inner();
            o.extend(i);
            (o, format!("{ro} and {ri}"))
        }
    };
    let norm1 = f.l1_norm();
    let eval = op.evaluator(f);
    let c_emp = if norm1 == 0.0 {
        0.0
    } else {
        points
            .iter()
            .map(|&x| {
                let t = eval(x);
                match condition {
                    SizeCondition::OuterDecay | SizeCondition::CenteredOuterDecay => t * x.abs() / norm1,
                    SizeCondition::InnerBound | SizeCondition::CenteredInnerBound => t * 2f64.powi(k) / norm1,
                    SizeCondition::KernelBound => t / kernel_integral(f, x),
                }
            })
            .fold(0.0, f64::max)
    };
    Ok(SizeConditionReport { condition, k, region, c_emp, probes: points.len() })
}

/// Size-condition constants across a sweep of block scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSweep {
    pub reports: Vec<SizeConditionReport>,
    /// `max / min` of the nonzero constants (one if all vanish).
    pub variation: f64,
    /// All constants finite and `variation < 2`.
    pub pass: bool,
}

pub fn size_condition_sweep(op: SizeOperator, blocks: &[Block], condition: SizeCondition) -> Result<SizeSweep> {
    let reports = blocks
        .iter()
        .map(|b| check_size_conditions(op, b, condition))
        .collect::<Result<Vec<_>>>()?;
    let cs: Vec<f64> = reports.iter().map(|r| r.c_emp).filter(|&c| c > 0.0).collect();
    let max = cs.iter().copied().fold(0.0, f64::max);
    let min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let variation = if cs.is_empty() { 1.0 } else { max / min };
    let pass = reports.iter().all(|r| r.c_emp.is_finite()) && variation < 2.0;
    Ok(SizeSweep { reports, variation, pass })
}
