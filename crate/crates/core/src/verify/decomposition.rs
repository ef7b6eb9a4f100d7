//! `Tf = sum_i lambda_i T a_i` does not depend on the decomposition.

use serde::{Deserialize, Serialize};

use crate::blocks::{decompose_annular, decompose_nonhomogeneous, split_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::operators::hilbert::hilbert_value;
use crate::operators::PartialSums;
use crate::quad::{weighted_power_integral, PanelLayout};
use crate::spaces::{FunctionData, PiecewiseConstant1D, WeightParams};

use super::report::{Comparison, VerificationReport};

/// Linear operators with exact evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LinearOp {
    Hilbert,
    DirichletSn { n: f64 },
}

impl LinearOp {
    /// Parses an operator name; the nonlinear operators are rejected.
    pub fn parse(name: &str, n: Option<f64>) -> Result<Self> {
        match name {
            "hilbert" => Ok(LinearOp::Hilbert),
            "sn" | "dirichlet_sn" => Ok(LinearOp::DirichletSn { n: n.unwrap_or(4.0) }),
            "maximal" | "hilbert_maximal" | "carleson" => {
                Err(Error::Unsupported(format!("{name} is not linear; the extension argument needs a linear operator")))
            }
            _ => Err(Error::InvalidParams(format!("unknown operator {name:?}"))),
        }
    }

    fn evaluator(self, f: &PiecewiseConstant1D) -> Box<dyn Fn(f64) -> f64 + Sync> {
        match self {
            LinearOp::Hilbert => {
                let g = f.simplified();
                Box::new(move |x| hilbert_value(&g, x))
            }
            LinearOp::DirichletSn { n } => {
                let s = PartialSums::new(f);
                Box::new(move |x| s.value(n, x))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionConfig {
    /// Innermost annulus of the homogeneous route.
    pub k_min: i32,
    /// Seeds of the randomly re-split decompositions.
    pub seeds: Vec<u64>,
    /// Comparison domain `[-2^m R, 2^m R]` around the support radius `R`.
    pub radius_octaves: i32,
    /// Relative tolerance in `L^p(|x|^alpha)`.
    pub tolerance: f64,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self { k_min: -20, seeds: vec![1, 2, 3], radius_octaves: 6, tolerance: 1e-8 }
    }
}

/// `x -> sum_i lambda_i (T a_i)(x)`, with any truncation residual carried
/// as one more explicit term so that the terms sum to `f` exactly.
struct Synthesis {
    parts: Vec<(f64, Box<dyn Fn(f64) -> f64 + Sync>)>,
    breakpoints: Vec<f64>,
}

impl Synthesis {
    fn new(op: LinearOp, d: &Decomposition, residual: Option<&PiecewiseConstant1D>) -> Result<Self> {
        let mut parts = Vec::new();
        let mut breakpoints = Vec::new();
        let blocks = d.terms.iter().map(|t| (t.lambda, &t.block.data));
        for (lambda, data) in blocks {
            let g = piecewise(data)?;
            breakpoints.extend_from_slice(g.breakpoints());
            parts.push((lambda, op.evaluator(g)));
        }
        if let Some(r) = residual.filter(|r| !r.is_zero()) {
            breakpoints.extend_from_slice(r.breakpoints());
            parts.push((1.0, op.evaluator(r)));
        }
        Ok(Self { parts, breakpoints })
    }

    fn value(&self, x: f64) -> f64 {
        self.parts.iter().map(|(l, t)| l * t(x)).sum()
    }
}

fn piecewise(f: &FunctionData) -> Result<&PiecewiseConstant1D> {
    f.as_piecewise()
        .ok_or_else(|| Error::Unsupported("decomposition independence is checked on the line".into()))
}

pub fn verify_decomposition_independence(
    op: LinearOp,
    f: &FunctionData,
    params: &WeightParams,
    config: &DecompositionConfig,
) -> Result<VerificationReport> {
    if params.n() != 1 {
        return Err(Error::Unsupported("decomposition independence is checked on the line".into()));
    }
    if let LinearOp::DirichletSn { n } = op {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParams(format!("N must be positive, got {n}")));
        }
    }
    let g = piecewise(f)?;
    let mut report = VerificationReport::new("5.3", *params);
    let (p, alpha) = (params.p(), params.alpha());

    let annular = decompose_annular(f, params, config.k_min)?;
    let residual = f.restrict_to_ball(config.k_min - 1);
    let residual = piecewise(&residual)?.clone();
    let restricted = decompose_nonhomogeneous(f, params)?;
    let mut routes: Vec<(String, Synthesis)> = vec![
        ("annular".into(), Synthesis::new(op, &annular, Some(&residual))?),
        ("restricted".into(), Synthesis::new(op, &restricted, None)?),
    ];
    for &seed in &config.seeds {
        let split = split_decomposition(&annular, seed);
        routes.push((format!("split_{seed}"), Synthesis::new(op, &split, Some(&residual))?));
    }
    report.scalar("terms/annular", annular.terms.len() as f64);
    report.scalar("terms/restricted", restricted.terms.len() as f64);
    report.scalar("residual_norm/annular", annular.residual_norm);

    let direct = op.evaluator(g);
    let mut sing: Vec<f64> = g.breakpoints().to_vec();
    for (_, s) in &routes {
        sing.extend_from_slice(&s.breakpoints);
    }
    sing.sort_by(f64::total_cmp);
    sing.dedup();
    let r = g.support_radius().max(1.0) * 2f64.powi(config.radius_octaves);
    let max_panel = match op {
        LinearOp::Hilbert => f64::INFINITY,
        LinearOp::DirichletSn { n } => 0.5 / n,
    };
    let layout = PanelLayout::symmetric(r, &sing, max_panel);
    let norm = |h: &(dyn Fn(f64) -> f64 + Sync)| weighted_power_integral(h, p, alpha, &layout).powf(1.0 / p);
    let scale = norm(&|x| direct(x));
    report.scalar("direct_norm", scale);
    let rel = |d: f64| if scale > 0.0 { d / scale } else { d };

    // NaN-propagating maximum
    let mut worst: f64 = 0.0;
    let mut record = |name: &str, d: f64| {
        report.scalar(&format!("rel_diff/{name}"), d);
        if !(d <= worst) {
            worst = d;
        }
    };
    for (name, s) in &routes {
        record(&format!("{name}_vs_direct"), rel(norm(&|x| s.value(x) - direct(x))));
    }
    // the two structurally different routes against each other
    let (a, b) = (&routes[0].1, &routes[1].1);
    record("annular_vs_restricted", rel(norm(&|x| a.value(x) - b.value(x))));
    report.scalar("rel_diff/max", worst);
    report.check("decompositions agree with each other and with T f", "rel_diff/max", Comparison::Below, config.tolerance, true);
    report.provenance("operator", op);
    report.provenance("config", config);
    report.provenance("domain_radius", r);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{make_canonical_block, BlockShape};

    fn w() -> WeightParams {
        WeightParams::new(1, 1.0, 2.0, -0.5).unwrap()
    }

    #[test]
    fn ball_indicator_through_hilbert() {
        let f: FunctionData = PiecewiseConstant1D::indicator(-2.0, 2.0).unwrap().into();
        let r = verify_decomposition_independence(LinearOp::Hilbert, &f, &w(), &DecompositionConfig::default()).unwrap();
        assert!(r.passed() && r.has_judged(), "{:?}", r.value("rel_diff/max"));
        assert_eq!(r.value("terms/restricted"), Some(2.0));
    }

    #[test]
    fn single_block_to_high_accuracy() {
        let b = make_canonical_block(&w(), 0, BlockShape::Indicator).unwrap();
        let cfg = DecompositionConfig { tolerance: 1e-10, ..Default::default() };
        let r = verify_decomposition_independence(LinearOp::Hilbert, &b.data, &w(), &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.value("rel_diff/max"));
    }

    #[test]
    fn zero_function() {
        let f: FunctionData = PiecewiseConstant1D::zero().into();
        let r = verify_decomposition_independence(LinearOp::DirichletSn { n: 4.0 }, &f, &w(), &DecompositionConfig::default()).unwrap();
        assert_eq!(r.value("direct_norm"), Some(0.0));
        assert_eq!(r.value("rel_diff/max"), Some(0.0));
    }

    #[test]
    fn nonlinear_operators_are_rejected() {
        assert!(matches!(LinearOp::parse("maximal", None), Err(Error::Unsupported(_))));
        assert!(matches!(LinearOp::parse("carleson", None), Err(Error::Unsupported(_))));
        assert_eq!(LinearOp::parse("sn", Some(2.0)).unwrap(), LinearOp::DirichletSn { n: 2.0 });
    }
}
