//! Dispatch of harnesses by theorem id with shared overrides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{FunctionData, PiecewiseConstant1D, WeightParams};

use super::convergence::{default_pointwise_grid, verify_norm_convergence, verify_pointwise_convergence, ConvergenceConfig};
use super::decomposition::{verify_decomposition_independence, DecompositionConfig, LinearOp};
use super::inclusions::{verify_ambient_inclusion, verify_coefficient_inclusion, InclusionConfig};
use super::report::VerificationReport;
use super::sharpness::{verify_hilbert_sharpness, verify_maximal_sharpness, SharpnessConfig};
use super::uniform::{verify_uniform_block_bound, UniformConfig, UniformOp};

pub const THEOREMS: [&str; 8] = ["2.1", "2.2", "3.1", "4.1", "5.2", "5.3", "6.1.pointwise", "6.3"];

/// Overrides applied on top of each harness's defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub params: Option<WeightParams>,
    pub function: Option<FunctionData>,
    /// Frequency schedule for the convergence harnesses.
    pub schedule: Option<Vec<f64>>,
    pub seeds: Option<Vec<u64>>,
    /// Added to every seed of the seeded harnesses, explicit or default.
    #[serde(default)]
    pub seed_offset: Option<u64>,
    pub tolerance: Option<f64>,
    /// Operator name for the uniform and independence harnesses.
    pub op: Option<String>,
    /// Frequency `N` for operators that take one.
    pub n: Option<f64>,
}

fn w(p: f64, alpha: f64) -> WeightParams {
    WeightParams::new(1, p, 2.0, alpha).expect("default parameters are valid")
}

fn chi(a: f64, b: f64) -> FunctionData {
    PiecewiseConstant1D::indicator(a, b).expect("valid interval").into()
}

fn tag(p: &WeightParams) -> String {
    format!("p{}_s{}_a{}", p.p(), p.s(), p.alpha())
}

/// Operators of the uniform-bound sweep, by CLI name.
pub fn parse_uniform_op(name: &str, n: Option<f64>) -> Result<UniformOp> {
    Ok(match name {
        "hilbert" => UniformOp::Hilbert,
        "hilbert_maximal" => UniformOp::HilbertMaximal,
        "maximal" => UniformOp::Maximal,
        "lattice_maximal" => UniformOp::LatticeMaximal { h: 2f64.powi(-8) },
        "sn" | "dirichlet_sn" => UniformOp::DirichletSn { n: n.unwrap_or(1.0) },
        "carleson" => UniformOp::Carleson,
        _ => return Err(Error::InvalidParams(format!("unknown operator {name:?}"))),
    })
}

fn uniform(opts: &RunOptions) -> Result<VerificationReport> {
    let grid = match opts.params {
        Some(p) => vec![p],
        None => vec![w(0.5, -0.75), w(1.0, -0.5)],
    };
    let ops = match &opts.op {
        Some(name) => vec![parse_uniform_op(name, opts.n)?],
        None => vec![
            UniformOp::Hilbert,
            UniformOp::HilbertMaximal,
            UniformOp::Maximal,
            UniformOp::LatticeMaximal { h: 2f64.powi(-8) },
            UniformOp::DirichletSn { n: opts.n.unwrap_or(1.0) },
            UniformOp::Carleson,
        ],
    };
    let config = UniformConfig { tolerance: opts.tolerance, ..Default::default() };
    let mut report = VerificationReport::new("3.1", grid[0]);
    for params in &grid {
        for op in &ops {
            let r = verify_uniform_block_bound(*op, params, &config)?;
            report.absorb(&format!("{}/{}", op.name(), tag(params)), r);
        }
    }
    Ok(report)
}

fn sharpness_config(opts: &RunOptions) -> SharpnessConfig {
    match opts.params {
        Some(p) => SharpnessConfig { ps: vec![p.p()], ..Default::default() },
        None => SharpnessConfig::default(),
    }
}

fn independence(opts: &RunOptions) -> Result<VerificationReport> {
    let params = opts.params.unwrap_or_else(|| w(1.0, -0.5));
    let f = opts.function.clone().unwrap_or_else(|| chi(-2.0, 2.0));
    let mut config = DecompositionConfig::default();
    if let Some(t) = opts.tolerance {
        config.tolerance = t;
    }
    if let Some(s) = &opts.seeds {
        config.seeds = s.clone();
    }
    config.seeds = shifted(config.seeds, opts);
    let ops = match &opts.op {
        Some(name) => vec![LinearOp::parse(name, opts.n)?],
        None => vec![LinearOp::Hilbert, LinearOp::DirichletSn { n: opts.n.unwrap_or(4.0) }],
    };
    let mut report = VerificationReport::new("5.3", params);
    for op in ops {
        let name = match op {
            LinearOp::Hilbert => "hilbert",
            LinearOp::DirichletSn { .. } => "dirichlet_sn",
        };
        report.absorb(name, verify_decomposition_independence(op, &f, &params, &config)?);
    }
    Ok(report)
}

fn convergence_config(opts: &RunOptions) -> ConvergenceConfig {
    let mut config = ConvergenceConfig::default();
    if let Some(s) = &opts.schedule {
        config.schedule = s.clone();
    }
    config
}

fn inclusion_config(opts: &RunOptions) -> InclusionConfig {
    let mut config = InclusionConfig::default();
    if let Some(p) = opts.params {
        config.params_grid = vec![(p.p(), p.s(), p.alpha())];
    }
    if let Some(s) = &opts.seeds {
        config.seeds = s.clone();
    }
    config.seeds = shifted(config.seeds, opts);
    config
}

fn shifted(seeds: Vec<u64>, opts: &RunOptions) -> Vec<u64> {
    let offset = opts.seed_offset.unwrap_or(0);
    seeds.into_iter().map(|s| s.wrapping_add(offset)).collect()
}

/// Runs one harness. Unknown ids are input errors.
pub fn run_theorem(id: &str, opts: &RunOptions) -> Result<VerificationReport> {
    let mut report = match id {
        "2.1" => verify_ambient_inclusion(&inclusion_config(opts))?,
        "2.2" => verify_coefficient_inclusion(&inclusion_config(opts))?,
        "3.1" => uniform(opts)?,
        "4.1" => verify_maximal_sharpness(&sharpness_config(opts))?,
        "5.2" => verify_hilbert_sharpness(&sharpness_config(opts))?,
        "5.3" => independence(opts)?,
        "6.1.pointwise" => {
            let params = opts.params.unwrap_or_else(|| w(1.0, -0.5));
            let f = opts.function.clone().unwrap_or_else(|| chi(1.0, 2.0));
            let g = f
                .as_piecewise()
                .ok_or_else(|| Error::Unsupported("partial sums are implemented on the line".into()))?;
            let grid = default_pointwise_grid(g);
            verify_pointwise_convergence(&f, &params, &grid, &convergence_config(opts))?
        }
        "6.3" => {
            let params = opts.params.unwrap_or_else(|| w(1.0, -0.5));
            let f = opts.function.clone().unwrap_or_else(|| chi(0.25, 0.5));
            verify_norm_convergence(&f, &params, &convergence_config(opts))?
        }
        _ => return Err(Error::InvalidParams(format!("unknown theorem id {id:?}; expected one of {THEOREMS:?}"))),
    };
    report.provenance("run_options", opts);
    Ok(report)
}

/// Every harness with its defaults, in the order of [`THEOREMS`].
pub fn verify_all(opts: &RunOptions) -> Result<Vec<VerificationReport>> {
    THEOREMS.iter().map(|id| run_theorem(id, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(run_theorem("9.9", &RunOptions::default()), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn operator_names() {
        assert_eq!(parse_uniform_op("sn", Some(2.0)).unwrap(), UniformOp::DirichletSn { n: 2.0 });
        assert!(parse_uniform_op("fourier", None).is_err());
    }

    #[test]
    fn overrides_reach_the_harness() {
        let opts = RunOptions { schedule: Some(vec![1.0, 2.0, 4.0, 8.0]), ..Default::default() };
        let r = run_theorem("6.3", &opts).unwrap();
        match &r.measurements["e"] {
            super::super::Measurement::Curve(c) => assert_eq!(c.x, vec![1.0, 2.0, 4.0, 8.0]),
            _ => panic!("e is a curve"),
        }
        assert!(r.provenance.contains_key("run_options"));
    }
}
