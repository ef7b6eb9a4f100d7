//! `rlspace`: weighted norms, block decompositions, operators and
//! verification harnesses from the shell.
//!
//! Exit codes: 0 success, 2 input error, 3 hypothesis violation, 4
//! numerical-domain error, 5 verification failure.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "rlspace", version, about = "Harmonic analysis on power-weighted central block spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Function-spec JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Weight parameters `n,p,s,alpha`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Seed (offset of the seeded harnesses).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance override.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceArg {
    /// Blocks on the annuli `C_k`, `k_min <= k <= 0`; needs support in `B_0`.
    Homogeneous,
    /// Blocks on `C_k` for every annulus met by the support.
    Annular,
    /// Restrict-type blocks on `C~_k`, `k >= 0`.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveArg {
    /// `N -> ||S_N f - f||`.
    E,
    /// `N -> sup |S_N f - f|` on the breakpoint-excluding grid.
    Sup,
    /// `k -> ||T a_k||` over canonical blocks.
    BlockScale,
    /// `R -> int_{2 <= |x| <= R} |T f|^p |x|^alpha`.
    Tail,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Weighted Lebesgue norm and its per-annulus profile.
    Norm {
        #[command(flatten)]
        common: Common,
        /// Annuli of the profile, `lo,hi`.
        #[arg(long, default_value = "-20,10", allow_hyphen_values = true)]
        k_range: String,
    },
    /// Block decomposition with coefficient cost and quasinorm bound.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "homogeneous")]
        space: SpaceArg,
        /// Innermost annulus of the homogeneous routes.
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        k_min: i32,
        /// Random re-splitting rounds of the quasinorm search (0 = greedy).
        #[arg(long, default_value_t = 0)]
        rounds: u32,
    },
    /// Applies an operator on a grid.
    Apply {
        #[command(flatten)]
        common: Common,
        /// hilbert, hilbert_truncated, hilbert_maximal, maximal, sn, carleson.
        #[arg(long)]
        op: String,
        /// `x1,x2,...` or `lin:a:b:count`.
        #[arg(long, default_value = "lin:-4:4:161", allow_hyphen_values = true)]
        grid: String,
        /// Frequencies (carleson) or truncations (hilbert_maximal):
        /// `v1,v2,...`, `pow2:lo:hi` or `geom:start:end`.
        #[arg(long)]
        schedule: Option<String>,
        /// Frequency of `sn`.
        #[arg(long, default_value_t = 1.0)]
        n: f64,
        /// Truncation of `hilbert_truncated`.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// CSV output; defaults to the JSON path with extension `csv`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Runs a verification harness by theorem id, or `all`.
    Verify {
        #[command(flatten)]
        common: Common,
        /// 2.1, 2.2, 3.1, 4.1, 5.2, 5.3, 6.1.pointwise, 6.3 or all.
        #[arg(value_name = "THEOREM")]
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        theorem: Option<String>,
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        schedule: Option<String>,
        /// Frequency `N` of the partial-sum operators.
        #[arg(long)]
        n: Option<f64>,
        /// Exit 0 when every verdict is out of hypothesis.
        #[arg(long)]
        allow_out_of_hypothesis: bool,
    },
    /// Emits one curve as CSV with a sidecar JSON of the configuration.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "e")]
        curve: CurveArg,
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        schedule: Option<String>,
        /// Block scales of the `block-scale` curve, `lo,hi`.
        #[arg(long, default_value = "-6,6", allow_hyphen_values = true)]
        k_range: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rlspace: {e}");
            ExitCode::from(e.code())
        }
    }
}
