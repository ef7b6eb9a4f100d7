//! Subcommand implementations.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use rlspace::blocks::{
    decompose_annular, decompose_homogeneous, decompose_nonhomogeneous, make_canonical_block, rl_norm_upper_bound,
    BlockShape, SearchStrategy, Space,
};
use rlspace::operators::hilbert::{hilbert_truncated, hilbert_value};
use rlspace::operators::maximal::default_halfwidths;
use rlspace::operators::report::curve_csv;
use rlspace::operators::{
    carleson, dirichlet_sn, hilbert, hilbert_maximal, hl_maximal, EvalGrid, Maximal1D, OperatorReport, PartialSums,
};
use rlspace::quad::{weighted_power_integral, PanelLayout};
use rlspace::spaces::norm_profile;
use rlspace::verify::all::parse_uniform_op;
use rlspace::verify::convergence::norm_error;
use rlspace::verify::{
    block_operator_norm, default_pointwise_grid, run_theorem, ConvergenceConfig, RunOptions, VerificationReport,
    THEOREMS,
};
use rlspace::{Error, FunctionData, PiecewiseConstant1D, WeightParams};

use crate::parse;
use crate::{Cli, Command, Common, CurveArg, SpaceArg};

const DEFAULT_PARAMS: &str = "1,1,2,-0.5";

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(Error::Hypothesis(_)) => 3,
            CliError::Core(Error::NumericalDomain { .. }) => 4,
            CliError::Core(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Verification(e) => write!(f, "verification failed: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Finite values as numbers, the rest as `"inf"`, `"-inf"`, `"nan"`.
fn ext(v: f64) -> Value {
    if v.is_nan() {
        json!("nan")
    } else if v.is_infinite() {
        json!(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        json!(v)
    }
}

fn provenance(cli: &Cli, common: &Common) -> Value {
    json!({
        "tool": "rlspace",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": common.seed,
        "config": cli,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe downstream is not an error.
fn stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => stdout(&format!("{text}\n")),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn params(common: &Common) -> Result<WeightParams> {
    Ok(parse::params(common.params.as_deref().unwrap_or(DEFAULT_PARAMS))?)
}

fn load(path: &Path) -> Result<FunctionData> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(FunctionData::from_json(&text)?)
}

fn input(common: &Common) -> Result<FunctionData> {
    match &common.input {
        Some(p) => load(p),
        None => Err(Error::InvalidParams("--input is required".into()).into()),
    }
}

fn input_or(common: &Common, default: PiecewiseConstant1D) -> Result<FunctionData> {
    match &common.input {
        Some(p) => load(p),
        None => Ok(default.into()),
    }
}

fn matching_dimension(f: &FunctionData, w: &WeightParams) -> Result<()> {
    if f.dim() != w.n() {
        return Err(Error::InvalidParams(format!("function lives in dimension {}, parameters in {}", f.dim(), w.n())).into());
    }
    Ok(())
}

fn line(f: &FunctionData) -> Result<&PiecewiseConstant1D> {
    f.as_piecewise()
        .ok_or_else(|| Error::Unsupported("this operation needs a piecewise constant on the line".into()).into())
}

fn chi(a: f64, b: f64) -> PiecewiseConstant1D {
    PiecewiseConstant1D::indicator(a, b).expect("valid interval")
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Norm { common, k_range } => norm(cli, common, k_range),
        Command::Decompose { common, space, k_min, rounds } => decompose(cli, common, *space, *k_min, *rounds),
        Command::Apply { common, op, grid, schedule, n, eps, csv } => {
            apply(cli, common, op, grid, schedule.as_deref(), *n, *eps, csv.as_deref())
        }
        Command::Verify { common, id, theorem, op, schedule, n, allow_out_of_hypothesis } => {
            let id = id.as_deref().or(theorem.as_deref()).ok_or_else(|| {
                CliError::Core(Error::InvalidParams("a theorem id (or all) is required".into()))
            })?;
            verify(cli, common, id, op.as_deref(), schedule.as_deref(), *n, *allow_out_of_hypothesis)
        }
        Command::Sweep { common, curve, op, schedule, k_range } => {
            sweep(cli, common, *curve, op.as_deref(), schedule.as_deref(), k_range)
        }
    }
}

fn norm(cli: &Cli, common: &Common, k_range: &str) -> Result<()> {
    let f = input(common)?;
    let w = params(common)?;
    matching_dimension(&f, &w)?;
    let (lo, hi) = parse::int_range(k_range)?;
    let value = f.weighted_lp_norm(w.p(), w.alpha());
    let profile = norm_profile(&f, &w, lo, hi);
    let terms: Vec<Value> = profile
        .terms
        .iter()
        .map(|t| json!({"k": t.k, "contribution": ext(t.contribution), "dyadic_estimate": ext(t.dyadic_estimate)}))
        .collect();
    let out = json!({
        "norm": ext(value),
        "divergent": value.is_infinite(),
        "params": w,
        "profile": {"terms": terms, "remainder": ext(profile.remainder), "total": ext(profile.total)},
        "provenance": provenance(cli, common),
    });
    emit(common.out.as_deref(), &pretty(&out))
}

fn decompose(cli: &Cli, common: &Common, space: SpaceArg, k_min: i32, rounds: u32) -> Result<()> {
    let f = input(common)?;
    let w = params(common)?;
    matching_dimension(&f, &w)?;
    let d = match space {
        SpaceArg::Homogeneous => decompose_homogeneous(&f, &w, k_min)?,
        SpaceArg::Annular => decompose_annular(&f, &w, k_min)?,
        SpaceArg::Restricted => decompose_nonhomogeneous(&f, &w)?,
    };
    let target = if space == SpaceArg::Restricted { Space::Restricted } else { Space::Homogeneous };
    let strategy = match rounds {
        0 => SearchStrategy::Greedy,
        r => SearchStrategy::Perturbed { seed: common.seed.unwrap_or(0), rounds: r },
    };
    let bound = rl_norm_upper_bound(&f, &w, target, strategy)?;
    let mut out: Map<String, Value> = serde_json::from_str(&d.to_json()).expect("decomposition json is an object");
    out.insert("rl_norm_upper_bound".into(), ext(bound));
    out.insert("search".into(), serde_json::to_value(strategy).expect("strategy serializes"));
    out.insert("provenance".into(), provenance(cli, common));
    emit(common.out.as_deref(), &pretty(&Value::Object(out)))
}

#[allow(clippy::too_many_arguments)]
fn apply(
    cli: &Cli,
    common: &Common,
    op: &str,
    grid: &str,
    schedule: Option<&str>,
    n: f64,
    eps: f64,
    csv: Option<&Path>,
) -> Result<()> {
    let f = input(common)?;
    let w = params(common).ok();
    let points = parse::grid_points(grid)?;
    let mut used_schedule = Vec::new();
    let (xs, values) = match (op, &f) {
        ("maximal", FunctionData::Lattice(g)) => {
            let m = hl_maximal(g, &default_halfwidths(g.cells_per_axis()))?;
            let xs: Vec<f64> = (0..m.values().len()).map(|i| m.center_radius(i)).collect();
            (xs, m.values().to_vec())
        }
        _ => {
            let g = line(&f)?;
            let values = match op {
                "hilbert" => hilbert(g, &EvalGrid::for_function(g, points.clone())?)?,
                "hilbert_truncated" => hilbert_truncated(g, eps, &EvalGrid::new(points.clone()))?,
                "hilbert_maximal" => {
                    let s = parse::schedule(schedule.unwrap_or("geom:0.0009765625:16"))?;
                    used_schedule = s.values().to_vec();
                    hilbert_maximal(g, &s, &EvalGrid::new(points.clone()))?
                }
                "maximal" => Maximal1D::new(g).values(&EvalGrid::new(points.clone())),
                "sn" | "dirichlet_sn" => {
                    used_schedule = vec![n];
                    dirichlet_sn(g, n, &EvalGrid::new(points.clone()))?
                }
                "carleson" => {
                    let s = parse::schedule(schedule.unwrap_or("geom:0.0625:1024"))?;
                    used_schedule = s.values().to_vec();
                    carleson(g, &s, &EvalGrid::new(points.clone()))?
                }
                other => return Err(Error::InvalidParams(format!("unknown operator {other:?}")).into()),
            };
            (points, values)
        }
    };
    let report = OperatorReport { operator: op.to_string(), params: w, grid: xs, values, schedule: used_schedule };
    let mut out = serde_json::to_value(&report).expect("operator reports serialize");
    out["provenance"] = provenance(cli, common);
    let text = pretty(&out);
    match &common.out {
        Some(path) => {
            write(path, &text)?;
            let csv_path = csv.map(Path::to_path_buf).unwrap_or_else(|| path.with_extension("csv"));
            write(&csv_path, &report.to_csv())
        }
        None => {
            if let Some(p) = csv {
                write(p, &report.to_csv())?;
            }
            emit(None, &text)
        }
    }
}

/// File-system safe form of a curve name.
fn slug(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

fn write_report(r: &VerificationReport, json_path: &Path) -> Result<()> {
    write(json_path, &r.to_json())?;
    let stem = json_path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let dir = json_path.parent().map(Path::to_path_buf).unwrap_or_default();
    for (name, csv) in r.curves_csv() {
        write(&dir.join(format!("{stem}.{}.csv", slug(&name))), &csv)?;
    }
    Ok(())
}

fn verify(
    cli: &Cli,
    common: &Common,
    id: &str,
    op: Option<&str>,
    schedule: Option<&str>,
    n: Option<f64>,
    allow_out_of_hypothesis: bool,
) -> Result<()> {
    let opts = RunOptions {
        params: common.params.as_deref().map(parse::params).transpose()?,
        function: common.input.as_deref().map(load).transpose()?,
        schedule: schedule.map(parse::schedule_values).transpose()?,
        seeds: None,
        seed_offset: common.seed,
        tolerance: common.tolerance,
        op: op.map(str::to_string),
        n,
    };
    let ids: Vec<&str> = if id == "all" { THEOREMS.to_vec() } else { vec![id] };
    let prov = provenance(cli, common);
    let mut reports = Vec::new();
    for id in &ids {
        let mut r = run_theorem(id, &opts)?;
        r.provenance("cli", &prov);
        reports.push(r);
    }
    match (&common.out, id == "all") {
        (Some(dir), true) => {
            for r in &reports {
                write_report(r, &dir.join(format!("{}.json", slug(&r.theorem))))?;
            }
        }
        (Some(path), false) => write_report(&reports[0], path)?,
        (None, _) => {
            let all: Vec<Value> = reports.iter().map(|r| serde_json::from_str(&r.to_json()).expect("reports are json")).collect();
            let v = if all.len() == 1 { all[0].clone() } else { Value::Array(all) };
            emit(None, &pretty(&v))?;
        }
    }
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures().into_iter().map(move |v| format!("{}: {}", r.theorem, v.criterion)))
        .collect();
    for r in &reports {
        let status = if !r.passed() {
            "FAIL"
        } else if r.has_judged() {
            "PASS"
        } else {
            "OUT OF HYPOTHESIS"
        };
        eprintln!("{status} {}", r.theorem);
    }
    if !failed.is_empty() {
        return Err(CliError::Verification(failed.join("; ")));
    }
    if let Some(r) = reports.iter().find(|r| !r.has_judged()) {
        if !allow_out_of_hypothesis {
            return Err(Error::Hypothesis(format!(
                "every criterion of {} is out of hypothesis for these parameters; report written",
                r.theorem
            ))
            .into());
        }
    }
    Ok(())
}

fn shell_integral(g: impl Fn(f64) -> f64 + Sync, w: &WeightParams, lo: f64, hi: f64, sing: &[f64]) -> f64 {
    weighted_power_integral(g, w.p(), w.alpha(), &PanelLayout::shell(lo, hi, sing, f64::INFINITY))
}

fn sweep(
    cli: &Cli,
    common: &Common,
    curve: CurveArg,
    op: Option<&str>,
    schedule: Option<&str>,
    k_range: &str,
) -> Result<()> {
    let w = params(common)?;
    let (xname, yname, rows): (&str, &str, Vec<(f64, f64)>) = match curve {
        CurveArg::E => {
            let f = input_or(common, chi(0.25, 0.5))?;
            let sums = PartialSums::new(line(&f)?);
            let cfg = ConvergenceConfig::default();
            let ns = parse::schedule_values(schedule.unwrap_or("pow2:0:10"))?;
            let rows = ns.iter().map(|&n| (n, norm_error(&sums, &w, n, cfg.radius, cfg.panels_per_period))).collect();
            ("N", "error", rows)
        }
        CurveArg::Sup => {
            let f = input_or(common, chi(1.0, 2.0))?;
            let g = line(&f)?;
            let sums = PartialSums::new(g);
            let grid = default_pointwise_grid(g);
            let ns = parse::schedule_values(schedule.unwrap_or("pow2:0:10"))?;
            let rows = ns
                .iter()
                .map(|&n| (n, grid.points().iter().map(|&x| sums.deviation(n, x).abs()).fold(0.0, f64::max)))
                .collect();
            ("N", "sup_error", rows)
        }
        CurveArg::BlockScale => {
            let op = parse_uniform_op(op.unwrap_or("hilbert"), None)?;
            let (lo, hi) = parse::int_range(k_range)?;
            let rows = (lo..=hi)
                .map(|k| {
                    let b = make_canonical_block(&w, k, BlockShape::Indicator)?;
                    Ok((k as f64, block_operator_norm(op, &b, 10)?))
                })
                .collect::<Result<Vec<_>>>()?;
            ("k", "weighted_norm", rows)
        }
        CurveArg::Tail => {
            let f = input_or(common, chi(-1.0, 1.0))?;
            let g = line(&f)?.simplified();
            let radii = parse::schedule_values(schedule.unwrap_or("pow2:2:14"))?;
            let inner = 2.0;
            let sing = g.breakpoints().to_vec();
            let rows = match op.unwrap_or("maximal") {
                "maximal" => {
                    let m = Maximal1D::new(&g);
                    radii.iter().map(|&r| (r, shell_integral(|x| m.value(x), &w, inner, r, &sing))).collect()
                }
                "hilbert" => radii.iter().map(|&r| (r, shell_integral(|x| hilbert_value(&g, x), &w, inner, r, &sing))).collect(),
                other => return Err(Error::InvalidParams(format!("tail curves support maximal and hilbert, got {other:?}")).into()),
            };
            ("R", "tail_integral", rows)
        }
    };
    let csv = curve_csv(xname, yname, rows.iter().copied());
    match &common.out {
        Some(path) => {
            write(path, &csv)?;
            let sidecar = json!({"curve": curve, "rows": rows.len(), "params": w, "provenance": provenance(cli, common)});
            write(&path.with_extension("json"), &pretty(&sidecar))
        }
        None => stdout(&csv),
    }
}
