use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{DyadicAnnulus, FunctionData, PiecewiseConstant1D, WeightParams};

use super::Block;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub lambda: f64,
    pub block: Block,
}

/// A finite combination `sum_j lambda_j a_j` plus an unresolved residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionFile", into = "DecompositionFile")]
pub struct Decomposition {
    pub params: WeightParams,
    pub homogeneous: bool,
    pub terms: Vec<Term>,
    /// Weighted `L^s` norm of the part left out by truncation.
    pub residual_norm: f64,
}

impl Decomposition {
    /// `sum_j |lambda_j|^{pbar}`.
    pub fn coefficient_cost(&self) -> f64 {
        let pbar = self.params.pbar();
        // an empty f64 sum is -0.0
        self.terms.iter().map(|t| t.lambda.abs().powf(pbar)).fold(0.0, |a, b| a + b)
    }

    /// `cost^{1/pbar}`, an upper bound for the block quasinorm of the
    /// synthesized function.
    pub fn quasinorm_bound(&self) -> f64 {
        self.coefficient_cost().powf(1.0 / self.params.pbar())
    }

    /// `sum_j lambda_j a_j`; the zero piecewise constant when empty.
    pub fn synthesize(&self) -> FunctionData {
        let mut acc: Option<FunctionData> = None;
        for t in &self.terms {
            let part = t.block.data.scale(t.lambda);
            acc = Some(match acc {
                None => part,
                Some(a) => a.add(&part).expect("terms share one substrate"),
            });
        }
        acc.unwrap_or_else(|| PiecewiseConstant1D::zero().into())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decompositions serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFunction(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    lambda: f64,
    k: i32,
    block: FunctionData,
}

#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    params: WeightParams,
    homogeneous: bool,
    terms: Vec<TermFile>,
    #[serde(with = "crate::serde_ext")]
    residual_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficient_cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quasinorm_upper_bound: Option<f64>,
}

impl TryFrom<DecompositionFile> for Decomposition {
    type Error = Error;

    fn try_from(f: DecompositionFile) -> Result<Self> {
        let terms = f
            .terms
            .into_iter()
            .map(|t| Term {
                lambda: t.lambda,
                block: Block { params: f.params, k: t.k, restrict_type: !f.homogeneous, data: t.block },
            })
            .collect();
        Ok(Self { params: f.params, homogeneous: f.homogeneous, terms, residual_norm: f.residual_norm })
    }
}

impl From<Decomposition> for DecompositionFile {
    fn from(d: Decomposition) -> Self {
        let cost = d.coefficient_cost();
        let bound = d.quasinorm_bound();
        DecompositionFile {
            params: d.params,
            homogeneous: d.homogeneous,
            terms: d
                .terms
                .into_iter()
                .map(|t| TermFile { lambda: t.lambda, k: t.block.k, block: t.block.data })
                .collect(),
            residual_norm: d.residual_norm,
            coefficient_cost: Some(cost),
            quasinorm_upper_bound: Some(bound),
        }
    }
}

fn term_for(piece: FunctionData, params: &WeightParams, k: i32, restrict_type: bool) -> Option<Term> {
    let norm = piece.lebesgue_norm(params.s());
    if norm == 0.0 {
        return None;
    }
    let lambda = norm / params.block_bound(k);
    let data = piece.scale(1.0 / lambda);
    Some(Term { lambda, block: Block { params: *params, k, restrict_type, data } })
}

/// Annulus index holding the outermost part of `f` (at least `floor`).
fn outer_index(f: &FunctionData, floor: i32) -> i32 {
    let r = f.support_radius();
    if r == 0.0 {
        floor
    } else {
        DyadicAnnulus::index_of_radius(r).max(floor)
    }
}

/// Splits `f` supported in `B_0` over `C_k`, `k_min <= k <= 0`, with
/// `lambda_k = |B_k|^{alpha/(pn) + 1/p - 1/s} ||f chi_{C_k}||_{L^s}`; the
/// part on `B_{k_min - 1}` is left as residual.
pub fn decompose_homogeneous(f: &FunctionData, params: &WeightParams, k_min: i32) -> Result<Decomposition> {
    if params.p() >= params.s() {
        return Err(Error::Hypothesis(format!("need p < s, got p = {}, s = {}", params.p(), params.s())));
    }
    if params.alpha() <= -params.dim() {
        return Err(Error::Hypothesis(format!("need alpha > -n, got alpha = {}", params.alpha())));
    }
    if k_min > 0 {
        return Err(Error::InvalidParams(format!("k_min must be <= 0, got {k_min}")));
    }
    if !f.sub(&f.restrict_to_ball(0))?.is_zero() {
        return Err(Error::Hypothesis("support of f leaks outside B_0".into()));
    }
    decompose_annular(f, params, k_min)
}

/// Homogeneous per-annulus decomposition over `k_min <= k <= K` where `B_K`
/// holds the support; no restriction on the support.
pub fn decompose_annular(f: &FunctionData, params: &WeightParams, k_min: i32) -> Result<Decomposition> {
    let k_max = outer_index(f, k_min);
    let terms = (k_min..=k_max)
        .filter_map(|k| term_for(f.restrict_to_annulus(k), params, k, false))
        .collect();
    let residual = f.restrict_to_ball(k_min - 1);
    let residual_norm = residual.weighted_lp_norm(params.s(), params.alpha());
    Ok(Decomposition { params: *params, homogeneous: true, terms, residual_norm })
}

/// Restrict-type decomposition over `C~_k`, `0 <= k <= K`.
pub fn decompose_nonhomogeneous(f: &FunctionData, params: &WeightParams) -> Result<Decomposition> {
    let k_max = outer_index(f, 0);
    let terms = (0..=k_max)
        .filter_map(|k| term_for(f.restrict_to_restricted_annulus(k), params, k, true))
        .collect();
    Ok(Decomposition { params: *params, homogeneous: false, terms, residual_norm: 0.0 })
}

/// Splits every term of `d` at a seeded random point into two blocks on the
/// same annulus, each renormalized to the size bound. The result
/// synthesizes the same function with a different block structure.
pub fn split_decomposition(d: &Decomposition, seed: u64) -> Decomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(2 * d.terms.len());
    for t in &d.terms {
        let b = &t.block;
        let (left, right) = random_split(&b.data, &mut rng);
        for part in [left, right] {
            terms.extend(term_for(part.scale(t.lambda), &d.params, b.k, b.restrict_type));
        }
    }
    Decomposition { params: d.params, homogeneous: d.homogeneous, terms, residual_norm: d.residual_norm }
}

/// Which block space the quasinorm refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Blocks on `C_k`, all `k`.
    Homogeneous,
    /// Blocks on `C~_k`, `k >= 0`.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum SearchStrategy {
    /// One block per annulus.
    Greedy,
    /// Greedy plus `rounds` seeded random re-splittings of single annulus
    /// pieces into two blocks, keeping the cheapest cost seen.
    Perturbed { seed: u64, rounds: u32 },
}

/// `(sum_k |lambda_k|^{pbar})^{1/pbar}` for the best decomposition tried.
///
/// Blocks on different annuli have disjoint supports, so a decomposition
/// can only lower its cost by splitting or merging within one annulus;
/// every such split costs at least the single block by the triangle
/// inequality and `pbar <= 1`. Perturbation rounds therefore confirm the
/// greedy value rather than improve it.
///
/// In the homogeneous space the annuli inside the largest ball on which `f`
/// is constant on each side of the origin form a geometric series, which is
/// summed in closed form.
pub fn rl_norm_upper_bound(
    f: &FunctionData,
    params: &WeightParams,
    space: Space,
    strategy: SearchStrategy,
) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let pbar = params.pbar();
    let (mut pieces, tail) = match space {
        Space::Restricted => {
            let k_max = outer_index(f, 0);
            let pieces: Vec<(i32, FunctionData)> =
                (0..=k_max).map(|k| (k, f.restrict_to_restricted_annulus(k))).collect();
            (pieces, 0.0)
        }
        Space::Homogeneous => homogeneous_pieces(f, params)?,
    };
    pieces.retain(|(_, g)| !g.is_zero());
    let lambda = |k: i32, g: &FunctionData| g.lebesgue_norm(params.s()) / params.block_bound(k);
    let costs: Vec<f64> = pieces.iter().map(|(k, g)| lambda(*k, g).powf(pbar)).collect();
    let greedy: f64 = costs.iter().sum::<f64>() + tail;
    let mut best = greedy;
    if let SearchStrategy::Perturbed { seed, rounds } = strategy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..rounds {
            if pieces.is_empty() {
                break;
            }
            let i = rng.random_range(0..pieces.len());
            let (k, g) = &pieces[i];
            let (a, b) = random_split(g, &mut rng);
            let split = lambda(*k, &a).powf(pbar) + lambda(*k, &b).powf(pbar);
            let candidate = greedy - costs[i] + split;
            best = best.min(candidate);
        }
    }
    Ok(best.powf(1.0 / pbar))
}

fn homogeneous_pieces(f: &FunctionData, params: &WeightParams) -> Result<(Vec<(i32, FunctionData)>, f64)> {
    let k_max = outer_index(f, i32::MIN + 1);
    match f {
        FunctionData::Lattice(g) => {
            let r_min = (0..g.values().len()).map(|i| g.center_radius(i)).fold(f64::INFINITY, f64::min);
            let k_min = DyadicAnnulus::index_of_radius(r_min);
            Ok(((k_min..=k_max).map(|k| (k, f.restrict_to_annulus(k))).collect(), 0.0))
        }
        FunctionData::Piecewise(g) => {
            if f.inner_radius() > 0.0 {
                let k_min = DyadicAnnulus::index_of_radius(f.inner_radius()).min(k_max);
                let pieces = (k_min..=k_max).map(|k| (k, f.restrict_to_annulus(k))).collect();
                return Ok((pieces, 0.0));
            }
            // constant on (-2^k0, 0) and (0, 2^k0)
            let k0 = g.flat_scale_near_origin().min(k_max);
            let pieces = (k0 + 1..=k_max).map(|k| (k, f.restrict_to_annulus(k))).collect();
            let inner = f.restrict_to_annulus(k0);
            let lam0 = inner.lebesgue_norm(params.s()) / params.block_bound(k0);
            let pbar = params.pbar();
            // lambda_{k-1} = lambda_k 2^{-(alpha + 1)/p}
            let ratio = 2f64.powf(-(params.alpha() + 1.0) * pbar / params.p());
            let tail = if lam0 == 0.0 {
                0.0
            } else if ratio >= 1.0 {
                f64::INFINITY
            } else {
                lam0.powf(pbar) / (1.0 - ratio)
            };
            Ok((pieces, tail))
        }
    }
}

/// Splits `g` at a random point into two parts with disjoint supports.
fn random_split(g: &FunctionData, rng: &mut ChaCha8Rng) -> (FunctionData, FunctionData) {
    match g {
        FunctionData::Piecewise(p) => {
            let (a, b) = p.support().unwrap_or((0.0, 1.0));
            let cut = a + (b - a) * rng.random::<f64>();
            let left = p.restrict_to(&[(f64::MIN, cut)]);
            let right = p.sub(&left);
            (left.into(), right.into())
        }
        FunctionData::Lattice(l) => {
            let cut = rng.random_range(0..l.values().len().max(1));
            let mut left = l.clone();
            let mut right = l.clone();
            left.values_mut()[cut..].iter_mut().for_each(|v| *v = 0.0);
            right.values_mut()[..cut].iter_mut().for_each(|v| *v = 0.0);
            (left.into(), right.into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{make_canonical_block, validate_block, BlockShape};

    fn w(p: f64, s: f64, alpha: f64) -> WeightParams {
        WeightParams::new(1, p, s, alpha).unwrap()
    }

    fn chi(a: f64, b: f64) -> FunctionData {
        PiecewiseConstant1D::indicator(a, b).unwrap().into()
    }

    #[test]
    fn homogeneous_examples() {
        let params = w(1.0, 2.0, 0.0);
        let c0: FunctionData = chi(-1.0, 1.0).restrict_to_annulus(0);
        let d = decompose_homogeneous(&c0, &params, -4).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].lambda - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(d.residual_norm, 0.0);

        let zero: FunctionData = PiecewiseConstant1D::zero().into();
        let d = decompose_homogeneous(&zero, &params, -4).unwrap();
        assert!(d.terms.is_empty());
        assert_eq!(d.coefficient_cost(), 0.0);

        let r = 0.125;
        let f = chi(-r, r);
        let d = decompose_homogeneous(&f, &params, -6).unwrap();
        let ks: Vec<i32> = d.terms.iter().map(|t| t.block.k).collect();
        assert_eq!(ks, vec![-6, -5, -4, -3]);
        for t in &d.terms {
            let k = t.block.k;
            let b = DyadicAnnulus::new(k, 1);
            let want = b.ball_measure().powf(0.5) * b.annulus_measure().sqrt();
            assert!((t.lambda - want).abs() < 1e-15);
            let v = validate_block(&t.block);
            assert!(v.ok && (v.slack_ratio - 1.0).abs() < 1e-12);
        }
        // residual chi_{B_{-7}} with weighted L^2 norm (2 * 2^-7)^{1/2}
        assert!((d.residual_norm - (2.0 * 2f64.powi(-7)).sqrt()).abs() < 1e-15);
        let back = d.synthesize().add(&f.restrict_to_ball(-7)).unwrap();
        assert!(back.as_piecewise().unwrap().max_abs_diff(f.as_piecewise().unwrap()) < 1e-15);
    }

    #[test]
    fn homogeneous_preconditions() {
        let f = chi(0.0, 2.0);
        assert!(matches!(decompose_homogeneous(&f, &w(1.0, 2.0, 0.0), -3), Err(Error::Hypothesis(_))));
        let g = chi(0.0, 0.5);
        assert!(matches!(decompose_homogeneous(&g, &w(2.0, 2.0, 0.0), -3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn nonhomogeneous_examples() {
        let params = w(1.0, 2.0, 0.0);
        let d = decompose_nonhomogeneous(&chi(-1.0, 1.0), &params).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!(d.terms[0].block.restrict_type);
        let d = decompose_nonhomogeneous(&chi(1.0, 2.0), &params).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].block.k, 1);
        assert!((d.terms[0].lambda - 2.0).abs() < 1e-15);
        let f = chi(-4.0, 4.0);
        let d = decompose_nonhomogeneous(&f, &params).unwrap();
        assert_eq!(d.terms.iter().map(|t| t.block.k).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(d.terms.iter().all(|t| validate_block(&t.block).ok));
        let back = d.synthesize();
        assert!(back.as_piecewise().unwrap().max_abs_diff(f.as_piecewise().unwrap()) < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let params = w(1.0, 2.0, -0.5);
        let d = decompose_homogeneous(&chi(-0.5, 0.75), &params, -5).unwrap();
        let back = Decomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(d.to_json().contains("coefficient_cost"));
    }

    #[test]
    fn quasinorm_bounds() {
        let params = w(0.5, 2.0, -0.25);
        let a = make_canonical_block(&params, 0, BlockShape::Indicator).unwrap().data;
        let g = Space::Homogeneous;
        let ub = rl_norm_upper_bound(&a, &params, g, SearchStrategy::Greedy).unwrap();
        assert!(ub <= 1.0 + 1e-12);
        let zero: FunctionData = PiecewiseConstant1D::zero().into();
        assert_eq!(rl_norm_upper_bound(&zero, &params, g, SearchStrategy::Greedy).unwrap(), 0.0);
        let b = make_canonical_block(&params, 3, BlockShape::RandomSigns { seed: 9 }).unwrap().data;
        let sum = a.add(&b).unwrap();
        let ub = rl_norm_upper_bound(&sum, &params, g, SearchStrategy::Greedy).unwrap();
        assert!(ub <= 2f64.powf(1.0 / params.pbar()) * (1.0 + 1e-12));
    }

    #[test]
    fn origin_tail_is_geometric() {
        // f = chi_[-1,1]: lambda_k^{pbar} is geometric in k
        let params = w(1.0, 2.0, -0.5);
        let f = chi(-1.0, 1.0);
        let ub = rl_norm_upper_bound(&f, &params, Space::Homogeneous, SearchStrategy::Greedy).unwrap();
        let d = decompose_annular(&f, &params, -60).unwrap();
        // the truncated decomposition misses the geometric remainder below -60
        let ratio = 2f64.powf(-0.5);
        let last = d.terms.iter().find(|t| t.block.k == -60).unwrap().lambda;
        let missing = last * ratio / (1.0 - ratio);
        assert!((ub - d.quasinorm_bound() - missing).abs() < 1e-12 * ub);
        let bad = w(1.0, 2.0, -1.0);
        let ub = rl_norm_upper_bound(&f, &bad, Space::Homogeneous, SearchStrategy::Greedy).unwrap();
        assert!(ub.is_infinite());
    }

    #[test]
    fn split_keeps_the_sum() {
        let params = w(1.0, 2.0, -0.5);
        let f: FunctionData = PiecewiseConstant1D::new(vec![-3.0, -0.2, 0.7, 2.5], vec![1.0, -2.0, 0.5]).unwrap().into();
        let d = decompose_annular(&f, &params, -4).unwrap();
        let sp = split_decomposition(&d, 11);
        assert!(sp.terms.len() > d.terms.len());
        for t in &sp.terms {
            let v = validate_block(&t.block);
            assert!(v.ok && (v.slack_ratio - 1.0).abs() < 1e-12);
        }
        let diff = sp.synthesize().sub(&d.synthesize()).unwrap();
        assert!(diff.as_piecewise().unwrap().max_abs_diff(&PiecewiseConstant1D::zero()) < 1e-14);
        assert_eq!(split_decomposition(&d, 11), sp);
    }

    #[test]
    fn perturbations_are_monotone() {
        let params = w(0.5, 2.0, -0.25);
        let f: FunctionData = PiecewiseConstant1D::new(vec![-3.0, -0.2, 0.7, 2.5], vec![1.0, -2.0, 0.5]).unwrap().into();
        let mut last = f64::INFINITY;
        for rounds in [0, 4, 16, 64] {
            let s = SearchStrategy::Perturbed { seed: 5, rounds };
            let v = rl_norm_upper_bound(&f, &params, Space::Homogeneous, s).unwrap();
            assert!(v <= last);
            last = v;
        }
        let g = rl_norm_upper_bound(&f, &params, Space::Homogeneous, SearchStrategy::Greedy).unwrap();
        assert_eq!(last, g);
    }
}
