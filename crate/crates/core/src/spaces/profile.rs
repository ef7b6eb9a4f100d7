use serde::{Deserialize, Serialize};

use super::function::FunctionData;
use super::params::{DyadicAnnulus, WeightParams};

/// One annulus of a [`NormProfile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTerm {
    pub k: i32,
    /// `int_{C_k} |f|^p |x|^alpha dx`, computed exactly.
    pub contribution: f64,
    /// `|B_k|^{alpha/n} ||f chi_{C_k}||_p^p`, the dyadic comparison quantity,
    /// within a factor `2^{|alpha|}` of `contribution`.
    pub dyadic_estimate: f64,
}

/// Per-annulus split of `||f||_{L^p(|x|^alpha)}^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub params: WeightParams,
    pub terms: Vec<ProfileTerm>,
    /// Everything outside the covered annuli.
    pub remainder: f64,
    /// Sum of all contributions and the remainder; the p-th power of the norm.
    pub total: f64,
}

impl NormProfile {
    pub fn covered(&self) -> f64 {
        self.terms.iter().map(|t| t.contribution).sum()
    }
}

/// Splits the weighted norm of `f` over `C_k`, `k_lo <= k <= k_hi`.
pub fn norm_profile(f: &FunctionData, params: &WeightParams, k_lo: i32, k_hi: i32) -> NormProfile {
    let (p, alpha) = (params.p(), params.alpha());
    let n = f.dim();
    let terms: Vec<ProfileTerm> = (k_lo..=k_hi)
        .map(|k| {
            let piece = f.restrict_to_annulus(k);
            let b = DyadicAnnulus::new(k, n).ball_measure();
            ProfileTerm {
                k,
                contribution: piece.weighted_power_integral(p, alpha),
                dyadic_estimate: b.powf(alpha / n as f64) * piece.lebesgue_norm(p).powf(p),
            }
        })
        .collect();
    let remainder = if k_lo > k_hi {
        f.weighted_power_integral(p, alpha)
    } else {
        let inner = f.restrict_to_ball(k_lo - 1);
        let outer = f.sub(&f.restrict_to_ball(k_hi)).expect("same kind");
        inner.weighted_power_integral(p, alpha) + outer.weighted_power_integral(p, alpha)
    };
    let total = terms.iter().map(|t| t.contribution).sum::<f64>() + remainder;
    NormProfile { params: *params, terms, remainder, total }
}
