use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The exponent tuple `(n, p, s, alpha)` of the weighted block spaces.
///
/// `p` is the integrability exponent of the ambient space `L^p(|x|^alpha)`,
/// `s` the exponent used to normalize blocks (`s = inf` is accepted), and
/// `alpha` the power of the weight `|x|^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRepr", into = "ParamsRepr")]
pub struct WeightParams {
    n: u32,
    p: f64,
    s: f64,
    alpha: f64,
}

impl WeightParams {
    /// Checks `n >= 1`, `p > 0`, `s >= 1` (or infinite), finite `alpha`
    /// and `p <= s`.
    pub fn new(n: u32, p: f64, s: f64, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("dimension n must be positive".into()));
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidParams(format!("p must be a positive real, got {p}")));
        }
        if s.is_nan() || s < 1.0 {
            return Err(Error::InvalidParams(format!("s must lie in [1, inf], got {s}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite, got {alpha}")));
        }
        if p > s {
            return Err(Error::InvalidParams(format!("need 0 < p <= s, got p = {p}, s = {s}")));
        }
        Ok(Self { n, p, s, alpha })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    /// `min(p, 1)`, the exponent of the coefficient cost.
    pub fn pbar(&self) -> f64 {
        self.p.min(1.0)
    }

    /// `1/s`, zero for `s = inf`.
    pub fn inv_s(&self) -> f64 {
        if self.s.is_infinite() {
            0.0
        } else {
            1.0 / self.s
        }
    }

    /// Hölder conjugate `s/(s-1)`; infinite for `s = 1`, one for `s = inf`.
    pub fn s_conj(&self) -> f64 {
        if self.s.is_infinite() {
            1.0
        } else if self.s == 1.0 {
            f64::INFINITY
        } else {
            self.s / (self.s - 1.0)
        }
    }

    /// `-n < alpha < n(p - 1)`.
    pub fn in_main_range(&self) -> bool {
        let n = self.dim();
        -n < self.alpha && self.alpha < n * (self.p - 1.0)
    }

    /// `-n < alpha <= n(p/s - 1)`.
    pub fn in_inclusion_range(&self) -> bool {
        let n = self.dim();
        -n < self.alpha && self.alpha <= n * (self.p * self.inv_s() - 1.0)
    }

    /// Exponent `e` in the block size condition `||a||_s <= |B_k|^e`,
    /// read as `-alpha/(p n) - 1/p + 1/s`.
    pub fn block_exponent(&self) -> f64 {
        -self.alpha / (self.p * self.dim()) - 1.0 / self.p + self.inv_s()
    }

    /// Size bound `|B_k|^{block_exponent}` for a block on scale `k`.
    pub fn block_bound(&self, k: i32) -> f64 {
        DyadicAnnulus::new(k, self.n).ball_measure().powf(self.block_exponent())
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.n, self.p, self.s, alpha)
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(self.n, p, self.s, self.alpha)
    }
}

impl fmt::Display for WeightParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, p={}, s={}, alpha={}", self.n, self.p, self.s, self.alpha)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    n: u32,
    p: f64,
    #[serde(with = "crate::serde_ext")]
    s: f64,
    alpha: f64,
}

impl TryFrom<ParamsRepr> for WeightParams {
    type Error = Error;

    fn try_from(r: ParamsRepr) -> Result<Self> {
        WeightParams::new(r.n, r.p, r.s, r.alpha)
    }
}

impl From<WeightParams> for ParamsRepr {
    fn from(w: WeightParams) -> Self {
        ParamsRepr { n: w.n, p: w.p, s: w.s, alpha: w.alpha }
    }
}

/// Volume of the unit ball in dimension `n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// The dyadic ball `B_k = {|x| <= 2^k}` and annulus `C_k = B_k \ B_{k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicAnnulus {
    pub k: i32,
    pub n: u32,
}

impl DyadicAnnulus {
    pub fn new(k: i32, n: u32) -> Self {
        Self { k, n }
    }

    pub fn outer_radius(&self) -> f64 {
        2f64.powi(self.k)
    }

    pub fn inner_radius(&self) -> f64 {
        2f64.powi(self.k - 1)
    }

    /// `|B_k| = v_n 2^{kn}`.
    pub fn ball_measure(&self) -> f64 {
        unit_ball_volume(self.n) * 2f64.powi(self.k * self.n as i32)
    }

    /// `|C_k| = v_n 2^{kn} (1 - 2^{-n})`.
    pub fn annulus_measure(&self) -> f64 {
        self.ball_measure() * (1.0 - 2f64.powi(-(self.n as i32)))
    }

    /// Membership of radius `r` in `C_k`, i.e. `2^{k-1} < r <= 2^k`.
    pub fn contains_radius(&self, r: f64) -> bool {
        self.inner_radius() < r && r <= self.outer_radius()
    }

    /// Membership in the restrict-type annulus: `C_k` for `k >= 1`, all of
    /// `B_0` for `k = 0`.
    pub fn restrict_contains_radius(&self, r: f64) -> bool {
        if self.k == 0 {
            r <= 1.0
        } else {
            self.contains_radius(r)
        }
    }

    /// Measure of the restrict-type annulus.
    pub fn restrict_measure(&self) -> f64 {
        if self.k == 0 {
            self.ball_measure()
        } else {
            self.annulus_measure()
        }
    }

    /// Smallest `k` with `r <= 2^k`, i.e. the index of the annulus holding radius `r > 0`.
    pub fn index_of_radius(r: f64) -> i32 {
        debug_assert!(r > 0.0);
        let mut k = r.log2().ceil() as i32;
        // log2 can be off by one ulp at exact powers of two
        if 2f64.powi(k - 1) >= r {
            k -= 1;
        } else if 2f64.powi(k) < r {
            k += 1;
        }
        k
    }
}
