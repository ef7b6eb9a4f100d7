//! Panel Gauss-Legendre quadrature for power-weighted integrals on the line.
//!
//! Integrands are known pointwise only (operator outputs). Panels are graded
//! geometrically toward the origin and toward the supplied singular points,
//! kept within a factor two in `|x|` away from them, and split further to a
//! maximal width for oscillatory integrands. Sums are accumulated in panel
//! order so results do not depend on thread scheduling.

use rayon::prelude::*;
use statrs::function::gamma::gamma;

const ORDER: usize = 10;
const ORIGIN_LEVELS: usize = 60;
const SINGULAR_LEVELS: usize = 40;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Asymptotic model of `|g(x)|` beyond the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Nothing is added beyond the radius.
    Truncate,
    /// `|g(x)| ~ amplitude |x|^{-decay}`.
    PowerLaw { amplitude: f64, decay: f64 },
    /// `|g(x)| ~ amplitude |x|^{-decay} |cos(phase)|` with a rapidly varying
    /// phase; the `p`-th power is averaged over the phase.
    Oscillating { amplitude: f64, decay: f64 },
}

impl TailModel {
    /// `int_{|x| > r} model^p |x|^alpha dx` (both sides).
    pub fn integral(&self, r: f64, p: f64, alpha: f64) -> f64 {
        let (amp, decay, factor) = match *self {
            TailModel::Truncate => return 0.0,
            TailModel::PowerLaw { amplitude, decay } => (amplitude, decay, 1.0),
            TailModel::Oscillating { amplitude, decay } => (amplitude, decay, mean_abs_cos_power(p)),
        };
        if amp == 0.0 {
            return 0.0;
        }
        let e = p * decay - alpha - 1.0;
        if e <= 0.0 {
            return f64::INFINITY;
        }
        2.0 * factor * amp.powf(p) * r.powf(-e) / e
    }
}

/// Mean of `|cos u|^p` over a period.
pub fn mean_abs_cos_power(p: f64) -> f64 {
    gamma((p + 1.0) / 2.0) / (std::f64::consts::PI.sqrt() * gamma(p / 2.0 + 1.0))
}

/// Where and how finely to integrate.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelLayout {
    /// Closed intervals to integrate over; may touch or contain the origin.
    pub intervals: Vec<(f64, f64)>,
    /// Points where the integrand may jump or have a log singularity.
    pub singular: Vec<f64>,
    /// Panels wider than this are split evenly.
    pub max_panel: f64,
}

impl PanelLayout {
    /// `[-r, r]` with the given singular points.
    pub fn symmetric(r: f64, singular: &[f64], max_panel: f64) -> Self {
        Self { intervals: vec![(-r, r)], singular: singular.to_vec(), max_panel }
    }

    /// `{lo <= |x| <= hi}` for `0 <= lo < hi`.
    pub fn shell(lo: f64, hi: f64, singular: &[f64], max_panel: f64) -> Self {
        Self { intervals: vec![(-hi, -lo), (lo, hi)], singular: singular.to_vec(), max_panel }
    }
}

#[derive(Debug, Clone, Copy)]
enum Panel {
    Gauss(f64, f64),
    /// `[0, eps]` on the side `sign`, handled analytically.
    Origin { eps: f64, sign: f64 },
}

fn dyadic_cuts(u: f64, v: f64) -> Vec<f64> {
    // +-2^j strictly inside (u, v), away from the origin
    let mut out = Vec::new();
    for side in [-1.0, 1.0] {
        let (lo, hi) = if side > 0.0 { (u.max(0.0), v) } else { ((-v).max(0.0), -u) };
        if hi <= 0.0 || lo >= hi {
            continue;
        }
        let start = if lo > 0.0 { lo.log2().floor() as i32 } else { hi.log2().floor() as i32 - 8 };
        let end = hi.log2().ceil() as i32;
        for j in start..=end {
            let x = side * 2f64.powi(j);
            if u < x && x < v {
                out.push(x);
            }
        }
    }
    out
}

fn push_graded(out: &mut Vec<Panel>, u: f64, v: f64, at_u: Option<usize>, at_v: Option<usize>) {
    let mid = 0.5 * (u + v);
    match (at_u, at_v) {
        (None, None) => out.push(Panel::Gauss(u, v)),
        _ => {
            grade(out, u, mid, at_u, true);
            grade(out, mid, v, at_v, false);
        }
    }
}

fn grade(out: &mut Vec<Panel>, u: f64, v: f64, levels: Option<usize>, toward_u: bool) {
    let Some(levels) = levels else {
        out.push(Panel::Gauss(u, v));
        return;
    };
    let d = v - u;
    let anchor = if toward_u { u } else { v };
    let dir = if toward_u { 1.0 } else { -1.0 };
    let mut outer = d;
    // below ~1e-12 |anchor| the nodes would round onto the anchor itself
    let floor = 1e-12 * anchor.abs();
    for _ in 0..levels {
        let inner = 0.5 * outer;
        if inner < floor {
            break;
        }
        let (a, b) = (anchor + dir * inner, anchor + dir * outer);
        out.push(Panel::Gauss(a.min(b), a.max(b)));
        outer = inner;
    }
    if anchor == 0.0 {
        out.push(Panel::Origin { eps: outer, sign: dir });
    } else {
        let a = anchor + dir * outer;
        out.push(Panel::Gauss(anchor.min(a), anchor.max(a)));
    }
}

fn build(layout: &PanelLayout) -> Vec<Panel> {
    let mut panels = Vec::new();
    for &(lo, hi) in &layout.intervals {
        if hi <= lo {
            continue;
        }
        let mut keys = vec![lo, hi];
        keys.extend(layout.singular.iter().copied().filter(|&x| lo < x && x < hi));
        if lo < 0.0 && 0.0 < hi {
            keys.push(0.0);
        }
        keys.extend(dyadic_cuts(lo, hi));
        keys.sort_by(f64::total_cmp);
        keys.dedup();
        let levels = |x: f64| {
            if x == 0.0 {
                Some(ORIGIN_LEVELS)
            } else if layout.singular.contains(&x) {
                Some(SINGULAR_LEVELS)
            } else {
                None
            }
        };
        for w in keys.windows(2) {
            push_graded(&mut panels, w[0], w[1], levels(w[0]), levels(w[1]));
        }
    }
    let max = layout.max_panel;
    let mut split = Vec::with_capacity(panels.len());
    for p in panels {
        match p {
            Panel::Gauss(a, b) if b - a > max => {
                let pieces = ((b - a) / max).ceil() as usize;
                let h = (b - a) / pieces as f64;
                for i in 0..pieces {
                    let right = if i + 1 == pieces { b } else { a + (i + 1) as f64 * h };
                    split.push(Panel::Gauss(a + i as f64 * h, right));
                }
            }
            other => split.push(other),
        }
    }
    split
}

/// `int |g(x)|^p |x|^alpha dx` over the layout's intervals.
///
/// The innermost piece at the origin is treated as `|g|` constant, which is
/// exact for integrands that are one-sided constant near zero and gives an
/// infinite result when `alpha <= -1` and `g` does not vanish there.
pub fn weighted_power_integral<G>(g: G, p: f64, alpha: f64, layout: &PanelLayout) -> f64
where
    G: Fn(f64) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(ORDER);
    let panels = build(layout);
    let parts: Vec<f64> = panels
        .par_iter()
        .map(|panel| match *panel {
            Panel::Gauss(a, b) => {
                let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
                let mut s = 0.0;
                for (x, w) in nodes.iter().zip(&weights) {
                    let y = c + r * x;
                    let v = g(y).abs();
                    if v != 0.0 {
                        s += w * v.powf(p) * y.abs().powf(alpha);
                    }
                }
                s * r
            }
            Panel::Origin { eps, sign } => {
                let v = g(sign * 0.5 * eps).abs();
                if v == 0.0 {
                    0.0
                } else if alpha <= -1.0 {
                    f64::INFINITY
                } else {
                    v.powf(p) * eps.powf(alpha + 1.0) / (alpha + 1.0)
                }
            }
        })
        .collect();
    parts.iter().sum()
}

/// `(int_{-r}^{r} |g|^p |x|^alpha + tail)^{1/p}` for a layout symmetric about
/// zero with radius `r`.
pub fn weighted_lp_norm<G>(g: G, p: f64, alpha: f64, layout: &PanelLayout, r: f64, tail: TailModel) -> f64
where
    G: Fn(f64) -> f64 + Sync,
{
    let inner = weighted_power_integral(g, p, alpha, layout);
    (inner + tail.integral(r, p, alpha)).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials() {
        let (x, w) = gauss_legendre(ORDER);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m18: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn singular_weight_at_origin() {
        let layout = PanelLayout::symmetric(1.0, &[], 1.0);
        let got = weighted_power_integral(|_| 1.0, 1.0, -0.5, &layout);
        assert!((got - 4.0).abs() < 1e-12);
        let got = weighted_power_integral(|_| 1.0, 1.0, -1.0, &layout);
        assert!(got.is_infinite());
    }

    #[test]
    fn log_singularity_at_breakpoint() {
        // int_0^2 |ln|x - 1|| dx = 2
        let layout = PanelLayout { intervals: vec![(0.0, 2.0)], singular: vec![1.0], max_panel: 1.0 };
        let got = weighted_power_integral(|x| (x - 1.0).abs().ln(), 1.0, 0.0, &layout);
        assert!((got - 2.0).abs() < 1e-10);
    }

    #[test]
    fn tails() {
        // int_{|x| > 4} |x|^{-2} dx = 1/2
        let t = TailModel::PowerLaw { amplitude: 1.0, decay: 1.0 };
        assert!((t.integral(4.0, 2.0, 0.0) - 0.5).abs() < 1e-15);
        assert!(t.integral(4.0, 1.0, 0.0).is_infinite());
        assert!((mean_abs_cos_power(2.0) - 0.5).abs() < 1e-14);
        assert!((mean_abs_cos_power(1.0) - 2.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn shell_layout() {
        let layout = PanelLayout::shell(1.0, 8.0, &[], 0.5);
        let got = weighted_power_integral(|_| 1.0, 1.0, -1.0, &layout);
        assert!((got - 2.0 * 8f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn nodes_never_land_on_close_singular_points() {
        // two jumps 1e-9 apart: grading must stop before nodes round onto them
        let a = -2f64.powi(-6);
        let b = a + 1e-9;
        let layout = PanelLayout::symmetric(1.0, &[a, b], f64::INFINITY);
        let g = |x: f64| if x == a || x == b { f64::NAN } else { 1.0 };
        let got = weighted_power_integral(g, 1.0, 0.0, &layout);
        assert!((got - 2.0).abs() < 1e-12, "{got}");
    }
}
