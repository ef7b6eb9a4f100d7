//! Uncentered Hardy-Littlewood maximal function.
//!
//! In one dimension the supremum over intervals containing `x` is computed
//! exactly for piecewise constants: for fixed right end the average is a
//! Moebius function of the left end on each piece, so the supremum is
//! attained with both ends at breakpoints or at `x` itself.
//!
//! On lattices the supremum runs over axis-aligned cubes of side `(2w+1) h`
//! made of whole cells and containing the cell of `x`, for every half width
//! `w` in the supplied list. Cells outside the domain count as zero and the
//! full cube measure is kept in the denominator.


use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spaces::{LatticeFunction, PiecewiseConstant1D};

use super::grid::EvalGrid;

/// Exact `Mf` for a piecewise constant on the line.
#[derive(Debug, Clone)]
pub struct Maximal1D {
    breakpoints: Vec<f64>,
    abs_values: Vec<f64>,
    /// `prefix[i] = int_{x_0}^{x_i} |f|`.
    prefix: Vec<f64>,
}

impl Maximal1D {
    pub fn new(f: &PiecewiseConstant1D) -> Self {
        let g = f.simplified();
        let abs_values: Vec<f64> = g.values().iter().map(|v| v.abs()).collect();
        let mut prefix = vec![0.0];
        for (a, b, v) in g.pieces() {
            prefix.push(prefix.last().unwrap() + v.abs() * (b - a));
        }
        Self { breakpoints: g.breakpoints().to_vec(), abs_values, prefix }
    }

    /// `int_{-inf}^{y} |f|`.
    fn primitive(&self, y: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.is_empty() || y <= bp[0] {
            return 0.0;
        }
        if y >= *bp.last().unwrap() {
            return *self.prefix.last().unwrap();
        }
        let i = bp.partition_point(|&b| b <= y) - 1;
        self.prefix[i] + self.abs_values[i] * (y - bp[i])
    }

    fn one_sided(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        if bp.is_empty() || x < bp[0] || x > *bp.last().unwrap() {
            return 0.0;
        }
        let right = bp.partition_point(|&b| b <= x);
        let left = bp.partition_point(|&b| b < x);
        let r = if right >= 1 && right <= self.abs_values.len() { self.abs_values[right - 1] } else { 0.0 };
        let l = if left >= 1 && left <= self.abs_values.len() { self.abs_values[left - 1] } else { 0.0 };
        r.max(l)
    }

    pub fn value(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let mut best = self.one_sided(x);
        if bp.is_empty() {
            return best;
        }
        let lefts = bp.iter().copied().filter(|&b| b < x).chain(std::iter::once(x));
        let rights: Vec<f64> = std::iter::once(x).chain(bp.iter().copied().filter(|&b| b > x)).collect();
        for a in lefts {
            let pa = self.primitive(a);
            for &b in &rights {
                if b > a {
                    best = best.max((self.primitive(b) - pa) / (b - a));
                }
            }
        }
        best
    }

    pub fn values(&self, grid: &EvalGrid) -> Vec<f64> {
        grid.points().par_iter().map(|&x| self.value(x)).collect()
    }
}

/// Half widths `0` and `round(2^{j/4})` up to `max`.
pub fn default_halfwidths(max: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut j = 0;
    loop {
        let w = 2f64.powf(j as f64 / 4.0).round() as usize;
        if w > max {
            break;
        }
        if *out.last().unwrap() != w {
            out.push(w);
        }
        j += 1;
    }
    out
}

/// Sliding sum of width `2w + 1` along one axis of a zero-padded array.
/// `out[i]` is the sum over input positions `[i - 2w, i]` with the output
/// indexed from `-2w` (length grows by `2w`).
fn sliding_sum(line: &[f64], w: usize) -> Vec<f64> {
    let width = 2 * w + 1;
    let len = line.len() + 2 * w;
    let mut out = vec![0.0; len];
    let mut acc = 0.0;
    for (i, o) in out.iter_mut().enumerate() {
        // window covers input indices [i - 2w, i]
        if i < line.len() {
            acc += line[i];
        }
        if i >= width {
            acc -= line[i - width];
        }
        *o = acc;
    }
    out
}

/// Sliding max over the `2w + 1` window starts covering each cell; input is
/// indexed from `-2w`. Van Herk / Gil-Werman: block-wise prefix and suffix
/// maxima give every window maximum in two lookups.
fn sliding_max(padded: &[f64], w: usize, out_len: usize) -> Vec<f64> {
    let width = 2 * w + 1;
    // cell i is covered by windows starting at i - 2w ..= i, i.e. padded
    // indices i ..= i + 2w
    let len = padded.len();
    let mut prefix = padded.to_vec();
    let mut suffix = padded.to_vec();
    for start in (0..len).step_by(width) {
        let end = (start + width).min(len);
        for j in start + 1..end {
            prefix[j] = prefix[j].max(prefix[j - 1]);
        }
        for j in (start..end - 1).rev() {
            suffix[j] = suffix[j].max(suffix[j + 1]);
        }
    }
    let count = out_len.min((len + 1).saturating_sub(width));
    (0..count).map(|i| suffix[i].max(prefix[i + width - 1])).collect()
}

/// One-dimensional case with prefix sums. For each width the window
/// maxima are built block by block (van Herk / Gil-Werman) without
/// materializing the averages.
fn line_maximal(abs: &[f64], halfwidths: &[usize]) -> Vec<f64> {
    let side = abs.len();
    let mut prefix = Vec::with_capacity(side + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in abs {
        acc += v;
        prefix.push(acc);
    }
    let widest = halfwidths.iter().copied().max().unwrap_or(0);
    let mut suffix = vec![0.0; 2 * widest + 1];
    let mut best = abs.to_vec();
    for &w in halfwidths {
        let width = 2 * w + 1;
        let scale = 1.0 / width as f64;
        // window ending at padded index j averages cells [j - 2w, j]
        let avg = |j: usize| {
            let lo = j.saturating_sub(2 * w).min(side);
            let hi = (j + 1).min(side);
            (prefix[hi] - prefix[lo]) * scale
        };
        // cell i is covered by the windows ending at i ..= i + 2w
        for start in (0..side).step_by(width) {
            let end = (start + width).min(side);
            let mut run = f64::NEG_INFINITY;
            for t in (0..width).rev() {
                run = run.max(avg(start + t));
                suffix[t] = run;
            }
            let mut ahead = f64::NEG_INFINITY;
            for (t, b) in best[start..end].iter_mut().enumerate() {
                if t > 0 {
                    ahead = ahead.max(avg(start + width + t - 1));
                }
                *b = b.max(suffix[t].max(ahead));
            }
        }
    }
    best
}

fn apply_axis(data: &[f64], dims: &[usize], axis: usize, f: impl Fn(&[f64]) -> Vec<f64> + Sync) -> (Vec<f64>, Vec<usize>) {
    let stride: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let len = dims[axis];
    if outer == 1 && stride == 1 {
        let out = f(data);
        let mut new_dims = dims.to_vec();
        new_dims[axis] = out.len();
        return (out, new_dims);
    }
    let sample = f(&vec![0.0; len]).len();
    let mut new_dims = dims.to_vec();
    new_dims[axis] = sample;
    let mut out = vec![0.0; outer * sample * stride];
    let lines: Vec<(usize, usize)> = (0..outer).flat_map(|o| (0..stride).map(move |s| (o, s))).collect();
    let results: Vec<Vec<f64>> = lines
        .par_iter()
        .map(|&(o, s)| {
            let line: Vec<f64> = (0..len).map(|i| data[(o * len + i) * stride + s]).collect();
            f(&line)
        })
        .collect();
    for (&(o, s), r) in lines.iter().zip(&results) {
        for (i, v) in r.iter().enumerate() {
            out[(o * sample + i) * stride + s] = *v;
        }
    }
    (out, new_dims)
}

/// Lattice maximal function over the given half widths.
pub fn hl_maximal(f: &LatticeFunction, halfwidths: &[usize]) -> Result<LatticeFunction> {
    if halfwidths.is_empty() {
        return Err(Error::InvalidParams("window list is empty".into()));
    }
    let side = f.cells_per_axis();
    if let Some(w) = halfwidths.iter().find(|&&w| 2 * w + 1 > 2 * side + 1) {
        return Err(Error::InvalidParams(format!("half width {w} exceeds the domain ({side} cells)")));
    }
    let n = f.dim() as usize;
    let abs: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    if n == 1 {
        let mut out = f.clone();
        out.values_mut().copy_from_slice(&line_maximal(&abs, halfwidths));
        return Ok(out);
    }
    let mut best = abs.clone();
    for &w in halfwidths {
        let measure = ((2 * w + 1) as f64).powi(n as i32);
        let (mut data, mut dims) = apply_axis(&abs, &vec![side; n], 0, |l| sliding_sum(l, w));
        for axis in 1..n {
            (data, dims) = apply_axis(&data, &dims, axis, |l| sliding_sum(l, w));
        }
        for v in data.iter_mut() {
            *v /= measure;
        }
        for axis in 0..n {
            (data, dims) = apply_axis(&data, &dims, axis, |l| sliding_max(l, w, side));
        }
        debug_assert_eq!(dims, vec![side; n]);
        for (b, v) in best.iter_mut().zip(&data) {
            *b = b.max(*v);
        }
    }
    let mut out = f.clone();
    out.values_mut().copy_from_slice(&best);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(a: f64, b: f64) -> PiecewiseConstant1D {
        PiecewiseConstant1D::indicator(a, b).unwrap()
    }

    #[test]
    fn exact_indicator() {
        let m = Maximal1D::new(&chi(-1.0, 1.0));
        for x in [1.5, 3.0, 100.0] {
            assert!((m.value(x) - 2.0 / (x + 1.0)).abs() < 1e-15);
            assert!((m.value(-x) - 2.0 / (x + 1.0)).abs() < 1e-15);
        }
        assert_eq!(m.value(0.3), 1.0);
        assert_eq!(m.value(1.0), 1.0);
        let m = Maximal1D::new(&chi(0.0, 1.0));
        assert!((m.value(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn brute_force_agreement() {
        let f = PiecewiseConstant1D::new(vec![-2.0, -0.5, 0.25, 1.0, 3.0], vec![1.0, -3.0, 0.0, 2.0]).unwrap();
        let m = Maximal1D::new(&f);
        let prim = |y: f64| m.primitive(y);
        for x in [-3.0, -1.0, 0.0, 0.5, 2.0, 4.0] {
            let mut best: f64 = 0.0;
            for i in 0..400 {
                for j in 0..400 {
                    let a = x - 8.0 * i as f64 / 399.0;
                    let b = x + 8.0 * j as f64 / 399.0;
                    if b > a {
                        best = best.max((prim(b) - prim(a)) / (b - a));
                    }
                }
            }
            assert!(m.value(x) >= best - 1e-12);
            assert!(m.value(x) <= best + 0.05);
        }
    }

    #[test]
    fn sliding_helpers() {
        let s = sliding_sum(&[1.0, 2.0, 3.0], 1);
        assert_eq!(s, vec![1.0, 3.0, 6.0, 5.0, 3.0]);
        let m = sliding_max(&s, 1, 3);
        assert_eq!(m, vec![6.0, 6.0, 6.0]);
    }

    #[test]
    fn lattice_matches_brute_force_1d() {
        let g = PiecewiseConstant1D::new(vec![-0.75, 0.0, 0.5], vec![2.0, -1.0]).unwrap();
        let f = LatticeFunction::from_piecewise(&g, 0.25, 1.0).unwrap();
        let ws = [0, 1, 2, 3];
        let m = hl_maximal(&f, &ws).unwrap();
        let v = f.values();
        let side = v.len() as isize;
        for i in 0..side {
            let mut best: f64 = 0.0;
            for &w in &ws {
                let w = w as isize;
                for start in i - 2 * w..=i {
                    let s: f64 = (start..start + 2 * w + 1)
                        .filter(|&j| (0..side).contains(&j))
                        .map(|j| v[j as usize].abs())
                        .sum();
                    best = best.max(s / (2 * w + 1) as f64);
                }
            }
            assert!((m.values()[i as usize] - best).abs() < 1e-14);
        }
    }

    #[test]
    fn lattice_2d_properties() {
        let f = LatticeFunction::from_fn(2, 0.125, 1.0, |c| if c[0].abs() + c[1].abs() < 0.5 { 1.0 } else { 0.0 }).unwrap();
        let m = hl_maximal(&f, &default_halfwidths(16)).unwrap();
        for (mv, fv) in m.values().iter().zip(f.values()) {
            assert!(*mv >= fv.abs());
            assert!(*mv <= 1.0 + 1e-15);
        }
        let z = LatticeFunction::zeros(2, 0.125, 1.0).unwrap();
        assert!(hl_maximal(&z, &[0, 1]).unwrap().is_zero());
        assert!(hl_maximal(&z, &[]).is_err());
    }

    #[test]
    fn halfwidth_list() {
        let w = default_halfwidths(8);
        assert_eq!(w, vec![0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert!(default_halfwidths(1000).len() < 50);
    }
}
