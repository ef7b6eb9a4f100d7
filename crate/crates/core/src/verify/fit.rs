//! Least-squares growth fits.

/// Slope of the least-squares line through `(x_i, y_i)`.
///
/// Returns NaN for fewer than two distinct abscissae.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// Slope of `y` against `ln x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    slope(&lx, y)
}

/// Exponent of a power law: slope of `ln y` against `ln x`.
pub fn power_exponent(x: &[f64], y: &[f64]) -> f64 {
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    log_slope(x, &ly)
}

/// Largest over smallest of the finite positive entries; 1 when there are none.
pub fn spread(values: &[f64]) -> f64 {
    let pos: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    if pos.is_empty() {
        return 1.0;
    }
    let max = pos.iter().copied().fold(0.0, f64::max);
    let min = pos.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lines() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0).collect();
        assert!((slope(&x, &y) - 3.0).abs() < 1e-14);
        assert!(slope(&[1.0], &[2.0]).is_nan());
        assert!(slope(&[1.0, 1.0], &[2.0, 3.0]).is_nan());
        let r = [1.0, 2.0, 8.0, 32.0];
        let p: Vec<f64> = r.iter().map(|v: &f64| 5.0 * v.powf(-1.5)).collect();
        assert!((power_exponent(&r, &p) + 1.5).abs() < 1e-13);
        let l: Vec<f64> = r.iter().map(|v: &f64| 0.25 * v.ln() + 1.0).collect();
        assert!((log_slope(&r, &l) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn spreads() {
        assert_eq!(spread(&[]), 1.0);
        assert_eq!(spread(&[0.0, 0.0]), 1.0);
        assert_eq!(spread(&[2.0, 1.0, 0.0]), 2.0);
        assert!(spread(&[1.0, f64::INFINITY]).is_infinite());
    }
}
