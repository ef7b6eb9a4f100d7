//! The sine integral `Si(t) = int_0^t sin(u)/u du`.

use std::f64::consts::FRAC_PI_2;

use rustfft::num_complex::Complex64;

const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_LIMIT: f64 = 64.0;
const EPS: f64 = 1e-17;
const MAX_ITER: usize = 400;

/// `Si(t)`, odd in `t`, with absolute error near `1e-15` on `|t| <= 1e3`.
pub fn sine_integral(t: f64) -> f64 {
    let a = t.abs();
    let v = if a <= SERIES_LIMIT { series(a) } else { FRAC_PI_2 + tail_positive(a) };
    if t < 0.0 { -v } else { v }
}

/// `Si(t) - sgn(t) pi/2`, computed without cancellation for large `|t|`.
/// Zero at `t = 0`.
pub fn si_tail(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let a = t.abs();
    let v = if a <= SERIES_LIMIT { series(a) - FRAC_PI_2 } else { tail_positive(a) };
    if t < 0.0 { -v } else { v }
}

fn series(t: f64) -> f64 {
    // sum (-1)^k t^{2k+1} / ((2k+1) (2k+1)!)
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let m = 2.0 * k + 1.0;
        term *= -t2 / ((m - 1.0) * m);
        let add = term / m;
        sum += add;
        if add.abs() <= EPS * sum.abs() {
            return sum;
        }
    }
}

/// `Si(t) - pi/2 = -f(t) cos t - g(t) sin t` for `t > 4`.
fn tail_positive(t: f64) -> f64 {
    let (f, g) = if t < ASYMPTOTIC_LIMIT { auxiliary_cf(t) } else { auxiliary_asymptotic(t) };
    -f * t.cos() - g * t.sin()
}

/// Auxiliary functions from the continued fraction of `E1(it)`.
fn auxiliary_cf(t: f64) -> (f64, f64) {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    // E1(it) e^{it} = h = g - i f
    (-h.im, h.re)
}

fn auxiliary_asymptotic(t: f64) -> (f64, f64) {
    let inv2 = 1.0 / (t * t);
    let (mut f, mut g) = (1.0, 1.0);
    let (mut tf, mut tg) = (1.0, 1.0);
    for k in 1..40 {
        let kf = k as f64;
        let nf = -tf * (2.0 * kf - 1.0) * (2.0 * kf) * inv2;
        let ng = -tg * (2.0 * kf) * (2.0 * kf + 1.0) * inv2;
        if nf.abs() > tf.abs() || nf.abs() < EPS {
            break;
        }
        tf = nf;
        tg = ng;
        f += tf;
        g += tg;
    }
    (f / t, g * inv2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // tabulated values
        let table = [
            (0.5, 0.493107418043066_6),
            (1.0, 0.946083070367183_0),
            (2.0, 1.605412976802694_8),
            (5.0, 1.549931244944674_1),
            (10.0, 1.658347594218874_0),
            (100.0, 1.562225466889056_3),
        ];
        for (t, want) in table {
            assert!((sine_integral(t) - want).abs() < 1e-14, "Si({t})");
        }
    }

    #[test]
    fn odd_and_zero() {
        assert_eq!(sine_integral(0.0), 0.0);
        for t in [0.3, 3.9, 4.1, 17.0, 63.9, 64.1, 999.0] {
            assert_eq!(sine_integral(-t), -sine_integral(t));
            assert_eq!(si_tail(-t), -si_tail(t));
        }
    }

    fn tail_from((f, g): (f64, f64), t: f64) -> f64 {
        -f * t.cos() - g * t.sin()
    }

    #[test]
    fn branches_agree_at_switch_points() {
        let t = SERIES_LIMIT;
        let cf = FRAC_PI_2 + tail_from(auxiliary_cf(t), t);
        assert!((series(t) - cf).abs() < 1e-14);
        let t = ASYMPTOTIC_LIMIT;
        let cf = tail_from(auxiliary_cf(t), t);
        let asym = tail_from(auxiliary_asymptotic(t), t);
        assert!((cf - asym).abs() < 1e-15);
    }

    #[test]
    fn tail_sign_below_series_limit() {
        assert!(si_tail(1.0) < 0.0 && si_tail(-1.0) > 0.0);
        assert!((si_tail(2.0) - (sine_integral(2.0) - FRAC_PI_2)).abs() < 1e-15);
    }

    #[test]
    fn tail_decays_like_cos_over_t() {
        let t = 500.0;
        assert!((si_tail(t) + t.cos() / t).abs() < 2.0 / (t * t));
    }
}
