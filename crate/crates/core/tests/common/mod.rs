//! Independent reference values shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use twofloat::TwoFloat;

/// Switch point between the double-double series and the asymptotic
/// expansion.
const SERIES_MAX: f64 = 40.0;

/// `Si(t)` by its Maclaurin series in double-double arithmetic for
/// `|t| <= 40` and by the auxiliary asymptotic expansions beyond.
pub fn si_oracle(t: f64) -> f64 {
    let a = t.abs();
    let v = if a <= SERIES_MAX { series_dd(a) } else { asymptotic(a) };
    if t < 0.0 { -v } else { v }
}

fn series_dd(t: f64) -> f64 {
    let x = TwoFloat::from(t);
    let x2 = x * x;
    // term_k = (-1)^k t^{2k+1} / (2k+1)!
    let mut term = x;
    let mut sum = x;
    let mut k = 0u32;
    loop {
        k += 1;
        let d = ((2 * k) * (2 * k + 1)) as f64;
        term = -(term * x2) / d;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.hi().abs() < 1e-34 * sum.hi().abs().max(1.0) && k > 4 {
            break;
        }
        if k > 400 {
            break;
        }
    }
    sum.hi() + sum.lo()
}

fn asymptotic(t: f64) -> f64 {
    // Si(t) = pi/2 - f(t) cos t - g(t) sin t
    let inv2 = 1.0 / (t * t);
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0 / t, inv2);
    let mut k = 0.0;
    loop {
        f += tf;
        g += tg;
        let nf = -tf * (2.0 * k + 1.0) * (2.0 * k + 2.0) * inv2;
        let ng = -tg * (2.0 * k + 2.0) * (2.0 * k + 3.0) * inv2;
        if nf.abs() >= tf.abs() || nf.abs() < 1e-19 * f.abs() {
            break;
        }
        tf = nf;
        tg = ng;
        k += 1.0;
    }
    FRAC_PI_2 - f * t.cos() - g * t.sin()
}

/// `Si(pi)` to 22 digits, from published tables.
pub const SI_PI: f64 = 1.851_937_051_982_466_170_361;

/// `(1/pi) log |(x - a) / (x - b)|`, the Hilbert transform of `chi_{[a, b]}`.
pub fn hilbert_indicator(a: f64, b: f64, x: f64) -> f64 {
    ((x - a) / (x - b)).abs().ln() / std::f64::consts::PI
}

/// Uncentered maximal function of `chi_{[-1, 1]}` for `x > 1`.
pub fn maximal_unit_indicator(x: f64) -> f64 {
    2.0 / (x + 1.0)
}

/// Panics unless the oracle reproduces its anchors.
pub fn oracle_self_check() {
    assert!((si_oracle(std::f64::consts::PI) - SI_PI).abs() < 1e-15);
    assert_eq!(si_oracle(0.0), 0.0);
    // both branches agree at the switch point
    assert!((series_dd(SERIES_MAX) - asymptotic(SERIES_MAX)).abs() < 1e-14);
}
