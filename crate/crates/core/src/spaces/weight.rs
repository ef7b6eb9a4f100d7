//! Closed-form integrals of the power weight `|x|^alpha` in one dimension.

/// `int_a^b |x|^alpha dx` for `a <= b`, infinite when an endpoint touches
/// the origin and `alpha <= -1`.
pub fn power_weight_integral(a: f64, b: f64, alpha: f64) -> f64 {
    debug_assert!(a <= b);
    if a >= 0.0 {
        radial_integral(a, b, alpha)
    } else if b <= 0.0 {
        radial_integral(-b, -a, alpha)
    } else {
        radial_integral(0.0, -a, alpha) + radial_integral(0.0, b, alpha)
    }
}

/// `int_a^b r^alpha dr` for `0 <= a <= b`.
pub fn radial_integral(a: f64, b: f64, alpha: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let e = alpha + 1.0;
    if a == 0.0 {
        return if e > 0.0 { b.powf(e) / e } else { f64::INFINITY };
    }
    // a^e (exp(e ln(b/a)) - 1) / e, accurate for thin pieces
    let l = ((b - a) / a).ln_1p();
    if e == 0.0 {
        l
    } else {
        a.powf(e) * (e * l).exp_m1() / e
    }
}

/// `int_{a <= |x| <= b} |x|^alpha dx` in dimension `n` for `0 <= a <= b`,
/// i.e. `n v_n int_a^b r^{alpha + n - 1} dr`.
pub fn shell_integral(n: u32, a: f64, b: f64, alpha: f64) -> f64 {
    let area = n as f64 * super::unit_ball_volume(n);
    area * radial_integral(a, b, alpha + n as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(power_weight_integral(-1.0, 1.0, 0.0), 2.0);
        assert!((power_weight_integral(1.0, 2.0, 1.0) - 1.5).abs() < 1e-15);
        assert!((power_weight_integral(0.0, 1.0, -0.5) - 2.0).abs() < 1e-15);
        assert!((power_weight_integral(-4.0, -1.0, -0.5) - 2.0).abs() < 1e-15);
        assert!((power_weight_integral(1.0, 8.0, -1.0) - 8f64.ln()).abs() < 1e-15);
        assert!(power_weight_integral(0.0, 1.0, -1.0).is_infinite());
        assert!(power_weight_integral(-1.0, 0.0, -2.0).is_infinite());
    }

    #[test]
    fn thin_piece_is_accurate() {
        let a = 1.0;
        let b = a + 1e-12;
        let h = b - a;
        let got = radial_integral(a, b, 0.3);
        assert!((got / h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn shells() {
        // area of the unit disc with alpha = 0
        let got = shell_integral(2, 0.0, 1.0, 0.0);
        assert!((got - std::f64::consts::PI).abs() < 1e-14);
        assert_eq!(shell_integral(1, 1.0, 2.0, 0.0), 2.0);
    }
}
