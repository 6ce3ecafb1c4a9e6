use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Gamma(x)|` by the Lanczos approximation (g = 7, nine terms),
/// with reflection for `x < 1/2`. Returns `+inf` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = (PI * x).sin();
        if s == 0.0 {
            return f64::INFINITY;
        }
        return (PI / s.abs()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `Gamma(x)` including its sign for negative non-integer arguments.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    let sign = if x > 0.0 || (x.floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
    sign * ln_gamma(x).exp()
}

/// `1 / Gamma(x)`, zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

/// Binomial coefficient `C(n, k)` as a float.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Surface area `omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)` of `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// `alpha_1 = omega_{n-2} / omega_{n-1} = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))`.
pub fn surface_area_ratio(n: usize) -> f64 {
    let nf = n as f64;
    (ln_gamma(nf / 2.0) - ln_gamma((nf - 1.0) / 2.0)).exp() / PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_gamma_values() {
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(100.0), 359.134_205_369_575_4, max_relative = 1e-14);
        assert_relative_eq!(ln_gamma(1e-3), 6.907_178_885_383_854, max_relative = 1e-13);
        assert_eq!(recip_gamma(-2.0), 0.0);
    }

    #[test]
    fn factorials_from_gamma() {
        let mut f = 1.0;
        for k in 1..25u32 {
            f *= k as f64;
            assert_relative_eq!(gamma(k as f64 + 1.0), f, max_relative = 1e-13);
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 6), 720.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_relative_eq!(
            pochhammer(0.5, 4),
            gamma(4.5) / gamma(0.5),
            max_relative = 1e-14
        );
    }

    #[test]
    fn area_ratio_examples() {
        assert_relative_eq!(surface_area_ratio(3), 0.5, max_relative = 1e-14);
        assert_relative_eq!(surface_area_ratio(4), 2.0 / PI, max_relative = 1e-14);
        for n in 3..10 {
            assert!(surface_area_ratio(n + 1) > surface_area_ratio(n));
        }
        assert_relative_eq!(sphere_area(3), 4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2), 2.0 * PI, max_relative = 1e-14);
        // omega_{n-2}/omega_{n-1}
        assert_relative_eq!(
            surface_area_ratio(5),
            sphere_area(4) / sphere_area(5),
            max_relative = 1e-13
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(10, 10), 1.0);
    }
}
