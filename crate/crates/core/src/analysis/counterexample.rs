//! The planar function `w0(r e^{i theta}) = sum_k r^k cos(k theta) / k^2 - (M/4)(1 - r^2)`,
//! which solves `Delta_h w0 = M (1-|z|^2)^2` with Lipschitz boundary values
//! but has unbounded gradient, so the `n >= 3` hypothesis cannot be dropped.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::norm_sq;

/// Partial sum of `w0` and a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct W0Value {
    pub value: f64,
    /// `r^{K+1} / ((K+1)^2 (1-r))`.
    pub tail_bound: f64,
}

/// `w0(z)` truncated after `terms` series terms.
pub fn counterexample_w0(z: [f64; 2], m: f64, terms: usize) -> Result<W0Value> {
    let r2 = norm_sq(&z);
    if !(r2 < 1.0) {
        return Err(invalid(format!("w0 needs |z| < 1 (got {})", r2.sqrt())));
    }
    if terms == 0 {
        return Err(invalid("w0 needs at least one series term"));
    }
    let (mut re, mut im) = (1.0, 0.0);
    let mut sum = 0.0;
    for k in 1..=terms {
        let next_re = re * z[0] - im * z[1];
        im = re * z[1] + im * z[0];
        re = next_re;
        sum += re / (k * k) as f64;
    }
    let r = r2.sqrt();
    let k1 = (terms + 1) as f64;
    Ok(W0Value { value: sum - m / 4.0 * (1.0 - r2), tail_bound: r.powi(terms as i32 + 1) / (k1 * k1 * (1.0 - r)) })
}

/// Number of terms making the tail bound at radius `r` fall below `tol`.
pub fn w0_terms_for(r: f64, tol: f64) -> usize {
    let mut k = 1usize;
    while k < 100_000 {
        let k1 = (k + 1) as f64;
        if r.powi(k as i32 + 1) / (k1 * k1 * (1.0 - r)) <= tol {
            break;
        }
        k += 1;
    }
    k
}

/// `||Dw0(r)|| = -log(1-r)/r + M r / 2` on the positive real axis.
pub fn counterexample_gradient(r: f64, m: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("gradient radius must lie in (0, 1) (got {r})")));
    }
    Ok(-(-r).ln_1p() / r + m * r / 2.0)
}

/// Smallest `r` in `[0.5, 1)` with `||Dw0(r)|| >= t`, by bisection.
pub fn threshold_radius(t: f64, m: f64) -> Result<f64> {
    let f = |r: f64| counterexample_gradient(r, m).map(|g| g - t);
    let (mut lo, mut hi) = (0.5, 1.0 - f64::EPSILON);
    if f(lo)? >= 0.0 {
        return Ok(lo);
    }
    if f(hi)? < 0.0 {
        return Err(invalid(format!("threshold {t} not reached below r = 1")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Lipschitz estimate of the boundary trace `sum_{k<=K} cos(k theta)/k^2`
/// from difference quotients on `samples` equispaced angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceLipschitz {
    pub terms: usize,
    pub max_quotient: f64,
    /// `int_0^pi sin(t)/t dt`, a bound for every partial sum of `sum sin(k theta)/k`.
    pub bound: f64,
}

pub fn trace_lipschitz(terms: usize, samples: usize) -> TraceLipschitz {
    let trace = |theta: f64| (1..=terms).map(|k| (k as f64 * theta).cos() / (k * k) as f64).sum::<f64>();
    let h = 2.0 * std::f64::consts::PI / samples as f64;
    let mut worst: f64 = 0.0;
    let mut prev = trace(0.0);
    for j in 1..=samples {
        let cur = trace(j as f64 * h);
        worst = worst.max((cur - prev).abs() / h);
        prev = cur;
    }
    TraceLipschitz { terms, max_quotient: worst, bound: super::constants::wilbraham_gibbs() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BallPoint;
    use crate::kernels::{hyperbolic_laplacian, HyperbolicLaplacianStencil};
    use approx::assert_relative_eq;

    #[test]
    fn value_at_origin() {
        assert_eq!(counterexample_w0([0.0, 0.0], 3.0, 10).unwrap().value, -0.75);
        assert!(counterexample_w0([1.0, 0.0], 1.0, 10).is_err());
    }

    #[test]
    fn series_on_real_axis_matches_dilogarithm() {
        // sum r^k / k^2 at r = 1/2 is Li2(1/2) = pi^2/12 - ln(2)^2/2
        let v = counterexample_w0([0.5, 0.0], 0.0, 60).unwrap();
        let li2 = std::f64::consts::PI.powi(2) / 12.0 - 2f64.ln().powi(2) / 2.0;
        assert_relative_eq!(v.value, li2, epsilon = 1e-15 + v.tail_bound);
    }

    #[test]
    fn hyperbolic_laplacian_matches_source() {
        let m = 2.0;
        let st = HyperbolicLaplacianStencil::new(1e-4).unwrap().with_richardson(true);
        let z = [0.3, 0.2];
        let terms = w0_terms_for(0.5, 1e-17);
        let lap = hyperbolic_laplacian(
            |p| vec![counterexample_w0([p[0], p[1]], m, terms).unwrap().value],
            &BallPoint::new(z.to_vec()).unwrap(),
            &st,
        )
        .unwrap();
        let expected = m * (1.0 - norm_sq(&z)).powi(2);
        assert!((lap[0] - expected).abs() < 5e-3, "{} vs {expected}", lap[0]);
    }

    #[test]
    fn gradient_values() {
        let g = counterexample_gradient(0.99, 0.0).unwrap();
        assert_relative_eq!(g, -(0.01f64).ln() / 0.99, max_relative = 1e-15);
        assert_relative_eq!(counterexample_gradient(1e-9, 0.0).unwrap(), 1.0, epsilon = 1e-8);
        for r in [0.9, 0.99, 0.999] {
            assert!(counterexample_gradient(r, 0.0).unwrap() >= -(1.0 - r as f64).ln());
        }
        assert!(counterexample_gradient(1.0, 0.0).is_err());
    }

    #[test]
    fn thresholds_are_reached() {
        for t in [5.0, 10.0] {
            let r = threshold_radius(t, 0.0).unwrap();
            assert!(counterexample_gradient(r, 0.0).unwrap() >= t);
            assert!(r < 1.0);
            // r(T) = 1 - e^{-T (1 + o(1))}
            let predicted = -(1.0 - r).ln() / t;
            assert!((predicted - 1.0).abs() < 0.1, "{predicted}");
        }
    }

    #[test]
    fn trace_is_lipschitz() {
        for terms in [10, 100, 1000] {
            let t = trace_lipschitz(terms, 4096);
            assert!(t.max_quotient <= t.bound + 1e-9, "{t:?}");
        }
    }
}
