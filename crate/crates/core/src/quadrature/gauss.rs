//! Gauss–Legendre and Gauss–Jacobi nodes and weights on `[-1, 1]`,
//! computed by Newton iteration on the three-term Jacobi recurrence.

use std::f64::consts::PI;

use crate::error::{HyperError, Result};
use crate::specialfn::ln_gamma;

/// Nodes (descending) and weights of a one-dimensional Gauss rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// Evaluates `(P_m, P_{m-1})` for the Jacobi polynomials at `x`.
fn jacobi_pair(m: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta + (ab + 2.0) * x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=m {
        let jf = j as f64;
        let c = 2.0 * jf + ab;
        let a1 = 2.0 * jf * (jf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (jf + alpha - 1.0) * (jf + beta - 1.0) * c;
        let next = (a2 * p - a3 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Derivative of `P_m` from `P_m`, `P_{m-1}`.
fn jacobi_derivative(m: usize, alpha: f64, beta: f64, x: f64, p: f64, p_prev: f64) -> f64 {
    let mf = m as f64;
    let c = 2.0 * mf + alpha + beta;
    (mf * (alpha - beta - c * x) * p + 2.0 * (mf + alpha) * (mf + beta) * p_prev)
        / (c * (1.0 - x) * (1.0 + x))
}

/// `m`-point Gauss–Jacobi rule for the weight `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi(m: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if m == 0 {
        return Err(HyperError::InvalidParameter("Gauss rule needs at least one node".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(HyperError::InvalidParameter(format!(
            "Jacobi exponents must exceed -1 (got {alpha}, {beta})"
        )));
    }
    let mf = m as f64;
    let ab = alpha + beta;
    // 2^{ab+1} Gamma(m+alpha+1) Gamma(m+beta+1) / (Gamma(m+ab+1) m!)
    let log_const = (ab + 1.0) * 2f64.ln() + ln_gamma(mf + alpha + 1.0) + ln_gamma(mf + beta + 1.0)
        - ln_gamma(mf + ab + 1.0)
        - ln_gamma(mf + 1.0);
    let scale = log_const.exp();

    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for i in 1..=m {
        let theta = PI * (i as f64 - 0.25 + 0.5 * alpha) / (mf + 0.5 * (ab + 1.0));
        let mut x = theta.cos();
        let mut deriv = 1.0;
        for _ in 0..100 {
            let (p, q) = jacobi_pair(m, alpha, beta, x);
            deriv = jacobi_derivative(m, alpha, beta, x, p, q);
            let dx = p / deriv;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (p, q) = jacobi_pair(m, alpha, beta, x);
        if p != 0.0 {
            deriv = jacobi_derivative(m, alpha, beta, x, p, q);
        }
        nodes.push(x);
        weights.push(scale / ((1.0 - x) * (1.0 + x) * deriv * deriv));
    }
    if nodes.windows(2).any(|w| !(w[0] > w[1])) || nodes.iter().any(|x| x.abs() >= 1.0) {
        return Err(HyperError::NonConvergence { terms: m });
    }
    // the log-gamma constant loses ~m * eps for large m; the total mass
    // 2^{ab+1} Gamma(alpha+1) Gamma(beta+1) / Gamma(ab+2) only involves small arguments
    let mass = ((ab + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0)).exp();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w *= mass / total);
    Ok(GaussRule { nodes, weights, alpha, beta })
}

/// `m`-point Gauss–Legendre rule.
pub fn gauss_legendre(m: usize) -> Result<GaussRule> {
    gauss_jacobi(m, 0.0, 0.0)
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs mapped affinely onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates `f` on `[lo, hi]` (the Jacobi weight, if any, is implied).
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = crate::quadrature::KahanSum::default();
        for (x, w) in self.mapped(lo, hi) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}
