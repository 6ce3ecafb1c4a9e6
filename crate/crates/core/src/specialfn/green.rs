//! Radial profile of the invariant Green function,
//! `g(r,t) = (1/n) int_r^t (1-s^2)^{n-2} s^{1-n} ds`, and the ratio
//! `q(t) = t^{n-2} g(t) / (1-t^2)^{n-1}`.

use std::sync::OnceLock;

use super::gamma::binomial;
use crate::error::{invalid, HyperError, Result};
use crate::quadrature::gauss::{gauss_legendre, GaussRule};

/// Below this radius the binomial closed form is used; above it, a
/// Gauss–Legendre sum of the positive integrand (no cancellation near `s = 1`).
const SPLIT: f64 = 0.5;
const UPPER_NODES: usize = 40;

fn upper_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(UPPER_NODES).expect("fixed-size Gauss-Legendre rule"))
}

/// Radial Green profile for dimension `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreenProfile {
    n: u32,
}

impl GreenProfile {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(HyperError::UnsupportedDimension { n, min: 2 });
        }
        Ok(Self { n: n as u32 })
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[cfg(test)]
    fn integrand(&self, s: f64) -> f64 {
        let one_minus = (1.0 - s) * (1.0 + s);
        one_minus.powi(self.n as i32 - 2) / s.powi(self.n as i32 - 1)
    }

    /// Closed form of `int_r^t` via the binomial expansion of `(1-s^2)^{n-2}`.
    fn closed(&self, r: f64, t: f64) -> f64 {
        let n = self.n as i32;
        let mut acc = 0.0;
        for j in 0..=(n - 2) {
            let e = 2 * j - n + 2;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let piece = if e == 0 { (t / r).ln() } else { (t.powi(e) - r.powi(e)) / e as f64 };
            acc += sign * binomial(self.n - 2, j as u32) * piece;
        }
        acc
    }

    /// Gauss–Legendre in `u = 1 - s` over `[1 - t, 1 - r]`; for `r, t >= 1/2`
    /// both endpoints are exact, so nodes keep full relative accuracy near `s = 1`.
    fn numeric(&self, r: f64, t: f64) -> f64 {
        let n = self.n as i32;
        upper_rule().integrate(1.0 - t, 1.0 - r, |u| (u * (2.0 - u)).powi(n - 2) / (1.0 - u).powi(n - 1))
    }

    /// `n g(r,t)` without the `1/n` factor, splitting at `SPLIT`.
    fn raw(&self, r: f64, t: f64) -> f64 {
        if t <= SPLIT {
            self.closed(r, t)
        } else if r >= SPLIT {
            self.numeric(r, t)
        } else {
            self.closed(r, SPLIT) + self.numeric(SPLIT, t)
        }
    }

    /// `g(r, t)` for `0 < r <= t <= 1`.
    pub fn g(&self, r: f64, t: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(invalid(format!("g(r, t) needs r > 0 (got {r})")));
        }
        if !(r <= t && t <= 1.0) {
            return Err(invalid(format!("g(r, t) needs r <= t <= 1 (got r = {r}, t = {t})")));
        }
        Ok(self.g_unchecked(r, t))
    }

    #[inline]
    pub(crate) fn g_unchecked(&self, r: f64, t: f64) -> f64 {
        if r == t {
            return 0.0;
        }
        self.raw(r, t) / self.n as f64
    }

    /// `g(r) = g(r, 1)`.
    pub fn g1(&self, r: f64) -> Result<f64> {
        self.g(r, 1.0)
    }

    /// `t^{n-2} g(t)`, finite down to `t = 0`.
    pub fn t_pow_g(&self, t: f64) -> f64 {
        let n = self.n as i32;
        if t >= SPLIT {
            return t.powi(n - 2) * self.g_unchecked(t, 1.0);
        }
        let tn2 = t.powi(n - 2);
        let mut acc = 0.0;
        for j in 0..=(n - 2) {
            let e = 2 * j - n + 2;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            // t^{n-2} (SPLIT^e - t^e) / e, with t^{n-2} t^e = t^{2j}
            let piece = if e == 0 {
                if t == 0.0 {
                    0.0
                } else {
                    tn2 * (SPLIT / t).ln()
                }
            } else {
                (tn2 * SPLIT.powi(e) - t.powi(2 * j)) / e as f64
            };
            acc += sign * binomial(self.n - 2, j as u32) * piece;
        }
        (acc + tn2 * self.numeric(SPLIT, 1.0)) / n as f64
    }

    /// `q(t)` with the endpoint values `q(0) = 1/(n(n-2))`, `q(1) = 1/(2n(n-1))`.
    pub fn q(&self, t: f64) -> Result<f64> {
        let n = self.n as f64;
        if self.n < 3 {
            return Err(HyperError::UnsupportedDimension { n: self.n as usize, min: 3 });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(invalid(format!("q(t) needs t in [0, 1] (got {t})")));
        }
        if t == 0.0 {
            return Ok(1.0 / (n * (n - 2.0)));
        }
        if t == 1.0 {
            return Ok(1.0 / (2.0 * n * (n - 1.0)));
        }
        let one_minus = (1.0 - t) * (1.0 + t);
        Ok(self.t_pow_g(t) / one_minus.powi(self.n as i32 - 1))
    }
}

/// `g(r, t)` in dimension `n`.
pub fn green_g(n: usize, r: f64, t: f64) -> Result<f64> {
    GreenProfile::new(n)?.g(r, t)
}

/// `q(t)` in dimension `n >= 3`.
pub fn q_ratio(n: usize, t: f64) -> Result<f64> {
    GreenProfile::new(n)?.q(t)
}
