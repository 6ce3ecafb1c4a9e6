//! Gauss hypergeometric series and the truncated-Pochhammer series
//! `sum (a)_k ((b-n)/2)_k / ((n/2)_k k!) * s^k / (k + c)`.

use serde::Serialize;

use super::gamma::recip_gamma;
use super::gamma::gamma;
use crate::error::{invalid, HyperError, Result};

/// Hard cap on series length; exceeding it signals a bad parameter regime.
pub const MAX_TERMS: usize = 1_000_000;
const REL_TOL: f64 = 1e-16;
const CONFIRM: usize = 3;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Parameters of `F(a, b; c; s)` for real `s` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
}

impl HypergeomParams {
    pub fn new(a: f64, b: f64, c: f64, s: f64) -> Result<Self> {
        let p = Self { a, b, c, s };
        p.validate()?;
        Ok(p)
    }

    fn is_polynomial(&self) -> bool {
        is_nonpositive_integer(self.a) || is_nonpositive_integer(self.b)
    }

    fn validate(&self) -> Result<()> {
        if is_nonpositive_integer(self.c) {
            return Err(invalid(format!("c = {} is zero or a negative integer", self.c)));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(invalid(format!("argument s = {} outside [0, 1]", self.s)));
        }
        if self.s == 1.0 && !self.is_polynomial() && self.c - self.a - self.b <= 0.0 {
            return Err(invalid("series diverges at s = 1 unless c - a - b > 0"));
        }
        Ok(())
    }
}

/// Sums `sum_k t_k` where `t_{k+1} = t_k * ratio(k)`, stopping on an exact zero
/// term or after three consecutive terms below `1e-16 |sum|`.
fn sum_series(first: f64, mut ratio: impl FnMut(usize) -> f64) -> Result<f64> {
    let mut term = first;
    let mut sum = first;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        term *= ratio(k);
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if term.abs() <= REL_TOL * sum.abs() {
            small += 1;
            if small >= CONFIRM {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(HyperError::NonConvergence { terms: MAX_TERMS })
}

/// `F(a,b;c;s) = sum (a)_k (b)_k / ((c)_k k!) s^k`.
///
/// At `s = 1` with `c - a - b > 0` the sum is taken from Gauss's theorem
/// `Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))`; the algebraic tail there
/// is too slow for plain summation.
pub fn gauss_2f1(p: &HypergeomParams) -> Result<f64> {
    p.validate()?;
    let HypergeomParams { a, b, c, s } = *p;
    if s == 0.0 {
        return Ok(1.0);
    }
    if s == 1.0 && !p.is_polynomial() {
        return Ok(gamma(c) * gamma(c - a - b) * recip_gamma(c - a) * recip_gamma(c - b));
    }
    sum_series(1.0, |k| {
        let kf = k as f64;
        (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * s
    })
}

/// Parameters `(n, a, b, c)` of `f_n(s) = sum (a)_k ((b-n)/2)_k / ((n/2)_k k!) s^k/(k+c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct WeightedSeries {
    a: f64,
    beta: f64,
    gamma: f64,
    c: f64,
}

impl WeightedSeries {
    fn new(n: u32, a: f64, b: u32, c: f64) -> Self {
        Self { a, beta: (b as f64 - n as f64) / 2.0, gamma: n as f64 / 2.0, c }
    }

    /// Next plain coefficient ratio `d_{k+1} / d_k`.
    fn ratio(&self, k: usize) -> f64 {
        let kf = k as f64;
        (self.a + kf) * (self.beta + kf) / ((self.gamma + kf) * (kf + 1.0))
    }

    fn eval(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(1.0 / self.c);
        }
        // track d_k s^k and divide by (k + c) on the fly
        let mut d = 1.0;
        let mut sum = 1.0 / self.c;
        let mut small = 0;
        for k in 0..MAX_TERMS {
            d *= self.ratio(k) * s;
            if d == 0.0 {
                return Ok(sum);
            }
            let term = d / (k as f64 + 1.0 + self.c);
            sum += term;
            if term.abs() <= REL_TOL * sum.abs() {
                small += 1;
                if small >= CONFIRM {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        Err(HyperError::NonConvergence { terms: MAX_TERMS })
    }

    /// Coefficients `d_k / (k + c)` up to the stopping rule evaluated at `s = 1`.
    fn coefficients(&self) -> Result<(Vec<f64>, bool)> {
        let mut coeffs = vec![1.0 / self.c];
        let mut d = 1.0;
        let mut sum = 1.0 / self.c;
        let mut small = 0;
        for k in 0..MAX_TERMS {
            d *= self.ratio(k);
            if d == 0.0 {
                return Ok((coeffs, true));
            }
            let e = d / (k as f64 + 1.0 + self.c);
            coeffs.push(e);
            sum += e;
            if e.abs() <= REL_TOL * sum.abs() {
                small += 1;
                if small >= CONFIRM {
                    return Ok((coeffs, false));
                }
            } else {
                small = 0;
            }
        }
        Err(HyperError::NonConvergence { terms: MAX_TERMS })
    }
}

fn check_series_domain(n: u32, a: f64, b: u32, c: f64) -> Result<()> {
    if n == 0 || b == 0 {
        return Err(invalid("n and b must be positive integers"));
    }
    if !(a > 0.0) || !(c > 0.0) {
        return Err(invalid(format!("need a > 0 and c > 0 (got a = {a}, c = {c})")));
    }
    Ok(())
}

fn check_bounded_domain(n: u32, a: f64, b: u32, c: f64) -> Result<()> {
    check_series_domain(n, a, b, c)?;
    if n < b {
        return Err(invalid(format!("need n >= b (got n = {n}, b = {b})")));
    }
    if !(n as f64 - a - b as f64 / 2.0 > 0.0) {
        return Err(invalid("need n - a - b/2 > 0"));
    }
    Ok(())
}

/// `f_n(s)` on `[0, 1]`; a polynomial when `n` and `b` have equal parity.
pub fn f_n_series(n: u32, a: f64, b: u32, c: f64, s: f64) -> Result<f64> {
    check_bounded_domain(n, a, b, c)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(invalid(format!("s = {s} outside [0, 1]")));
    }
    WeightedSeries::new(n, a, b, c).eval(s)
}

/// `I_0(s) = int_0^1 t^m F(a, (b-n)/2; n/2; t s) dt`, summed termwise for `s` in `[0, 1)`.
pub fn i0_series(n: u32, a: f64, b: u32, m: f64, s: f64) -> Result<f64> {
    if !(m > -1.0) {
        return Err(invalid(format!("need m > -1 (got {m})")));
    }
    check_series_domain(n, a, b, m + 1.0)?;
    if !(0.0..1.0).contains(&s) {
        return Err(invalid(format!("s = {s} outside [0, 1)")));
    }
    WeightedSeries::new(n, a, b, m + 1.0).eval(s)
}

/// Numerical supremum of `|f_n|` over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mu2 {
    /// `grid_max + tail_bound`.
    pub value: f64,
    pub grid_max: f64,
    pub tail_bound: f64,
    pub terms: usize,
    pub polynomial: bool,
}

/// Grid points used by [`mu2_sup`]: `0, 1e-3, ..., 1`.
pub const MU2_GRID: usize = 1000;

/// Max of `|f_n|` on the grid `{j/1000}` plus an estimate of the truncated tail.
///
/// The tail of the coefficient sequence decays like `k^{-q}` with
/// `q = n - a - b/2 + 2`, bounded by `2 e_K K / (q - 1)` past the last kept term.
pub fn mu2_sup(n: u32, a: f64, b: u32, c: f64) -> Result<Mu2> {
    check_bounded_domain(n, a, b, c)?;
    let series = WeightedSeries::new(n, a, b, c);
    let (coeffs, polynomial) = series.coefficients()?;
    let k_last = coeffs.len() - 1;
    let tail_bound = if polynomial {
        0.0
    } else {
        let q = n as f64 - a - b as f64 / 2.0 + 2.0;
        2.0 * coeffs[k_last].abs() * k_last as f64 / (q - 1.0)
    };
    let grid_max = (0..=MU2_GRID)
        .map(|j| {
            let s = j as f64 / MU2_GRID as f64;
            coeffs.iter().rev().fold(0.0, |acc, &e| acc * s + e).abs()
        })
        .fold(0.0, f64::max);
    Ok(Mu2 { value: grid_max + tail_bound, grid_max, tail_bound, terms: coeffs.len(), polynomial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::gamma::pochhammer;
    use approx::assert_relative_eq;

    #[test]
    fn f_at_zero_is_one() {
        let p = HypergeomParams::new(0.3, 1.7, 2.5, 0.0).unwrap();
        assert_eq!(gauss_2f1(&p).unwrap(), 1.0);
    }

    #[test]
    fn atanh_identity() {
        let p = HypergeomParams::new(1.0, 0.5, 1.5, 0.25).unwrap();
        assert_relative_eq!(gauss_2f1(&p).unwrap(), 1.098_612_288_668_109_8, max_relative = 1e-15);
    }

    #[test]
    fn gauss_summation_at_one_matches_slow_series() {
        // c - a - b = 2, so the plain series converges like k^-3
        let p = HypergeomParams::new(1.0, -0.5, 2.5, 1.0).unwrap();
        let closed = gauss_2f1(&p).unwrap();
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..200_000 {
            let kf = k as f64;
            term *= (1.0 + kf) * (-0.5 + kf) / ((2.5 + kf) * (kf + 1.0));
            sum += term;
        }
        assert_relative_eq!(closed, sum, max_relative = 1e-9);
    }

    #[test]
    fn polynomial_terminates_exactly() {
        // F(-2, b; c; s) = 1 - 2 b s / c + b (b+1) s^2 / (c (c+1))
        let (b, c, s) = (1.3, 0.7, 0.9);
        let p = HypergeomParams::new(-2.0, b, c, s).unwrap();
        let exact = 1.0 - 2.0 * b * s / c + b * (b + 1.0) * s * s / (c * (c + 1.0));
        assert_relative_eq!(gauss_2f1(&p).unwrap(), exact, max_relative = 1e-15);
        let p1 = HypergeomParams::new(-2.0, b, c, 1.0).unwrap();
        let exact1 = 1.0 - 2.0 * b / c + b * (b + 1.0) / (c * (c + 1.0));
        assert_relative_eq!(gauss_2f1(&p1).unwrap(), exact1, max_relative = 1e-14);
    }

    #[test]
    fn parameter_validation() {
        assert!(HypergeomParams::new(1.0, 1.0, -2.0, 0.5).is_err());
        assert!(HypergeomParams::new(1.0, 1.0, 0.0, 0.5).is_err());
        assert!(HypergeomParams::new(1.0, 0.5, 1.5, 1.0).is_err());
        assert!(HypergeomParams::new(1.0, 0.5, 1.5, 1.2).is_err());
    }

    #[test]
    fn f_n_trivial_cases() {
        assert_relative_eq!(f_n_series(5, 1.0, 4, 2.5, 0.0).unwrap(), 1.0 / 2.5);
        // n = b kills every k >= 1 term
        assert_relative_eq!(f_n_series(4, 1.0, 4, 1.5, 0.8).unwrap(), 1.0 / 1.5);
        assert!(f_n_series(3, 1.0, 4, 1.0, 0.5).is_err());
        assert!(f_n_series(4, 3.5, 2, 1.0, 0.5).is_err());
    }

    #[test]
    fn f_n_polynomial_against_explicit_sum() {
        // n = 8, b = 4: (b-n)/2 = -2, polynomial of degree 2
        let (n, a, b, c, s) = (8u32, 1.5, 4u32, 0.5, 0.9f64);
        let beta = (b as f64 - n as f64) / 2.0;
        let explicit: f64 = (0..=2u32)
            .map(|k| {
                pochhammer(a, k) * pochhammer(beta, k)
                    / (pochhammer(n as f64 / 2.0, k) * pochhammer(1.0, k))
                    * s.powi(k as i32)
                    / (k as f64 + c)
            })
            .sum();
        assert_relative_eq!(f_n_series(n, a, b, c, s).unwrap(), explicit, max_relative = 1e-15);
    }

    #[test]
    fn f_n_at_one_against_long_partial_sum() {
        // oracle: 1e5 plain terms plus nothing else; tail ~ 1e-10
        let (n, a, b, c) = (5u32, 1.0, 4u32, 1.0);
        let beta = (b as f64 - n as f64) / 2.0;
        let mut d = 1.0;
        let mut sum = 1.0 / c;
        for k in 0..100_000usize {
            let kf = k as f64;
            d *= (a + kf) * (beta + kf) / (n as f64 / 2.0 + kf) / (kf + 1.0);
            sum += d / (kf + 1.0 + c);
        }
        assert_relative_eq!(f_n_series(n, a, b, c, 1.0).unwrap(), sum, epsilon = 1e-9);
    }

    #[test]
    fn i0_trivial_cases() {
        assert_relative_eq!(i0_series(4, 1.0, 4, 0.5, 0.0).unwrap(), 1.0 / 1.5);
        let s = 0.37;
        assert_eq!(
            i0_series(5, 0.5, 3, 0.0, s).unwrap(),
            WeightedSeries::new(5, 0.5, 3, 1.0).eval(s).unwrap()
        );
        assert!(i0_series(4, 1.0, 4, -1.0, 0.3).is_err());
        assert!(i0_series(4, 1.0, 4, 0.0, 1.0).is_err());
    }

    #[test]
    fn mu2_trivial_and_monotone_cases() {
        let m = mu2_sup(4, 1.0, 4, 2.0).unwrap();
        assert!(m.polynomial);
        assert_relative_eq!(m.value, 0.5);
        // coefficients of f_5(.; 1, 4, 1) alternate in sign after k = 0
        let m5 = mu2_sup(5, 1.0, 4, 1.0).unwrap();
        assert!(m5.value >= 1.0 && m5.tail_bound < 1e-9);
    }
}
