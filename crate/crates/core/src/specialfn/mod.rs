//! Scalar special functions: gamma, Pochhammer symbols, Gauss hypergeometric
//! series, the radial Green profile and the truncated series `f_n`, `I_0`.

mod gamma;
mod green;
mod hypergeom;

pub use gamma::{binomial, gamma, ln_gamma, pochhammer, recip_gamma, sphere_area, surface_area_ratio};
pub use green::{green_g, q_ratio, GreenProfile};
pub use hypergeom::{f_n_series, gauss_2f1, i0_series, mu2_sup, HypergeomParams, Mu2, MAX_TERMS, MU2_GRID};

/// Prefactor `Gamma((t-1)/2) Gamma(1/2) / Gamma(t/2)` of the one-dimensional
/// reduction `int_{-1}^1 (1-s^2)^{(t-3)/2} (1 - 2rs + r^2)^{-k} ds`.
pub fn projection_prefactor(t: f64) -> f64 {
    (ln_gamma((t - 1.0) / 2.0) + ln_gamma(0.5) - ln_gamma(t / 2.0)).exp()
}

/// Right-hand side of the one-dimensional reduction:
/// `prefactor(t) * F(k, k + 1 - t/2; t/2; r^2)`.
pub fn projected_power_integral(t: f64, k: f64, r: f64) -> crate::error::Result<f64> {
    let p = HypergeomParams::new(k, k + 1.0 - t / 2.0, t / 2.0, r * r)?;
    Ok(projection_prefactor(t) * gauss_2f1(&p)?)
}
