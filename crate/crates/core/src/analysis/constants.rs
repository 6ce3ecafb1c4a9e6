use std::f64::consts::PI;

use log::warn;
use serde::Serialize;

use super::matrix::{matrix_norm_and_l, MatrixFrame};
use crate::error::{invalid, HyperError, Result};
use crate::fields::{BoundaryField, SourceField};
use crate::geometry::norm_sq;
use crate::potentials::QuadratureSettings;
use crate::quadrature::gauss::gauss_legendre;
use crate::quadrature::{sphere_rule, BallRule, VecAccumulator};
use crate::specialfn::{mu2_sup, surface_area_ratio, Mu2};

/// Floor `65 + 7/8` in the definition of `mu5`.
pub const MU5_FLOOR: f64 = 65.875;

/// Explicit constants of the bi-Lipschitz estimate for dimension `n`,
/// boundary Lipschitz constant `L` and source decay constant `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperConstants {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub alpha1: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    pub alpha2: f64,
    pub alpha0: f64,
    /// `sup |f_n(s; 1, 4, 1)|`; undefined for `n < 4`.
    pub mu22: Option<f64>,
    pub mu23: f64,
    pub mu5: f64,
    pub beta1: f64,
    pub beta0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    /// `l(Du(0))`, once a Jacobian at the origin is supplied.
    pub varrho: Option<f64>,
    /// `varrho - 2 C1`; negative values make the lower bound vacuous.
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    pub mu22_detail: Option<Mu2>,
    pub mu23_detail: Mu2,
}

impl HyperConstants {
    /// Fills `varrho = l(Du(0))` and `C2 = varrho - 2 C1`.
    pub fn with_du0(mut self, du0: &MatrixFrame) -> Result<Self> {
        if du0.dim() != self.n {
            return Err(HyperError::DimensionMismatch { expected: self.n, got: du0.dim() });
        }
        let varrho = matrix_norm_and_l(du0).1;
        self.varrho = Some(varrho);
        self.c2 = Some(varrho - 2.0 * self.c1);
        Ok(self)
    }

    /// `true` when `C2 > 0`, i.e. the lower Lipschitz bound says something.
    pub fn co_lipschitz(&self) -> bool {
        self.c2.is_some_and(|c| c > 0.0)
    }
}

/// `alpha_1 = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))`.
pub fn alpha1(n: usize) -> f64 {
    surface_area_ratio(n)
}

/// `(alpha3, alpha4)` for dimension `n >= 3`.
pub fn alpha3_alpha4(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let a1 = alpha1(n);
    let two_n = 2f64.powi(n as i32);
    let eight_n = 8f64.powi(n as i32);
    let a3 = ((nf - 1.0) / nf + 4f64.powi(n as i32)) * two_n * a1;
    let a4 = (nf - 1.0)
        * ((two_n + eight_n) / nf
            + (two_n + eight_n + 2f64.powi(n as i32 - 1)) / (nf - 1.0)
            + 8f64.powi(n as i32 - 1) / (nf - 2.0))
        * a1;
    (a3, a4)
}

/// `alpha_0 = sqrt(n) max(alpha3, alpha4)`.
pub fn alpha0(n: usize) -> f64 {
    let (a3, a4) = alpha3_alpha4(n);
    (n as f64).sqrt() * a3.max(a4)
}

/// Fills every constant except `varrho` and `C2`.
pub fn compute_constants(n: usize, l: f64, m: f64) -> Result<HyperConstants> {
    if n < 3 {
        return Err(HyperError::UnsupportedDimension { n, min: 3 });
    }
    if !(l >= 0.0 && l.is_finite() && m >= 0.0 && m.is_finite()) {
        return Err(invalid(format!("L and M must be finite and >= 0 (got {l}, {m})")));
    }
    let nf = n as f64;
    let a1 = alpha1(n);
    let (a3, a4) = alpha3_alpha4(n);
    let a2 = a3.max(a4);
    let a0 = nf.sqrt() * a2;
    let mu22_detail = if n >= 4 { Some(mu2_sup(n as u32, 1.0, 4, 1.0)?) } else { None };
    let mu22 = mu22_detail.map(|d| d.value);
    let mu23_detail = mu2_sup(n as u32, 0.5, 3, 0.5)?;
    let mu23 = mu23_detail.value;
    let mu5 = mu22.map_or(MU5_FLOOR, |v| (nf / 2.0 * v).max(MU5_FLOOR));
    let beta1 = m / 2.0 * mu23 + m / nf * mu5;
    let beta0 = nf.sqrt() * beta1;
    Ok(HyperConstants {
        n,
        l,
        m,
        alpha1: a1,
        alpha3: a3,
        alpha4: a4,
        alpha2: a2,
        alpha0: a0,
        mu22,
        mu23,
        mu5,
        beta1,
        beta0,
        c1: l * a0 + beta0,
        varrho: None,
        c2: None,
        mu22_detail,
        mu23_detail,
    })
}

/// `Du(0) = 2(n-1) int phi(eta) eta^T d sigma
///        - (1/n) int psi(y) y^T / (|y|^n (1-|y|^2)) d nu(y)`.
pub fn du_at_origin(phi: &BoundaryField, psi: &SourceField, s: &QuadratureSettings) -> Result<MatrixFrame> {
    let n = phi.dim();
    if psi.dim() != n {
        return Err(HyperError::DimensionMismatch { expected: n, got: psi.dim() });
    }
    if n < 3 {
        return Err(HyperError::UnsupportedDimension { n, min: 3 });
    }
    psi.require_declared()?;
    let psi0 = psi.eval(&vec![0.0; n]);
    if norm_sq(&psi0) > 0.0 {
        warn!("psi(0) != 0: the ball integral in Du(0) is singular at the origin");
    }
    let sphere = sphere_rule(n, s.sphere_order)?;
    let mut outer = VecAccumulator::new(n * n);
    let mut buf = vec![0.0; n];
    let mut cell = vec![0.0; n * n];
    for (eta, w) in sphere.iter() {
        phi.eval_into(eta, &mut buf);
        fill_outer(&buf, eta, &mut cell);
        outer.add_scaled(w, &cell);
    }
    let ball = BallRule::product(&gauss_legendre(s.radial_order)?, 0.0, 1.0, sphere)?;
    let mut inner = VecAccumulator::new(n * n);
    ball.for_each(|node| {
        let y = node.point;
        let r2 = norm_sq(y);
        psi.eval_into(y, &mut buf);
        fill_outer(&buf, y, &mut cell);
        inner.add_scaled(node.weight_nu / (r2.powf(n as f64 / 2.0) * (1.0 - r2)), &cell);
    });
    let (outer, inner) = (outer.values(), inner.values());
    let c = 2.0 * (n as f64 - 1.0);
    let entries = outer.iter().zip(&inner).map(|(o, i)| c * o - i / n as f64).collect();
    MatrixFrame::new(n, entries)
}

fn fill_outer(a: &[f64], b: &[f64], out: &mut [f64]) {
    let n = b.len();
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * n + j] = ai * bj;
        }
    }
}

/// `int_0^pi sin(t)/t dt`, the Wilbraham–Gibbs constant.
pub fn wilbraham_gibbs() -> f64 {
    gauss_legendre(40).map(|r| r.integrate(0.0, PI, |t| t.sin() / t)).unwrap_or(f64::NAN)
}
