//! Poisson–Szegő kernel, invariant Green function, their gradients, and a
//! finite-difference hyperbolic Laplacian
//! `Delta_h u = (1-|x|^2)^2 Delta u + 2(n-2)(1-|x|^2) <x, grad u>`.

use crate::error::{HyperError, Result};
use crate::geometry::{bracket_sq_raw, dist_sq, norm_sq, pseudo_distance_raw, BallPoint, SpherePoint};
use crate::specialfn::GreenProfile;

/// `|phi_x(y)|` below which `G_h(x, y)` is treated as singular.
pub const GREEN_DIAGONAL_CUTOFF: f64 = 1e-8;

fn require_dim3(n: usize) -> Result<()> {
    if n < 3 {
        return Err(HyperError::UnsupportedDimension { n, min: 3 });
    }
    Ok(())
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(HyperError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    require_dim3(x.len())
}

/// `((1-|x|^2) / |t-x|^2)^{n-1}` without validation.
#[inline]
pub fn poisson_szego_raw(x: &[f64], t: &[f64]) -> f64 {
    let n = x.len() as i32;
    ((1.0 - norm_sq(x)) / dist_sq(t, x)).powi(n - 1)
}

/// Poisson–Szegő kernel `P_h(x, t)` for interior `x` and `t` on the sphere.
pub fn poisson_szego(x: &BallPoint, t: &SpherePoint) -> Result<f64> {
    check_pair(x.coords(), t.coords())?;
    x.require_interior()?;
    Ok(poisson_szego_raw(x.coords(), t.coords()))
}

/// Gradient of `P_h(., t)` at `x`.
pub fn poisson_szego_grad(x: &BallPoint, t: &SpherePoint) -> Result<Vec<f64>> {
    check_pair(x.coords(), t.coords())?;
    x.require_interior()?;
    Ok(poisson_szego_grad_raw(x.coords(), t.coords()))
}

pub fn poisson_szego_grad_raw(x: &[f64], t: &[f64]) -> Vec<f64> {
    let n = x.len() as i32;
    let a = 1.0 - norm_sq(x);
    let b = dist_sq(t, x);
    let scale = -2.0 * (n - 1) as f64 * (a / b).powi(n - 2) / (b * b);
    x.iter().zip(t).map(|(&xk, &tk)| scale * (xk * b + a * (xk - tk))).collect()
}

/// Invariant Green function `G_h(x, y) = g(|phi_x(y)|)`.
pub fn green_h(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    check_pair(x.coords(), y.coords())?;
    x.require_interior()?;
    y.require_interior()?;
    let s = pseudo_distance_raw(x.coords(), y.coords());
    if s < GREEN_DIAGONAL_CUTOFF {
        return Err(HyperError::Singular("G_h(x, y) on the diagonal"));
    }
    GreenProfile::new(x.dim())?.g(s, 1.0)
}

/// Gradient of `G_h(., y)` at `x`.
pub fn green_h_grad(x: &BallPoint, y: &BallPoint) -> Result<Vec<f64>> {
    check_pair(x.coords(), y.coords())?;
    x.require_interior()?;
    y.require_interior()?;
    if pseudo_distance_raw(x.coords(), y.coords()) < GREEN_DIAGONAL_CUTOFF {
        return Err(HyperError::Singular("grad G_h(x, y) on the diagonal"));
    }
    Ok(green_h_grad_raw(x.coords(), y.coords()))
}

pub fn green_h_grad_raw(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len() as i32;
    let nf = n as f64;
    let a = 1.0 - norm_sq(x);
    let b = 1.0 - norm_sq(y);
    let d = dist_sq(x, y).sqrt();
    let br = bracket_sq_raw(x, y).sqrt();
    let brn = br.powi(n);
    let bn1 = b.powi(n - 1);
    let first = a.powi(n - 1) * bn1 / (nf * d.powi(n) * brn);
    let second = a.powi(n - 2) * bn1 / (nf * d.powi(n - 2) * brn);
    x.iter().zip(y).map(|(&xk, &yk)| -(xk - yk) * first - xk * second).collect()
}

/// Central second-order stencil for `Delta_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicLaplacianStencil {
    step: f64,
    richardson: bool,
}

impl Default for HyperbolicLaplacianStencil {
    fn default() -> Self {
        Self { step: 1e-4, richardson: false }
    }
}

impl HyperbolicLaplacianStencil {
    /// `h` must lie in `[1e-6, 1e-2]`.
    pub fn new(step: f64) -> Result<Self> {
        if !(1e-6..=1e-2).contains(&step) {
            return Err(HyperError::InvalidParameter(format!("stencil step {step} outside [1e-6, 1e-2]")));
        }
        Ok(Self { step, richardson: false })
    }

    /// Combines steps `h` and `h/2` to cancel the `h^2` error term.
    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn richardson(&self) -> bool {
        self.richardson
    }
}

fn laplacian_at_step(u: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let centre = u(x);
    let m = centre.len();
    let mut lap = vec![0.0; m];
    let mut radial = vec![0.0; m];
    let mut p = x.to_vec();
    for k in 0..n {
        p[k] = x[k] + h;
        let up = u(&p);
        p[k] = x[k] - h;
        let um = u(&p);
        p[k] = x[k];
        for i in 0..m {
            lap[i] += (up[i] - 2.0 * centre[i] + um[i]) / (h * h);
            radial[i] += x[k] * (up[i] - um[i]) / (2.0 * h);
        }
    }
    let a = 1.0 - norm_sq(x);
    let c = 2.0 * (n as f64 - 2.0) * a;
    lap.iter().zip(&radial).map(|(l, r)| a * a * l + c * r).collect()
}

/// Finite-difference `Delta_h u(x)`, applied componentwise.
pub fn hyperbolic_laplacian(
    u: impl Fn(&[f64]) -> Vec<f64>,
    x: &BallPoint,
    stencil: &HyperbolicLaplacianStencil,
) -> Result<Vec<f64>> {
    let h = stencil.step;
    if x.norm() + 2.0 * h >= 1.0 {
        return Err(HyperError::StencilOutsideBall { norm: x.norm(), step: h });
    }
    let coarse = laplacian_at_step(&u, x.coords(), h);
    if !stencil.richardson {
        return Ok(coarse);
    }
    let fine = laplacian_at_step(&u, x.coords(), h / 2.0);
    Ok(fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect())
}

/// Planar (`n = 2`) diagnostics, where the hyperbolic kernels reduce to
/// classical ones.
pub mod planar {
    use crate::geometry::{dist_sq, norm_sq};

    /// Classical Poisson kernel `(1 - |x|^2) / |t - x|^2` of the disc.
    pub fn classical_poisson(x: [f64; 2], t: [f64; 2]) -> f64 {
        (1.0 - norm_sq(&x)) / dist_sq(&t, &x)
    }

    /// Same formula evaluated through the general `n`-dimensional expression.
    pub fn hyperbolic_poisson(x: [f64; 2], t: [f64; 2]) -> f64 {
        super::poisson_szego_raw(&x, &t)
    }

    /// `(1/2) log(|1 - conj(w) z| / |w - z|)`.
    pub fn green(w: [f64; 2], z: [f64; 2]) -> f64 {
        // 1 - conj(w) z
        let re = 1.0 - (w[0] * z[0] + w[1] * z[1]);
        let im = -(w[0] * z[1] - w[1] * z[0]);
        0.5 * ((re * re + im * im).sqrt() / dist_sq(&w, &z).sqrt()).ln()
    }

    /// `g(|phi_w(z)|)` with the `n = 2` profile `g(r) = -(1/2) log r`.
    pub fn green_via_profile(w: [f64; 2], z: [f64; 2]) -> f64 {
        let s = crate::geometry::pseudo_distance_raw(&w, &z);
        crate::specialfn::green_g(2, s, 1.0).unwrap_or(f64::INFINITY)
    }
}
