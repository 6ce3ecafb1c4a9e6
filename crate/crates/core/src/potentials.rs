//! The operators `P_h[phi](x) = int P_h(x, xi) phi(xi) d sigma(xi)` and
//! `G_h[psi](x) = int G_h(x, y) psi(y) d tau(y)`, the representation
//! `u = P_h[phi] - G_h[psi]`, and numerical checks of the surrounding
//! integral identities.
//!
//! `P_h(x, .)` concentrates on a cap of size `1 - |x|` around `x / |x|`, so
//! the sphere rule is aligned with `x` and its axial resolution grows like
//! `escalation / (1 - |x|)`. `G_h[psi]` is evaluated after the substitution
//! `y = phi_x(w)`, which turns it into `int g(|w|) psi(phi_x(w)) d tau(w)` and
//! moves the logarithmic/power singularity to the origin of a radial rule.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, HyperError, Result};
use crate::fields::decay_source;
pub use crate::fields::{BoundaryField, Majorant, SourceField};
use crate::geometry::{dist_sq, mobius_apply_raw, norm_sq, BallPoint};
use crate::kernels::{hyperbolic_laplacian, HyperbolicLaplacianStencil};
use crate::quadrature::gauss::gauss_legendre;
use crate::quadrature::{
    sphere_rule, AxialSphereRule, BallRule, KahanSum, SphereRule, VecAccumulator, DEFAULT_BOUNDARY_MARGIN,
    DEFAULT_RADIAL_ORDER, DEFAULT_SPHERE_ORDER,
};
use crate::specialfn::GreenProfile;

/// Axial nodes per unit of `1 / (1 - |x|)` for the aligned Poisson rule.
pub const DEFAULT_ESCALATION: f64 = 16.0;
/// Axial resolution past which a warning is logged.
pub const ORDER_WARNING: usize = 512;
const MAX_ORDER: usize = 4096;

/// Quadrature resolution shared by all potential evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub sphere_order: usize,
    pub radial_order: usize,
    /// Evaluation points must satisfy `|x| <= 1 - margin`.
    pub margin: f64,
    pub escalation: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            sphere_order: DEFAULT_SPHERE_ORDER,
            radial_order: DEFAULT_RADIAL_ORDER,
            margin: DEFAULT_BOUNDARY_MARGIN,
            escalation: DEFAULT_ESCALATION,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_ORDER).contains(&self.sphere_order) {
            return Err(invalid(format!("sphere order {} outside [2, {MAX_ORDER}]", self.sphere_order)));
        }
        if !(2..=MAX_ORDER).contains(&self.radial_order) {
            return Err(invalid(format!("radial order {} outside [2, {MAX_ORDER}]", self.radial_order)));
        }
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return Err(invalid(format!("boundary margin {} outside (0, 0.5)", self.margin)));
        }
        if !(self.escalation >= 1.0 && self.escalation.is_finite()) {
            return Err(invalid(format!("escalation factor {} must be >= 1", self.escalation)));
        }
        Ok(())
    }

    /// Axial Gauss–Jacobi nodes needed at radius `r`.
    pub fn axial_points(&self, r: f64) -> usize {
        // the small offset keeps exact ratios such as 16 / 0.1 from rounding up
        let escalated = (self.escalation / (1.0 - r).max(1e-12) - 1e-9).ceil();
        (escalated.min(1e9) as usize).max(self.sphere_order / 2 + 1)
    }

    fn check_point(&self, x: &BallPoint) -> Result<()> {
        if x.norm() > 1.0 - self.margin {
            return Err(HyperError::OutsideBall { norm: x.norm() });
        }
        Ok(())
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(HyperError::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn aligned_rule(axis: &[f64], r: f64, s: &QuadratureSettings) -> Result<AxialSphereRule> {
    let axial = s.axial_points(r);
    if axial > ORDER_WARNING {
        warn!("Poisson rule at |x| = {r} needs {axial} axial nodes (> {ORDER_WARNING})");
    }
    AxialSphereRule::new(axis.len(), axis, axial, s.sphere_order)
}

/// `P_h[phi](x)` together with the diagnostics of the rule that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extension {
    pub value: Vec<f64>,
    /// `|int P_h(x, .) d sigma - 1| * max |phi|` over the nodes.
    pub est_error: f64,
    pub kernel_mass: f64,
    pub axial_points: usize,
}

/// Sphere rule frozen for a region of evaluation points, so finite
/// differences and Lipschitz quotients see a smooth quadrature error.
#[derive(Debug, Clone)]
pub struct PoissonRule {
    sphere: AxialSphereRule,
}

impl PoissonRule {
    /// Rule aligned with `x` and resolved for `|x|`.
    pub fn for_point(x: &[f64], s: &QuadratureSettings) -> Result<Self> {
        Self::for_region(x, norm_sq(x).sqrt(), s)
    }

    /// Rule aligned with `axis` and resolved for points up to radius `rmax`.
    pub fn for_region(axis: &[f64], rmax: f64, s: &QuadratureSettings) -> Result<Self> {
        Ok(Self { sphere: aligned_rule(axis, rmax, s)? })
    }

    pub fn axial_points(&self) -> usize {
        self.sphere.axial_points()
    }

    pub fn dim(&self) -> usize {
        self.sphere.dim()
    }

    /// Unvalidated evaluation at an interior `x`.
    pub fn eval(&self, phi: &BoundaryField, x: &[f64]) -> Extension {
        let n = x.len();
        let a = 1.0 - norm_sq(x);
        let mut acc = VecAccumulator::new(phi.dim());
        let mut mass = KahanSum::default();
        let mut buf = vec![0.0; phi.dim()];
        let mut phi_max: f64 = 0.0;
        self.sphere.for_each(|xi, w| {
            let k = w * (a / dist_sq(xi, x)).powi(n as i32 - 1);
            phi.eval_into(xi, &mut buf);
            phi_max = phi_max.max(norm_sq(&buf));
            acc.add_scaled(k, &buf);
            mass.add(k);
        });
        let kernel_mass = mass.value();
        Extension {
            value: acc.values(),
            est_error: (kernel_mass - 1.0).abs() * phi_max.sqrt(),
            kernel_mass,
            axial_points: self.axial_points(),
        }
    }
}

/// `P_h[phi](x)` with an aligned, auto-escalated rule.
pub fn poisson_extension(phi: &BoundaryField, x: &BallPoint, s: &QuadratureSettings) -> Result<Extension> {
    check_dim(phi.dim(), x.dim())?;
    s.check_point(x)?;
    Ok(PoissonRule::for_point(x.coords(), s)?.eval(phi, x.coords()))
}

/// `P_h[phi](x)` with a caller-supplied sphere rule.
pub fn poisson_extension_with_rule(phi: &BoundaryField, x: &BallPoint, rule: &SphereRule) -> Result<Vec<f64>> {
    check_dim(phi.dim(), x.dim())?;
    check_dim(rule.dim(), x.dim())?;
    x.require_interior()?;
    let n = x.dim() as i32;
    let a = 1.0 - x.norm_sq();
    let mut acc = VecAccumulator::new(phi.dim());
    let mut buf = vec![0.0; phi.dim()];
    for (xi, w) in rule.iter() {
        phi.eval_into(xi, &mut buf);
        acc.add_scaled(w * (a / dist_sq(xi, x.coords())).powi(n - 1), &buf);
    }
    Ok(acc.values())
}

/// `int P_h(x, .) d sigma` with the aligned rule; equals 1 exactly.
pub fn poisson_normalization(x: &BallPoint, s: &QuadratureSettings) -> Result<f64> {
    s.check_point(x)?;
    let rule = PoissonRule::for_point(x.coords(), s)?;
    let n = x.dim() as i32;
    let a = 1.0 - x.norm_sq();
    let mut mass = KahanSum::default();
    rule.sphere.for_each(|xi, w| mass.add(w * (a / dist_sq(xi, x.coords())).powi(n - 1)));
    Ok(mass.value())
}

/// Radial Gauss–Legendre rule on `[0, 1]` with the weights
/// `n rho^{n-1} g(rho) (1-rho^2)^{-n}` folded in, times an aligned sphere rule.
#[derive(Debug, Clone)]
pub struct GreenRule {
    radial: Vec<(f64, f64)>,
    sphere: AxialSphereRule,
}

impl GreenRule {
    pub fn new(radial_order: usize, sphere: AxialSphereRule) -> Result<Self> {
        let n = sphere.dim();
        let profile = GreenProfile::new(n)?;
        let radial = gauss_legendre(radial_order)?
            .mapped(0.0, 1.0)
            .map(|(rho, w)| {
                // rho^{n-1} g(rho) = rho * (rho^{n-2} g(rho))
                let weight = n as f64 * w * rho * profile.t_pow_g(rho) / ((1.0 - rho) * (1.0 + rho)).powi(n as i32);
                (rho, weight)
            })
            .collect();
        Ok(Self { radial, sphere })
    }

    /// Rule aligned with `x` and resolved for `|x|`.
    pub fn for_point(x: &[f64], s: &QuadratureSettings) -> Result<Self> {
        Self::for_region(x, norm_sq(x).sqrt(), s)
    }

    pub fn for_region(axis: &[f64], rmax: f64, s: &QuadratureSettings) -> Result<Self> {
        Self::new(s.radial_order, aligned_rule(axis, rmax, s)?)
    }

    pub fn dim(&self) -> usize {
        self.sphere.dim()
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.sphere.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unvalidated `G_h[psi](x)`.
    pub fn eval(&self, psi: &SourceField, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut acc = VecAccumulator::new(psi.dim());
        let mut buf = vec![0.0; psi.dim()];
        let mut w = vec![0.0; n];
        let mut y = vec![0.0; n];
        for &(rho, wr) in &self.radial {
            self.sphere.for_each(|xi, ws| {
                for (wi, &c) in w.iter_mut().zip(xi) {
                    *wi = rho * c;
                }
                mobius_apply_raw(x, &w, &mut y);
                psi.eval_into(&y, &mut buf);
                acc.add_scaled(wr * ws, &buf);
            });
        }
        acc.values()
    }
}

/// `G_h[psi](x)` in Möbius-substituted form.
pub fn green_potential(psi: &SourceField, x: &BallPoint, s: &QuadratureSettings) -> Result<Vec<f64>> {
    check_dim(psi.dim(), x.dim())?;
    psi.require_declared()?;
    x.require_interior()?;
    Ok(GreenRule::for_point(x.coords(), s)?.eval(psi, x.coords()))
}

/// `G_h[psi](x)` from a caller-supplied (not yet pushed forward) ball rule:
/// the nodes are moved by `phi_x` and weighted by `g(|w|) tau(w)`.
pub fn green_potential_with_rule(psi: &SourceField, x: &BallPoint, rule: &BallRule) -> Result<Vec<f64>> {
    check_dim(psi.dim(), x.dim())?;
    check_dim(rule.dim(), x.dim())?;
    psi.require_declared()?;
    if rule.is_pushed_forward() {
        return Err(invalid("green_potential_with_rule needs a rule without prior pushforward"));
    }
    let pushed = crate::quadrature::mobius_pushforward_nodes(rule, x)?;
    let profile = GreenProfile::new(x.dim())?;
    let mut acc = VecAccumulator::new(psi.dim());
    let mut buf = vec![0.0; psi.dim()];
    let mut cached = (f64::NAN, 0.0);
    pushed.for_each(|node| {
        if node.base_radius != cached.0 {
            cached = (node.base_radius, profile.g_unchecked(node.base_radius, 1.0));
        }
        psi.eval_into(node.point, &mut buf);
        acc.add_scaled(cached.1 * node.weight_tau, &buf);
    });
    Ok(acc.values())
}

/// Evaluator with both rules frozen, for finite differences and scans.
#[derive(Debug, Clone)]
pub struct FrozenRepresentation {
    pub poisson: PoissonRule,
    pub green: GreenRule,
}

impl FrozenRepresentation {
    pub fn for_region(axis: &[f64], rmax: f64, s: &QuadratureSettings) -> Result<Self> {
        Ok(Self { poisson: PoissonRule::for_region(axis, rmax, s)?, green: GreenRule::for_region(axis, rmax, s)? })
    }

    pub fn eval(&self, phi: &BoundaryField, psi: &SourceField, x: &[f64]) -> Vec<f64> {
        let p = self.poisson.eval(phi, x).value;
        let g = self.green.eval(psi, x);
        p.iter().zip(&g).map(|(a, b)| a - b).collect()
    }
}

fn check_representation(phi: &BoundaryField, psi: &SourceField, x: &BallPoint) -> Result<()> {
    if x.dim() < 3 {
        return Err(HyperError::UnsupportedDimension { n: x.dim(), min: 3 });
    }
    check_dim(phi.dim(), x.dim())?;
    check_dim(psi.dim(), x.dim())?;
    psi.require_declared()
}

/// `u(x) = P_h[phi](x) - G_h[psi](x)`, the solution of `Delta_h u = psi`
/// with boundary values `phi`.
pub fn represent(phi: &BoundaryField, psi: &SourceField, x: &BallPoint, s: &QuadratureSettings) -> Result<Vec<f64>> {
    check_representation(phi, psi, x)?;
    s.check_point(x)?;
    Ok(FrozenRepresentation::for_region(x.coords(), x.norm(), s)?.eval(phi, psi, x.coords()))
}

/// `represent` over many points, evaluated in parallel; output order follows `points`.
pub fn represent_grid(
    phi: &BoundaryField,
    psi: &SourceField,
    points: &[BallPoint],
    s: &QuadratureSettings,
) -> Result<Vec<Vec<f64>>> {
    points.par_iter().map(|x| represent(phi, psi, x, s)).collect()
}

pub fn poisson_extension_grid(phi: &BoundaryField, points: &[BallPoint], s: &QuadratureSettings) -> Result<Vec<Extension>> {
    points.par_iter().map(|x| poisson_extension(phi, x, s)).collect()
}

pub fn green_potential_grid(psi: &SourceField, points: &[BallPoint], s: &QuadratureSettings) -> Result<Vec<Vec<f64>>> {
    points.par_iter().map(|x| green_potential(psi, x, s)).collect()
}

/// `u(0) - [int u(r xi) d sigma(xi) - int_{|x|<r} g(|x|, r) Delta_h u(x) d tau(x)]`.
pub fn mean_value_residual(
    u: impl Fn(&[f64]) -> Vec<f64>,
    delta_h_u: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
    r: f64,
    s: &QuadratureSettings,
) -> Result<Vec<f64>> {
    if !(r > 0.0 && r <= 1.0 - s.margin) {
        return Err(invalid(format!("mean-value radius {r} outside (0, 1 - margin]")));
    }
    let profile = GreenProfile::new(n)?;
    let sphere = sphere_rule(n, s.sphere_order)?;
    let u0 = u(&vec![0.0; n]);
    let m = u0.len();
    let mut mean = VecAccumulator::new(m);
    let mut p = vec![0.0; n];
    for (xi, w) in sphere.iter() {
        for (pi, &c) in p.iter_mut().zip(xi) {
            *pi = r * c;
        }
        mean.add_scaled(w, &u(&p));
    }
    let ball = BallRule::product(&gauss_legendre(s.radial_order)?, 0.0, r, sphere)?;
    let mut inner = VecAccumulator::new(m);
    let mut cached = (f64::NAN, 0.0);
    ball.for_each(|node| {
        if node.base_radius != cached.0 {
            cached = (node.base_radius, profile.g_unchecked(node.base_radius, r));
        }
        inner.add_scaled(cached.1 * node.weight_tau, &delta_h_u(node.point));
    });
    let (mean, inner) = (mean.values(), inner.values());
    Ok((0..m).map(|i| u0[i] - (mean[i] - inner[i])).collect())
}

/// `int G_h(x, y) d nu(x)`, computed as `G_h[(1-|.|^2)^n](y)`.
pub fn green_mass(y: &BallPoint, s: &QuadratureSettings) -> Result<f64> {
    let psi = decay_source(y.dim())?;
    Ok(green_potential(&psi, y, s)?[0])
}

/// `(1/(2n(n-1))) (1-|y|^2)^{n-1}`.
pub fn green_mass_exact(y: &BallPoint) -> f64 {
    let n = y.dim() as f64;
    (1.0 - y.norm_sq()).powi(y.dim() as i32 - 1) / (2.0 * n * (n - 1.0))
}

/// `|P_h[phi o phi_a](x) - P_h[phi](phi_a(x))|`.
pub fn invariance_check_poisson(
    phi: &BoundaryField,
    a: &BallPoint,
    x: &BallPoint,
    s: &QuadratureSettings,
) -> Result<f64> {
    check_dim(phi.dim(), x.dim())?;
    check_dim(a.dim(), x.dim())?;
    s.check_point(a)?;
    s.check_point(x)?;
    let inner = phi.clone();
    let centre = a.coords().to_vec();
    let composed = BoundaryField::new(phi.dim(), "composed", move |xi, out| {
        let mut t = vec![0.0; xi.len()];
        mobius_apply_raw(&centre, xi, &mut t);
        let r = norm_sq(&t).sqrt();
        t.iter_mut().for_each(|c| *c /= r);
        inner.eval_into(&t, out);
    });
    let rmax = x.norm().max(a.norm());
    let lhs = PoissonRule::for_region(x.coords(), rmax, s)?.eval(&composed, x.coords()).value;
    let mut image = vec![0.0; x.dim()];
    mobius_apply_raw(a.coords(), x.coords(), &mut image);
    let rhs = PoissonRule::for_point(&image, s)?.eval(phi, &image).value;
    Ok(dist_sq(&lhs, &rhs).sqrt())
}

/// Finite-difference `Delta_h P_h[phi](x)` with a rule frozen over the stencil.
pub fn poisson_laplacian(
    phi: &BoundaryField,
    x: &BallPoint,
    stencil: &HyperbolicLaplacianStencil,
    s: &QuadratureSettings,
) -> Result<Vec<f64>> {
    check_dim(phi.dim(), x.dim())?;
    let rule = PoissonRule::for_region(x.coords(), x.norm() + 2.0 * stencil.step(), s)?;
    hyperbolic_laplacian(|y| rule.eval(phi, y).value, x, stencil)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{boundary_field, linear_source, quadratic_source, source_field};
    use crate::quadrature::ball_rule;
    use approx::assert_relative_eq;

    fn p(c: &[f64]) -> BallPoint {
        BallPoint::new(c.to_vec()).unwrap()
    }

    fn light() -> QuadratureSettings {
        QuadratureSettings { sphere_order: 24, radial_order: 40, ..Default::default() }
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::default().validate().is_ok());
        assert!(QuadratureSettings { margin: 0.0, ..Default::default() }.validate().is_err());
        assert!(QuadratureSettings { sphere_order: 1, ..Default::default() }.validate().is_err());
        assert_eq!(QuadratureSettings::default().axial_points(0.9), 160);
        assert_eq!(QuadratureSettings::default().axial_points(0.0), 25);
    }

    #[test]
    fn constant_data_reproduces_constant() {
        let phi = boundary_field("constant:2.5", 3).unwrap();
        for c in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [0.0, 0.9, 0.0]] {
            let e = poisson_extension(&phi, &p(&c), &QuadratureSettings::default()).unwrap();
            for v in &e.value {
                assert_relative_eq!(*v, 2.5, epsilon = 1e-10);
            }
            assert!(e.est_error < 1e-9);
        }
    }

    #[test]
    fn odd_data_vanishes_at_origin() {
        let phi = boundary_field("identity", 4).unwrap();
        let v = poisson_extension(&phi, &BallPoint::origin(4), &light()).unwrap().value;
        assert!(v.iter().all(|c| c.abs() < 1e-14));
    }

    #[test]
    fn rejects_points_past_margin() {
        let phi = boundary_field("constant", 3).unwrap();
        let x = p(&[0.9995, 0.0, 0.0]);
        assert!(matches!(poisson_extension(&phi, &x, &light()), Err(HyperError::OutsideBall { .. })));
    }

    #[test]
    fn user_rule_matches_aligned_rule() {
        let phi = boundary_field("coordinate:1", 3).unwrap();
        let x = p(&[0.2, 0.1, 0.0]);
        let a = poisson_extension(&phi, &x, &light()).unwrap().value;
        let b = poisson_extension_with_rule(&phi, &x, &sphere_rule(3, 48).unwrap()).unwrap();
        for k in 0..3 {
            assert_relative_eq!(a[k], b[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn green_mass_at_origin() {
        for n in [3usize, 4] {
            let m = green_mass(&BallPoint::origin(n), &light()).unwrap();
            assert_relative_eq!(m, 1.0 / (2.0 * n as f64 * (n as f64 - 1.0)), max_relative = 1e-9);
        }
    }

    #[test]
    fn green_mass_off_centre() {
        let y = p(&[0.5, 0.0, 0.0]);
        assert_relative_eq!(green_mass(&y, &light()).unwrap(), 0.046875, max_relative = 1e-7);
    }

    #[test]
    fn green_with_ball_rule_agrees() {
        let psi = decay_source(3).unwrap();
        let rule = BallRule::product(&gauss_legendre(40).unwrap(), 0.0, 1.0, sphere_rule(3, 24).unwrap()).unwrap();
        let v = green_potential_with_rule(&psi, &BallPoint::origin(3), &rule).unwrap();
        assert_relative_eq!(v[0], 1.0 / 12.0, max_relative = 1e-9);
        assert!(green_potential_with_rule(&psi, &BallPoint::origin(3), &ball_rule(3, 8, 4, 1e-2).unwrap()).is_ok());
    }

    #[test]
    fn zero_source_and_undeclared_source() {
        let zero = source_field("zero", 3).unwrap();
        let x = p(&[0.1, 0.2, 0.3]);
        assert_eq!(green_potential(&zero, &x, &light()).unwrap(), vec![0.0; 3]);
        let raw = SourceField::new(3, "raw", |_, out| out.fill(1.0));
        assert!(matches!(green_potential(&raw, &x, &light()), Err(HyperError::UndeclaredDecay)));
    }

    #[test]
    fn manufactured_solutions() {
        let s = light();
        for n in [3usize, 4] {
            let mut c = vec![0.0; n];
            c[0] = 0.5;
            c[1] = -0.3;
            let x = p(&c);
            let u = represent(&boundary_field("coordinate:1", n).unwrap(), &linear_source(n).unwrap(), &x, &s).unwrap();
            assert_relative_eq!(u[0], 0.5, epsilon = 1e-8);
            assert!(u[1..].iter().all(|v| v.abs() < 1e-10));
            let u = represent(&boundary_field("unit:1", n).unwrap(), &quadratic_source(n).unwrap(), &x, &s).unwrap();
            assert_relative_eq!(u[0], x.norm_sq(), epsilon = 1e-8);
        }
    }

    #[test]
    fn mean_value_identity_for_squared_norm() {
        let n = 3;
        let psi = quadratic_source(n).unwrap();
        let res = mean_value_residual(
            |x| vec![norm_sq(x), 1.0],
            |x| vec![psi.eval(x)[0], 0.0],
            n,
            0.5,
            &light(),
        )
        .unwrap();
        assert!(res[0].abs() < 1e-10, "{}", res[0]);
        assert!(res[1].abs() < 1e-14);
    }

    #[test]
    fn poisson_invariance() {
        let phi = boundary_field("coordinate:1", 3).unwrap();
        let a = p(&[0.3, 0.1, -0.2]);
        let x = p(&[-0.1, 0.4, 0.2]);
        assert!(invariance_check_poisson(&phi, &a, &x, &light()).unwrap() < 1e-8);
        let c = boundary_field("constant:1", 3).unwrap();
        assert!(invariance_check_poisson(&c, &a, &x, &light()).unwrap() < 1e-12);
    }

    #[test]
    fn extension_is_hyperbolic_harmonic() {
        let phi = boundary_field("coordinate:1", 3).unwrap();
        let st = HyperbolicLaplacianStencil::new(1e-3).unwrap().with_richardson(true);
        let v = poisson_laplacian(&phi, &p(&[0.3, 0.2, -0.1]), &st, &light()).unwrap();
        assert!(v.iter().all(|c| c.abs() < 1e-6), "{v:?}");
    }
}
