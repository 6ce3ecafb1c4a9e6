use super::gauss::{gauss_legendre, GaussRule};
use super::sphere::{sphere_rule, SphereRule};
use super::{KahanSum, VecAccumulator};
use crate::error::{invalid, HyperError, Result};
use crate::geometry::{mobius_apply_raw, norm_sq, BallPoint, BOUNDARY_MARGIN};

#[derive(Debug, Clone)]
enum Layout {
    /// Radial nodes `(rho, n rho^{n-1} w)` times a sphere rule.
    Product { radial: Vec<(f64, f64)>, sphere: SphereRule },
    /// Explicit nodes with their `nu` weights.
    Explicit { nodes: Vec<f64>, weights_nu: Vec<f64> },
}

/// Quadrature for `nu` on `B^n`, optionally pushed forward through a chain
/// of Möbius maps (which preserves the `tau` weights).
#[derive(Debug, Clone)]
pub struct BallRule {
    n: usize,
    layout: Layout,
    pushforward: Vec<Vec<f64>>,
    mass_deficit: f64,
}

/// One quadrature node as seen by an integrand.
#[derive(Debug, Clone, Copy)]
pub struct BallNode<'a> {
    /// Node after all pushforwards.
    pub point: &'a [f64],
    /// Node before any pushforward.
    pub base: &'a [f64],
    pub base_radius: f64,
    pub weight_nu: f64,
    pub weight_tau: f64,
}

/// Gauss–Legendre in `rho` on `[0, 1 - margin]` with weight `n rho^{n-1}`,
/// tensored with `sphere_rule(n, sphere_order)`.
pub fn ball_rule(n: usize, radial_order: usize, sphere_order: usize, margin: f64) -> Result<BallRule> {
    if radial_order < 2 {
        return Err(invalid(format!("radial order must be >= 2 (got {radial_order})")));
    }
    if !(margin > 0.0 && margin < 0.5) {
        return Err(invalid(format!("boundary margin must lie in (0, 0.5) (got {margin})")));
    }
    let sphere = sphere_rule(n, sphere_order)?;
    BallRule::product(&gauss_legendre(radial_order)?, 0.0, 1.0 - margin, sphere)
}

fn one_minus_sq(r: f64) -> f64 {
    (1.0 - r) * (1.0 + r)
}

impl BallRule {
    /// Tensor of `radial` mapped onto `[lo, hi]` with `sphere`.
    pub fn product(radial: &GaussRule, lo: f64, hi: f64, sphere: SphereRule) -> Result<Self> {
        let n = sphere.dim();
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(invalid(format!("radial range [{lo}, {hi}] not inside [0, 1]")));
        }
        let radial: Vec<(f64, f64)> = radial
            .mapped(lo, hi)
            .map(|(r, w)| (r, n as f64 * r.powi(n as i32 - 1) * w))
            .collect();
        if let Some(&(r, _)) = radial.iter().find(|(r, _)| *r > 1.0 - BOUNDARY_MARGIN) {
            return Err(HyperError::OutsideBall { norm: r });
        }
        let mass_deficit = 1.0 - hi.powi(n as i32) + lo.powi(n as i32);
        Ok(Self { n, layout: Layout::Product { radial, sphere }, pushforward: Vec::new(), mass_deficit })
    }

    /// Explicit rule; nodes must be interior and weights positive.
    pub fn from_parts(n: usize, nodes: Vec<f64>, weights_nu: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights_nu.len() * n {
            return Err(HyperError::DimensionMismatch { expected: weights_nu.len() * n, got: nodes.len() });
        }
        for node in nodes.chunks_exact(n) {
            let r = norm_sq(node).sqrt();
            if r > 1.0 - BOUNDARY_MARGIN {
                return Err(HyperError::OutsideBall { norm: r });
            }
        }
        if weights_nu.iter().any(|&w| !(w > 0.0)) {
            return Err(invalid("ball weights must be positive"));
        }
        let mass_deficit = 1.0 - weights_nu.iter().sum::<f64>();
        Ok(Self { n, layout: Layout::Explicit { nodes, weights_nu }, pushforward: Vec::new(), mass_deficit })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            Layout::Product { radial, sphere } => radial.len() * sphere.len(),
            Layout::Explicit { weights_nu, .. } => weights_nu.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `nu(B^n)` minus the mass covered by the radial range (exact, not quadrature).
    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }

    pub fn is_pushed_forward(&self) -> bool {
        !self.pushforward.is_empty()
    }

    /// Largest node norm after pushforward.
    pub fn max_node_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        self.for_each(|node| m = m.max(norm_sq(node.point).sqrt()));
        m
    }

    /// Visits every node in a fixed order.
    pub fn for_each(&self, mut f: impl FnMut(BallNode<'_>)) {
        let n = self.n;
        let mut base = vec![0.0; n];
        let mut mapped = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        let mut visit = |base: &[f64], rho: f64, w_nu: f64, f: &mut dyn FnMut(BallNode<'_>)| {
            let w_tau = w_nu / one_minus_sq(rho).powi(n as i32);
            if self.pushforward.is_empty() {
                f(BallNode { point: base, base, base_radius: rho, weight_nu: w_nu, weight_tau: w_tau });
                return;
            }
            mapped.copy_from_slice(base);
            for center in &self.pushforward {
                mobius_apply_raw(center, &mapped, &mut tmp);
                mapped.copy_from_slice(&tmp);
            }
            let w_nu_mapped = w_tau * one_minus_sq(norm_sq(&mapped).sqrt()).powi(n as i32);
            f(BallNode { point: &mapped, base, base_radius: rho, weight_nu: w_nu_mapped, weight_tau: w_tau });
        };
        match &self.layout {
            Layout::Product { radial, sphere } => {
                for &(rho, wr) in radial {
                    for (xi, ws) in sphere.iter() {
                        for (b, &c) in base.iter_mut().zip(xi) {
                            *b = rho * c;
                        }
                        visit(&base, rho, wr * ws, &mut f);
                    }
                }
            }
            Layout::Explicit { nodes, weights_nu } => {
                for (node, &w) in nodes.chunks_exact(n).zip(weights_nu) {
                    visit(node, norm_sq(node).sqrt(), w, &mut f);
                }
            }
        }
    }

    /// Explicit `(node, weight_nu)` rows after pushforward.
    pub fn rows(&self) -> (Vec<f64>, Vec<f64>) {
        let mut nodes = Vec::with_capacity(self.len() * self.n);
        let mut weights = Vec::with_capacity(self.len());
        self.for_each(|node| {
            nodes.extend_from_slice(node.point);
            weights.push(node.weight_nu);
        });
        (nodes, weights)
    }

    /// Sum of the `nu` weights.
    pub fn total_nu(&self) -> f64 {
        let mut acc = KahanSum::default();
        self.for_each(|node| acc.add(node.weight_nu));
        acc.value()
    }
}

/// `int f d tau`, summing `f(node) * weight_tau`.
pub fn integrate_tau(rule: &BallRule, out_dim: usize, mut f: impl FnMut(&[f64], &mut [f64])) -> Vec<f64> {
    let mut acc = VecAccumulator::new(out_dim);
    let mut buf = vec![0.0; out_dim];
    rule.for_each(|node| {
        f(node.point, &mut buf);
        acc.add_scaled(node.weight_tau, &buf);
    });
    acc.values()
}

/// `int f d nu`.
pub fn integrate_nu(rule: &BallRule, out_dim: usize, mut f: impl FnMut(&[f64], &mut [f64])) -> Vec<f64> {
    let mut acc = VecAccumulator::new(out_dim);
    let mut buf = vec![0.0; out_dim];
    rule.for_each(|node| {
        f(node.point, &mut buf);
        acc.add_scaled(node.weight_nu, &buf);
    });
    acc.values()
}

/// Maps every node through `phi_x`, keeping the `tau` weights.
pub fn mobius_pushforward_nodes(rule: &BallRule, x: &BallPoint) -> Result<BallRule> {
    if x.dim() != rule.n {
        return Err(HyperError::DimensionMismatch { expected: rule.n, got: x.dim() });
    }
    x.require_interior()?;
    let mut out = rule.clone();
    out.pushforward.push(x.coords().to_vec());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mass_with_margin() {
        let margin = 1e-3;
        let r = ball_rule(3, 16, 6, margin).unwrap();
        assert_relative_eq!(r.total_nu() + r.mass_deficit(), 1.0, epsilon = 1e-12);
        assert!(r.mass_deficit() <= 3.0 * margin);
        assert!(r.max_node_norm() <= 1.0 - margin);
    }

    #[test]
    fn second_radial_moment() {
        for n in 3..=5usize {
            let r = BallRule::product(&gauss_legendre(12).unwrap(), 0.0, 1.0, sphere_rule(n, 4).unwrap())
                .unwrap();
            let m = integrate_nu(&r, 1, |x, out| out[0] = norm_sq(x))[0];
            assert_relative_eq!(m, n as f64 / (n as f64 + 2.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn tau_of_decaying_functions() {
        let n = 4usize;
        let r = BallRule::product(&gauss_legendre(20).unwrap(), 0.0, 1.0, sphere_rule(n, 4).unwrap()).unwrap();
        let one = integrate_tau(&r, 1, |x, out| out[0] = (1.0 - norm_sq(x)).powi(n as i32))[0];
        assert_relative_eq!(one, 1.0, epsilon = 1e-12);
        let two = integrate_tau(&r, 1, |x, out| out[0] = (1.0 - norm_sq(x)).powi(n as i32 + 1))[0];
        assert_relative_eq!(two, 2.0 / (n as f64 + 2.0), epsilon = 1e-12);
    }

    #[test]
    fn divergent_tau_integral_grows_like_log_margin() {
        // int (1-|x|^2)^{-1} d nu over |x| <= 1 - m behaves like (n/2) log(1/m)
        let n = 3usize;
        let vals: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&m| {
                let r = ball_rule(n, 200, 4, m).unwrap();
                integrate_nu(&r, 1, |x, out| out[0] = 1.0 / (1.0 - norm_sq(x)))[0]
            })
            .collect();
        let slope = (vals[2] - vals[1]) / 10f64.ln();
        assert_relative_eq!(slope, n as f64 / 2.0, max_relative = 1e-2);
        assert!(vals[0] < vals[1] && vals[1] < vals[2]);
    }

    #[test]
    fn pushforward_at_origin_is_reflection() {
        let r = ball_rule(3, 6, 4, 1e-3).unwrap();
        let p = mobius_pushforward_nodes(&r, &BallPoint::origin(3)).unwrap();
        let (a, _) = r.rows();
        let (b, _) = p.rows();
        for (u, v) in a.iter().zip(&b) {
            assert_relative_eq!(*u, -*v, epsilon = 1e-15);
        }
    }

    #[test]
    fn pushforward_rejects_boundary_and_stays_inside() {
        let r = ball_rule(3, 8, 6, 1e-3).unwrap();
        let edge = BallPoint::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(mobius_pushforward_nodes(&r, &edge).is_err());
        let x = BallPoint::new(vec![0.6, -0.3, 0.2]).unwrap();
        let p = mobius_pushforward_nodes(&r, &x).unwrap();
        assert!(p.max_node_norm() < 1.0);
    }

    #[test]
    fn product_rejects_bad_range() {
        let g = gauss_legendre(4).unwrap();
        assert!(BallRule::product(&g, 0.5, 0.2, sphere_rule(3, 4).unwrap()).is_err());
        assert!(ball_rule(3, 4, 4, 0.0).is_err());
    }
}
