use std::f64::consts::PI;

use super::gauss::{gauss_jacobi, GaussRule};
use super::{KahanSum, VecAccumulator};
use crate::error::{invalid, HyperError, Result};
use crate::geometry::{householder_to_axis, norm_sq};
use crate::specialfn::sphere_area;

/// Node/weight set for the normalized surface measure on `S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    n: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss–Jacobi points used per polar angle for a given `order`.
pub(crate) fn polar_points(order: usize) -> usize {
    order / 2 + 1
}

/// Product rule of polynomial degree `order`: Gauss–Jacobi in `cos(theta_i)`
/// for each polar angle and a `2 * order` point trapezoid in the azimuth.
pub fn sphere_rule(n: usize, order: usize) -> Result<SphereRule> {
    if order < 2 {
        return Err(invalid(format!("sphere order must be >= 2 (got {order})")));
    }
    SphereRule::product(n, &vec![polar_points(order); n.saturating_sub(2)], 2 * order)
}

impl SphereRule {
    /// Product rule with `polar[i]` Gauss–Jacobi nodes on polar angle `i + 1` and
    /// `azimuth` equispaced nodes on the last angle.
    pub fn product(n: usize, polar: &[usize], azimuth: usize) -> Result<Self> {
        if n < 2 {
            return Err(HyperError::UnsupportedDimension { n, min: 2 });
        }
        if polar.len() != n - 2 {
            return Err(HyperError::DimensionMismatch { expected: n - 2, got: polar.len() });
        }
        if azimuth < 1 {
            return Err(invalid("azimuth needs at least one node"));
        }
        // sin^{n-1-i} theta_i d theta_i = (1-u^2)^{(n-2-i)/2} du
        let rules = polar
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let alpha = (n as f64 - 3.0 - i as f64) / 2.0;
                gauss_jacobi(m, alpha, alpha)
            })
            .collect::<Result<Vec<GaussRule>>>()?;
        let total: usize = polar.iter().product::<usize>() * azimuth;
        let mut nodes = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total);
        let az_weight = 2.0 * PI / azimuth as f64 / sphere_area(n);
        let mut prefix = vec![0.0; n];
        build(&rules, 0, 1.0, az_weight, azimuth, &mut prefix, &mut nodes, &mut weights);
        Ok(Self { n, nodes, weights })
    }

    /// Product rule whose first polar axis points along `axis`, with
    /// `axial_points` nodes on that angle and `order` resolution elsewhere.
    pub fn aligned(n: usize, axis: &[f64], axial_points: usize, order: usize) -> Result<Self> {
        if axis.len() != n {
            return Err(HyperError::DimensionMismatch { expected: n, got: axis.len() });
        }
        let norm = norm_sq(axis).sqrt();
        let base = if n == 2 {
            // on S^1 the single angle is the azimuth
            Self::product(2, &[], 2 * axial_points.max(order))?
        } else {
            let mut polar = vec![polar_points(order); n - 2];
            polar[0] = axial_points.max(polar[0]);
            Self::product(n, &polar, 2 * order)?
        };
        if norm == 0.0 {
            return Ok(base);
        }
        let unit: Vec<f64> = axis.iter().map(|a| a / norm).collect();
        Ok(base.transformed(&householder_to_axis(&unit)))
    }

    /// Builds a rule from explicit nodes, checking `|node| = 1` (1e-13),
    /// positive weights and unit total mass (1e-12).
    pub fn from_parts(n: usize, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() * n {
            return Err(HyperError::DimensionMismatch { expected: weights.len() * n, got: nodes.len() });
        }
        for node in nodes.chunks_exact(n) {
            let r = norm_sq(node).sqrt();
            if (r - 1.0).abs() > 1e-13 {
                return Err(HyperError::NotOnSphere { norm: r });
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(invalid("sphere weights must be positive"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("sphere weights sum to {total}, expected 1")));
        }
        Ok(Self { n, nodes, weights })
    }

    /// Applies the orthogonal map `m` (row-major) to every node.
    pub fn transformed(&self, m: &[f64]) -> Self {
        let n = self.n;
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for node in self.nodes.chunks_exact(n) {
            for i in 0..n {
                nodes.push((0..n).map(|j| m[i * n + j] * node[j]).sum());
            }
        }
        Self { n, nodes, weights: self.weights.clone() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.n..(i + 1) * self.n]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.n)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes.chunks_exact(self.n).zip(self.weights.iter().copied())
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    rules: &[GaussRule],
    level: usize,
    sin_prod: f64,
    weight: f64,
    azimuth: usize,
    prefix: &mut Vec<f64>,
    nodes: &mut Vec<f64>,
    weights: &mut Vec<f64>,
) {
    let n = prefix.len();
    if level == rules.len() {
        for j in 0..azimuth {
            let phi = 2.0 * PI * j as f64 / azimuth as f64;
            prefix[n - 2] = sin_prod * phi.cos();
            prefix[n - 1] = sin_prod * phi.sin();
            let r = norm_sq(prefix).sqrt();
            nodes.extend(prefix.iter().map(|c| c / r));
            weights.push(weight);
        }
        return;
    }
    let rule = &rules[level];
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        prefix[level] = sin_prod * u;
        let s = ((1.0 - u) * (1.0 + u)).sqrt();
        build(rules, level + 1, sin_prod * s, weight * w, azimuth, prefix, nodes, weights);
    }
}

/// `int f d sigma` for a vector-valued `f` writing `out_dim` components.
pub fn integrate_sphere(
    rule: &SphereRule,
    out_dim: usize,
    mut f: impl FnMut(&[f64], &mut [f64]),
) -> Vec<f64> {
    let mut acc = VecAccumulator::new(out_dim);
    let mut buf = vec![0.0; out_dim];
    for (node, w) in rule.iter() {
        f(node, &mut buf);
        acc.add_scaled(w, &buf);
    }
    acc.values()
}

/// `int f d sigma` for a scalar `f`.
pub fn integrate_sphere_scalar(rule: &SphereRule, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut acc = KahanSum::default();
    for (node, w) in rule.iter() {
        acc.add(w * f(node));
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mass_and_unit_nodes() {
        for n in 2..=5 {
            let r = sphere_rule(n, 8).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-12);
            assert!(r.nodes().all(|x| (norm_sq(x).sqrt() - 1.0).abs() < 1e-13));
            assert!(r.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn second_moments() {
        for n in 3..=5 {
            let r = sphere_rule(n, 6).unwrap();
            for k in 0..n {
                let m = integrate_sphere_scalar(&r, |x| x[k] * x[k]);
                assert_relative_eq!(m, 1.0 / n as f64, epsilon = 1e-13);
                let odd = integrate_sphere_scalar(&r, |x| x[k]);
                assert!(odd.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn vector_integrand_of_constant() {
        let r = sphere_rule(3, 4).unwrap();
        let v = integrate_sphere(&r, 2, |_, out| {
            out[0] = 2.5;
            out[1] = -1.0;
        });
        assert_relative_eq!(v[0], 2.5, epsilon = 1e-13);
        assert_relative_eq!(v[1], -1.0, epsilon = 1e-13);
    }

    #[test]
    fn aligned_rule_points_first_axis() {
        let axis = [0.0, 0.6, 0.8];
        let r = SphereRule::aligned(3, &axis, 12, 4).unwrap();
        // the axial Gauss node closest to +1 maps next to `axis`
        let best = r.nodes().map(|x| x[1] * 0.6 + x[2] * 0.8).fold(f64::MIN, f64::max);
        assert!(best > 0.98);
        let m = integrate_sphere_scalar(&r, |x| x[0] * x[0]);
        assert_relative_eq!(m, 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn from_parts_validates() {
        assert!(SphereRule::from_parts(2, vec![1.0, 0.0], vec![1.0]).is_ok());
        assert!(SphereRule::from_parts(2, vec![0.9, 0.0], vec![1.0]).is_err());
        assert!(SphereRule::from_parts(2, vec![1.0, 0.0, 0.0, 1.0], vec![0.5, 0.4]).is_err());
    }
}
