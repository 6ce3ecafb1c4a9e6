use super::gauss::gauss_jacobi;
use super::sphere::{polar_points, sphere_rule};
use crate::error::{HyperError, Result};
use crate::geometry::{householder_to_axis, norm_sq};

/// Sphere rule written as `xi = H (u, sqrt(1-u^2) eta)`: Gauss–Jacobi in the
/// axial coordinate `u = <xi, axis>` times a rule on `S^{n-2}` for `eta`.
/// Nodes are generated on the fly, so very fine axial resolution stays cheap
/// in memory. Suited to integrands that peak around `axis`.
#[derive(Debug, Clone)]
pub struct AxialSphereRule {
    n: usize,
    axial: Vec<(f64, f64)>,
    sub_nodes: Vec<f64>,
    sub_weights: Vec<f64>,
    frame: Option<Vec<f64>>,
}

impl AxialSphereRule {
    /// `axial_points` Gauss–Jacobi nodes along `axis` (raised to the default
    /// for `order` if smaller) and `sphere_rule(n - 1, order)` transversally.
    /// A zero `axis` means `e_1`.
    pub fn new(n: usize, axis: &[f64], axial_points: usize, order: usize) -> Result<Self> {
        if n < 2 {
            return Err(HyperError::UnsupportedDimension { n, min: 2 });
        }
        if axis.len() != n {
            return Err(HyperError::DimensionMismatch { expected: n, got: axis.len() });
        }
        let m = axial_points.max(polar_points(order));
        let alpha = (n as f64 - 3.0) / 2.0;
        let rule = gauss_jacobi(m, alpha, alpha)?;
        let total: f64 = rule.weights.iter().sum();
        let axial = rule.nodes.iter().zip(&rule.weights).map(|(&u, &w)| (u, w / total)).collect();
        let (sub_nodes, sub_weights) = if n == 2 {
            (vec![1.0, -1.0], vec![0.5, 0.5])
        } else {
            let s = sphere_rule(n - 1, order)?;
            (s.nodes().flatten().copied().collect(), s.weights().to_vec())
        };
        let len = norm_sq(axis).sqrt();
        let frame = if len == 0.0 {
            None
        } else {
            let unit: Vec<f64> = axis.iter().map(|a| a / len).collect();
            Some(householder_to_axis(&unit))
        };
        Ok(Self { n, axial, sub_nodes, sub_weights, frame })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn axial_points(&self) -> usize {
        self.axial.len()
    }

    pub fn len(&self) -> usize {
        self.axial.len() * self.sub_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Calls `f(xi, weight)` for every node in a fixed order.
    pub fn for_each(&self, mut f: impl FnMut(&[f64], f64)) {
        let n = self.n;
        let mut v = vec![0.0; n];
        let mut xi = vec![0.0; n];
        for &(u, wu) in &self.axial {
            let s = ((1.0 - u) * (1.0 + u)).sqrt();
            for (eta, &we) in self.sub_nodes.chunks_exact(n - 1).zip(&self.sub_weights) {
                v[0] = u;
                for (vj, &e) in v[1..].iter_mut().zip(eta) {
                    *vj = s * e;
                }
                match &self.frame {
                    None => f(&v, wu * we),
                    Some(h) => {
                        for (i, out) in xi.iter_mut().enumerate() {
                            *out = h[i * n..(i + 1) * n].iter().zip(&v).map(|(a, b)| a * b).sum();
                        }
                        f(&xi, wu * we);
                    }
                }
            }
        }
    }
}
