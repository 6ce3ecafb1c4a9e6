//! Deterministic product quadrature on `S^{n-1}` (normalized surface measure
//! `sigma`) and on `B^n` (normalized volume `nu` and invariant measure
//! `tau = nu / (1-|x|^2)^n`).
//!
//! All reductions run sequentially in node order with compensated summation,
//! so results do not depend on how callers parallelize over evaluation points.

mod axial;
pub mod cache;
pub mod gauss;
mod ball;
mod sphere;

pub use axial::AxialSphereRule;
pub use ball::{ball_rule, integrate_nu, integrate_tau, mobius_pushforward_nodes, BallNode, BallRule};
pub use sphere::{integrate_sphere, integrate_sphere_scalar, sphere_rule, SphereRule};

/// Default sphere order.
pub const DEFAULT_SPHERE_ORDER: usize = 48;
/// Default number of radial Gauss–Legendre nodes.
pub const DEFAULT_RADIAL_ORDER: usize = 64;
/// Default gap between the outermost radial node range and the sphere.
pub const DEFAULT_BOUNDARY_MARGIN: f64 = 1e-3;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated accumulator for vector-valued integrands.
#[derive(Debug, Clone)]
pub struct VecAccumulator {
    parts: Vec<KahanSum>,
}

impl VecAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { parts: vec![KahanSum::default(); dim] }
    }

    #[inline]
    pub fn add_scaled(&mut self, w: f64, v: &[f64]) {
        for (p, &x) in self.parts.iter_mut().zip(v) {
            p.add(w * x);
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.parts.iter().map(KahanSum::value).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut k = KahanSum::default();
        k.add(1.0);
        for _ in 0..10 {
            k.add(1e-17);
        }
        k.add(-1.0);
        assert!((k.value() - 1e-16).abs() < 1e-30);
    }
}
