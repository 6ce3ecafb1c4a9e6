use serde::Serialize;

use crate::error::{HyperError, Result};
use crate::fd;

/// A square matrix (row-major), typically a sampled Jacobian `Du(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixFrame {
    n: usize,
    entries: Vec<f64>,
}

impl MatrixFrame {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(HyperError::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks_exact(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &MatrixFrame) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `A A^T`.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.n;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = (0..n).map(|k| self.get(i, k) * self.get(j, k)).sum();
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        g
    }

    /// Singular values in ascending order.
    pub fn singular_values(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.gram(), self.n).into_iter().map(|l| l.max(0.0).sqrt()).collect()
    }

    /// `J = det A`.
    pub fn determinant(&self) -> f64 {
        fd::determinant(&self.entries, self.n)
    }
}

/// Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let scale: f64 = m.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i * n + j].powi(2)).sum();
        if off.sqrt() <= 1e-15 * scale || scale == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `(||A||, l(A))`: the largest and smallest singular values.
pub fn matrix_norm_and_l(a: &MatrixFrame) -> (f64, f64) {
    let s = a.singular_values();
    match (s.last(), s.first()) {
        (Some(&hi), Some(&lo)) => (hi, lo),
        _ => (0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn simple_cases() {
        assert_eq!(matrix_norm_and_l(&MatrixFrame::identity(4)), (1.0, 1.0));
        let (hi, lo) = matrix_norm_and_l(&MatrixFrame::diagonal(&[3.0, 2.0, 1.0]));
        assert_relative_eq!(hi, 3.0, epsilon = 1e-14);
        assert_relative_eq!(lo, 1.0, epsilon = 1e-14);
        assert_eq!(matrix_norm_and_l(&MatrixFrame::zeros(3)), (0.0, 0.0));
        assert!(MatrixFrame::new(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn rank_one_has_zero_lower_bound() {
        let mut m = MatrixFrame::zeros(3);
        m.entries[0] = 1.0;
        let (hi, lo) = matrix_norm_and_l(&m);
        assert_relative_eq!(hi, 1.0, epsilon = 1e-15);
        assert!(lo.abs() < 1e-15);
    }

    /// Power iteration on `A A^T` as an independent oracle for `||A||`.
    fn power_norm(a: &MatrixFrame) -> f64 {
        let n = a.dim();
        let g = a.gram();
        let mut v = vec![1.0; n];
        let mut lambda = 0.0;
        for _ in 0..5000 {
            let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[i * n + j] * v[j]).sum()).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            lambda = norm;
            v = w.into_iter().map(|x| x / norm).collect();
        }
        lambda.sqrt()
    }

    #[test]
    fn matches_power_iteration() {
        let mut rng = sampling::rng(9);
        for n in 2..=5 {
            let a = MatrixFrame::new(n, (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let (hi, lo) = matrix_norm_and_l(&a);
            assert_relative_eq!(hi, power_norm(&a), max_relative = 1e-8);
            // product of singular values equals |det A|
            let prod: f64 = a.singular_values().iter().product();
            assert_relative_eq!(prod, a.determinant().abs(), max_relative = 1e-9);
            assert!(hi >= lo && lo >= 0.0);
        }
    }
}
