//! Seeded random points on the sphere and in the ball.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::norm_sq;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on `S^{n-1}`.
pub fn on_sphere<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm_sq(&v).sqrt();
        if r > 1e-8 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

/// `r * xi` with `xi` uniform on the sphere.
pub fn on_shell<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<f64> {
    on_sphere(rng, n).into_iter().map(|c| c * r).collect()
}

/// Point uniform with respect to `nu` in the ball of radius `rmax`.
pub fn in_ball<R: Rng>(rng: &mut R, n: usize, rmax: f64) -> Vec<f64> {
    let u: f64 = rng.gen();
    on_shell(rng, n, rmax * u.powf(1.0 / n as f64))
}

/// Random orthogonal matrix (row-major) from Gram–Schmidt on Gaussian columns.
pub fn rotation<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for r in &rows {
                let d: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= d * ri;
                }
            }
        }
        let len = norm_sq(&v).sqrt();
        if len > 1e-6 {
            rows.push(v.into_iter().map(|c| c / len).collect());
        }
    }
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_land_where_expected() {
        let mut g = rng(7);
        for _ in 0..100 {
            assert!((norm_sq(&on_sphere(&mut g, 4)).sqrt() - 1.0).abs() < 1e-14);
            assert!(norm_sq(&in_ball(&mut g, 3, 0.5)).sqrt() <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        let mut g = rng(1);
        let n = 5;
        let m = rotation(&mut g, n);
        for i in 0..n {
            for j in 0..n {
                let d: f64 = (0..n).map(|k| m[i * n + k] * m[j * n + k]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((d - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        assert_eq!(on_sphere(&mut rng(3), 3), on_sphere(&mut rng(3), 3));
    }
}
