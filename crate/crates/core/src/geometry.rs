//! Möbius self-maps of the unit ball and the bracket `[x, y]`.
//!
//! Every public operation has a slice-level twin (`*_raw`) used by the
//! quadrature loops, which skip validation and allocation.

use crate::error::{HyperError, Result};

/// Points with `|x| <= 1 - BOUNDARY_MARGIN` count as interior.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// Slack allowed when checking that a point lies in the closed ball or on the sphere.
const CLOSURE_SLACK: f64 = 1e-14;

#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
pub fn norm_sq(x: &[f64]) -> f64 {
    dot(x, x)
}

#[inline]
pub fn dist_sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// A point of the closed unit ball with its Euclidean norm cached.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<f64>,
    norm: f64,
}

impl BallPoint {
    /// Builds a point of the closed ball. Fails if `|x| > 1`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(HyperError::InvalidParameter("empty coordinate vector".into()));
        }
        let norm = norm_sq(&coords).sqrt();
        if !norm.is_finite() || norm > 1.0 + CLOSURE_SLACK {
            return Err(HyperError::OutsideBall { norm });
        }
        Ok(Self { coords, norm })
    }

    /// Builds an interior point (`|x| <= 1 - BOUNDARY_MARGIN`).
    pub fn interior(coords: Vec<f64>) -> Result<Self> {
        let p = Self::new(coords)?;
        p.require_interior()?;
        Ok(p)
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![0.0; n], norm: 0.0 }
    }

    /// `r * e_k` (zero-based axis).
    pub fn on_axis(n: usize, axis: usize, r: f64) -> Result<Self> {
        let mut c = vec![0.0; n];
        c[axis] = r;
        Self::new(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm * self.norm
    }

    pub fn is_interior(&self) -> bool {
        self.norm <= 1.0 - BOUNDARY_MARGIN
    }

    pub fn require_interior(&self) -> Result<()> {
        if self.is_interior() {
            Ok(())
        } else {
            Err(HyperError::OutsideBall { norm: self.norm })
        }
    }

    /// `x' = x / |x|`, undefined at the origin.
    pub fn direction(&self) -> Option<Vec<f64>> {
        (self.norm > 0.0).then(|| self.coords.iter().map(|c| c / self.norm).collect())
    }
}

/// A point of the unit sphere `S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    /// Accepts coordinates with `| |t| - 1 | <= 1e-14`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = norm_sq(&coords).sqrt();
        if (norm - 1.0).abs() > CLOSURE_SLACK {
            return Err(HyperError::NotOnSphere { norm });
        }
        Ok(Self(coords))
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn from_direction(v: &[f64]) -> Result<Self> {
        let norm = norm_sq(v).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(HyperError::InvalidParameter("zero direction".into()));
        }
        Ok(Self(v.iter().map(|c| c / norm).collect()))
    }

    pub fn axis(n: usize, k: usize) -> Self {
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        Self(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

fn same_dim(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(HyperError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(())
}

fn require_pole(a: &BallPoint) -> Result<()> {
    if a.norm() < 1.0 {
        Ok(())
    } else {
        Err(HyperError::OutsideBall { norm: a.norm() })
    }
}

/// `[x,y]^2 = 1 + |x|^2|y|^2 - 2<x,y>`, clamped at zero.
#[inline]
pub fn bracket_sq_raw(x: &[f64], y: &[f64]) -> f64 {
    let v = 1.0 + norm_sq(x) * norm_sq(y) - 2.0 * dot(x, y);
    v.max(0.0)
}

/// The bracket `[x,y] = sqrt(1 + |x|^2|y|^2 - 2<x,y>)`, defined on the whole closed ball.
pub fn bracket(x: &BallPoint, y: &BallPoint) -> Result<f64> {
    same_dim(x.coords(), y.coords())?;
    Ok(bracket_sq_raw(x.coords(), y.coords()).sqrt())
}

/// Writes `phi_a(x)` into `out`. Returns exactly zero at `x = a`.
#[inline]
pub fn mobius_apply_raw(a: &[f64], x: &[f64], out: &mut [f64]) {
    if a == x {
        out.iter_mut().for_each(|o| *o = 0.0);
        return;
    }
    let d2 = dist_sq(x, a);
    let one_minus_a2 = 1.0 - norm_sq(a);
    let br2 = bracket_sq_raw(a, x);
    for ((o, &ai), &xi) in out.iter_mut().zip(a).zip(x) {
        *o = (d2 * ai - one_minus_a2 * (xi - ai)) / br2;
    }
}

/// The involutive Möbius self-map exchanging `a` and `0`.
pub fn mobius_apply(a: &BallPoint, x: &BallPoint) -> Result<BallPoint> {
    same_dim(a.coords(), x.coords())?;
    require_pole(a)?;
    let mut out = vec![0.0; a.dim()];
    mobius_apply_raw(a.coords(), x.coords(), &mut out);
    // the image of a closed-ball point is in the closed ball up to rounding
    let norm = norm_sq(&out).sqrt();
    if norm > 1.0 {
        out.iter_mut().for_each(|c| *c /= norm);
    }
    BallPoint::new(out)
}

/// `(1 - |x|^2)(1 - |a|^2) / [a,x]^2`, which equals `1 - |phi_a(x)|^2`.
pub fn mobius_conformal_factor(a: &BallPoint, x: &BallPoint) -> Result<f64> {
    same_dim(a.coords(), x.coords())?;
    require_pole(a)?;
    Ok(conformal_factor_raw(a.coords(), x.coords()))
}

#[inline]
pub fn conformal_factor_raw(a: &[f64], x: &[f64]) -> f64 {
    let br2 = bracket_sq_raw(a, x);
    (1.0 - norm_sq(x)) * (1.0 - norm_sq(a)) / br2
}

/// Jacobian determinant `(1-|a|^2)^n / [a,x]^{2n}` of `phi_a` at an interior `x`.
pub fn mobius_jacobian_det(a: &BallPoint, x: &BallPoint) -> Result<f64> {
    same_dim(a.coords(), x.coords())?;
    require_pole(a)?;
    x.require_interior()?;
    let n = a.dim() as i32;
    let br2 = bracket_sq_raw(a.coords(), x.coords());
    Ok(((1.0 - a.norm_sq()) / br2).powi(n))
}

/// Partial derivative `d/dx_k |phi_a(x)|` (zero-based `k`).
pub fn grad_abs_mobius(a: &BallPoint, x: &BallPoint, k: usize) -> Result<f64> {
    same_dim(a.coords(), x.coords())?;
    require_pole(a)?;
    x.require_interior()?;
    if k >= a.dim() {
        return Err(HyperError::InvalidParameter(format!("axis {k} out of range")));
    }
    if a.coords() == x.coords() {
        return Err(HyperError::Singular("|phi_a| is not differentiable at x = a"));
    }
    let (ac, xc) = (a.coords(), x.coords());
    let d2 = dist_sq(ac, xc);
    let br2 = bracket_sq_raw(ac, xc);
    let diff = xc[k] - ac[k];
    let num = br2 * diff - d2 * diff + d2 * (1.0 - a.norm_sq()) * xc[k];
    Ok(num / (d2.sqrt() * br2 * br2.sqrt()))
}

/// `|phi_a(b)| = |a - b| / [a,b]`, symmetric in its arguments.
#[inline]
pub fn pseudo_distance_raw(a: &[f64], b: &[f64]) -> f64 {
    let br2 = bracket_sq_raw(a, b);
    if br2 == 0.0 {
        return 1.0;
    }
    (dist_sq(a, b) / br2).sqrt().min(1.0)
}

/// Hyperbolic distance `log((1+s)/(1-s))` with `s = |phi_a(b)|`.
pub fn hyperbolic_distance(a: &BallPoint, b: &BallPoint) -> Result<f64> {
    same_dim(a.coords(), b.coords())?;
    a.require_interior()?;
    b.require_interior()?;
    let s = pseudo_distance_raw(a.coords(), b.coords());
    Ok(2.0 * s.atanh())
}

/// Closed forms `( |a - phi_a(x)|, [a, phi_a(x)] ) = ( (1-|a|^2)|x|/[a,x], (1-|a|^2)/[a,x] )`.
pub fn image_distance_identities(a: &BallPoint, x: &BallPoint) -> Result<(f64, f64)> {
    same_dim(a.coords(), x.coords())?;
    require_pole(a)?;
    let br = bracket_sq_raw(a.coords(), x.coords()).sqrt();
    let s = 1.0 - a.norm_sq();
    Ok((s * x.norm() / br, s / br))
}

/// `x -> A phi_a(x)` with `A` orthogonal.
#[derive(Debug, Clone)]
pub struct MobiusSelfMap {
    center: BallPoint,
    rotation: Option<Vec<f64>>,
}

impl MobiusSelfMap {
    pub fn canonical(center: BallPoint) -> Result<Self> {
        require_pole(&center)?;
        Ok(Self { center, rotation: None })
    }

    /// `rotation` is row-major `n x n` and must satisfy `A A^T = I` within 1e-12 entrywise.
    pub fn with_rotation(center: BallPoint, rotation: Vec<f64>) -> Result<Self> {
        require_pole(&center)?;
        let n = center.dim();
        if rotation.len() != n * n {
            return Err(HyperError::DimensionMismatch { expected: n * n, got: rotation.len() });
        }
        for i in 0..n {
            for j in 0..n {
                let v = dot(&rotation[i * n..(i + 1) * n], &rotation[j * n..(j + 1) * n]);
                let target = if i == j { 1.0 } else { 0.0 };
                if (v - target).abs() > 1e-12 {
                    return Err(HyperError::InvalidParameter("rotation is not orthogonal".into()));
                }
            }
        }
        Ok(Self { center, rotation: Some(rotation) })
    }

    pub fn center(&self) -> &BallPoint {
        &self.center
    }

    pub fn rotation(&self) -> Option<&[f64]> {
        self.rotation.as_deref()
    }

    pub fn apply(&self, x: &BallPoint) -> Result<BallPoint> {
        let y = mobius_apply(&self.center, x)?;
        match &self.rotation {
            None => Ok(y),
            Some(r) => {
                let n = y.dim();
                let out = (0..n).map(|i| dot(&r[i * n..(i + 1) * n], y.coords())).collect();
                BallPoint::new(out)
            }
        }
    }
}

/// Householder reflection (row-major) sending `e_1` to the unit vector `axis`.
pub fn householder_to_axis(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    let mut v: Vec<f64> = axis.iter().map(|a| -a).collect();
    v[0] += 1.0;
    let vv = norm_sq(&v);
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    if vv < 1e-30 {
        return h;
    }
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] -= 2.0 * v[i] * v[j] / vv;
        }
    }
    h
}
