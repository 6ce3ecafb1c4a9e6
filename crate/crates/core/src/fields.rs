//! Boundary data `phi: S^{n-1} -> R^n` and sources `psi: B^n -> R^n`, with
//! the built-in registry used by the CLI.
//!
//! Boundary specs: `constant[:C]`, `unit[:K]`, `coordinate[:K]`, `identity`,
//! `cusp`, `fourier:A1,A2,...` (n = 2 only). Source specs: `zero`, `linear`,
//! `quadratic`, `decay`. Axes `K` are 1-based.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{invalid, HyperError, Result};
use crate::geometry::{dist_sq, norm_sq};
use crate::sampling;

type FieldFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// Modulus of continuity `omega`: increasing, `omega(0) = 0`, `omega(t)/t`
/// non-increasing.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Majorant {
    /// `omega(t) = L t`.
    Lipschitz { l: f64 },
    /// `omega(t) = c t^alpha`, `0 < alpha <= 1`.
    Holder { c: f64, alpha: f64 },
}

impl Majorant {
    pub fn lipschitz(l: f64) -> Result<Self> {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(invalid(format!("Lipschitz constant must be finite and >= 0 (got {l})")));
        }
        Ok(Self::Lipschitz { l })
    }

    pub fn holder(c: f64, alpha: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) || !(alpha > 0.0 && alpha <= 1.0) {
            return Err(invalid(format!("Hölder majorant needs c >= 0, alpha in (0, 1] (got {c}, {alpha})")));
        }
        Ok(Self::Holder { c, alpha })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Lipschitz { l } => l * t,
            Self::Holder { c, alpha } => c * t.powf(alpha),
        }
    }

    /// `omega(t) / t`.
    pub fn slope(&self, t: f64) -> f64 {
        match *self {
            Self::Lipschitz { l } => l,
            Self::Holder { c, alpha } => c * t.powf(alpha - 1.0),
        }
    }
}

/// Continuous boundary data with an optional declared majorant.
#[derive(Clone)]
pub struct BoundaryField {
    n: usize,
    name: String,
    eval: FieldFn,
    majorant: Option<Majorant>,
    sup_norm: Option<f64>,
}

impl fmt::Debug for BoundaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryField")
            .field("n", &self.n)
            .field("name", &self.name)
            .field("majorant", &self.majorant)
            .finish()
    }
}

impl BoundaryField {
    pub fn new(n: usize, name: impl Into<String>, f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static) -> Self {
        Self { n, name: name.into(), eval: Arc::new(f), majorant: None, sup_norm: None }
    }

    pub fn with_majorant(mut self, m: Majorant) -> Self {
        self.majorant = Some(m);
        self
    }

    pub fn with_lipschitz(self, l: f64) -> Result<Self> {
        Ok(self.with_majorant(Majorant::lipschitz(l)?))
    }

    pub fn with_sup_norm(mut self, s: f64) -> Self {
        self.sup_norm = Some(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn majorant(&self) -> Option<Majorant> {
        self.majorant
    }

    pub fn lipschitz(&self) -> Option<f64> {
        match self.majorant {
            Some(Majorant::Lipschitz { l }) => Some(l),
            _ => None,
        }
    }

    pub fn sup_norm(&self) -> Option<f64> {
        self.sup_norm
    }

    #[inline]
    pub fn eval_into(&self, xi: &[f64], out: &mut [f64]) {
        (self.eval)(xi, out)
    }

    pub fn eval(&self, xi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.eval_into(xi, &mut out);
        out
    }

    /// Largest `|phi(xi) - phi(eta)| / omega(|xi - eta|)` over `pairs` random
    /// pairs; `None` without a declared majorant.
    pub fn sampled_majorant_ratio(&self, pairs: usize, seed: u64) -> Option<f64> {
        let m = self.majorant?;
        let mut rng = sampling::rng(seed);
        let mut worst: f64 = 0.0;
        for i in 0..pairs {
            let xi = sampling::on_sphere(&mut rng, self.n);
            // alternate global pairs with nearby ones
            let eta = if i % 2 == 0 {
                sampling::on_sphere(&mut rng, self.n)
            } else {
                let scale = 10f64.powf(-rng.gen_range(1.0..4.0));
                let v: Vec<f64> = xi.iter().zip(sampling::on_sphere(&mut rng, self.n)).map(|(a, b)| a + scale * b).collect();
                let r = norm_sq(&v).sqrt();
                v.into_iter().map(|c| c / r).collect()
            };
            let d = dist_sq(&xi, &eta).sqrt();
            if d == 0.0 {
                continue;
            }
            let bound = m.eval(d);
            let diff = dist_sq(&self.eval(&xi), &self.eval(&eta)).sqrt();
            if bound > 0.0 {
                worst = worst.max(diff / bound);
            } else if diff > 0.0 {
                return Some(f64::INFINITY);
            }
        }
        Some(worst)
    }
}

/// Source term with an optional decay class `|psi(x)| <= M (1-|x|^2)`.
#[derive(Clone)]
pub struct SourceField {
    n: usize,
    name: String,
    eval: FieldFn,
    decay_m: Option<f64>,
    mu1: Option<f64>,
}

impl fmt::Debug for SourceField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SourceField")
            .field("n", &self.n)
            .field("name", &self.name)
            .field("decay_m", &self.decay_m)
            .field("mu1", &self.mu1)
            .finish()
    }
}

impl SourceField {
    pub fn new(n: usize, name: impl Into<String>, f: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static) -> Self {
        Self { n, name: name.into(), eval: Arc::new(f), decay_m: None, mu1: None }
    }

    /// Declares `|psi(x)| <= M (1-|x|^2)`, which also gives the integrability
    /// budget `mu1 = M`.
    pub fn with_decay(mut self, m: f64) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(invalid(format!("decay constant must be finite and >= 0 (got {m})")));
        }
        self.decay_m = Some(m);
        if self.mu1.is_none() {
            self.mu1 = Some(m);
        }
        Ok(self)
    }

    pub fn with_mu1(mut self, mu1: f64) -> Result<Self> {
        if !(mu1 >= 0.0 && mu1.is_finite()) {
            return Err(invalid(format!("mu1 must be finite and >= 0 (got {mu1})")));
        }
        self.mu1 = Some(mu1);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay_m(&self) -> Option<f64> {
        self.decay_m
    }

    pub fn mu1(&self) -> Option<f64> {
        self.mu1
    }

    /// Fails with `UndeclaredDecay` unless a decay class or `mu1` is set.
    pub fn require_declared(&self) -> Result<()> {
        if self.decay_m.is_none() && self.mu1.is_none() {
            return Err(HyperError::UndeclaredDecay);
        }
        Ok(())
    }

    #[inline]
    pub fn eval_into(&self, y: &[f64], out: &mut [f64]) {
        (self.eval)(y, out)
    }

    pub fn eval(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.eval_into(y, &mut out);
        out
    }

    /// Largest `|psi(x)| / (M (1-|x|^2))` over random interior samples.
    pub fn sampled_decay_ratio(&self, samples: usize, seed: u64) -> Option<f64> {
        let m = self.decay_m?;
        let mut rng = sampling::rng(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let r = rng.gen_range(0.0..0.999);
            let y = sampling::on_shell(&mut rng, self.n, r);
            let v = norm_sq(&self.eval(&y)).sqrt();
            let bound = m * (1.0 - r * r);
            if bound > 0.0 {
                worst = worst.max(v / bound);
            } else if v > 0.0 {
                return Some(f64::INFINITY);
            }
        }
        Some(worst)
    }
}

fn axis_arg(arg: Option<&str>, n: usize, spec: &str) -> Result<usize> {
    let k: usize = match arg {
        None => 1,
        Some(s) => s.parse().map_err(|_| HyperError::UnknownField(spec.to_string()))?,
    };
    if k == 0 || k > n {
        return Err(HyperError::UnknownField(spec.to_string()));
    }
    Ok(k - 1)
}

fn number_arg(arg: Option<&str>, default: f64, spec: &str) -> Result<f64> {
    match arg {
        None => Ok(default),
        Some(s) => s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| HyperError::UnknownField(spec.to_string())),
    }
}

/// Parses a built-in boundary field for dimension `n`.
pub fn boundary_field(spec: &str, n: usize) -> Result<BoundaryField> {
    if n < 2 {
        return Err(HyperError::UnsupportedDimension { n, min: 2 });
    }
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (spec, None),
    };
    let field = match head {
        "constant" => {
            let c = number_arg(arg, 1.0, spec)?;
            BoundaryField::new(n, spec, move |_, out| out.fill(c))
                .with_lipschitz(0.0)?
                .with_sup_norm(c.abs() * (n as f64).sqrt())
        }
        "unit" => {
            let k = axis_arg(arg, n, spec)?;
            BoundaryField::new(n, spec, move |_, out| {
                out.fill(0.0);
                out[k] = 1.0;
            })
            .with_lipschitz(0.0)?
            .with_sup_norm(1.0)
        }
        "coordinate" => {
            let k = axis_arg(arg, n, spec)?;
            BoundaryField::new(n, spec, move |xi, out| {
                out.fill(0.0);
                out[k] = xi[k];
            })
            .with_lipschitz(1.0)?
            .with_sup_norm(1.0)
        }
        "identity" if arg.is_none() => {
            BoundaryField::new(n, spec, |xi, out| out.copy_from_slice(xi)).with_lipschitz(1.0)?.with_sup_norm(1.0)
        }
        "cusp" if arg.is_none() => BoundaryField::new(n, spec, |xi, out| {
            out.fill(0.0);
            let d: f64 = xi.iter().enumerate().map(|(i, &c)| if i == 0 { (c - 1.0) * (c - 1.0) } else { c * c }).sum();
            out[0] = d.sqrt();
        })
        .with_lipschitz(1.0)?
        .with_sup_norm(2.0),
        "fourier" => {
            if n != 2 {
                return Err(invalid(format!("fourier boundary data is only defined for n = 2 (got n = {n})")));
            }
            let coeffs: Vec<f64> = arg
                .ok_or_else(|| HyperError::UnknownField(spec.to_string()))?
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| HyperError::UnknownField(spec.to_string())))
                .collect::<Result<_>>()?;
            let lip: f64 = coeffs.iter().enumerate().map(|(k, a)| (k + 1) as f64 * a.abs()).sum();
            let sup: f64 = coeffs.iter().map(|a| a.abs()).sum();
            BoundaryField::new(n, spec, move |xi, out| {
                let theta = xi[1].atan2(xi[0]);
                out.fill(0.0);
                out[0] = coeffs.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * theta).cos()).sum();
            })
            .with_lipschitz(lip)?
            .with_sup_norm(sup)
        }
        _ => return Err(HyperError::UnknownField(spec.to_string())),
    };
    Ok(field)
}

/// `psi*(y) = 2(n-2)(1-|y|^2) y_1 e_1`, the hyperbolic Laplacian of `x_1 e_1`.
pub fn linear_source(n: usize) -> Result<SourceField> {
    let c = 2.0 * (n as f64 - 2.0);
    SourceField::new(n, "linear", move |y, out| {
        out.fill(0.0);
        out[0] = c * (1.0 - norm_sq(y)) * y[0];
    })
    .with_decay(c)
}

/// `psi**(y) = (2n(1-|y|^2)^2 + 4(n-2)(1-|y|^2)|y|^2) e_1`, the hyperbolic
/// Laplacian of `|x|^2 e_1`.
pub fn quadratic_source(n: usize) -> Result<SourceField> {
    let nf = n as f64;
    SourceField::new(n, "quadratic", move |y, out| {
        let s = norm_sq(y);
        let a = 1.0 - s;
        out.fill(0.0);
        out[0] = 2.0 * nf * a * a + 4.0 * (nf - 2.0) * a * s;
    })
    .with_decay((2.0 * nf).max(4.0 * nf - 8.0))
}

/// `(1-|y|^2)^n e_1`.
pub fn decay_source(n: usize) -> Result<SourceField> {
    SourceField::new(n, "decay", move |y, out| {
        out.fill(0.0);
        out[0] = (1.0 - norm_sq(y)).powi(n as i32);
    })
    .with_decay(1.0)
}

/// Parses a built-in source field for dimension `n`.
pub fn source_field(spec: &str, n: usize) -> Result<SourceField> {
    if n < 2 {
        return Err(HyperError::UnsupportedDimension { n, min: 2 });
    }
    match spec {
        "zero" => SourceField::new(n, "zero", |_, out| out.fill(0.0)).with_decay(0.0),
        "linear" => linear_source(n),
        "quadratic" => quadratic_source(n),
        "decay" => decay_source(n),
        _ => Err(HyperError::UnknownField(spec.to_string())),
    }
}
