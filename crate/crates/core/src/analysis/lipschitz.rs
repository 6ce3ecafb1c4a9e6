use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::alpha0;
use super::matrix::{matrix_norm_and_l, MatrixFrame};
use crate::error::{invalid, Result};
use crate::fd;
use crate::fields::{BoundaryField, SourceField};
use crate::geometry::{dist_sq, norm_sq};
use crate::potentials::{FrozenRepresentation, PoissonRule, QuadratureSettings};
use crate::sampling;

/// Separation between the two points of a sampled pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gap {
    /// Second point uniform in the ball of radius `max(shells)`.
    Global,
    /// Second point at exactly this distance.
    Local(f64),
}

impl Gap {
    fn label(&self) -> String {
        match self {
            Gap::Global => "global".to_string(),
            Gap::Local(d) => format!("{d:e}"),
        }
    }
}

/// Pair sampling plan: `pairs` pairs spread round-robin over the strata
/// `shells x gaps`; the first point of each pair lies on its shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub pairs: usize,
    pub shells: Vec<f64>,
    pub gaps: Vec<Gap>,
    pub seed: u64,
}

impl ScanSpec {
    /// `2e4` pairs on shells `0.1, ..., 0.9` with global, `1e-2` and `1e-3` gaps.
    pub fn standard(seed: u64) -> Self {
        Self {
            pairs: 20_000,
            shells: (1..=9).map(|k| k as f64 / 10.0).collect(),
            gaps: vec![Gap::Global, Gap::Local(1e-2), Gap::Local(1e-3)],
            seed,
        }
    }

    pub fn with_pairs(mut self, pairs: usize) -> Self {
        self.pairs = pairs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pairs == 0 || self.shells.is_empty() || self.gaps.is_empty() {
            return Err(invalid("scan needs at least one pair, shell and gap"));
        }
        if self.shells.iter().any(|&r| !(0.0..1.0).contains(&r)) {
            return Err(invalid("scan shells must lie in [0, 1)"));
        }
        if self.gaps.iter().any(|g| matches!(g, Gap::Local(d) if !(*d > 0.0 && *d < 0.5))) {
            return Err(invalid("local gaps must lie in (0, 0.5)"));
        }
        Ok(())
    }

    fn rmax(&self) -> f64 {
        self.shells.iter().copied().fold(0.0, f64::max)
    }

    /// The sampled pairs with their stratum index, in a fixed order.
    pub fn sample(&self, n: usize) -> Result<Vec<(usize, Vec<f64>, Vec<f64>)>> {
        self.validate()?;
        let mut rng = sampling::rng(self.seed);
        let strata = self.shells.len() * self.gaps.len();
        let rmax = self.rmax();
        let mut out = Vec::with_capacity(self.pairs);
        for i in 0..self.pairs {
            let stratum = i % strata;
            let r = self.shells[stratum / self.gaps.len()];
            let x = sampling::on_shell(&mut rng, n, r);
            let y = match self.gaps[stratum % self.gaps.len()] {
                Gap::Global => loop {
                    let y = sampling::in_ball(&mut rng, n, rmax.max(1e-3));
                    if dist_sq(&x, &y) > 1e-12 {
                        break y;
                    }
                },
                Gap::Local(d) => {
                    // keep the partner inside the ball of radius rmax + d
                    let limit = (rmax + d).min(1.0 - 1e-6);
                    loop {
                        let dir = sampling::on_sphere(&mut rng, n);
                        let y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + d * b).collect();
                        if norm_sq(&y).sqrt() <= limit {
                            break y;
                        }
                    }
                }
            };
            out.push((stratum, x, y));
        }
        Ok(out)
    }

    fn stratum_label(&self, s: usize) -> (f64, String) {
        (self.shells[s / self.gaps.len()], self.gaps[s % self.gaps.len()].label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumStats {
    pub shell: f64,
    pub gap: String,
    pub pairs: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

/// Extremes of `|f(x) - f(y)| / |x - y|` over the sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// Minimum over local pairs (`gap <= 1e-2`) on the innermost shell.
    pub local_min_ratio_near_origin: Option<f64>,
    pub strata: Vec<StratumStats>,
}

/// Scan with a plain map `f`.
pub fn lipschitz_scan(f: impl Fn(&[f64]) -> Vec<f64> + Sync, n: usize, spec: &ScanSpec) -> Result<LipschitzReport> {
    lipschitz_scan_pairs(|x, y| (f(x), f(y)), n, spec)
}

/// Scan with a pair evaluator, so both values can share one quadrature rule.
pub fn lipschitz_scan_pairs(
    eval: impl Fn(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Sync,
    n: usize,
    spec: &ScanSpec,
) -> Result<LipschitzReport> {
    try_lipschitz_scan_pairs(|x, y| Ok(eval(x, y)), n, spec)
}

/// [`lipschitz_scan_pairs`] with a fallible evaluator.
pub fn try_lipschitz_scan_pairs(
    eval: impl Fn(&[f64], &[f64]) -> Result<(Vec<f64>, Vec<f64>)> + Sync,
    n: usize,
    spec: &ScanSpec,
) -> Result<LipschitzReport> {
    let pairs = spec.sample(n)?;
    let ratios: Vec<f64> = pairs
        .par_iter()
        .map(|(_, x, y)| {
            let (fx, fy) = eval(x, y)?;
            Ok(dist_sq(&fx, &fy).sqrt() / dist_sq(x, y).sqrt())
        })
        .collect::<Result<_>>()?;
    let strata_count = spec.shells.len() * spec.gaps.len();
    let mut strata: Vec<StratumStats> = (0..strata_count)
        .map(|s| {
            let (shell, gap) = spec.stratum_label(s);
            StratumStats { shell, gap, pairs: 0, max_ratio: f64::NEG_INFINITY, min_ratio: f64::INFINITY }
        })
        .collect();
    for ((s, _, _), &r) in pairs.iter().zip(&ratios) {
        let st = &mut strata[*s];
        st.pairs += 1;
        st.max_ratio = st.max_ratio.max(r);
        st.min_ratio = st.min_ratio.min(r);
    }
    strata.retain(|s| s.pairs > 0);
    let inner = spec.shells.iter().copied().fold(f64::INFINITY, f64::min);
    let local_min = pairs
        .iter()
        .zip(&ratios)
        .filter(|((s, _, _), _)| {
            let shell = spec.shells[s / spec.gaps.len()];
            shell == inner && matches!(spec.gaps[s % spec.gaps.len()], Gap::Local(d) if d <= 1e-2)
        })
        .map(|(_, &r)| r)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))));
    Ok(LipschitzReport {
        pairs: ratios.len(),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        local_min_ratio_near_origin: local_min,
        strata,
    })
}

/// Potential whose Lipschitz quotients are scanned.
#[derive(Clone, Copy)]
pub enum ScanTarget<'a> {
    Poisson(&'a BoundaryField),
    Green(&'a SourceField),
    Representation(&'a BoundaryField, &'a SourceField),
}

impl ScanTarget<'_> {
    fn dim(&self) -> usize {
        match self {
            ScanTarget::Poisson(phi) | ScanTarget::Representation(phi, _) => phi.dim(),
            ScanTarget::Green(psi) => psi.dim(),
        }
    }

    fn eval(&self, rules: &FrozenRepresentation, x: &[f64]) -> Vec<f64> {
        match self {
            ScanTarget::Poisson(phi) => rules.poisson.eval(phi, x).value,
            ScanTarget::Green(psi) => rules.green.eval(psi, x),
            ScanTarget::Representation(phi, psi) => rules.eval(phi, psi, x),
        }
    }
}

/// Coarse settings for scans with many pairs: quotients tolerate far more
/// quadrature error than point values do.
pub fn scan_settings() -> QuadratureSettings {
    QuadratureSettings { sphere_order: 12, radial_order: 16, escalation: 4.0, ..Default::default() }
}

/// Pairs closer than this share one frozen rule.
pub const SHARED_RULE_GAP: f64 = 0.05;

/// Lipschitz scan of a potential. Close pairs are evaluated with one frozen
/// rule, so the quadrature error cancels in the difference quotient.
pub fn potential_scan(target: ScanTarget<'_>, spec: &ScanSpec, s: &QuadratureSettings) -> Result<LipschitzReport> {
    s.validate()?;
    let n = target.dim();
    if let ScanTarget::Green(psi) | ScanTarget::Representation(_, psi) = target {
        psi.require_declared()?;
        if psi.dim() != n {
            return Err(crate::error::HyperError::DimensionMismatch { expected: n, got: psi.dim() });
        }
    }
    if spec.rmax() + spec.gaps.iter().map(|g| if let Gap::Local(d) = g { *d } else { 0.0 }).fold(0.0, f64::max)
        > 1.0 - s.margin
    {
        return Err(invalid("scan region reaches past 1 - margin"));
    }
    try_lipschitz_scan_pairs(
        |x, y| {
            let (rx, ry) = (norm_sq(x).sqrt(), norm_sq(y).sqrt());
            if dist_sq(x, y).sqrt() <= SHARED_RULE_GAP {
                let axis = if rx >= ry { x } else { y };
                let rules = FrozenRepresentation::for_region(axis, rx.max(ry), s)?;
                Ok((target.eval(&rules, x), target.eval(&rules, y)))
            } else {
                let fx = FrozenRepresentation::for_region(x, rx, s)?;
                let fy = FrozenRepresentation::for_region(y, ry, s)?;
                Ok((target.eval(&fx, x), target.eval(&fy, y)))
            }
        },
        n,
        spec,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradSample {
    pub x: Vec<f64>,
    pub jacobian_norm: f64,
    pub bound: f64,
}

/// `||D P_h[phi](x)||` against `alpha0 omega(1-|x|)/(1-|x|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradBoundReport {
    pub alpha0: f64,
    pub samples: Vec<GradSample>,
    /// `max (||D Phi|| - bound)`; non-positive when the bound holds.
    pub max_violation: f64,
    /// `max ||D Phi|| / bound` over samples with a positive bound.
    pub max_ratio: f64,
}

/// Finite-difference Jacobian of `P_h[phi]` at `x`, with the rule frozen
/// over the stencil.
pub fn poisson_jacobian(phi: &BoundaryField, x: &[f64], h: f64, s: &QuadratureSettings) -> Result<MatrixFrame> {
    let r = norm_sq(x).sqrt();
    let rule = PoissonRule::for_region(x, r + h, s)?;
    let n = x.len();
    MatrixFrame::new(n, fd::jacobian(|y| rule.eval(phi, y).value, x, h))
}

/// Checks the gradient bound on `per_shell` random points of each shell.
pub fn grad_bound_check_poisson(
    phi: &BoundaryField,
    shells: &[f64],
    per_shell: usize,
    h: f64,
    seed: u64,
    s: &QuadratureSettings,
) -> Result<GradBoundReport> {
    let n = phi.dim();
    let omega = phi.majorant().ok_or_else(|| invalid("gradient bound check needs a declared majorant"))?;
    let a0 = alpha0(n);
    let mut rng = sampling::rng(seed);
    let mut points = Vec::with_capacity(shells.len() * per_shell);
    for &r in shells {
        if !(0.0..1.0).contains(&r) || r + h >= 1.0 - s.margin {
            return Err(invalid(format!("shell {r} too close to the sphere for step {h}")));
        }
        for _ in 0..per_shell {
            // jitter the radius slightly so shells are not perfectly thin
            let rr = (r + rng.gen_range(-1e-3..1e-3)).clamp(0.0, r);
            points.push(sampling::on_shell(&mut rng, n, rr));
        }
    }
    let samples: Vec<GradSample> = points
        .into_par_iter()
        .map(|x| {
            let d = 1.0 - norm_sq(&x).sqrt();
            let jac = poisson_jacobian(phi, &x, h, s)?;
            Ok(GradSample { jacobian_norm: matrix_norm_and_l(&jac).0, bound: a0 * omega.slope(d), x })
        })
        .collect::<Result<_>>()?;
    let max_violation = samples.iter().map(|g| g.jacobian_norm - g.bound).fold(f64::NEG_INFINITY, f64::max);
    let max_ratio = samples.iter().filter(|g| g.bound > 0.0).map(|g| g.jacobian_norm / g.bound).fold(0.0, f64::max);
    Ok(GradBoundReport { alpha0: a0, samples, max_violation, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::boundary_field;
    use approx::assert_relative_eq;

    #[test]
    fn identity_map_has_unit_ratios() {
        let spec = ScanSpec::standard(1).with_pairs(2_000);
        let rep = lipschitz_scan(|x| x.to_vec(), 3, &spec).unwrap();
        assert_relative_eq!(rep.max_ratio, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rep.min_ratio, 1.0, epsilon = 1e-12);
        assert_eq!(rep.pairs, 2_000);
        assert_eq!(rep.strata.len(), 27);
    }

    #[test]
    fn sampling_is_reproducible_and_stratified() {
        let spec = ScanSpec::standard(42).with_pairs(54);
        let a = spec.sample(4).unwrap();
        assert_eq!(a, spec.sample(4).unwrap());
        for (s, x, y) in &a {
            let shell = spec.shells[s / 3];
            assert_relative_eq!(norm_sq(x).sqrt(), shell, epsilon = 1e-14);
            if let Gap::Local(d) = spec.gaps[s % 3] {
                assert_relative_eq!(dist_sq(x, y).sqrt(), d, max_relative = 1e-10);
            }
            assert!(norm_sq(y).sqrt() < 1.0);
        }
    }

    #[test]
    fn scaled_map() {
        let spec = ScanSpec::standard(3).with_pairs(500);
        let rep = lipschitz_scan(|x| x.iter().map(|c| 2.5 * c).collect(), 3, &spec).unwrap();
        assert_relative_eq!(rep.max_ratio, 2.5, epsilon = 1e-12);
        assert!(rep.local_min_ratio_near_origin.is_some());
    }

    #[test]
    fn constant_data_has_zero_gradient() {
        let phi = boundary_field("constant:1", 3).unwrap();
        let s = QuadratureSettings { sphere_order: 12, ..Default::default() };
        let rep = grad_bound_check_poisson(&phi, &[0.2, 0.5], 2, 1e-4, 0, &s).unwrap();
        assert!(rep.samples.iter().all(|g| g.jacobian_norm < 1e-6));
        assert!(rep.max_violation < 1e-6);
        assert_eq!(rep.max_ratio, 0.0);
    }

    #[test]
    fn poisson_scan_of_coordinate_data() {
        // P_h[xi_1 e_1] is bounded by its slope 2(n-1)/n at the origin near 0
        let phi = boundary_field("coordinate:1", 3).unwrap();
        let spec = ScanSpec { pairs: 60, shells: vec![0.1, 0.5], gaps: vec![Gap::Global, Gap::Local(1e-3)], seed: 5 };
        let rep = potential_scan(ScanTarget::Poisson(&phi), &spec, &scan_settings()).unwrap();
        assert_eq!(rep.pairs, 60);
        assert!(rep.max_ratio > 0.5 && rep.max_ratio < 5.0, "{rep:?}");
        let local = rep.local_min_ratio_near_origin.unwrap();
        assert!(local > 0.0 && local < 4.0 / 3.0 + 1e-2);
    }

    #[test]
    fn potential_scan_rejects_undeclared_source() {
        let psi = SourceField::new(3, "raw", |_, out| out.fill(0.0));
        let spec = ScanSpec::standard(0).with_pairs(3);
        assert!(potential_scan(ScanTarget::Green(&psi), &spec, &scan_settings()).is_err());
    }

    #[test]
    fn coordinate_data_gradient_at_origin() {
        // D P_h[xi_1 e_1](0) = (2(n-1)/n) e_1 e_1^T
        let phi = boundary_field("coordinate:1", 3).unwrap();
        let s = QuadratureSettings { sphere_order: 16, ..Default::default() };
        let jac = poisson_jacobian(&phi, &[0.0; 3], 1e-4, &s).unwrap();
        assert_relative_eq!(jac.get(0, 0), 4.0 / 3.0, epsilon = 1e-7);
        assert!(jac.get(1, 1).abs() < 1e-8);
    }
}
