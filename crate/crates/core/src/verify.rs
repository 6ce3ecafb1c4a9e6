//! Invariant suites run by `hyperball verify`. Each check reports a measured
//! error against a tolerance.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{
    compute_constants, counterexample_gradient, counterexample_w0, du_at_origin, grad_bound_check_poisson,
    potential_scan, scan_settings, trace_lipschitz, w0_terms_for, Gap, MatrixFrame, ScanSpec, ScanTarget,
};
use crate::config::RunConfig;
use crate::error::{HyperError, Result};
use crate::fd;
use crate::fields::{boundary_field, linear_source, quadratic_source, SourceField};
use crate::geometry::{
    bracket, conformal_factor_raw, dist_sq, hyperbolic_distance, image_distance_identities, mobius_apply,
    mobius_jacobian_det, norm_sq, BallPoint,
};
use crate::kernels::{green_h, hyperbolic_laplacian, poisson_szego_raw, HyperbolicLaplacianStencil};
use crate::potentials::{
    green_mass, green_mass_exact, mean_value_residual, poisson_laplacian, poisson_normalization, represent,
    FrozenRepresentation, QuadratureSettings,
};
use crate::quadrature::cache::RuleCache;
use crate::quadrature::gauss::{gauss_jacobi, gauss_legendre};
use crate::quadrature::{integrate_nu, sphere_rule, BallRule, SphereRule};
use crate::sampling;
use crate::specialfn::{gamma, gauss_2f1, projected_power_integral, q_ratio, GreenProfile, HypergeomParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Special,
    Quadrature,
    Kernels,
    Representation,
    Lipschitz,
    Counterexample,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Geometry,
        Suite::Special,
        Suite::Quadrature,
        Suite::Kernels,
        Suite::Representation,
        Suite::Lipschitz,
        Suite::Counterexample,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Special => "special",
            Suite::Quadrature => "quadrature",
            Suite::Kernels => "kernels",
            Suite::Representation => "representation",
            Suite::Lipschitz => "lipschitz",
            Suite::Counterexample => "counterexample",
            Suite::All => "all",
        }
    }
}

impl Suite {
    /// Suites on the kernels and potentials, defined for `n >= 3` only.
    pub fn needs_three_dims(&self) -> bool {
        matches!(self, Suite::Kernels | Suite::Representation | Suite::Lipschitz)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HyperError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| HyperError::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured` is finite and at most `tolerance`.
    pub fn new(suite: Suite, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.name(),
            name: name.into(),
            measured,
            tolerance,
            passed: measured.is_finite() && measured <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}/{}: measured {:.3e} tol {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

/// Runs one suite (or all of them) with the dimension, seed and quadrature of `cfg`.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    match suite {
        Suite::Geometry => geometry(cfg),
        Suite::Special => special(cfg),
        Suite::Quadrature => quadrature(cfg),
        Suite::Kernels => kernels(cfg),
        Suite::Representation => representation(cfg),
        Suite::Lipschitz => lipschitz(cfg),
        Suite::Counterexample => counterexample(cfg),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                if cfg.n >= 3 || !s.needs_three_dims() {
                    all.extend(run_suite(s, cfg)?);
                }
            }
            Ok(all)
        }
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn point(c: Vec<f64>) -> Result<BallPoint> {
    BallPoint::new(c)
}

/// Sup-norm distance, with NaN propagated.
fn diff(a: &[f64], b: &[f64]) -> f64 {
    max_of(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

fn geometry(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Geometry;
    let n = cfg.n;
    let mut rng = sampling::rng(cfg.seed);
    let origin = BallPoint::origin(n);
    let (mut inv, mut fixed, mut swap, mut factor, mut image, mut brk, mut dist, mut jac) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let a = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let x = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let y = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let ax = mobius_apply(&a, &x)?;
        inv = inv.max(diff(mobius_apply(&a, &ax)?.coords(), x.coords()));
        fixed = fixed.max(norm_sq(mobius_apply(&a, &a)?.coords()).sqrt());
        swap = swap.max(diff(mobius_apply(&a, &origin)?.coords(), a.coords()));
        let cf = conformal_factor_raw(a.coords(), x.coords());
        factor = factor.max((1.0 - ax.norm_sq() - cf).abs());
        let (d_img, b_img) = image_distance_identities(&a, &x)?;
        image = image
            .max((dist_sq(a.coords(), ax.coords()).sqrt() - d_img).abs() / d_img.max(1.0))
            .max((bracket(&a, &ax)? - b_img).abs() / b_img);
        let b = bracket(&a, &x)?;
        let (lo, hi) = (1.0 - a.norm() * x.norm(), 1.0 + a.norm() * x.norm());
        brk = brk.max(lo - b).max(b - hi).max(dist_sq(a.coords(), x.coords()).sqrt() - b);
        let d_xy = hyperbolic_distance(&x, &y)?;
        let d_img = hyperbolic_distance(&ax, &mobius_apply(&a, &y)?)?;
        dist = dist.max((d_xy - d_img).abs() / d_xy.max(1.0));
        let det = mobius_jacobian_det(&a, &x)?;
        let fd_det = fd::determinant(
            &fd::jacobian(
                |p| {
                    let mut out = vec![0.0; n];
                    crate::geometry::mobius_apply_raw(a.coords(), p, &mut out);
                    out
                },
                x.coords(),
                1e-5,
            ),
            n,
        );
        jac = jac.max((fd_det.abs() - det).abs() / det);
    }
    Ok(vec![
        Check::new(S, "involution", inv, 1e-11),
        Check::new(S, "fixes_center_to_origin", fixed, 1e-11),
        Check::new(S, "origin_to_center", swap, 1e-11),
        Check::new(S, "conformal_factor_identity", factor, 1e-11),
        Check::new(S, "image_distance_identities", image, 1e-11),
        Check::new(S, "bracket_bounds", brk.max(0.0), 1e-12),
        Check::new(S, "distance_invariance", dist, 1e-9),
        Check::new(S, "jacobian_determinant_fd", jac, 1e-6),
    ])
}

/// `int_{-1}^1 (1-s^2)^{(t-3)/2} (1 - 2rs + r^2)^{-k} ds` in the angle variable
/// `s = cos(theta)`, by composite Gauss–Legendre.
fn projected_power_quadrature(t: f64, k: f64, r: f64) -> Result<f64> {
    let rule = gauss_legendre(16)?;
    let panels = 256;
    let h = std::f64::consts::PI / panels as f64;
    let f = |th: f64| th.sin().powf(t - 2.0) * (1.0 - 2.0 * r * th.cos() + r * r).powf(-k);
    Ok((0..panels).map(|j| rule.integrate(j as f64 * h, (j + 1) as f64 * h, f)).sum())
}

fn special(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Special;
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for t in [3.0, 4.0, 5.0] {
        for k in [1.0, 2.0, 3.0] {
            for r in [0.0, 0.5, 0.9] {
                worst = worst.max((projected_power_quadrature(t, k, r)? - projected_power_integral(t, k, r)?).abs());
            }
        }
    }
    checks.push(Check::new(S, "projected_power_identity", worst, 1e-8));
    // Gauss summation F(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b))
    let (a, b, c) = (0.5, 1.5, 4.25);
    let f1 = gauss_2f1(&HypergeomParams::new(a, b, c, 1.0)?)?;
    let exact = gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
    checks.push(Check::new(S, "gauss_summation", (f1 - exact).abs() / exact, 1e-12));
    checks.push(Check::new(S, "gamma_half", (gamma(0.5).powi(2) - std::f64::consts::PI).abs(), 1e-14));
    if cfg.n >= 3 {
        let n = cfg.n as f64;
        let (lo, hi) = (1.0 / (2.0 * n * (n - 1.0)), 1.0 / (n * (n - 2.0)));
        let mut viol: f64 = 0.0;
        for j in 1..=1000 {
            let q = q_ratio(cfg.n, j as f64 / 1000.0)?;
            viol = viol.max(lo - q).max(q - hi);
        }
        checks.push(Check::new(S, "q_ratio_bounds", viol.max(0.0), 1e-12));
    }
    // g' = -(1/n)(1-r^2)^{n-2} r^{1-n}
    let profile = GreenProfile::new(cfg.n)?;
    let mut slope: f64 = 0.0;
    for r in [0.2, 0.5, 0.8] {
        let h = 1e-5;
        let dg = (profile.g1(r + h)? - profile.g1(r - h)?) / (2.0 * h);
        let exact = -(1.0 - r * r).powi(cfg.n as i32 - 2) * r.powi(1 - cfg.n as i32) / cfg.n as f64;
        slope = slope.max((dg - exact).abs() / exact.abs());
    }
    checks.push(Check::new(S, "green_profile_derivative", slope, 1e-7));
    Ok(checks)
}

fn sphere_rule_cached(n: usize, order: usize) -> Result<SphereRule> {
    match RuleCache::from_env() {
        Some(cache) => cache.sphere(n, order),
        None => sphere_rule(n, order),
    }
}

fn quadrature(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Quadrature;
    let n = cfg.n;
    let nf = n as f64;
    let s = cfg.quadrature();
    let rule = sphere_rule_cached(n, s.sphere_order)?;
    let moment = |f: &dyn Fn(&[f64]) -> f64| rule.iter().map(|(xi, w)| w * f(xi)).sum::<f64>();
    let mass = (moment(&|_| 1.0) - 1.0).abs();
    let second = (moment(&|x| x[0] * x[0]) - 1.0 / nf).abs();
    let fourth = (moment(&|x| x[0].powi(4)) - 3.0 / (nf * (nf + 2.0))).abs();
    let mixed = (moment(&|x| x[0] * x[0] * x[1] * x[1]) - 1.0 / (nf * (nf + 2.0))).abs();
    let odd = moment(&|x| x[0] * x[1]).abs();
    let ball = BallRule::product(&gauss_legendre(s.radial_order)?, 0.0, 1.0, sphere_rule(n, 8)?)?;
    let r2 = integrate_nu(&ball, 1, |x, out| out[0] = norm_sq(x))[0];
    let gl = gauss_legendre(s.radial_order)?.integrate(0.0, 1.0, |x| x.powi(2 * s.radial_order as i32 - 1));
    let gj = gauss_jacobi(20, 0.5, 1.5)?;
    // int (1-x)^{1/2} (1+x)^{3/2} dx = pi / 2
    let gj_mass = (gj.weights.iter().sum::<f64>() - std::f64::consts::FRAC_PI_2).abs();
    Ok(vec![
        Check::new(S, "sphere_mass", mass, 1e-12),
        Check::new(S, "sphere_second_moment", second, 1e-12),
        Check::new(S, "sphere_fourth_moment", fourth, 1e-12),
        Check::new(S, "sphere_mixed_moment", mixed, 1e-12),
        Check::new(S, "sphere_odd_moment", odd, 1e-12),
        Check::new(S, "ball_second_moment", (r2 - nf / (nf + 2.0)).abs(), 1e-12),
        Check::new(S, "gauss_legendre_exactness", (gl - 1.0 / (2.0 * s.radial_order as f64)).abs(), 1e-13),
        Check::new(S, "gauss_jacobi_mass", gj_mass, 1e-13),
    ])
}

fn shell_points(n: usize, per_shell: usize, seed: u64) -> Result<Vec<BallPoint>> {
    let mut rng = sampling::rng(seed);
    let mut pts = Vec::new();
    for k in 1..=9 {
        for _ in 0..per_shell {
            pts.push(point(sampling::on_shell(&mut rng, n, k as f64 / 10.0))?);
        }
    }
    Ok(pts)
}

fn kernels(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Kernels;
    let n = cfg.n;
    let s = cfg.quadrature();
    let norm = max_of(
        shell_points(n, 3, cfg.seed)?
            .iter()
            .map(|x| poisson_normalization(x, &s).map(|m| (m - 1.0).abs()))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut rng = sampling::rng(cfg.seed ^ 0x9e37);
    let (mut sym, mut inv) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let x = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let y = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let a = point(sampling::in_ball(&mut rng, n, 0.9))?;
        let g = green_h(&x, &y)?;
        sym = sym.max((g - green_h(&y, &x)?).abs() / g.abs().max(1.0));
        let gi = green_h(&mobius_apply(&a, &x)?, &mobius_apply(&a, &y)?)?;
        inv = inv.max((g - gi).abs() / g.abs().max(1.0));
    }
    let stencil = HyperbolicLaplacianStencil::new(cfg.fd_step)?.with_richardson(true);
    let t = sampling::on_sphere(&mut rng, n);
    let y = point(sampling::in_ball(&mut rng, n, 0.5))?;
    let mut harm: f64 = 0.0;
    for _ in 0..10 {
        let x = point(sampling::in_ball(&mut rng, n, 0.6))?;
        let p = hyperbolic_laplacian(|z| vec![poisson_szego_raw(z, &t)], &x, &stencil)?[0];
        harm = harm.max(p.abs() / poisson_szego_raw(x.coords(), &t).max(1.0));
        if dist_sq(x.coords(), y.coords()) > 0.01 {
            let g = hyperbolic_laplacian(
                |z| vec![green_h(&BallPoint::new(z.to_vec()).expect("stencil point"), &y).unwrap_or(f64::NAN)],
                &x,
                &stencil,
            )?[0];
            harm = harm.max(g.abs());
        }
    }
    Ok(vec![
        Check::new(S, "poisson_normalization", norm, 1e-8),
        Check::new(S, "green_symmetry", sym, 1e-12),
        Check::new(S, "green_invariance", inv, 1e-9),
        Check::new(S, "kernel_harmonicity_fd", harm, 1e-3),
    ])
}

fn sample_grid(n: usize, count: usize, rmax: f64, seed: u64) -> Result<Vec<BallPoint>> {
    let mut rng = sampling::rng(seed);
    (0..count).map(|_| point(sampling::in_ball(&mut rng, n, rmax))).collect()
}

fn representation(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Representation;
    let n = cfg.n;
    if n < 3 {
        return Err(HyperError::UnsupportedDimension { n, min: 3 });
    }
    let s = cfg.quadrature();
    let mut checks = Vec::new();
    let grid = sample_grid(n, 4, 0.7, cfg.seed)?;
    let coord = boundary_field("coordinate:1", n)?;
    let unit = boundary_field("unit:1", n)?;
    let lin = linear_source(n)?;
    let quad = quadratic_source(n)?;
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for x in &grid {
        let mut want = vec![0.0; n];
        want[0] = x.coords()[0];
        e1 = e1.max(diff(&represent(&coord, &lin, x, &s)?, &want));
        want[0] = x.norm_sq();
        e2 = e2.max(diff(&represent(&unit, &quad, x, &s)?, &want));
    }
    checks.push(Check::new(S, "manufactured_linear", e1, 1e-4));
    checks.push(Check::new(S, "manufactured_quadratic", e2, 1e-4));
    let mut mass: f64 = 0.0;
    for r in [0.0, 0.3, 0.5, 0.8] {
        let y = BallPoint::on_axis(n, 0, r)?;
        let exact = green_mass_exact(&y);
        mass = mass.max((green_mass(&y, &s)? - exact).abs() / exact);
    }
    checks.push(Check::new(S, "green_mass", mass, 1e-6));
    let nf = n as f64;
    let mv = mean_value_residual(
        |x| vec![norm_sq(x)],
        |x| {
            let a = 1.0 - norm_sq(x);
            vec![2.0 * nf * a * a + 4.0 * (nf - 2.0) * a * norm_sq(x)]
        },
        n,
        0.5,
        &s,
    )?;
    checks.push(Check::new(S, "mean_value_identity", mv[0].abs(), 1e-6));
    let stencil = HyperbolicLaplacianStencil::new(cfg.fd_step)?.with_richardson(true);
    let mut harm: f64 = 0.0;
    for x in sample_grid(n, 5, 0.7, cfg.seed ^ 1)? {
        harm = harm.max(max_of(poisson_laplacian(&coord, &x, &stencil, &s)?.iter().map(|v| v.abs())));
    }
    checks.push(Check::new(S, "poisson_extension_harmonic", harm, 1e-3));
    let du0 = du_at_origin(&coord, &lin, &s)?;
    let mut axis = vec![0.0; n];
    axis[0] = 1.0;
    let frozen = FrozenRepresentation::for_region(&axis, 2.0 * cfg.fd_step, &s)?;
    let jac = fd::jacobian(|x| frozen.eval(&coord, &lin, x), &vec![0.0; n], cfg.fd_step);
    checks.push(Check::new(S, "du_at_origin_vs_fd", du0.max_abs_diff(&MatrixFrame::new(n, jac)?), 1e-4));
    Ok(checks)
}

fn lipschitz(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Lipschitz;
    let n = cfg.n;
    if n < 3 {
        return Err(HyperError::UnsupportedDimension { n, min: 3 });
    }
    let s = cfg.quadrature();
    let phi = boundary_field("coordinate:1", n)?;
    let psi: SourceField = linear_source(n)?;
    let l = phi.lipschitz().unwrap_or(f64::NAN);
    let m = psi.decay_m().unwrap_or(f64::NAN);
    let consts = compute_constants(n, l, m)?;
    let grad = grad_bound_check_poisson(&phi, &[0.3, 0.6, 0.9], 2, cfg.fd_step, cfg.seed, &s)?;
    let spec = ScanSpec { pairs: 540, shells: (1..=9).map(|k| k as f64 / 10.0).collect(), gaps: vec![Gap::Global, Gap::Local(1e-2), Gap::Local(1e-3)], seed: cfg.seed };
    let cheap = QuadratureSettings { margin: s.margin, ..scan_settings() };
    let green = potential_scan(ScanTarget::Green(&psi), &spec, &cheap)?;
    let full = potential_scan(ScanTarget::Representation(&phi, &psi), &spec, &cheap)?;
    Ok(vec![
        Check::new(S, "gradient_bound_ratio", grad.max_ratio, 1.0 + 1e-3),
        Check::new(S, "boundary_lipschitz_ratio", phi.sampled_majorant_ratio(2000, cfg.seed).unwrap_or(f64::NAN), 1.0 + 1e-12),
        Check::new(S, "source_decay_ratio", psi.sampled_decay_ratio(2000, cfg.seed).unwrap_or(f64::NAN), 1.0 + 1e-12),
        Check::new(S, "green_potential_ratio_over_beta0", green.max_ratio / consts.beta0, 1.0),
        Check::new(S, "solution_ratio_over_c1", full.max_ratio / consts.c1, 1.0),
    ])
}

fn counterexample(cfg: &RunConfig) -> Result<Vec<Check>> {
    const S: Suite = Suite::Counterexample;
    let m = 2.0;
    let mut rng = sampling::rng(cfg.seed);
    let stencil = HyperbolicLaplacianStencil::new(cfg.fd_step)?.with_richardson(true);
    let terms = w0_terms_for(0.7 + 1e-3, 1e-17);
    let mut lap: f64 = 0.0;
    for _ in 0..20 {
        let z = sampling::in_ball(&mut rng, 2, 0.7);
        let x = point(z.clone())?;
        let v = hyperbolic_laplacian(
            |p| vec![counterexample_w0([p[0], p[1]], m, terms).map(|w| w.value).unwrap_or(f64::NAN)],
            &x,
            &stencil,
        )?[0];
        lap = lap.max((v - m * (1.0 - norm_sq(&z)).powi(2)).abs());
    }
    let mut lower: f64 = 0.0;
    for r in [0.9, 0.99, 0.999] {
        lower = lower.max(-(1.0 - r as f64).ln() - counterexample_gradient(r, m)?);
    }
    let exact = counterexample_gradient(0.99, 0.0)?;
    let trace = trace_lipschitz(1000, 4096);
    Ok(vec![
        Check::new(S, "laplacian_matches_source", lap, 5e-3),
        Check::new(S, "gradient_lower_bound", lower.max(0.0), 0.0),
        Check::new(S, "gradient_closed_form", (exact + 0.01f64.ln() / 0.99).abs(), 1e-10),
        Check::new(S, "trace_lipschitz", (trace.max_quotient - trace.bound).max(0.0), 1e-9),
    ])
}
