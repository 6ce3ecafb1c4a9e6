use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperball::analysis::{
    compute_constants, du_at_origin, lipschitz_scan, potential_scan, scan_settings, HyperConstants, LipschitzReport,
    ScanSpec, ScanTarget,
};
use hyperball::config::{OutputFormat, RunConfig};
use hyperball::fields::{boundary_field, source_field, BoundaryField, SourceField};
use hyperball::grid::GridSpec;
use hyperball::output::{write_csv, write_json};
use hyperball::potentials::{green_potential_grid, poisson_extension_grid, QuadratureSettings};
use hyperball::verify::{run_suite, Check, Suite};
use hyperball::HyperError;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperball", version, about = "Hyperbolic potentials on the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an invariant suite and print one line per check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate P_h[phi] on a grid.
    Extend {
        /// Boundary field: constant[:C], unit[:K], coordinate[:K], identity, cusp, fourier:A1,A2,...
        #[arg(long)]
        field: String,
        /// Grid: ray:AXIS:COUNT:RMAX, polar:NR:NA:RMAX or cube:M:HALF.
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate G_h[psi] on a grid.
    Green {
        /// Source field: zero, linear, quadratic or decay.
        #[arg(long)]
        field: String,
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the constant ledger as JSON.
    Constants {
        #[arg(long = "lipschitz", short = 'L')]
        l: f64,
        #[arg(long = "decay", short = 'M')]
        m: f64,
        /// Boundary field used for l(Du(0)); needs --source as well.
        #[arg(long, requires = "source")]
        boundary: Option<String>,
        #[arg(long, requires = "boundary")]
        source: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Scan difference quotients and compare them with the explicit bounds.
    Lipschitz {
        /// identity, linear, quadratic, poisson:PHI or green:PSI.
        #[arg(long, default_value = "linear")]
        pair: String,
        #[arg(long, default_value_t = 20_000)]
        pairs: usize,
        /// Use the configured quadrature instead of the coarse scan rules.
        #[arg(long)]
        fine: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML file with RunConfig keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sphere_order: Option<usize>,
    #[arg(long)]
    radial_order: Option<usize>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> hyperball::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.sphere_order {
            cfg.sphere_order = v;
        }
        if let Some(v) = self.radial_order {
            cfg.radial_order = v;
        }
        if let Some(v) = self.margin {
            cfg.margin = v;
        }
        if let Some(v) = self.fd_step {
            cfg.fd_step = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.format {
            cfg.format = v.parse()?;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

enum Failure {
    Config(HyperError),
    Run(HyperError),
}

impl From<HyperError> for Failure {
    fn from(e: HyperError) -> Self {
        match e {
            HyperError::Io(_) | HyperError::NonConvergence { .. } | HyperError::Singular(_) => Failure::Run(e),
            other => Failure::Config(other),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn sink(cfg: &RunConfig) -> hyperball::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_grid(cfg: &RunConfig, value_prefix: &str, points: &[Vec<f64>], values: &[Vec<f64>], errors: &[f64]) -> CmdResult {
    let n = cfg.n;
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.extend((1..=n).map(|i| format!("{value_prefix}{i}")));
    header.push("est_error".into());
    let rows: Vec<Vec<f64>> = points
        .iter()
        .zip(values)
        .zip(errors)
        .map(|((x, v), &e)| x.iter().chain(v).copied().chain([e]).collect())
        .collect();
    let mut w = sink(cfg)?;
    match cfg.format {
        OutputFormat::Csv => write_csv(&mut w, &header, &rows)?,
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                columns: &'a [String],
                rows: &'a [Vec<f64>],
            }
            write_json(&mut w, &Table { columns: &header, rows: &rows })?
        }
    }
    w.flush().map_err(HyperError::from)?;
    Ok(true)
}

fn cmd_verify(suite: &str, cfg: &RunConfig) -> CmdResult {
    let suite: Suite = suite.parse()?;
    let checks = run_suite(suite, cfg)?;
    let mut stdout = io::stdout().lock();
    for c in &checks {
        writeln!(stdout, "{c}").map_err(HyperError::from)?;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    writeln!(stdout, "{passed}/{} checks passed", checks.len()).map_err(HyperError::from)?;
    if let Some(path) = &cfg.out {
        #[derive(Serialize)]
        struct VerifyReport<'a> {
            suite: &'a str,
            n: usize,
            seed: u64,
            checks: &'a [Check],
        }
        let report = VerifyReport { suite: suite.name(), n: cfg.n, seed: cfg.seed, checks: &checks };
        write_json(BufWriter::new(File::create(path).map_err(HyperError::from)?), &report)?;
    }
    Ok(passed == checks.len())
}

fn grid_points(grid: &str, cfg: &RunConfig) -> hyperball::Result<Vec<hyperball::BallPoint>> {
    grid.parse::<GridSpec>()?.points(cfg.n, 1.0 - cfg.margin)
}

fn cmd_extend(field: &str, grid: &str, cfg: &RunConfig) -> CmdResult {
    let phi = boundary_field(field, cfg.n)?;
    let points = grid_points(grid, cfg)?;
    let ext = poisson_extension_grid(&phi, &points, &cfg.quadrature())?;
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    let values: Vec<Vec<f64>> = ext.iter().map(|e| e.value.clone()).collect();
    let errors: Vec<f64> = ext.iter().map(|e| e.est_error).collect();
    write_grid(cfg, "phi", &coords, &values, &errors)
}

fn cmd_green(field: &str, grid: &str, cfg: &RunConfig) -> CmdResult {
    let psi = source_field(field, cfg.n)?;
    let points = grid_points(grid, cfg)?;
    let s = cfg.quadrature();
    let values = green_potential_grid(&psi, &points, &s)?;
    // error estimate: distance to the same potential at half resolution
    let coarse = QuadratureSettings {
        sphere_order: (s.sphere_order / 2).max(2),
        radial_order: (s.radial_order / 2).max(2),
        ..s
    };
    let rough = green_potential_grid(&psi, &points, &coarse)?;
    let errors: Vec<f64> = values
        .iter()
        .zip(&rough)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .collect();
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords().to_vec()).collect();
    write_grid(cfg, "G", &coords, &values, &errors)
}

fn cmd_constants(l: f64, m: f64, boundary: Option<&str>, source: Option<&str>, cfg: &RunConfig) -> CmdResult {
    let mut c = compute_constants(cfg.n, l, m)?;
    if let (Some(b), Some(s)) = (boundary, source) {
        let du0 = du_at_origin(&boundary_field(b, cfg.n)?, &source_field(s, cfg.n)?, &cfg.quadrature())?;
        c = c.with_du0(&du0)?;
    }
    let mut w = sink(cfg)?;
    write_json(&mut w, &c)?;
    w.flush().map_err(HyperError::from)?;
    Ok(true)
}

#[derive(Serialize)]
struct LipschitzOutput {
    pair: String,
    n: usize,
    seed: u64,
    quadrature: Option<QuadratureSettings>,
    report: LipschitzReport,
    constants: Option<HyperConstants>,
    bound_name: Option<&'static str>,
    bound: Option<f64>,
    within_bound: bool,
}

enum Pair {
    Identity,
    Poisson(BoundaryField),
    Green(SourceField),
    Solution(BoundaryField, SourceField),
}

fn parse_pair(spec: &str, n: usize) -> hyperball::Result<Pair> {
    Ok(match spec.split_once(':') {
        None if spec == "identity" => Pair::Identity,
        None if spec == "linear" => Pair::Solution(boundary_field("coordinate:1", n)?, source_field("linear", n)?),
        None if spec == "quadratic" => Pair::Solution(boundary_field("unit:1", n)?, source_field("quadratic", n)?),
        Some(("poisson", phi)) => Pair::Poisson(boundary_field(phi, n)?),
        Some(("green", psi)) => Pair::Green(source_field(psi, n)?),
        _ => return Err(HyperError::UnknownField(spec.to_string())),
    })
}

fn cmd_lipschitz(pair: &str, pairs: usize, fine: bool, cfg: &RunConfig) -> CmdResult {
    let n = cfg.n;
    let spec = ScanSpec::standard(cfg.seed).with_pairs(pairs);
    let s = if fine { cfg.quadrature() } else { QuadratureSettings { margin: cfg.margin, ..scan_settings() } };
    let constants_for = |l: f64, m: f64| compute_constants(n, l, m);
    let (report, constants, bound_name, bound, quad) = match parse_pair(pair, n)? {
        Pair::Identity => (lipschitz_scan(|x| x.to_vec(), n, &spec)?, None, None, None, None),
        Pair::Poisson(phi) => {
            let l = phi.lipschitz().ok_or_else(|| HyperError::InvalidParameter("field has no Lipschitz constant".into()))?;
            let c = constants_for(l, 0.0)?;
            let b = c.alpha0 * l;
            (potential_scan(ScanTarget::Poisson(&phi), &spec, &s)?, Some(c), Some("alpha0*L"), Some(b), Some(s))
        }
        Pair::Green(psi) => {
            let m = psi.decay_m().ok_or(HyperError::UndeclaredDecay)?;
            let c = constants_for(0.0, m)?;
            let b = c.beta0;
            (potential_scan(ScanTarget::Green(&psi), &spec, &s)?, Some(c), Some("beta0"), Some(b), Some(s))
        }
        Pair::Solution(phi, psi) => {
            let l = phi.lipschitz().ok_or_else(|| HyperError::InvalidParameter("field has no Lipschitz constant".into()))?;
            let m = psi.decay_m().ok_or(HyperError::UndeclaredDecay)?;
            let du0 = du_at_origin(&phi, &psi, &cfg.quadrature())?;
            let c = constants_for(l, m)?.with_du0(&du0)?;
            let b = c.c1;
            (potential_scan(ScanTarget::Representation(&phi, &psi), &spec, &s)?, Some(c), Some("C1"), Some(b), Some(s))
        }
    };
    let within_bound = bound.is_none_or(|b| report.max_ratio <= b);
    let out = LipschitzOutput {
        pair: pair.to_string(),
        n,
        seed: cfg.seed,
        quadrature: quad,
        report,
        constants,
        bound_name,
        bound,
        within_bound,
    };
    let mut w = sink(cfg)?;
    write_json(&mut w, &out)?;
    w.flush().map_err(HyperError::from)?;
    Ok(within_bound)
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Verify { suite, common } => cmd_verify(suite, &common.resolve()?),
        Command::Extend { field, grid, common } => cmd_extend(field, grid, &common.resolve()?),
        Command::Green { field, grid, common } => cmd_green(field, grid, &common.resolve()?),
        Command::Constants { l, m, boundary, source, common } => {
            cmd_constants(*l, *m, boundary.as_deref(), source.as_deref(), &common.resolve()?)
        }
        Command::Lipschitz { pair, pairs, fine, common } => cmd_lipschitz(pair, *pairs, *fine, &common.resolve()?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
