//! `carnot-heat`: reproducible command-line experiments for H-type group
//! heat kernels.

pub mod config;
pub mod csv;
pub mod gridio;
pub mod manifest;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use htype_core::geometry::{distance_from_norms, nu, ratio_sample};
use htype_core::kernel::{KernelEvaluator, QuadratureParams};
use htype_core::pipeline::{free_evolve, sharpness_experiment, SharpnessOptions};
use htype_core::schoenberg::{
    build_counterexample, default_tau_grid, default_u_grid, fit_measure, reconstruct_kernel_slice, Atom, CutoffSide,
    SchoenbergMeasure,
};
use htype_core::{build_structure, Complex64, GridFunction, GridSpec, GroupPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::{hex, ConfigError, ExperimentConfig};
use crate::csv::Csv;
use crate::manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "carnot-heat", version, about = "Heat kernel experiments on H-type groups")]
pub struct Cli {
    /// Experiment configuration (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for sampled experiments; overrides the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output root; `CARNOT_HEAT_OUT` takes precedence.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Dims {
    /// Half the horizontal dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Center dimension.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Carnot–Carathéodory distances as `x_norm,z_norm,theta,d,ratio` rows.
    Distance {
        /// Horizontal coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Central coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Rows at `|x| = 1` with `θ` at the midpoints of N equal parts of `(0, π)`.
        #[arg(long)]
        sweep_theta: Option<usize>,
        /// N random points with log-uniform norms; needs a seed.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Heat kernel values at a point or on the configured grid.
    Kernel {
        #[command(flatten)]
        dims: Dims,
        /// Time `re`, `re+imi` or `re-imi`.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// `|x|,|z|` norms of the evaluation point.
        #[arg(long)]
        at: Option<String>,
    },
    /// Free Schrödinger evolution `u0 ∗ q_{eps + i t}`.
    Evolve {
        #[command(flatten)]
        dims: Dims,
        /// Initial data file; defaults to the kernel at `--init-time` on the configured grid.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        init_time: f64,
        #[arg(long)]
        t: f64,
        /// Regularization; defaults to `0.05 t`.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Gaussian mixture decomposition of the kernel profile.
    Schoenberg {
        #[command(subcommand)]
        action: SchoenbergCmd,
    },
    /// Decay constants of the free solution `p_{εT} → p_{(ε+i)T}`.
    Sharpness {
        #[arg(long = "T", default_value_t = 1.0)]
        t_final: f64,
        /// Comma separated values in (0, 1).
        #[arg(long, default_value = "0.15,0.25,0.4")]
        eps: String,
    },
    /// Runs an invariant suite and prints one PASS/FAIL line per invariant.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchoenbergCmd {
    /// Fits the measure at `|x|`; emits `tau,weight,x_norm,n,m,residual`.
    Fit {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        x_norm: f64,
    },
    /// Rebuilds kernel slices from the measure.
    Reconstruct {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        x_norm: f64,
        #[arg(long, default_value = "0,1,2,3")]
        z: String,
    },
    /// Keeps part of the measure and compares with the kernel slice.
    Counterexample {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        x_norm: f64,
        #[arg(long, default_value_t = 1.0)]
        cutoff: f64,
        #[arg(long, value_enum, default_value_t = Side::Below)]
        side: Side,
        #[arg(long, default_value = "0,2,4,6,8")]
        z: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Geometry,
    Kernel,
    Schoenberg,
    Pipeline,
    All,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Module(htype_core::Error),
    Io(std::io::Error),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Module(_) => "module",
            Self::Io(_) => "io",
            Self::Invariant(_) => "invariant",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(s) | Self::Invariant(s) => f.write_str(s),
            Self::Module(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<htype_core::Error> for CliError {
    fn from(e: htype_core::Error) -> Self {
        Self::Module(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses and runs one invocation, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error kind={} message={msg:?}", e.kind());
            e.exit_code()
        }
    }
}

/// Resolved configuration and output location of one run.
struct RunContext {
    config: ExperimentConfig,
    root: PathBuf,
    dir: PathBuf,
    manifest: RunManifest,
}

impl RunContext {
    fn new(cli: &Cli) -> CliResult<Self> {
        let mut config = match &cli.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = cli.seed {
            config.set("seed", s);
        }
        let root = std::env::var_os("CARNOT_HEAT_OUT")
            .map(PathBuf::from)
            .or_else(|| cli.out.clone())
            .or_else(|| config.get("out_dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("carnot-heat-out"));
        let (name, key) = command_key(&cli.command);
        let hash = hex(&Sha256::digest(format!("{}\u{1f}{key}", config.canonical()).as_bytes()));
        let dir = root.join(format!("{name}-{}", &hash[..16]));
        std::fs::create_dir_all(&dir)?;
        Ok(Self { config, root, dir, manifest: RunManifest::new(name, &hash) })
    }

    fn dims(&self, d: Dims) -> CliResult<(usize, usize)> {
        let get = |flag: Option<usize>, key: &str| -> CliResult<usize> {
            Ok(match flag {
                Some(v) => v,
                None => self.config.get_u64(key)?.map_or(1, |v| v as usize),
            })
        };
        Ok((get(d.n, "n")?, get(d.m, "m")?))
    }

    fn quadrature(&self) -> CliResult<QuadratureParams> {
        let mut q = QuadratureParams::default();
        if let Some(v) = self.config.get_u64("nodes_per_panel")? {
            q.nodes_per_panel = v as usize;
        }
        if let Some(v) = self.config.get_f64("tail_tol")? {
            q.tail_tol = v;
        }
        if let Some(v) = self.config.get_f64("refinement")? {
            q.refinement = v;
        }
        Ok(q)
    }

    fn grid(&self, n: usize, m: usize) -> CliResult<GridSpec> {
        let c = &self.config;
        let cx = c.get_u64("grid_x_count")?.unwrap_or(25) as usize;
        let hx = c.get_f64("grid_x_spacing")?.unwrap_or(0.5);
        let cz = c.get_u64("grid_z_count")?.unwrap_or(33) as usize;
        let hz = c.get_f64("grid_z_spacing")?.unwrap_or(0.5);
        Ok(GridSpec::centered(n, m, cx, hx, cz, hz)?)
    }

    fn timed<T>(&mut self, op: &str, f: impl FnOnce() -> CliResult<T>) -> CliResult<T> {
        let start = Instant::now();
        let v = f()?;
        self.manifest.timings.push((op.to_string(), start.elapsed()));
        Ok(v)
    }

    fn write_file(&mut self, name: &str, bytes: &[u8]) -> CliResult<()> {
        std::fs::write(self.dir.join(name), bytes)?;
        self.manifest.files.push(name.to_string());
        Ok(())
    }

    fn write_grid(&mut self, name: &str, g: &GridFunction) -> CliResult<()> {
        let mut buf = Vec::new();
        gridio::write_grid(&mut buf, g)?;
        self.write_file(name, &buf)
    }

    fn finish(&self) -> CliResult<()> {
        self.manifest.write(&self.dir)?;
        Ok(())
    }
}

fn command_key(c: &Command) -> (&'static str, String) {
    let name = match c {
        Command::Distance { .. } => "distance",
        Command::Kernel { .. } => "kernel",
        Command::Evolve { .. } => "evolve",
        Command::Schoenberg { .. } => "schoenberg",
        Command::Sharpness { .. } => "sharpness",
        Command::Verify { .. } => "verify",
    };
    (name, format!("{c:?}"))
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("malformed number {p:?} in {s:?}")))
        .collect()
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    let bad = || format!("malformed time {s:?}");
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "+" | "" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn usage(e: String) -> CliError {
    CliError::Usage(e)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let mut ctx = RunContext::new(cli)?;
    let result = dispatch(cli, &mut ctx, out, err);
    ctx.finish()?;
    result
}

fn dispatch(cli: &Cli, ctx: &mut RunContext, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let ctx = &mut *ctx;
    Ok(match &cli.command {
        Command::Distance { x, z, sweep_theta, random } => {
            cmd_distance(ctx, x.as_deref(), z.as_deref(), *sweep_theta, *random, out)?
        }
        Command::Kernel { dims, t, at } => cmd_kernel(ctx, *dims, t, at.as_deref(), out)?,
        Command::Evolve { dims, input, init_time, t, eps } => {
            cmd_evolve(ctx, *dims, input.as_deref(), *init_time, *t, *eps, out, err)?
        }
        Command::Schoenberg { action } => cmd_schoenberg(ctx, action, out, err)?,
        Command::Sharpness { t_final, eps } => cmd_sharpness(ctx, *t_final, eps, out)?,
        Command::Verify { suite } => cmd_verify(ctx, *suite, out)?,
    })
}

fn emit(ctx: &mut RunContext, name: &str, csv: &Csv, out: &mut dyn Write) -> CliResult<()> {
    ctx.write_file(name, csv.as_str().as_bytes())?;
    out.write_all(csv.as_str().as_bytes())?;
    Ok(())
}

fn cmd_distance(
    ctx: &mut RunContext,
    x: Option<&str>,
    z: Option<&str>,
    sweep: Option<usize>,
    random: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    match (x, z) {
        (Some(x), Some(z)) => {
            let (xv, zv) = (parse_list(x).map_err(usage)?, parse_list(z).map_err(usage)?);
            if xv.len() % 2 != 0 {
                return Err(usage(format!("--x needs an even number of coordinates, got {}", xv.len())));
            }
            build_structure(xv.len() / 2, zv.len()).map_err(|e| usage(e.to_string()))?;
            let g = GroupPoint::new(xv, zv);
            points.push((g.x_norm(), g.z_norm()));
        }
        (None, None) => {}
        _ => return Err(usage("--x and --z go together".into())),
    }
    if let Some(k) = sweep {
        for i in 0..k {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / k as f64;
            points.push((1.0, nu(theta)? / 4.0));
        }
    }
    if let Some(k) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed()?);
        for _ in 0..k {
            points.push((10f64.powf(rng.random_range(-3.0..3.0)), 10f64.powf(rng.random_range(-3.0..3.0))));
        }
    }
    if points.is_empty() {
        return Err(usage("give --x/--z, --sweep-theta or --random".into()));
    }
    let mut csv = Csv::new(&["x_norm", "z_norm", "theta", "d", "ratio"]);
    ctx.timed("distance", || {
        for &(xn, zn) in &points {
            let d = distance_from_norms(xn, zn)?;
            let ratio = if xn == 0.0 && zn == 0.0 { f64::NAN } else { ratio_sample(xn, zn)?.ratio };
            csv.row(&[xn, zn, d.theta, d.d, ratio]);
        }
        Ok(())
    })?;
    emit(ctx, "distance.csv", &csv, out)?;
    Ok(EXIT_OK)
}

fn cmd_kernel(ctx: &mut RunContext, dims: Dims, t: &str, at: Option<&str>, out: &mut dyn Write) -> CliResult<i32> {
    let (n, m) = ctx.dims(dims)?;
    let t = parse_complex(t).map_err(usage)?;
    let k = KernelEvaluator::with_params(n, m, ctx.quadrature()?).map_err(|e| usage(e.to_string()))?;
    match at {
        Some(at) => {
            let v = parse_list(at).map_err(usage)?;
            if v.len() != 2 || v[0] < 0.0 || v[1] < 0.0 {
                return Err(usage("--at takes the norms |x|,|z|".into()));
            }
            let p = ctx.timed("kernel", || Ok(k.eval(t, v[0] * v[0], v[1])?))?;
            let mut csv = Csv::new(&["t_re", "t_im", "x_norm", "z_norm", "p_re", "p_im"]);
            csv.row(&[t.re, t.im, v[0], v[1], p.re, p.im]);
            emit(ctx, "kernel.csv", &csv, out)?;
        }
        None => {
            let spec = ctx.grid(n, m)?;
            let g = ctx.timed("kernel_grid", || Ok(k.sample(t, &spec)?))?;
            ctx.write_grid("kernel.htgf", &g)?;
            let mut csv = Csv::new(&["t_re", "t_im", "max_abs", "boundary_max"]);
            csv.row(&[t.re, t.im, g.max_abs(), g.boundary_max()]);
            emit(ctx, "kernel_summary.csv", &csv, out)?;
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    ctx: &mut RunContext,
    dims: Dims,
    input: Option<&Path>,
    init_time: f64,
    t: f64,
    eps: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let u0 = match input {
        Some(p) => gridio::read_grid(&mut std::fs::File::open(p)?)?,
        None => {
            let (n, m) = ctx.dims(dims)?;
            let spec = ctx.grid(n, m)?;
            let k = KernelEvaluator::with_params(n, m, ctx.quadrature()?)?;
            k.sample(Complex64::new(init_time, 0.0), &spec)?
        }
    };
    let s = build_structure(u0.spec().n(), u0.spec().m())?;
    let u = ctx.timed("evolve", || Ok(free_evolve(&s, &u0, t, eps)?))?;
    if let Some(b) = u.meta.truncation {
        writeln!(err, "warning kind=truncation boundary={b:e}")?;
    }
    ctx.write_grid("evolved.htgf", &u)?;
    let mut csv = Csv::new(&["t", "eps", "max_abs", "boundary_max"]);
    csv.row(&[t, eps.unwrap_or(0.05 * t), u.max_abs(), u.boundary_max()]);
    emit(ctx, "evolve.csv", &csv, out)?;
    Ok(EXIT_OK)
}

/// Measure CSV with a trailing `kkt` column, as stored in the cache.
fn measure_csv(mu: &SchoenbergMeasure, m: usize, with_kkt: bool) -> Csv {
    let mut header = vec!["tau", "weight", "x_norm", "n", "m", "residual"];
    if with_kkt {
        header.push("kkt");
    }
    let mut csv = Csv::new(&header);
    for a in mu.support() {
        let mut row = vec![a.tau, a.weight, mu.x_norm, mu.n as f64, m as f64, mu.fit_residual];
        if with_kkt {
            row.push(mu.kkt);
        }
        csv.row(&row);
    }
    csv
}

/// Fits the measure or loads it from the content-addressed cache.
fn cached_measure(ctx: &mut RunContext, n: usize, m: usize, x_norm: f64) -> CliResult<SchoenbergMeasure> {
    let (tau, u) = (default_tau_grid(), default_u_grid());
    let mut h = Sha256::new();
    h.update(x_norm.to_le_bytes());
    h.update((n as u64).to_le_bytes());
    h.update((m as u64).to_le_bytes());
    for v in tau.iter().chain(&u) {
        h.update(v.to_le_bytes());
    }
    let cache_dir = ctx.root.join("cache");
    let path = cache_dir.join(format!("schoenberg-{}.csv", hex(&h.finalize())));
    if let Ok(text) = std::fs::read_to_string(&path) {
        let (_, rows) = csv::parse(&text).map_err(|e| CliError::Invariant(format!("corrupt cache {}: {e}", path.display())))?;
        if let Some(first) = rows.first() {
            return Ok(SchoenbergMeasure {
                atoms: rows.iter().map(|r| Atom { tau: r[0], weight: r[1] }).collect(),
                x_norm,
                n,
                fit_residual: first[5],
                kkt: first[6],
            });
        }
    }
    let mu = ctx.timed("schoenberg_fit", || Ok(fit_measure(n, x_norm, &tau, &u)?))?;
    std::fs::create_dir_all(&cache_dir)?;
    std::fs::write(&path, measure_csv(&mu, m, true).as_str())?;
    Ok(mu)
}

fn cmd_schoenberg(ctx: &mut RunContext, action: &SchoenbergCmd, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match action {
        SchoenbergCmd::Fit { dims, x_norm } => {
            let (n, m) = ctx.dims(*dims)?;
            let mu = cached_measure(ctx, n, m, *x_norm)?;
            emit(ctx, "measure.csv", &measure_csv(&mu, m, false), out)?;
        }
        SchoenbergCmd::Reconstruct { dims, x_norm, z } => {
            let (n, m) = ctx.dims(*dims)?;
            let zs = parse_list(z).map_err(usage)?;
            let mu = cached_measure(ctx, n, m, *x_norm)?;
            let k = KernelEvaluator::with_params(n, m, ctx.quadrature()?)?;
            let mut csv = Csv::new(&["z_norm", "reconstructed", "kernel", "rel_error"]);
            for zn in zs {
                let r = reconstruct_kernel_slice(&mu, m, zn);
                let p = k.eval_real(1.0, x_norm * x_norm, zn)?;
                csv.row(&[zn, r, p, (r / p - 1.0).abs()]);
            }
            emit(ctx, "reconstruct.csv", &csv, out)?;
        }
        SchoenbergCmd::Counterexample { dims, x_norm, cutoff, side, z } => {
            let (n, m) = ctx.dims(*dims)?;
            let zs = parse_list(z).map_err(usage)?;
            let mu = cached_measure(ctx, n, m, *x_norm)?;
            let side = match side {
                Side::Above => CutoffSide::Above,
                Side::Below => CutoffSide::Below,
            };
            let c = build_counterexample(&mu, *cutoff, m, side)?;
            if let Some(w) = c.warning {
                writeln!(err, "warning kind=counterexample detail={w:?}")?;
            }
            let k = KernelEvaluator::with_params(n, m, ctx.quadrature()?)?;
            let mut csv = Csv::new(&["z_norm", "f", "p1", "ratio"]);
            for zn in zs {
                let f = c.eval(zn);
                let p = k.eval_real(1.0, x_norm * x_norm, zn)?;
                csv.row(&[zn, f, p, f / p]);
            }
            emit(ctx, "counterexample.csv", &csv, out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sharpness(ctx: &mut RunContext, t_final: f64, eps: &str, out: &mut dyn Write) -> CliResult<i32> {
    let eps = parse_list(eps).map_err(usage)?;
    if !(t_final > 0.0) || eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(usage("need T > 0 and every eps in (0, 1)".into()));
    }
    let rows = ctx.timed("sharpness", || Ok(sharpness_experiment(&eps, t_final, SharpnessOptions::default())?))?;
    let mut csv = Csv::new(&["eps", "T", "a2", "b2", "product", "ratio", "fit_rms"]);
    for r in rows {
        csv.row(&[r.eps, r.t_final, r.a2, r.b2, r.product, r.ratio, r.fit_rms]);
    }
    emit(ctx, "sharpness.csv", &csv, out)?;
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &mut RunContext, suite: Suite, out: &mut dyn Write) -> CliResult<i32> {
    // Suites are pinned to seed 0 unless a seed is configured.
    let seed = ctx.config.get_u64("seed")?.unwrap_or(0);
    let names: Vec<&str> = match suite {
        Suite::All => verify::SUITES.to_vec(),
        s => vec![verify::SUITES.iter().copied().find(|n| format!("{s:?}").eq_ignore_ascii_case(n)).expect("suite")],
    };
    let mut text = String::new();
    let mut all = true;
    for name in names {
        let lines = ctx.timed(name, || Ok(verify::run_suite(name, seed)?))?;
        for l in lines {
            all &= l.pass;
            text.push_str(&format!("{l}\n"));
        }
    }
    ctx.write_file("verify.txt", text.as_bytes())?;
    out.write_all(text.as_bytes())?;
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_time_forms() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), Complex64::new(0.5, -0.25));
        assert_eq!(parse_complex("1e-3+1e+2i").unwrap(), Complex64::new(1e-3, 1e2));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("1+i").unwrap(), Complex64::new(1.0, 1.0));
        assert!(parse_complex("x").is_err());
    }
}
