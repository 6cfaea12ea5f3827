//! Command-line front end for the `tfloc` binary.
//!
//! Every command prints a JSON summary carrying `"schema": 1` to standard output. Tabular data
//! goes to the file named by `--csv`. Exit codes: 2 for input errors, 3 for numerical
//! nonconvergence, 4 for degenerate fits.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::deficit_lab::{self, BetaParams, GridSweepOptions, Region, SweepReport};
use crate::error::Error;
use crate::hs_engine::{self, GridMethod, Stencil};
use crate::hyperbolic::{self, CauchyWavelet};
use crate::phase_space::{io, GridRegion, GridSpec, IntervalSet, RadialRegion, Shape};
use crate::spectral;
use crate::stft::{self, Signal, Spectrogram};

pub const SCHEMA: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::QuadratureNonconvergence(_) | Error::Eigensolve(_) | Error::NonFinite(_)) => 3,
            CliError::Lib(Error::DegenerateFit(_)) => 4,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "tfloc", version, about = "Gaussian time-frequency localization operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum Command {
    /// Hilbert–Schmidt norm of a localization operator.
    Hs(HsArgs),
    /// Rearrangement deficit and asymmetry of one set.
    Deficit(DeficitArgs),
    /// Deficits along a family with a log-log exponent fit.
    Sweep(SweepArgs),
    /// Eigenvalues of the discretized operator.
    Spectrum(SpectrumArgs),
    /// Spectrogram, isometry and Lieb checks.
    Stft(StftArgs),
    /// Half-plane kernel samples and ball descriptions.
    Hyper(HyperArgs),
    /// Write a rasterized region file.
    Region(RegionArgs),
    /// Run a command described by a JSON configuration file.
    #[serde(skip)]
    Run(RunArgs),
}

/// A JSON file `{"command": "...", "params": {...}}` with the same parameters as the flags.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StencilArg {
    Point,
    CellAverage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Direct,
    Convolution,
}

/// Set selection shared by several commands; exactly one source must be given.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetArgs {
    /// Ball of this radius about the origin.
    #[arg(long)]
    pub ball: Option<f64>,
    /// Region file in the RGN1 format.
    #[arg(long)]
    pub region: Option<PathBuf>,
    /// Two discs given as `radius,separation`.
    #[arg(long)]
    pub discs: Option<String>,
    /// Dumbbell of outer radius r.
    #[arg(long)]
    pub dumbbell: Option<f64>,
    /// Ball with a shell moved outward, parameter ε in (0, 1).
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
    /// Dimension d; phase space is 2d-dimensional. Only radial sets allow d > 1.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Cell size used when a shape is rasterized for the grid route.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_enum, default_value_t = StencilArg::Point)]
    pub stencil: StencilArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Convolution)]
    pub method: MethodArg,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeficitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Use the weight without the continuity factor above measure 1.
    #[arg(long)]
    pub discontinuous_beta: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Eps,
    Dilate,
    Dumbbell,
    Conj2,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Eps => "eps",
            Family::Dilate => "dilate",
            Family::Dumbbell => "dumbbell",
            Family::Conj2 => "conj2",
        }
    }
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// ε values: a comma list or `lo:hi:n` with geometric spacing.
    #[arg(long, default_value = "0.02:0.2:8")]
    pub eps: String,
    /// Dilation factors or dumbbell radii; defaults depend on the family.
    #[arg(long)]
    pub r: Option<String>,
    /// Indicator-kernel radii for the probe.
    #[arg(long, default_value = "0.05:0.4:6")]
    pub b: String,
    /// Interval union for the probe, as `a:b,c:d`.
    #[arg(long, default_value = "0:1,3:4.5")]
    pub intervals: String,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Grid cells per unit of r for the grid families.
    #[arg(long)]
    pub cells_per_r: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    #[arg(long, default_value_t = spectral::DEFAULT_CELL_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Demo {
    Gaussian,
    Hermite,
    Random,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StftArgs {
    #[arg(long, value_enum, default_value_t = Demo::Gaussian)]
    pub demo: Demo,
    /// Hermite order for the `hermite` demo.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Also check the Lieb bound at this exponent in [2, 8].
    #[arg(long)]
    pub lieb: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HyperArgs {
    /// Sample the kernel on [0, t-max].
    #[arg(long)]
    pub kernel: bool,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Describe the ball of this radius about i.
    #[arg(long)]
    pub ball: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! default_from_flags {
    ($($t:ty),*) => {$(
        impl Default for $t {
            fn default() -> Self {
                #[derive(Parser)]
                struct Wrap {
                    #[command(flatten)]
                    inner: $t,
                }
                Wrap::parse_from(["tfloc"]).inner
            }
        }
    )*};
}

default_from_flags!(HsArgs, DeficitArgs, SweepArgs, SpectrumArgs, StftArgs, HyperArgs, RegionArgs);

/// Parses arguments, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("TFLOC_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("TFLOC_THREADS must be a positive integer, got {v:?}")))?;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Hs(a) => cmd_hs(&a, out),
        Command::Deficit(a) => cmd_deficit(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Stft(a) => cmd_stft(&a, out),
        Command::Hyper(a) => cmd_hyper(&a, out),
        Command::Region(a) => cmd_region(&a, out),
        Command::Run(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let config: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
            if matches!(config.command, Command::Run(_)) {
                return Err(CliError::Usage("a configuration cannot run another configuration".into()));
            }
            execute(config.command, out)
        }
    }
}

fn emit(summary: Value, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let mut summary = summary;
    if let Value::Object(map) = &mut summary {
        map.insert("schema".into(), json!(SCHEMA));
    }
    let text = serde_json::to_string_pretty(&summary)?;
    writeln!(out, "{text}")?;
    if let Some(p) = path {
        std::fs::write(p, format!("{text}\n"))?;
    }
    Ok(())
}

fn write_csv<S: Serialize>(path: Option<&Path>, rows: &[S]) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

/// A comma list of numbers, or `lo:hi:n` for `n` geometrically spaced values.
pub fn parse_list(text: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("cannot parse number list {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return Err(CliError::Usage(format!("range {text:?} needs 0 < lo < hi and n >= 2")));
        }
        return Ok((0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect());
    }
    text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn parse_intervals(text: &str) -> CliResult<IntervalSet> {
    let bad = || CliError::Usage(format!("cannot parse intervals {text:?}"));
    let pairs = text
        .split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect::<CliResult<Vec<(f64, f64)>>>()?;
    Ok(IntervalSet::new(pairs)?)
}

enum Selected {
    Grid(GridRegion),
    Radial(RadialRegion),
    Shape(Shape),
}

fn select(set: &SetArgs, d: usize) -> CliResult<Selected> {
    let given = [set.ball.is_some(), set.region.is_some(), set.discs.is_some(), set.dumbbell.is_some(), set.eps.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if given != 1 {
        return Err(CliError::Usage("give exactly one of --ball, --region, --discs, --dumbbell, --eps".into()));
    }
    if d == 0 {
        return Err(CliError::Usage("--d must be positive".into()));
    }
    let planar_only = |what: &str| -> CliResult<()> {
        if d != 1 {
            return Err(CliError::Usage(format!("{what} is planar; use --d 1")));
        }
        Ok(())
    };
    if let Some(r) = set.ball {
        return Ok(Selected::Radial(RadialRegion::ball(2 * d, positive("ball", r)?)?));
    }
    if let Some(e) = set.eps {
        return Ok(Selected::Radial(deficit_lab::family_eps(e, d)?));
    }
    if let Some(p) = &set.region {
        planar_only("--region")?;
        return Ok(Selected::Grid(io::load_region(p)?));
    }
    if let Some(text) = &set.discs {
        planar_only("--discs")?;
        let v = parse_list(text)?;
        let [radius, sep] = v[..] else {
            return Err(CliError::Usage("--discs takes radius,separation".into()));
        };
        return Ok(Selected::Shape(Shape::two_discs(radius, sep)?));
    }
    let r = set.dumbbell.expect("one source given");
    planar_only("--dumbbell")?;
    Ok(Selected::Shape(deficit_lab::dumbbell_shape(r)?))
}

fn shape_grid(shape: &Shape, h: f64) -> CliResult<GridSpec> {
    let (lo, hi) = shape.bounding_box().ok_or(Error::EmptyRegion)?;
    let pad = 2.0 * h;
    Ok(GridSpec::covering([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad], h)?)
}

fn cmd_hs(a: &HsArgs, out: &mut dyn Write) -> CliResult<()> {
    let stencil = match a.stencil {
        StencilArg::Point => Stencil::Point,
        StencilArg::CellAverage => Stencil::CellAverage,
    };
    let method = match a.method {
        MethodArg::Direct => GridMethod::Direct,
        MethodArg::Convolution => GridMethod::Convolution,
    };
    let result = match (select(&a.set, a.d)?, a.h) {
        (Selected::Grid(g), _) => hs_engine::hs_norm_sq_grid(&g.to_field(), method, stencil)?,
        (Selected::Radial(r), None) => hs_engine::hs_norm_sq_radial(&r)?,
        (Selected::Shape(s), None) => hs_engine::hs_norm_sq_shape(&s)?,
        (Selected::Radial(r), Some(h)) => {
            if r.d() != 1 {
                return Err(CliError::Usage("grids are planar; use --d 1 with --h".into()));
            }
            let s = Shape::radial([0.0, 0.0], r)?;
            let spec = shape_grid(&s, positive("h", h)?)?;
            hs_engine::hs_norm_sq_grid(&s.rasterize(&spec)?.to_field(), method, stencil)?
        }
        (Selected::Shape(s), Some(h)) => {
            let spec = shape_grid(&s, positive("h", h)?)?;
            hs_engine::hs_norm_sq_grid(&s.rasterize(&spec)?.to_field(), method, stencil)?
        }
    };
    emit(serde_json::to_value(result)?, a.json.as_deref(), out)
}

fn cmd_deficit(a: &DeficitArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut params = BetaParams::new(a.d.max(1));
    params.continuous = !a.discontinuous_beta;
    let region = match select(&a.set, a.d)? {
        Selected::Grid(g) => Region::Grid(g),
        Selected::Radial(r) => Region::Radial(r),
        Selected::Shape(s) => Region::Shape(s),
    };
    let report = deficit_lab::deficit(&region, &params)?;
    emit(serde_json::to_value(report)?, a.json.as_deref(), out)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let family = a.family.ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let grid_opts = |mut o: GridSweepOptions| -> CliResult<GridSweepOptions> {
        if let Some(c) = a.cells_per_r {
            o.cells_per_unit = positive("cells-per-r", c)?;
        }
        Ok(o)
    };
    let report: SweepReport = match family {
        Family::Eps => deficit_lab::sweep_eps(&parse_list(&a.eps)?, a.d)?,
        Family::Dilate => {
            let rs = parse_list(a.r.as_deref().unwrap_or("0.05:0.25:6"))?;
            deficit_lab::sweep_dilate(&deficit_lab::default_dilate_base(), &rs, &grid_opts(GridSweepOptions::dilate())?)?
        }
        Family::Dumbbell => {
            let rs = parse_list(a.r.as_deref().unwrap_or("2,3,4,6"))?;
            deficit_lab::sweep_dumbbell(&rs, &grid_opts(GridSweepOptions::dumbbell())?)?
        }
        Family::Conj2 => deficit_lab::sweep_probe_line(&parse_intervals(&a.intervals)?, &parse_list(&a.b)?, a.delta)?,
    };
    write_csv(a.csv.as_deref(), &report.rows)?;
    let summary = json!({
        "family": family.name(),
        "abscissa": report.abscissa,
        "alpha_source": report.alpha_source,
        "slope": report.fit.slope,
        "intercept": report.fit.intercept,
        "residual": report.fit.residual,
        "points": report.fit.points,
    });
    emit(summary, a.json.as_deref(), out)
}

#[derive(Serialize)]
struct EigenRow {
    index: usize,
    eigenvalue: f64,
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> CliResult<()> {
    let h = positive("h", a.h)?;
    let region = match select(&a.set, 1)? {
        Selected::Grid(g) => g,
        Selected::Radial(r) => {
            let s = Shape::radial([0.0, 0.0], r)?;
            s.rasterize(&shape_grid(&s, h)?)?
        }
        Selected::Shape(s) => s.rasterize(&shape_grid(&s, h)?)?,
    };
    let result = spectral::spectrum(&region, a.cap)?;
    let rows: Vec<EigenRow> =
        result.eigenvalues.iter().enumerate().map(|(index, &eigenvalue)| EigenRow { index, eigenvalue }).collect();
    write_csv(a.csv.as_deref(), &rows)?;
    let summary = json!({
        "cells": result.eigenvalues.len(),
        "h": result.h,
        "omega_measure": result.omega_measure,
        "trace": result.trace(),
        "lambda_max": result.lambda_max(),
        "schatten": result.schatten,
    });
    emit(summary, a.json.as_deref(), out)
}

#[derive(Serialize)]
struct SpectrogramRow {
    x: f64,
    omega: f64,
    value: f64,
}

fn cmd_stft(a: &StftArgs, out: &mut dyn Write) -> CliResult<()> {
    let (half_width, dt, spec) = stft::demo_setup();
    let signal = match a.demo {
        Demo::Gaussian => Signal::gaussian(half_width, dt)?,
        Demo::Hermite => {
            if a.order > 6 {
                return Err(CliError::Usage(format!("--order {} exceeds the demo grid's limit of 6", a.order)));
            }
            let mut c = vec![num_complex::Complex64::new(0.0, 0.0); a.order + 1];
            c[a.order] = num_complex::Complex64::new(1.0, 0.0);
            stft::hermite_signal(&c, half_width, dt)?
        }
        Demo::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            stft::hermite_signal(&stft::random_hermite_coeffs(&mut rng, 6), half_width, dt)?
        }
    };
    let s = Spectrogram::new(&signal, &spec)?;
    if a.csv.is_some() {
        let rows: Vec<SpectrogramRow> = (0..spec.len())
            .map(|k| {
                let [x, omega] = spec.center_of(k);
                SpectrogramRow { x, omega, value: s.values()[k] }
            })
            .collect();
        write_csv(a.csv.as_deref(), &rows)?;
    }
    let norm_sq = signal.norm_sq();
    let mut summary = json!({
        "norm_sq": norm_sq,
        "energy": s.total_energy(),
        "isometry_gap": (s.total_energy() - norm_sq).abs() / norm_sq,
    });
    if let Some(p) = a.lieb {
        if !(2.0..=8.0).contains(&p) {
            return Err(CliError::Usage(format!("--lieb {p} must lie in [2, 8]")));
        }
        summary["lieb"] = serde_json::to_value(stft::lieb_from_spectrogram(&s, norm_sq, p))?;
    }
    emit(summary, a.json.as_deref(), out)
}

#[derive(Serialize)]
struct KernelRow {
    t: f64,
    rho: f64,
}

fn cmd_hyper(a: &HyperArgs, out: &mut dyn Write) -> CliResult<()> {
    if !a.kernel && a.ball.is_none() {
        return Err(CliError::Usage("give --kernel, --ball, or both".into()));
    }
    let w = CauchyWavelet::new(positive("beta", a.beta)?)?;
    let mut summary = json!({ "beta": w.beta, "c_beta": w.c_beta, "kernel_constant": w.kernel_constant });
    if a.kernel {
        if a.samples < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }
        let t_max = positive("t-max", a.t_max)?;
        let rows = (0..a.samples)
            .map(|k| {
                let t = t_max * k as f64 / (a.samples - 1) as f64;
                Ok(KernelRow { t, rho: w.kernel(t)? })
            })
            .collect::<CliResult<Vec<_>>>()?;
        summary["monotone"] = json!(rows.windows(2).all(|p| p[0].rho > p[1].rho));
        write_csv(a.csv.as_deref(), &rows)?;
    }
    if let Some(r) = a.ball {
        summary["ball"] = serde_json::to_value(hyperbolic::hyp_ball(positive("ball", r)?)?)?;
    }
    emit(summary, a.json.as_deref(), out)
}

fn cmd_region(a: &RegionArgs, out: &mut dyn Write) -> CliResult<()> {
    let path = a.out.as_deref().ok_or_else(|| CliError::Usage("--out is required".into()))?;
    let h = positive("h", a.h)?;
    let region = match select(&a.set, 1)? {
        Selected::Grid(g) => g,
        Selected::Radial(r) => {
            let s = Shape::radial([0.0, 0.0], r)?;
            s.rasterize(&shape_grid(&s, h)?)?
        }
        Selected::Shape(s) => s.rasterize(&shape_grid(&s, h)?)?,
    };
    io::save_region(&region, path)?;
    let spec = region.spec();
    emit(json!({ "cells": region.count(), "measure": region.measure(), "nx": spec.nx, "ny": spec.ny, "h": spec.h }), None, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("tfloc").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("2,3,4").unwrap(), vec![2.0, 3.0, 4.0]);
        let g = parse_list("0.02:0.2:8").unwrap();
        assert_eq!(g.len(), 8);
        assert!((g[0] - 0.02).abs() < 1e-15 && (g[7] - 0.2).abs() < 1e-15);
        assert!(parse_list("0.2:0.02:8").is_err());
        assert!(parse_list("a,b").is_err());
    }

    #[test]
    fn hs_ball() {
        let (code, out, _) = run(&["hs", "--ball", "1", "--d", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert!((v["hs_sq"].as_f64().unwrap() - 2.1621542366).abs() < 1e-9);
        assert_eq!(v["method"], "radial_bessel");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["sweep", "--family", "bogus"]).0, 2);
        assert_eq!(run(&["hs", "--region", "/nonexistent/file.rgn"]).0, 2);
        assert_eq!(run(&["sweep", "--family", "eps", "--eps", "0.1,0.2"]).0, 4);
        assert_eq!(run(&["hs"]).0, 2);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let ok: RunConfig = serde_json::from_str(r#"{"command": "hs", "params": {"ball": 1.0}}"#).unwrap();
        assert!(matches!(ok.command, Command::Hs(ref a) if a.set.ball == Some(1.0) && a.d == 1));
        assert!(serde_json::from_str::<RunConfig>(r#"{"command": "hs", "params": {"bal": 1.0}}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"command": "hs", "params": {}, "x": 1}"#).is_err());
    }
}
