//! Command-line front end for the `tomo` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::figure::{figure_data, write_figure_csv, DEFAULT_BETA_POINTS, MAX_TWICE_J};
use crate::halfint::HalfInt;
use crate::kernels::{kernel_closed, kernel_numeric, KernelKind};
use crate::matrix::{DensityMatrix, StateDiagnostics};
use crate::su2::EulerAngles;
use crate::tomography::{make_grid, read_tomogram_csv, reconstruct, sample_tomogram, SpinContext, TomographyPoint};
use crate::verify::{self, VerifyOptions};

/// Largest 2j for the quadrature-based commands.
pub const MAX_QUADRATURE_TWICE_J: i32 = 11;

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Tomogram,
    Reconstruct,
    Kernel,
    Verify,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Delta,
    Star,
    Dual,
}

impl From<KernelArg> for KernelKind {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Delta => KernelKind::Delta,
            KernelArg::Star => KernelKind::Star,
            KernelArg::Dual => KernelKind::Dual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Numeric,
    Closed,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "tomo", version, about = "Spin tomograms, reconstruction and star-product kernels")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Twice the spin, e.g. 1 for spin 1/2.
    #[arg(long = "j", value_name = "TWICE_J")]
    pub twice_j: Option<i32>,

    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,

    #[arg(long = "out", value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = 1)]
    pub oversample: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Normalization tolerance for tomogram/reconstruct; replaces every
    /// check tolerance for verify.
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long, value_enum, default_value_t = KernelArg::Delta)]
    pub kernel: KernelArg,

    #[arg(long, value_enum, default_value_t = Form::Numeric)]
    pub form: Form,

    /// Number of β samples on [0, π] for figure data.
    #[arg(long, default_value_t = DEFAULT_BETA_POINTS)]
    pub beta_points: usize,

    #[arg(long, hide = true, default_value_t = 1.0)]
    pub perturb_quantizer: f64,
}

/// One tomographic point in kernel input files.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PointSpec {
    pub two_m: i32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PointSpec {
    fn to_point(self, j: HalfInt) -> Result<TomographyPoint> {
        let x = TomographyPoint::new(HalfInt::from_twice(self.two_m), EulerAngles::new(self.alpha, self.beta, self.gamma)?);
        x.check(j)?;
        Ok(x)
    }
}

#[derive(Debug, Serialize)]
struct KernelRow {
    index: usize,
    re: f64,
    im: f64,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}

/// 1 for numeric or verification failures, 2 for usage and input errors.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Singular { .. }
        | Error::Convergence { .. }
        | Error::Reconstruction(_)
        | Error::Singularity { .. }
        | Error::NonFinite(_) => 1,
        _ => 2,
    }
}

fn spin(config: &RunConfig, max_twice: i32) -> Result<HalfInt> {
    let tj = config.twice_j.ok_or_else(|| usage("--j is required"))?;
    if !(0..=max_twice).contains(&tj) {
        return Err(usage(format!("--j must lie in 0..={max_twice} for {:?}", config.command)));
    }
    Ok(HalfInt::from_twice(tj))
}

fn input(config: &RunConfig) -> Result<&Path> {
    config.input.as_deref().ok_or_else(|| usage("--in is required"))
}

fn output(config: &RunConfig) -> Result<&Path> {
    config.output.as_deref().ok_or_else(|| usage("--out is required"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn tolerance(config: &RunConfig) -> Result<f64> {
    match config.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(usage("--tol must be positive")),
        Some(t) => Ok(t),
        None => Ok(DEFAULT_TOL),
    }
}

pub fn cmd_tomogram(config: &RunConfig) -> Result<i32> {
    let j = spin(config, MAX_QUADRATURE_TWICE_J)?;
    let tol = tolerance(config)?;
    let rho: DensityMatrix = serde_json::from_reader(BufReader::new(File::open(input(config)?)?))?;
    if rho.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: rho.dim() });
    }
    let grid = make_grid(j, config.oversample)?;
    let w = sample_tomogram(&rho, &grid)?;
    let mut out = create(output(config)?)?;
    crate::tomography::write_tomogram_csv(&w, &mut out)?;
    out.flush()?;
    let (sum_err, int_err) = (w.projection_sum_error(), w.integral_error());
    println!("rows {}", grid.len());
    println!("projection_sum_error {sum_err:e}");
    println!("integral_error {int_err:e}");
    Ok(if sum_err <= tol && int_err <= tol { 0 } else { 1 })
}

pub fn cmd_reconstruct(config: &RunConfig) -> Result<i32> {
    let j = spin(config, MAX_QUADRATURE_TWICE_J)?;
    let tol = tolerance(config)?;
    let w = read_tomogram_csv(BufReader::new(File::open(input(config)?)?), j)?;
    let rho = reconstruct(&w)?;
    let diag = StateDiagnostics::of(rho.matrix())?;
    let mut out = create(output(config)?)?;
    serde_json::to_writer_pretty(&mut out, &rho)?;
    writeln!(out)?;
    out.flush()?;
    println!("oversample {}", w.grid().oversample());
    println!("hermitian_deviation {:e}", diag.hermitian_deviation);
    println!("trace_error {:e}", diag.trace_error);
    println!("min_eigenvalue {:e}", diag.min_eigenvalue);
    Ok(if diag.hermitian_deviation <= tol && diag.trace_error <= tol { 0 } else { 1 })
}

pub fn cmd_kernel(config: &RunConfig) -> Result<i32> {
    let j = spin(config, MAX_QUADRATURE_TWICE_J)?;
    let kind = KernelKind::from(config.kernel);
    if config.form == Form::Closed && !matches!(j.twice(), 1 | 2) {
        return Err(usage("closed-form kernels exist only for --j 1 and --j 2"));
    }
    let specs: Vec<Vec<PointSpec>> = serde_json::from_reader(BufReader::new(File::open(input(config)?)?))?;
    let arity = if kind == KernelKind::Delta { 2 } else { 3 };
    let ctx = SpinContext::new(j)?;
    let mut rows = Vec::with_capacity(specs.len());
    for (index, entry) in specs.iter().enumerate() {
        if entry.len() != arity {
            return Err(Error::Parse(format!("entry {index}: expected {arity} points, got {}", entry.len())));
        }
        let points = entry.iter().map(|p| p.to_point(j)).collect::<Result<Vec<_>>>()?;
        // delta takes (x2, x1); x3 is unused
        let (x3, x2, x1) = match points.as_slice() {
            [x2, x1] => (*x2, *x2, *x1),
            [x3, x2, x1] => (*x3, *x2, *x1),
            _ => unreachable!(),
        };
        let value: Complex64 = match config.form {
            Form::Numeric => kernel_numeric(&ctx, kind, &x3, &x2, &x1)?,
            Form::Closed => kernel_closed(j, kind, &x3, &x2, &x1)?,
        };
        rows.push(KernelRow { index, re: value.re, im: value.im });
    }
    let mut writer = csv::Writer::from_writer(create(output(config)?)?);
    for row in &rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    println!("kernels {}", rows.len());
    Ok(0)
}

pub fn cmd_verify(config: &RunConfig) -> Result<i32> {
    if !config.perturb_quantizer.is_finite() {
        return Err(usage("invalid quantizer perturbation"));
    }
    let options = VerifyOptions {
        seed: config.seed,
        tolerance: config.tol.map(|_| tolerance(config)).transpose()?,
        quantizer_scale: config.perturb_quantizer,
    };
    let report = verify::run(options)?;
    let text = serde_json::to_string_pretty(&report)?;
    match &config.output {
        Some(path) => {
            let mut out = create(path)?;
            writeln!(out, "{text}")?;
            out.flush()?;
        }
        None => println!("{text}"),
    }
    let failed: Vec<&str> = report.checks.iter().filter(|c| c.required && !c.passed).map(|c| c.name.as_str()).collect();
    let informational = report.checks.iter().filter(|c| !c.required && !c.passed).count();
    eprintln!(
        "{} checks, {} failed, {} informational deviations",
        report.checks.len(),
        failed.len(),
        informational
    );
    for name in &failed {
        eprintln!("FAILED {name}");
    }
    Ok(if report.passed { 0 } else { 1 })
}

pub fn cmd_figure(config: &RunConfig) -> Result<i32> {
    let j = match config.twice_j {
        None => HalfInt::from_twice(MAX_TWICE_J),
        Some(_) => spin(config, MAX_TWICE_J)?,
    };
    let rows = figure_data(j, config.beta_points)?;
    let mut out = create(output(config)?)?;
    write_figure_csv(&rows, &mut out)?;
    out.flush()?;
    println!("rows {}", rows.len());
    println!("slice_sum_error {:e}", crate::figure::slice_sum_error(&rows));
    Ok(0)
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("TOMO_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("TOMO_THREADS must be a positive integer, got {value:?}")))?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(config: &RunConfig) -> Result<i32> {
    if config.oversample == 0 {
        return Err(usage("--oversample must be at least 1"));
    }
    configure_threads()?;
    match config.command {
        Command::Tomogram => cmd_tomogram(config),
        Command::Reconstruct => cmd_reconstruct(config),
        Command::Kernel => cmd_kernel(config),
        Command::Verify => cmd_verify(config),
        Command::Figure => cmd_figure(config),
    }
}

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
