//! Batch command-line front end.
//!
//! One invocation processes one input file. Every run writes the result
//! plus a `<output>.manifest` sidecar listing all effective parameters
//! and per-solve statistics; the manifest alone is enough to reproduce
//! the run byte-identically. Exit codes: 0 success, 2 bad flags, 3 I/O
//! failure, 4 solver produced non-finite values.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::background::{BackgroundParams, BackgroundResult};
use crate::gradients::{grad, GradientField};
use crate::histogram::{magnitude_histogram, threshold_field, write_histogram_csv};
use crate::image::{load_image, save_image, Error, Picture, Result};
use crate::pipeline::{self, PipelineConfig, StageReport};
use crate::solvers::{Norm, SolverConfig};

const EXIT_USAGE: i32 = 2;
const EXIT_IO: i32 = 3;
const EXIT_NUMERIC: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "edgehist",
    version,
    about = "Edge-preserving smoothing, edge extraction, details exaggeration \
             and document scan-through removal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smooth away low-contrast texture (image abstraction).
    Abstract(SmoothArgs),
    /// Binary edge map of the smoothed image.
    Edges(EdgesArgs),
    /// Amplify details around the smoothed base layer.
    Exaggerate(ExaggerateArgs),
    /// Remove scan-through interference, keeping background pixels fixed.
    Descan(DescanArgs),
    /// Dump gradient-magnitude histograms before and after thresholding.
    Histogram(HistogramArgs),
    /// Report the detected background window and level.
    DetectBg(DetectBgArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Gradient-magnitude threshold.
    #[arg(long, default_value_t = 15.0)]
    lambda: f64,
    /// Gaussian pre-smoothing standard deviation (0 = off).
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Outer threshold-then-solve iterations.
    #[arg(long, default_value_t = 3)]
    iters: usize,
    /// Data-term norm: 2 (FISTA) or 1 (ADMM). Defaults to 2, except for
    /// descan which defaults to 1.
    #[arg(long)]
    p: Option<u8>,
    /// ADMM penalty parameter.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Inner solver stopping tolerance.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Inner solver iteration cap.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Start every outer solve from the pre-smoothed input rather than
    /// the previous iterate.
    #[arg(long)]
    cold_start: bool,
    /// Write per-iteration solver traces to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Input image (PNG or binary PGM/PPM).
    input: PathBuf,
    /// Output image path; the manifest is written next to it.
    output: PathBuf,
}

#[derive(Args, Debug)]
struct SmoothArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct EdgesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Gradient magnitude at or above which a pixel counts as an edge.
    #[arg(long, default_value_t = 30.0)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct ExaggerateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Detail amplification factor.
    #[arg(long, default_value_t = 2.0)]
    s: f64,
}

#[derive(Args, Debug)]
struct DescanArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Background-window standard deviation bound.
    #[arg(long = "sigma-hat", default_value_t = 3.0)]
    sigma_hat: f64,
}

#[derive(Args, Debug)]
struct HistogramArgs {
    /// Gradient-magnitude threshold.
    #[arg(long, default_value_t = 15.0)]
    lambda: f64,
    /// Input image.
    input: PathBuf,
    /// Output prefix; writes `<prefix>.input.csv`,
    /// `<prefix>.thresholded.csv` and `<prefix>.manifest`.
    output: PathBuf,
}

#[derive(Args, Debug)]
struct DetectBgArgs {
    /// Gaussian pre-smoothing standard deviation (0 = off).
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// Background-window standard deviation bound.
    #[arg(long = "sigma-hat", default_value_t = 3.0)]
    sigma_hat: f64,
    /// Input image.
    input: PathBuf,
    /// Output report path (key=value text); the manifest sits next to it.
    output: PathBuf,
}

/// Parses `args` and runs the requested command, returning the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Unreadable { .. } | Error::Unsupported { .. } | Error::Io { .. } => EXIT_IO,
            Error::NonFinite { .. } | Error::OutOfRange { .. } | Error::DimensionMismatch { .. } => {
                EXIT_NUMERIC
            }
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn execute(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Abstract(args) => run_pipeline("abstract", args.common, None, None),
        Command::Edges(args) => {
            if args.threshold < 0.0 {
                return Err(usage_error("--threshold must be nonnegative"));
            }
            run_pipeline("edges", args.common, Some(args.threshold), None)
        }
        Command::Exaggerate(args) => {
            if args.s <= 0.0 {
                return Err(usage_error("--s must be positive"));
            }
            run_pipeline("exaggerate", args.common, None, Some(args.s))
        }
        Command::Descan(args) => {
            if args.sigma_hat <= 0.0 {
                return Err(usage_error("--sigma-hat must be positive"));
            }
            let mut common = args.common;
            common.p = Some(common.p.unwrap_or(1));
            run_pipeline_descan(common, args.sigma_hat)
        }
        Command::Histogram(args) => run_histogram(args),
        Command::DetectBg(args) => run_detect_bg(args),
    }
}

fn build_config(
    common: &CommonArgs,
    default_p: u8,
    s: Option<f64>,
    sigma_hat: Option<f64>,
) -> std::result::Result<PipelineConfig, Failure> {
    if common.lambda < 0.0 {
        return Err(usage_error("--lambda must be nonnegative"));
    }
    if common.sigma < 0.0 {
        return Err(usage_error("--sigma must be nonnegative"));
    }
    if common.iters == 0 {
        return Err(usage_error("--iters must be at least 1"));
    }
    if common.rho <= 0.0 {
        return Err(usage_error("--rho must be positive"));
    }
    if common.tol <= 0.0 {
        return Err(usage_error("--tol must be positive"));
    }
    if common.max_iter == 0 {
        return Err(usage_error("--max-iter must be at least 1"));
    }
    let p = common.p.unwrap_or(default_p);
    let norm = Norm::from_p(p).ok_or_else(|| usage_error("--p must be 1 or 2"))?;
    Ok(PipelineConfig {
        lambda: common.lambda,
        sigma: common.sigma,
        outer_iters: common.iters,
        exaggeration: s.unwrap_or(2.0),
        warm_start: !common.cold_start,
        solver: SolverConfig {
            norm,
            max_iter: common.max_iter,
            tol: common.tol,
            rho: common.rho,
            lipschitz: 16.0,
        },
        background: BackgroundParams {
            max_std: sigma_hat.unwrap_or(3.0),
        },
    })
}

fn run_pipeline(
    name: &str,
    common: CommonArgs,
    edge_threshold: Option<f64>,
    s: Option<f64>,
) -> std::result::Result<(), Failure> {
    let cfg = build_config(&common, 2, s, None)?;
    let picture = load_image(&common.input)?;
    let (result, reports): (Picture, Vec<StageReport>) = match (name, &picture) {
        ("abstract", Picture::Gray(img)) => {
            let (out, reports) = pipeline::smooth_traced(img, &cfg)?;
            (out.into(), reports)
        }
        ("abstract", Picture::Rgb(img)) => {
            let (out, reports) = pipeline::smooth_color_traced(img, &cfg)?;
            (out.into(), reports)
        }
        ("edges", Picture::Gray(img)) => {
            let (out, reports) =
                pipeline::edge_map_traced(img, &cfg, edge_threshold.unwrap())?;
            (out.into(), reports)
        }
        ("edges", Picture::Rgb(img)) => {
            let (out, reports) =
                pipeline::edge_map_color_traced(img, &cfg, edge_threshold.unwrap())?;
            (out.into(), reports)
        }
        ("exaggerate", Picture::Gray(img)) => {
            let (out, reports) = pipeline::exaggerate_traced(img, &cfg)?;
            (out.into(), reports)
        }
        ("exaggerate", Picture::Rgb(img)) => {
            let (out, reports) = pipeline::exaggerate_color_traced(img, &cfg)?;
            (out.into(), reports)
        }
        _ => unreachable!("pipeline dispatch"),
    };

    save_image(&result, &common.output)?;
    let mut manifest = Manifest::new(name, &common.input, &common.output);
    manifest.config(&cfg, &common);
    if let Some(threshold) = edge_threshold {
        manifest.push("threshold", threshold);
    }
    if let Some(s) = s {
        manifest.push("s", s);
    }
    manifest.channels(&picture);
    manifest.stages(&reports);
    manifest.write(manifest_path(&common.output))?;
    if let Some(trace_path) = &common.trace {
        write_trace_csv(trace_path, &reports)?;
    }
    Ok(())
}

fn run_pipeline_descan(common: CommonArgs, sigma_hat: f64) -> std::result::Result<(), Failure> {
    let cfg = build_config(&common, 1, None, Some(sigma_hat))?;
    let picture = load_image(&common.input)?;
    let (result, background, reports): (Picture, BackgroundResult, Vec<StageReport>) =
        match &picture {
            Picture::Gray(img) => {
                let (out, bg, reports) = pipeline::descan_traced(img, &cfg)?;
                (out.into(), bg, reports)
            }
            Picture::Rgb(img) => {
                let (out, bg, reports) = pipeline::descan_color_traced(img, &cfg)?;
                (out.into(), bg, reports)
            }
        };

    save_image(&result, &common.output)?;
    let mut manifest = Manifest::new("descan", &common.input, &common.output);
    manifest.config(&cfg, &common);
    manifest.push("sigma_hat", sigma_hat);
    manifest.background(&background);
    manifest.channels(&picture);
    manifest.stages(&reports);
    manifest.write(manifest_path(&common.output))?;
    if let Some(trace_path) = &common.trace {
        write_trace_csv(trace_path, &reports)?;
    }
    Ok(())
}

/// Per-channel gradient fields; the histogram diagnostics pool these.
fn channel_fields(picture: &Picture) -> Vec<GradientField> {
    match picture {
        Picture::Gray(img) => vec![grad(img)],
        Picture::Rgb(img) => img.channels().iter().map(grad).collect(),
    }
}

fn pooled_stats(fields: &[GradientField]) -> ([u64; 256], usize) {
    let mut bins = [0u64; 256];
    let mut nonzero = 0;
    for field in fields {
        let h = magnitude_histogram(field);
        for (total, add) in bins.iter_mut().zip(h) {
            *total += add;
        }
        nonzero += crate::histogram::nnz(field);
    }
    (bins, nonzero)
}

fn run_histogram(args: HistogramArgs) -> std::result::Result<(), Failure> {
    if args.lambda < 0.0 {
        return Err(usage_error("--lambda must be nonnegative"));
    }
    let picture = load_image(&args.input)?;
    let fields = channel_fields(&picture);
    let (before, nnz_before) = pooled_stats(&fields);
    let thresholded: Vec<GradientField> = fields
        .iter()
        .map(|f| threshold_field(f, args.lambda))
        .collect();
    let (after, nnz_after) = pooled_stats(&thresholded);

    let input_csv = suffixed(&args.output, ".input.csv");
    let thresholded_csv = suffixed(&args.output, ".thresholded.csv");
    write_histogram_csv(&input_csv, &before)?;
    write_histogram_csv(&thresholded_csv, &after)?;

    let mut manifest = Manifest::new("histogram", &args.input, &args.output);
    manifest.push("lambda", args.lambda);
    manifest.push("input_csv", input_csv.display());
    manifest.push("thresholded_csv", thresholded_csv.display());
    manifest.push("nnz_before", nnz_before);
    manifest.push("nnz_after", nnz_after);
    manifest.channels(&picture);
    manifest.write(manifest_path(&args.output))?;
    Ok(())
}

fn run_detect_bg(args: DetectBgArgs) -> std::result::Result<(), Failure> {
    if args.sigma < 0.0 {
        return Err(usage_error("--sigma must be nonnegative"));
    }
    if args.sigma_hat <= 0.0 {
        return Err(usage_error("--sigma-hat must be positive"));
    }
    let picture = load_image(&args.input)?;
    let gray = match &picture {
        Picture::Gray(img) => img.clone(),
        Picture::Rgb(img) => img.to_gray_mean(),
    };
    let smoothed = crate::histogram::gaussian_smooth(&gray, args.sigma);
    let result = crate::background::detect_background(
        &smoothed,
        &BackgroundParams {
            max_std: args.sigma_hat,
        },
    );

    let mut report = Manifest::new("detect-bg", &args.input, &args.output);
    report.push("sigma", args.sigma);
    report.push("sigma_hat", args.sigma_hat);
    report.background(&result);
    report.channels(&picture);
    // The report doubles as its own manifest.
    report.write(&args.output)?;
    report.write(manifest_path(&args.output))?;
    Ok(())
}

fn manifest_path(output: &Path) -> PathBuf {
    suffixed(output, ".manifest")
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

/// Line-oriented `key=value` sidecar. Contains only deterministic data
/// (no timestamps), so identical runs produce identical manifests.
struct Manifest {
    text: String,
}

impl Manifest {
    fn new(command: &str, input: &Path, output: &Path) -> Self {
        let mut m = Self {
            text: String::new(),
        };
        m.push("command", command);
        m.push("input", input.display());
        m.push("output", output.display());
        m
    }

    fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}={value}");
    }

    fn config(&mut self, cfg: &PipelineConfig, common: &CommonArgs) {
        self.push("lambda", cfg.lambda);
        self.push("sigma", cfg.sigma);
        self.push("iters", cfg.outer_iters);
        self.push("p", cfg.solver.norm.p());
        self.push("rho", cfg.solver.rho);
        self.push("tol", cfg.solver.tol);
        self.push("max_iter", cfg.solver.max_iter);
        self.push("warm_start", cfg.warm_start);
        if let Some(trace) = &common.trace {
            self.push("trace", trace.display());
        }
    }

    fn background(&mut self, bg: &BackgroundResult) {
        self.push("alpha", bg.alpha);
        self.push("window_row", bg.window_row);
        self.push("window_col", bg.window_col);
        self.push("window_size", bg.window_size);
        self.push("scale_used", bg.scale_used);
        self.push("window_std", bg.window_std);
    }

    fn channels(&mut self, picture: &Picture) {
        self.push(
            "channels",
            match picture {
                Picture::Gray(_) => 1,
                Picture::Rgb(_) => 3,
            },
        );
        self.push("width", picture.width());
        self.push("height", picture.height());
    }

    fn stages(&mut self, reports: &[StageReport]) {
        for r in reports {
            let prefix = format!("stage.c{}.k{}", r.channel, r.outer_iter);
            self.push(&format!("{prefix}.iterations"), r.iterations);
            self.push(&format!("{prefix}.converged"), r.converged);
            self.push(&format!("{prefix}.objective"), r.final_objective);
        }
    }

    fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, &self.text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// CSV columns: channel, outer, iteration, objective, residual_y,
/// residual_z. Residual fields are empty for FISTA solves and for the
/// initial objective row.
fn write_trace_csv(path: &Path, reports: &[StageReport]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    writeln!(out, "channel,outer,iteration,objective,residual_y,residual_z").map_err(io_err)?;
    for r in reports {
        for (iter, &obj) in r.objective_trace.iter().enumerate() {
            let residuals = if iter >= 1 {
                r.residual_trace.get(iter - 1)
            } else {
                None
            };
            match residuals {
                Some([ry, rz]) => writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.channel, r.outer_iter, iter, obj, ry, rz
                ),
                None => writeln!(out, "{},{},{},{},,", r.channel, r.outer_iter, iter, obj),
            }
            .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}
