//! `ccr`: synthesis, analysis and verification of curves with constant
//! curvature ratios, plus plot-ready exports.
//!
//! Exit codes are a stable contract: 0 success, 1 validation failure,
//! 2 numerical failure.

mod curvefile;
mod specfile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccr_core::numkit::SkewTridiag;
use ccr_core::{ccr, frenet, sphere, CurveSamples, Error};

/// Command failure carrying the scripting-stable exit code.
#[derive(Debug)]
pub struct CliError {
    message: String,
    numerical: bool,
}

impl CliError {
    pub fn validation(message: String) -> Self {
        Self {
            message,
            numerical: false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.numerical {
            2
        } else {
            1
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let numerical = matches!(
            e,
            Error::RankDeficient(_)
                | Error::QuadratureDivergence { .. }
                | Error::NonFinite(_)
                | Error::Degenerate(_)
        );
        Self {
            message: e.to_string(),
            numerical,
        }
    }
}

#[derive(Parser)]
#[command(name = "ccr", version, about = "Constant-curvature-ratio curve toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frequencies and invariant planes of the ratio band (1, c2, ..).
    Eigen(EigenArgs),
    /// Synthesize a curve file from a spec file.
    Synthesize(SynthesizeArgs),
    /// Curvature ratios and flat-torus verification of a curve file.
    Analyze(AnalyzeArgs),
    /// Sphere fit and spherical-curvature criterion of a curve file.
    Sphere(SphereArgs),
    /// Two-column coordinate projection of a curve file.
    Plotdata(PlotdataArgs),
}

#[derive(Args)]
struct EigenArgs {
    /// Ratio constants c2,..,c_{n-1}, comma separated (empty string for n=2).
    #[arg(long, value_delimiter = ',', num_args = 0.., allow_negative_numbers = true)]
    ratios: Vec<f64>,
    /// Expected dimension (cross-checked against the ratio count).
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Spec file (TOML).
    #[arg(long)]
    spec: PathBuf,
    /// Output curve file.
    #[arg(long)]
    out: PathBuf,
    /// Override the sample count from the spec file.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input curve file.
    curve: PathBuf,
    /// Spread tolerance for the flat-torus verdict.
    #[arg(long, default_value_t = ccr::TORUS_TOL)]
    tolerance: f64,
    /// Relative spread tolerance for the ratio-constancy verdict.
    #[arg(long, default_value_t = frenet::CONSTANCY_TOL)]
    ratio_tolerance: f64,
}

#[derive(Args)]
struct SphereArgs {
    /// Input curve file.
    curve: PathBuf,
    /// Criterion radius; defaults to the fitted radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Residual bound for the criterion verdict.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Args)]
struct PlotdataArgs {
    /// Input curve file.
    curve: PathBuf,
    /// 1-based coordinate pair, e.g. 1,2.
    #[arg(long, value_delimiter = ',')]
    coords: Vec<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.8}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_eigen(args: &EigenArgs) -> Result<(), CliError> {
    let n = args.ratios.len() + 2;
    if let Some(dim) = args.dim {
        if dim != n {
            return Err(CliError::validation(format!(
                "--dim {dim} disagrees with {} ratio constants (dimension {n})",
                args.ratios.len()
            )));
        }
    }
    let f = SkewTridiag::from_ratios(&args.ratios)?;
    let spectrum = f.frequencies()?;
    println!("dimension: {n}");
    println!("band: {}", join(f.offdiag()));
    println!("frequencies: {}", join(&spectrum.frequencies));
    if spectrum.has_zero {
        println!("zero eigenvalue: yes (odd dimension; fixed axis present)");
    }
    println!("twisted: {}", spectrum.is_twisted());
    let (planes, axis) = f.invariant_planes(&spectrum)?;
    for p in &planes {
        println!("plane (b = {:.8}):", p.frequency);
        println!("  u: {}", join(&p.u));
        println!("  v: {}", join(&p.v));
    }
    if let Some(ax) = axis {
        println!("axis: {}", join(&ax));
    }
    Ok(())
}

fn cmd_synthesize(args: &SynthesizeArgs) -> Result<(), CliError> {
    let (spec, file_steps) = specfile::load(&args.spec)?;
    let steps = args.steps.unwrap_or(file_steps);
    // the library clips to the profile's validity window; the CLI treats a
    // domain that would be clipped as a spec mistake
    let eff = spec.effective_domain()?;
    let slack = 1e-2 * (spec.domain.1 - spec.domain.0);
    if eff.0 > spec.domain.0 + slack || eff.1 < spec.domain.1 - slack {
        return Err(CliError::validation(format!(
            "domain [{}, {}] exceeds the k1 validity window [{:.6}, {:.6}]",
            spec.domain.0, spec.domain.1, eff.0, eff.1
        )));
    }
    let samples = ccr::synthesize(&spec, steps)?;
    curvefile::write(&args.out, &samples)?;
    let span = samples.grid()[samples.len() - 1] - samples.grid()[0];
    println!("dimension: {}", samples.dim());
    println!("samples: {}", samples.len());
    println!("arc length: {span:.8}");
    println!("wrote {}", args.out.display());
    Ok(())
}

fn read_analysis_input(path: &PathBuf) -> Result<CurveSamples, CliError> {
    let samples = curvefile::read(path)?;
    if samples.len() < frenet::MIN_SAMPLES {
        return Err(CliError::validation(format!(
            "need at least {} samples for analysis, got {}",
            frenet::MIN_SAMPLES,
            samples.len()
        )));
    }
    Ok(samples)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let samples = read_analysis_input(&args.curve)?;
    let data = frenet::curvature_profile_samples(&samples)?;
    println!("dimension: {}", samples.dim());
    println!("samples: {}", samples.len());
    let interior = data.interior();
    for (k, profile) in data.curvatures.iter().enumerate() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in &interior {
            lo = lo.min(profile[i]);
            hi = hi.max(profile[i]);
        }
        println!("k{}: min {lo:.8} max {hi:.8}", k + 1);
    }
    let report = frenet::ratio_analysis_tol(&data, args.ratio_tolerance)?;
    println!("ratio estimates: {}", join(&report.ratios));
    println!("ratio spreads: {}", join(&report.spreads));
    println!("ccr: {}", report.is_ccr());
    match ccr::verify_torus_tol(&samples, args.tolerance) {
        Ok(fit) => {
            println!("torus frequencies: {}", join(&fit.frequencies));
            println!("plane radii: {}", join(&fit.radius_mean));
            println!("radius spreads: {}", join(&fit.radius_spread));
            if let (Some(a), Some(s)) = (fit.axis_mean, fit.axis_spread) {
                println!("axis component: {a:.8} (spread {s:.2e})");
            }
            println!("sum of squared radii: {:.8}", fit.total_square_radius());
            println!("twisted: {}", fit.twisted);
            println!("torus verdict: {}", fit.verdict);
        }
        Err(e) => println!("torus verdict: false ({e})"),
    }
    Ok(())
}

fn cmd_sphere(args: &SphereArgs) -> Result<(), CliError> {
    let samples = read_analysis_input(&args.curve)?;
    let report = sphere::sphere_report(&samples, args.radius)?;
    println!("center: {}", join(&report.center));
    println!("fitted radius: {:.8}", report.radius);
    println!("fit rms: {:.3e}", report.rms);
    if report.criterion.is_empty() {
        println!(
            "criterion: not available in dimension {} (needs 3 or 4)",
            samples.dim()
        );
        return Ok(());
    }
    let r = args.radius.unwrap_or(report.radius);
    let mut sorted = report.criterion.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted[sorted.len() - 1];
    println!("criterion radius: {r:.8}");
    println!("criterion residual: median {median:.3e} max {max:.3e}");
    println!("criterion verdict: {}", median < args.tolerance);
    Ok(())
}

fn cmd_plotdata(args: &PlotdataArgs) -> Result<(), CliError> {
    let samples = curvefile::read(&args.curve)?;
    let [i, j] = args.coords[..] else {
        return Err(CliError::validation("--coords takes exactly two indices".into()));
    };
    for c in [i, j] {
        if c < 1 || c > samples.dim() {
            return Err(CliError::validation(format!(
                "coordinate {c} out of range 1..={}",
                samples.dim()
            )));
        }
    }
    let mut out = format!("x{i},x{j}\n");
    for p in samples.points() {
        out.push_str(&format!("{:.16e},{:.16e}\n", p[i - 1], p[j - 1]));
    }
    match &args.out {
        Some(path) => std::fs::write(path, out)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eigen(args) => cmd_eigen(args),
        Command::Synthesize(args) => cmd_synthesize(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sphere(args) => cmd_sphere(args),
        Command::Plotdata(args) => cmd_plotdata(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code())
        }
    }
}
