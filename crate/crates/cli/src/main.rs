use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hopfwind::config::{QuadratureChoice, RunConfig};
use hopfwind::error::AppError;
use hopfwind::output::{
    evans_trace_csv, fmt_g17, phase_series_csv, phase_transition_svg, spectrum_csv, write_text,
};
use hopfwind::runner::{
    run_evans, run_phase, run_spectrum, EvansSummary, PhaseSummary, SpectrumSummary,
};
use hopfwind::validate;

/// Eigenvalue counter for the linearized complex Ginzburg-Landau pulse:
/// transports loops of asymptotic eigenvectors around a spectral contour and
/// measures the geometric phase they accumulate, cross-checked by the
/// winding of an Evans function over the same contour.
#[derive(Parser)]
#[command(name = "hopfwind", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transport the eigenvector loop and emit the relative-phase series
    Phase(RunArgs),
    /// Evans-function trace and winding count over the contour
    Evans(RunArgs),
    /// Essential-spectrum locus samples and the contour clearance
    Spectrum(RunArgs),
    /// Run the cross-module invariant suite at reduced sizes
    Validate,
}

#[derive(Clone, Copy, Debug)]
struct CenterArg {
    re: f64,
    im: f64,
}

impl FromStr for CenterArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{e}: {t:?}"));
        match s.split_once(',') {
            Some((re, im)) => Ok(CenterArg { re: parse(re)?, im: parse(im)? }),
            None => Ok(CenterArg { re: parse(s)?, im: 0.0 }),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuadratureArg {
    Euler,
    Trapezoid,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter preset
    #[arg(long)]
    preset: Option<String>,
    /// Contour center as RE,IM (or just RE)
    #[arg(long, allow_hyphen_values = true)]
    center: Option<CenterArg>,
    /// Contour radius
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<f64>,
    /// Contour sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Left end of the integration range
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Right end of the integration range
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<f64>,
    /// Storage grid spacing
    #[arg(long = "store-step")]
    store_step: Option<f64>,
    /// Quadrature rule for the phase integral
    #[arg(long, value_enum)]
    quadrature: Option<QuadratureArg>,
    /// Integrate raw states without norm rescaling
    #[arg(long = "no-rescale")]
    no_rescale: bool,
    /// Output directory for artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Quick profile: 1000 contour samples, rel_tol 1e-6
    #[arg(long)]
    fast: bool,
    /// Worker threads (0 = machine default)
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, AppError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path).map_err(AppError::Config)?,
            None => RunConfig::default(),
        };
        if self.fast {
            config.apply_fast_profile();
        }
        if let Some(preset) = &self.preset {
            config.preset = preset.clone();
            config.params = None;
        }
        if let Some(center) = self.center {
            config.contour.center = [center.re, center.im];
        }
        if let Some(radius) = self.radius {
            config.contour.radius = radius;
        }
        if let Some(samples) = self.samples {
            config.contour.n_samples = samples;
        }
        if let Some(x0) = self.x0 {
            config.x0 = x0;
        }
        if let Some(x1) = self.x1 {
            config.x1 = x1;
        }
        if let Some(h) = self.store_step {
            config.h_store = h;
        }
        if let Some(q) = self.quadrature {
            config.quadrature = match q {
                QuadratureArg::Euler => QuadratureChoice::Euler,
                QuadratureArg::Trapezoid => QuadratureChoice::Trapezoid,
            };
        }
        if self.no_rescale {
            config.rescale = false;
        }
        if let Some(out) = &self.out {
            config.out_dir = out.clone();
        }
        if let Some(jobs) = self.jobs {
            config.jobs = jobs;
        }
        config.validate().map_err(AppError::Config)?;
        Ok(config)
    }
}

fn prepare_out_dir(config: &RunConfig) -> Result<(), AppError> {
    std::fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("creating output directory {}", config.out_dir.display()))
        .map_err(AppError::Config)
}

fn write_summary<T: serde::Serialize>(config: &RunConfig, summary: &T) -> Result<(), AppError> {
    let path = config.out_dir.join("summary.json");
    let mut json = serde_json::to_string_pretty(summary)
        .map_err(|e| AppError::Config(anyhow!("serializing summary: {e}")))?;
    json.push('\n');
    write_text(&path, &json).map_err(AppError::Config)
}

fn cmd_phase(args: &RunArgs) -> Result<(), AppError> {
    let config = args.resolve()?;
    prepare_out_dir(&config)?;
    let outcome = run_phase(&config)?;
    if config.emit.csv {
        let path = config.out_dir.join("phase_series.csv");
        write_text(&path, &phase_series_csv(&outcome.series)).map_err(AppError::Config)?;
    }
    if config.emit.svg {
        let path = config.out_dir.join("phase_transition.svg");
        write_text(&path, &phase_transition_svg(&outcome.series)).map_err(AppError::Config)?;
    }
    if config.emit.json {
        write_summary(
            &config,
            &PhaseSummary {
                command: "phase",
                terminal_relative_phase: outcome.series.terminal_relative(),
                rounded_count: outcome.rounded_count(),
                rounding_residual: outcome.rounding_residual(),
                gp_initial: outcome.series.gp_initial,
                clearance: outcome.clearance,
                runtime_seconds: outcome.runtime_seconds,
                config: &config,
            },
        )?;
    }
    println!(
        "terminal relative phase {} (count {}, residual {}), gp_initial {}, {} samples in {:.1}s",
        fmt_g17(outcome.series.terminal_relative()),
        outcome.rounded_count(),
        fmt_g17(outcome.rounding_residual()),
        fmt_g17(outcome.series.gp_initial),
        config.contour.n_samples,
        outcome.runtime_seconds,
    );
    println!("artifacts written to {}", config.out_dir.display());
    Ok(())
}

fn cmd_evans(args: &RunArgs) -> Result<(), AppError> {
    let config = args.resolve()?;
    prepare_out_dir(&config)?;
    let outcome = run_evans(&config)?;
    if config.emit.csv {
        let path = config.out_dir.join("evans_trace.csv");
        write_text(&path, &evans_trace_csv(&outcome.trace)).map_err(AppError::Config)?;
    }
    if config.emit.json {
        write_summary(
            &config,
            &EvansSummary {
                command: "evans",
                winding: outcome.winding,
                residual: outcome.residual,
                clearance: outcome.clearance,
                runtime_seconds: outcome.runtime_seconds,
                config: &config,
            },
        )?;
    }
    println!(
        "Evans winding {} (residual {}) over {} samples in {:.1}s",
        outcome.winding,
        fmt_g17(outcome.residual),
        config.contour.n_samples,
        outcome.runtime_seconds,
    );
    println!("artifacts written to {}", config.out_dir.display());
    Ok(())
}

fn cmd_spectrum(args: &RunArgs) -> Result<(), AppError> {
    let config = args.resolve()?;
    prepare_out_dir(&config)?;
    let outcome = run_spectrum(&config)?;
    if config.emit.csv {
        let path = config.out_dir.join("essential_spectrum.csv");
        write_text(&path, &spectrum_csv(&outcome.rows)).map_err(AppError::Config)?;
    }
    if config.emit.json {
        write_summary(
            &config,
            &SpectrumSummary {
                command: "spectrum",
                rows: outcome.rows.len(),
                clearance: outcome.clearance,
                runtime_seconds: outcome.runtime_seconds,
                config: &config,
            },
        )?;
    }
    println!(
        "{} locus samples, contour clearance {}",
        outcome.rows.len(),
        fmt_g17(outcome.clearance)
    );
    println!("artifacts written to {}", config.out_dir.display());
    Ok(())
}

fn cmd_validate() -> Result<(), AppError> {
    let checks = validate::run_all();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failed = 0usize;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:width$}  {}", check.name, check.detail);
        if !check.passed {
            failed += 1;
        }
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        return Err(AppError::Validation { failed });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Phase(args) => cmd_phase(args),
        Command::Evans(args) => cmd_evans(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Validate => cmd_validate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
