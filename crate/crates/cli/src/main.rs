//! `varlap` command-line experiments. Every subcommand writes a CSV table
//! (or a JSON report) to `--out` or stdout; failures print a single line
//! `error: <category>: <message>` on stderr.

mod commands;
mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "varlap", version, about = "Spectral multiplier and variable-exponent experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate A(u) from the closed form against quadrature.
    MellinTable(MellinTableArgs),
    /// Fit the power-law decay of |A(u)|.
    DecayFit(DecayFitArgs),
    /// Mellin inversion error at one lambda as the truncation grows.
    Reconstruct(ReconstructArgs),
    /// Imaginary-power norm ratios in a variable-exponent space.
    NormGrowth(NormGrowthArgs),
    /// Maximal function values and argmax radii on the grid.
    SphericalMax(SphericalMaxArgs),
    /// Wave propagation traces, finite-difference check and a priori ratio.
    WaveDemo(WaveDemoArgs),
    /// Check theorem hypothesis ranges for an exponent.
    Hypotheses(HypothesesArgs),
    /// Write a test function or exponent file.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
pub struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Treat numerical-accuracy warnings as errors (exit code 3).
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Points per axis (power of two).
    #[arg(long, default_value_t = 32)]
    pub size: usize,
    /// Period of the torus.
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone)]
pub struct TimeArgs {
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Form {
    /// Gamma ratio as displayed.
    Displayed,
    /// Gamma ratio rederived from the Bessel symbol.
    Exact,
}

#[derive(Args)]
pub struct MellinTableArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub u_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 41)]
    pub u_points: usize,
    #[arg(long, value_enum, default_value_t = Form::Displayed)]
    pub form: Form,
    #[arg(long, default_value_t = 20.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 200_000)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct DecayFitArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100.0)]
    pub u_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 64)]
    pub u_points: usize,
    #[arg(long, value_enum, default_value_t = Form::Displayed)]
    pub form: Form,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct ReconstructArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.01)]
    pub du: f64,
    /// Smallest truncation u_max.
    #[arg(long, default_value_t = 50.0)]
    pub u_min: f64,
    /// Largest truncation u_max.
    #[arg(long, default_value_t = 400.0)]
    pub u_max: f64,
    /// Number of geometric truncation levels.
    #[arg(long, default_value_t = 4)]
    pub u_points: usize,
    #[arg(long, value_enum, default_value_t = Form::Displayed)]
    pub form: Form,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Spacing {
    Linear,
    /// Geometric; a zero lower end adds `u = 0` before a geometric run from 1.
    Log,
}

#[derive(Args)]
pub struct NormGrowthArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Builder (gaussian[:w], random[:cutoff], plane:k.., const[:c]) or grid file.
    #[arg(long, default_value = "gaussian")]
    pub function: String,
    /// Builder (const:q, sin:mean,amp, step:p1,p2) or exponent file.
    #[arg(long, default_value = "const:2")]
    pub exponent: String,
    #[arg(long, default_value_t = 0.0)]
    pub u_min: f64,
    #[arg(long, default_value_t = 256.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 10)]
    pub u_points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MaximalKind {
    Spherical,
    Heat,
    Poisson,
    /// Centered Hardy-Littlewood maximal function over node radii.
    Hl,
}

#[derive(Args)]
pub struct SphericalMaxArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "gaussian")]
    pub function: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = MaximalKind::Spherical)]
    pub kind: MaximalKind,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Also write the maximal function as a grid file.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct WaveDemoArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "random:3")]
    pub function: String,
    /// Exponent for the a priori ratio.
    #[arg(long, default_value = "const:2")]
    pub exponent: String,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Time of the finite-difference comparison.
    #[arg(long, default_value_t = 0.5)]
    pub fd_time: f64,
    /// Leapfrog step; half the stability bound when omitted.
    #[arg(long)]
    pub dt: Option<f64>,
    /// JSON summary of the finite-difference, a priori and small-time checks.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClaimArg {
    Thm32,
    Thm34,
    Cor35,
    #[value(name = "cor36_wave", alias = "cor36-wave")]
    Cor36Wave,
}

#[derive(Args)]
pub struct HypothesesArgs {
    #[arg(long, default_value = "const:2")]
    pub exponent: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Space dimension n; the exponent is sampled on an n-dimensional grid.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 8)]
    pub size: usize,
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    #[arg(long, value_enum, default_value_t = ClaimArg::Cor35)]
    pub claim: ClaimArg,
    /// Print the full JSON report after the summary line.
    #[arg(long)]
    pub json: bool,
    /// Write the JSON report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Function builder or grid file.
    #[arg(long, conflicts_with = "exponent", required_unless_present = "exponent")]
    pub function: Option<String>,
    #[arg(long)]
    pub exponent: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Failure of a subcommand.
pub enum Failure {
    Lib(varlap::Error),
    /// Accuracy warnings escalated by `--strict`.
    Accuracy(String),
}

impl From<varlap::Error> for Failure {
    fn from(e: varlap::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

impl Failure {
    fn report(&self) -> (String, u8) {
        match self {
            Failure::Lib(e) => {
                let code = match e.category() {
                    "precondition" | "domain" | "grid" | "format" => 2,
                    _ => 1,
                };
                (format!("error: {}: {}", e.category(), one_line(&e.to_string())), code)
            }
            Failure::Accuracy(msg) => (format!("error: accuracy: {}", one_line(msg)), 3),
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Prints warnings and escalates them under `--strict`.
pub fn finish(warnings: Vec<String>, strict: bool) -> Result<(), Failure> {
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if strict && !warnings.is_empty() {
        return Err(Failure::Accuracy(warnings.join("; ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::MellinTable(a) => commands::mellin_table(a),
        Command::DecayFit(a) => commands::decay_fit(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::NormGrowth(a) => commands::norm_growth(a),
        Command::SphericalMax(a) => commands::spherical_max(a),
        Command::WaveDemo(a) => commands::wave_demo(a),
        Command::Hypotheses(a) => commands::hypotheses(a),
        Command::Gen(a) => commands::gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (line, code) = failure.report();
            eprintln!("{line}");
            ExitCode::from(code)
        }
    }
}
