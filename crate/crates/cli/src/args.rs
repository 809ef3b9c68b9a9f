use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sgq_core::dynamics::OdeOptions;
use sgq_core::{ControlParams, QubitState};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SGQ_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "sgq",
    version,
    about = "Spin-1/2 qubits in a rotating field inside a Stern-Gerlach device",
    long_about = "Runs closed-form and numerical evolutions, adiabaticity checks, qubit-multiplier \
                  cascades, gate-timing synthesis and swap-family construction. Options may also \
                  come from a `key = value` file given with --config; flags on the command line win."
)]
pub struct Cli {
    /// Flat `key = value` file whose keys mirror the long flag names.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of the eigenbasis coefficients, closed form or integrated.
    Evolve(EvolveArgs),
    /// Closed-form and sampled adiabaticity ratio.
    Adiabaticity(AdiabaticityArgs),
    /// One non-adiabatic multiplier stage with cluster counts.
    Multiply(MultiplyArgs),
    /// Chain of multiplier stages, 2^n clusters.
    Cascade(CascadeArgs),
    /// Gate timing on the manifold cos(theta) = omega0/omega, or a general search.
    Synthesize(SynthesizeArgs),
    /// Swap-output states and their locally driven family.
    Swap(SwapArgs),
    /// Parameter grid of Rabi and adiabaticity figures, optionally checked against the ODE.
    Sweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Evolve(_) => "evolve",
            Command::Adiabaticity(_) => "adiabaticity",
            Command::Multiply(_) => "multiply",
            Command::Cascade(_) => "cascade",
            Command::Synthesize(_) => "synthesize",
            Command::Swap(_) => "swap",
            Command::Sweep(_) => "sweep",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Evolve(a) => &a.out,
            Command::Adiabaticity(a) => &a.out,
            Command::Multiply(a) => &a.out,
            Command::Cascade(a) => &a.out,
            Command::Synthesize(a) => &a.out,
            Command::Swap(a) => &a.out,
            Command::Sweep(a) => &a.out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; `-` writes to stdout. Defaults to `<command>.<format>`
    /// in $SGQ_OUTPUT_DIR or the working directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl OutputArgs {
    pub fn destination(&self, command: &str) -> Option<PathBuf> {
        match &self.output {
            Some(p) if p.as_os_str() == "-" => None,
            Some(p) => Some(p.clone()),
            None => {
                let dir = std::env::var_os(OUTPUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."));
                Some(dir.join(format!("{command}.{}", self.format.extension())))
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct DriveArgs {
    /// Larmor frequency omega0 = gamma*B (rad per unit time).
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: f64,
    /// Rotation rate of the field (rad per unit time).
    #[arg(long, allow_negative_numbers = true)]
    pub omega: f64,
    /// Polar angle of the field in radians.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_deg")]
    pub theta: Option<f64>,
    /// Polar angle of the field in degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_deg: Option<f64>,
}

impl DriveArgs {
    pub fn params(&self) -> Result<ControlParams, CliError> {
        let theta = match (self.theta, self.theta_deg) {
            (Some(t), _) => t,
            (None, Some(d)) => d.to_radians(),
            (None, None) => return Err(CliError::validation("one of --theta or --theta-deg is required")),
        };
        ControlParams::new(self.omega0, self.omega, theta).map_err(CliError::validation)
    }
}

#[derive(Debug, Args)]
pub struct TimeGridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Number of samples, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

impl TimeGridArgs {
    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        if self.points < 2 {
            return Err(CliError::validation("--points must be at least 2"));
        }
        if !(self.t_start >= 0.0 && self.t_end > self.t_start && self.t_end.is_finite()) {
            return Err(CliError::validation("time grid needs t_end > t_start >= 0"));
        }
        let n = self.points - 1;
        let step = (self.t_end - self.t_start) / n as f64;
        Ok((0..=n)
            .map(|k| if k == n { self.t_end } else { self.t_start + step * k as f64 })
            .collect())
    }
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Amplitude of |0>, e.g. `0.6`, `0.8i`, `0.5+0.5i`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a0: String,
    /// Amplitude of |1>.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub a1: String,
}

impl StateArgs {
    pub fn state(&self) -> Result<QubitState, CliError> {
        parse_state(&self.a0, &self.a1)
    }
}

/// Amplitudes within this distance of unit norm are accepted and rescaled.
const INPUT_NORM_TOL: f64 = 1e-9;

pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| CliError::validation(format!("cannot parse complex number `{s}`")))
}

pub fn parse_state(a0: &str, a1: &str) -> Result<QubitState, CliError> {
    let (a0, a1) = (parse_complex(a0)?, parse_complex(a1)?);
    let n = a0.norm_sqr() + a1.norm_sqr();
    if (n - 1.0).abs() > INPUT_NORM_TOL {
        return Err(CliError::validation(format!(
            "input state is not normalized: |a0|^2 + |a1|^2 = {n}"
        )));
    }
    QubitState::normalized(a0, a1).map_err(CliError::validation)
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Local error tolerance of the ODE integrator, in (0, 1e-4].
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

impl TolArgs {
    pub fn options(&self) -> Result<OdeOptions, CliError> {
        if !(self.tol > 0.0 && self.tol <= 1e-4) {
            return Err(CliError::validation("--tol must lie in (0, 1e-4]"));
        }
        Ok(OdeOptions::with_tol(self.tol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Analytic,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    Exact,
    Corotating,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub grid: TimeGridArgs,
    /// Initial state, in eigenbasis coordinates at t = 0.
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value_t = Method::Analytic)]
    pub method: Method,
    /// Basis the ODE state is projected on.
    #[arg(long, value_enum, default_value_t = BasisChoice::Exact)]
    pub basis: BasisChoice,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AdiabaticityArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub grid: TimeGridArgs,
    /// Cutoff below which the drive counts as adiabatic.
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MultiplyArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Exit time of the stage.
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Ensemble size.
    #[arg(long, default_value_t = 1000)]
    pub particles: u64,
    /// Draw counts from a seeded binomial instead of rounding N*P.
    #[arg(long)]
    pub sampling: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Adiabaticity parameter below which a warning is raised.
    #[arg(long, default_value_t = sgq_core::ensemble::DEFAULT_NONADIABATIC_THRESHOLD)]
    pub warn_threshold: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CascadeArgs {
    #[command(flatten)]
    pub drive: DriveArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Number of multiplier stages.
    #[arg(long)]
    pub stages: usize,
    /// Exit time of every stage.
    #[arg(long, allow_negative_numbers = true, required_unless_present = "stage_times")]
    pub t: Option<f64>,
    /// Comma-separated exit time per stage, overriding --t.
    #[arg(long, value_delimiter = ',')]
    pub stage_times: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateChoice {
    Not,
    Z,
    Hadamard,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseChoice {
    Literal,
    Relaxed,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long, value_enum)]
    pub gate: GateChoice,
    /// Input amplitudes (the gate input for named gates, the initial
    /// eigenbasis coordinates for `general`).
    #[command(flatten)]
    pub state: StateArgs,
    /// Larmor frequency for named gates.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Rotation rate for named gates.
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, value_enum, default_value_t = PhaseChoice::Literal)]
    pub phase_mode: PhaseChoice,
    /// Target amplitude of |0> for `general`.
    #[arg(long, allow_hyphen_values = true)]
    pub target_a0: Option<String>,
    /// Target amplitude of |1> for `general`.
    #[arg(long, allow_hyphen_values = true)]
    pub target_a1: Option<String>,
    /// `min:max` search range for omega0.
    #[arg(long, default_value = "0.5:2")]
    pub omega0_range: String,
    /// `min:max` search range for omega.
    #[arg(long, default_value = "0.5:4")]
    pub omega_range: String,
    /// `min:max` search range for theta (radians).
    #[arg(long, default_value = "0:3.141592653589793")]
    pub theta_range: String,
    /// `min:max` search range for the gate time.
    #[arg(long, default_value = "0:10")]
    pub t_range: String,
    /// Skip the ODE cross-check.
    #[arg(long)]
    pub no_verify: bool,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

pub fn parse_range(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::validation(format!("range `{s}` is not of the form min:max"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParticleChoice {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Debug, Args)]
pub struct SwapArgs {
    /// Amplitude of |00>.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Amplitude of |11>.
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[command(flatten)]
    pub drive: DriveArgs,
    /// Duration of the local drive.
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Particle carrying the drive.
    #[arg(long, value_enum, default_value_t = ParticleChoice::Two)]
    pub particle: ParticleChoice,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated Larmor frequencies.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
    pub omega0_values: Vec<f64>,
    /// Comma-separated ratios omega/omega0.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5")]
    pub ratio_values: Vec<f64>,
    /// Comma-separated polar angles in radians.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.6,1.0,1.5707963267948966,2.6")]
    pub theta_values: Vec<f64>,
    /// Compare the closed-form transition population with the ODE oracle.
    #[arg(long)]
    pub verify: bool,
    /// Time samples per grid node for --verify.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Largest Rabi phase omega_bar * t sampled by --verify.
    #[arg(long, default_value_t = 20.0)]
    pub max_phase: f64,
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Splices `key = value` lines from a `--config` file in front of the
/// command-line flags, so explicit flags override the file.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut config = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    if let Some(prog) = it.next() {
        rest.push(prog);
    }
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            config = Some(PathBuf::from(it.next().ok_or_else(|| {
                CliError::validation("--config needs a file argument")
            })?));
        } else if let Some(path) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let given: Vec<String> = rest
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|f| f.split('=').next().unwrap_or(f).to_string()))
        .collect();
    let tokens: Vec<OsString> = read_config(&path)?
        .into_iter()
        .filter(|(key, _)| !given.contains(key))
        .map(|(key, value)| match value {
            Some(v) => OsString::from(format!("--{key}={v}")),
            None => OsString::from(format!("--{key}")),
        })
        .collect();
    // Insert right after the subcommand name.
    let pos = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(rest.len());
    rest.splice(pos..pos, tokens);
    Ok(rest)
}

/// `(flag, value)` pairs; boolean flags set to `true` carry no value and
/// those set to `false` are dropped.
fn read_config(path: &Path) -> Result<Vec<(String, Option<String>)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read config {}: {e}", path.display())))?;
    let mut tokens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::validation(format!("{}:{}: expected `key = value`", path.display(), lineno + 1))
        })?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim().trim_matches('"');
        match value {
            "true" => tokens.push((key.to_string(), None)),
            "false" => {}
            v => tokens.push((key.to_string(), Some(v.to_string()))),
        }
    }
    Ok(tokens)
}
