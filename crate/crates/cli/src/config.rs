//! Flag and config-file ingestion.
//!
//! A config file is flat `key: value` text (`key = value` also accepted,
//! `#` starts a comment). Keys are the long flag names, with `-` or `_`.
//! Flags override file values; unknown keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use beatfield::kinematics::ParticleSpec;
use beatfield::walker::IrregularKernel;
use beatfield::waves::Preset;
use beatfield::UnitSystem;
use clap::{Parser, ValueEnum};
use thiserror::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BEATFIELD_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Kin,
    Walk,
    Pair,
    Waves,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSource {
    Preset(Preset),
    /// Two-column CSV `x,V`.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams {
    pub steps: u64,
    pub seed: u64,
    pub trajectories: u64,
    pub trajectory_index: u64,
    pub kernel: IrregularKernel,
    pub path_mode: bool,
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveParams {
    pub potential: PotentialSource,
    pub grid: usize,
    pub levels: usize,
    pub wavefunctions: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GravityParams {
    /// Potentials as fractions `φ_g/c²`; the first is the reference point.
    pub phi_over_c2: Vec<f64>,
    /// Counting window in flat-space rest periods `τ₀`.
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub particle: ParticleSpec,
    pub units: UnitSystem,
    pub walk: WalkParams,
    pub waves: WaveParams,
    pub gravity: GravityParams,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("missing required field(s): {}", .0.join(", "))]
    Missing(Vec<&'static str>),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{path}:{line}: {message}")]
    File {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Clap(#[from] clap::Error),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Parser)]
#[command(name = "beatfield", version, about = "Quantum-beat kinematics, jump walks and wave checks")]
pub struct Cli {
    /// Subcommand to run
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat key-value config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub m0: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// si | natural
    #[arg(long)]
    pub units: Option<String>,
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trajectories: Option<u64>,
    #[arg(long)]
    pub trajectory_index: Option<u64>,
    /// binary | uniform
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub path_mode: Option<bool>,
    /// Also write the event trace of the first trajectory.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub trace: Option<bool>,
    /// box | oscillator | free
    #[arg(long)]
    pub potential: Option<String>,
    /// Two-column CSV `x,V` sampled on a uniform grid.
    #[arg(long)]
    pub potential_file: Option<PathBuf>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub wavefunctions: Option<bool>,
    /// Comma-separated φ_g/c² values; the first is the reference point.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Counting window in rest periods τ₀.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all available execution units).
    #[arg(long)]
    pub workers: Option<usize>,
}

const FILE_KEYS: &[&str] = &[
    "command",
    "m0",
    "beta",
    "units",
    "steps",
    "seed",
    "trajectories",
    "trajectory_index",
    "kernel",
    "path_mode",
    "trace",
    "potential",
    "potential_file",
    "grid",
    "levels",
    "wavefunctions",
    "phi",
    "duration",
    "format",
    "out",
    "workers",
];

/// One `key: value` entry with its line number.
#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

struct FileValues {
    path: String,
    entries: BTreeMap<String, Entry>,
}

impl FileValues {
    fn empty() -> Self {
        Self {
            path: String::new(),
            entries: BTreeMap::new(),
        }
    }

    fn parse(path: &str, text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError::File {
                path: path.to_string(),
                line,
                message,
            };
            let (key, value) = content
                .split_once(':')
                .or_else(|| content.split_once('='))
                .ok_or_else(|| err(format!("expected `key: value`, got `{content}`")))?;
            let key = key.trim().replace('-', "_");
            if !FILE_KEYS.contains(&key.as_str()) {
                return Err(err(format!("unknown key `{key}`")));
            }
            let value = value.trim().trim_matches('"').to_string();
            if entries.insert(key.clone(), Entry { value, line }).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        Ok(Self {
            path: path.to_string(),
            entries,
        })
    }

    /// Typed lookup with a line-precise diagnostic on parse failure.
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|err| ConfigError::File {
                path: self.path.clone(),
                line: e.line,
                message: format!("{key}: cannot parse `{}`: {err}", e.value),
            }),
        }
    }

    fn get_with<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => parse(&e.value).map(Some).map_err(|message| ConfigError::File {
                path: self.path.clone(),
                line: e.line,
                message: format!("{key}: {message}"),
            }),
        }
    }
}

fn parse_units(s: &str) -> Result<UnitSystem, String> {
    match s.to_ascii_lowercase().as_str() {
        "si" => Ok(UnitSystem::SI),
        "natural" => Ok(UnitSystem::Natural),
        _ => Err(format!("unknown unit system `{s}` (expected si or natural)")),
    }
}

fn parse_kernel(s: &str) -> Result<IrregularKernel, String> {
    match s.to_ascii_lowercase().as_str() {
        "binary" => Ok(IrregularKernel::SymmetricBinary),
        "uniform" => Ok(IrregularKernel::SymmetricUniform),
        _ => Err(format!("unknown kernel `{s}` (expected binary or uniform)")),
    }
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    match s.to_ascii_lowercase().as_str() {
        "box" => Ok(Preset::Box),
        "oscillator" => Ok(Preset::Oscillator),
        "free" => Ok(Preset::Free),
        _ => Err(format!("unknown potential `{s}` (expected box, oscillator or free)")),
    }
}

fn parse_command(s: &str) -> Result<Command, String> {
    Command::from_str(s, true).map_err(|_| format!("unknown command `{s}`"))
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::from_str(s, true).map_err(|_| format!("unknown format `{s}` (expected csv or json)"))
}

fn parse_phi(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("cannot parse `{p}`: {e}")))
        .collect()
}

fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

fn flag_with<T>(field: &str, v: Option<String>, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, ConfigError> {
    v.map(|s| parse(&s).map_err(|m| invalid(field, m))).transpose()
}

/// Parses command-line arguments (program name first) into a validated
/// configuration. `default_out` applies when neither flag nor file names
/// an output directory.
pub fn parse_config<I, S>(args: I, default_out: &Path) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
            FileValues::parse(&path.display().to_string(), &text)?
        }
        None => FileValues::empty(),
    };
    build(cli, &file, default_out)
}

/// Parses config-file text alone, as if no flags were given.
pub fn parse_config_text(text: &str, default_out: &Path) -> Result<RunConfig, ConfigError> {
    let file = FileValues::parse("<config>", text)?;
    let cli = Cli::try_parse_from(["beatfield"])?;
    build(cli, &file, default_out)
}

fn build(cli: Cli, file: &FileValues, default_out: &Path) -> Result<RunConfig, ConfigError> {
    let command = pick(cli.command, file.get_with("command", parse_command)?)
        .ok_or(ConfigError::Missing(vec!["command"]))?;

    let rest_mass = pick(cli.m0, file.get("m0")?).unwrap_or(1.0);
    let beta = pick(cli.beta, file.get("beta")?).unwrap_or(0.0);
    let units = pick(flag_with("units", cli.units, parse_units)?, file.get_with("units", parse_units)?)
        .unwrap_or(UnitSystem::Natural);

    let walk = WalkParams {
        steps: pick(cli.steps, file.get("steps")?).unwrap_or(1_000_000),
        seed: pick(cli.seed, file.get("seed")?).unwrap_or(0),
        trajectories: pick(cli.trajectories, file.get("trajectories")?).unwrap_or(1),
        trajectory_index: pick(cli.trajectory_index, file.get("trajectory_index")?).unwrap_or(0),
        kernel: pick(flag_with("kernel", cli.kernel, parse_kernel)?, file.get_with("kernel", parse_kernel)?)
            .unwrap_or_default(),
        path_mode: pick(cli.path_mode, file.get("path_mode")?).unwrap_or(false),
        trace: pick(cli.trace, file.get("trace")?).unwrap_or(false),
    };

    let preset = pick(
        flag_with("potential", cli.potential, parse_preset)?,
        file.get_with("potential", parse_preset)?,
    );
    let potential_file = pick(cli.potential_file, file.get("potential_file")?);
    let potential = match (preset, potential_file) {
        (Some(_), Some(_)) => {
            return Err(invalid("potential", "give either a preset or potential_file, not both"))
        }
        (None, Some(path)) => PotentialSource::File(path),
        (Some(p), None) => PotentialSource::Preset(p),
        (None, None) => PotentialSource::Preset(Preset::Box),
    };
    let waves = WaveParams {
        potential,
        grid: pick(cli.grid, file.get("grid")?).unwrap_or(2000),
        levels: pick(cli.levels, file.get("levels")?).unwrap_or(3),
        wavefunctions: pick(cli.wavefunctions, file.get("wavefunctions")?).unwrap_or(false),
    };

    let gravity = GravityParams {
        phi_over_c2: pick(flag_with("phi", cli.phi, parse_phi)?, file.get_with("phi", parse_phi)?)
            .unwrap_or_else(|| vec![0.0, -1e-6]),
        duration: pick(cli.duration, file.get("duration")?).unwrap_or(1e9),
    };

    let format = pick(cli.format, file.get_with("format", parse_format)?).unwrap_or(OutputFormat::Csv);
    let out_dir = pick(cli.out, file.get("out")?).unwrap_or_else(|| default_out.to_path_buf());
    let workers = pick(cli.workers, file.get("workers")?);

    let config = RunConfig {
        command,
        particle: ParticleSpec {
            rest_mass,
            beta,
        },
        units,
        walk,
        waves,
        gravity,
        format,
        out_dir,
        workers,
    };
    validate(&config)?;
    Ok(config)
}

pub fn validate(c: &RunConfig) -> Result<(), ConfigError> {
    let p = c.particle;
    if !(p.rest_mass.is_finite() && p.rest_mass > 0.0) {
        return Err(invalid("m0", format!("m0 must be > 0, got {}", p.rest_mass)));
    }
    if p.beta.is_nan() || p.beta < 0.0 {
        return Err(invalid("beta", format!("beta must be >= 0, got {}", p.beta)));
    }
    if p.beta >= 1.0 {
        return Err(invalid("beta", format!("beta must be < 1, got {}", p.beta)));
    }
    if c.walk.steps == 0 {
        return Err(invalid("steps", "steps must be >= 1"));
    }
    if c.walk.trajectories == 0 {
        return Err(invalid("trajectories", "trajectories must be >= 1"));
    }
    if c.waves.grid < beatfield::waves::Grid1D::MIN_POINTS {
        return Err(invalid(
            "grid",
            format!("grid must be >= {}, got {}", beatfield::waves::Grid1D::MIN_POINTS, c.waves.grid),
        ));
    }
    if c.waves.levels == 0 || c.waves.levels > c.waves.grid / 4 {
        return Err(invalid(
            "levels",
            format!("levels must be in 1..={}, got {}", c.waves.grid / 4, c.waves.levels),
        ));
    }
    if c.gravity.phi_over_c2.is_empty() {
        return Err(invalid("phi", "need at least one potential"));
    }
    for &phi in &c.gravity.phi_over_c2 {
        if !(phi.is_finite() && (2.0 * phi).abs() < 1.0) {
            return Err(invalid("phi", format!("|2 phi_g/c^2| must be < 1, got phi_g/c^2 = {phi}")));
        }
    }
    if !(c.gravity.duration.is_finite() && c.gravity.duration > 0.0) {
        return Err(invalid("duration", format!("duration must be > 0, got {}", c.gravity.duration)));
    }
    if c.workers == Some(0) {
        return Err(invalid("workers", "workers must be >= 1"));
    }
    Ok(())
}
