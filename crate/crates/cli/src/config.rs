//! Command-line options, key=value config files and the resolved run config.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "topowire", version, about = "Dissipative topological quantum wire simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Damping spectrum of X and bulk purity spectrum of the steady state.
    Spectrum(Options),
    /// Left and right dissipative zero-mode profiles.
    ZeroModes(Options),
    /// Steady-state covariance matrix.
    Steady(Options),
    /// Covariance trajectory observables.
    Evolve(Options),
    /// Momentum-space Bloch field, chiral axis, winding number and filling.
    Winding(Options),
    /// Adiabatic Majorana move and dephasing of the edge correlation.
    Move(Options),
    /// Four-Majorana interferometry with and without a braid.
    BraidDemo(Options),
    /// Gaussian covariance dynamics against the Fock-space oracle.
    OracleCompare(Options),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::ZeroModes(_) => "zero-modes",
            Command::Steady(_) => "steady",
            Command::Evolve(_) => "evolve",
            Command::Winding(_) => "winding",
            Command::Move(_) => "move",
            Command::BraidDemo(_) => "braid-demo",
            Command::OracleCompare(_) => "oracle-compare",
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Spectrum(o)
            | Command::ZeroModes(o)
            | Command::Steady(o)
            | Command::Evolve(o)
            | Command::Winding(o)
            | Command::Move(o)
            | Command::BraidDemo(o)
            | Command::OracleCompare(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ideal,
    Canonical,
    #[value(name = "noncanonical")]
    NonCanonical,
    /// Ideal wire with a next-nearest-neighbour admixture of strength `epsilon` (winding only).
    Imperfect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Initial {
    Vacuum,
    Mixed,
    Random,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Wire family.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Number of lattice sites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Deformation angle in radians; `pi/4`, `3pi/8` style literals accepted.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Phase of the deformation in radians.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Disorder half-width in radians (imperfection strength for `--kind imperfect`).
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// RNG seed; required when `epsilon > 0`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dissipation rate.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    /// Integration step.
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
    /// Final time (ramp duration for `move`).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Brillouin-zone grid size.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of sample intervals on `[0, t]`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Initial edge correlation for `move`.
    #[arg(long, allow_hyphen_values = true)]
    pub correlation: Option<f64>,
    /// Initial state for `evolve`.
    #[arg(long, value_enum)]
    pub initial: Option<Initial>,
    /// Apply the first braid in `braid-demo`.
    #[arg(long, num_args = 1)]
    pub braided: Option<bool>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; defaults to `$TOPOWIRE_OUT_DIR/<command>.<ext>` or stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// key=value config file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parse radians, accepting `pi`, `-pi/2`, `3pi/8`, `3*pi/8` and plain numbers.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || format!("cannot parse angle '{s}'");
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some(at) => {
            let coef = t[..at].trim_end_matches('*');
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => other.parse::<f64>().map_err(|_| bad())?,
            };
            let rest = &t[at + 2..];
            let d = if rest.is_empty() {
                1.0
            } else {
                rest.strip_prefix('/')
                    .ok_or_else(bad)?
                    .parse::<f64>()
                    .map_err(|_| bad())?
            };
            c * std::f64::consts::PI / d
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse::<T>()
        .map_err(|_| CliError::Config(format!("config key '{key}': cannot parse '{v}'")))
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T, CliError> {
    T::from_str(v, true).map_err(|_| CliError::Config(format!("config key '{key}': invalid value '{v}'")))
}

/// Fill the options not given on the command line from a key=value file.
/// Blank lines and `#` comments are ignored; `-` and `_` are interchangeable.
pub fn merge_config_file(opts: &mut Options, text: &str) -> Result<(), CliError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let v = value.trim();
        let k = key.as_str();
        let angle = |v: &str| parse_angle(v).map_err(|e| CliError::Config(format!("config key '{k}': {e}")));
        match k {
            "kind" => set(&mut opts.kind, parse_enum(k, v)?),
            "n" => set(&mut opts.n, parse_num(k, v)?),
            "theta" => set(&mut opts.theta, angle(v)?),
            "phi" => set(&mut opts.phi, angle(v)?),
            "epsilon" => set(&mut opts.epsilon, parse_num(k, v)?),
            "seed" => set(&mut opts.seed, parse_num(k, v)?),
            "kappa" => set(&mut opts.kappa, parse_num(k, v)?),
            "dt" => set(&mut opts.dt, parse_num(k, v)?),
            "t" => set(&mut opts.t, parse_num(k, v)?),
            "grid" => set(&mut opts.grid, parse_num(k, v)?),
            "samples" => set(&mut opts.samples, parse_num(k, v)?),
            "correlation" => set(&mut opts.correlation, parse_num(k, v)?),
            "initial" => set(&mut opts.initial, parse_enum(k, v)?),
            "braided" => set(&mut opts.braided, parse_num(k, v)?),
            "format" => set(&mut opts.format, parse_enum(k, v)?),
            "output" => set(&mut opts.output, PathBuf::from(v)),
            _ => return Err(CliError::Config(format!("unknown config key '{k}'"))),
        }
    }
    Ok(())
}

fn set<T>(slot: &mut Option<T>, v: T) {
    if slot.is_none() {
        *slot = Some(v);
    }
}

/// Fully resolved configuration, echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub kind: Kind,
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
    pub epsilon: f64,
    pub seed: Option<u64>,
    pub kappa: f64,
    pub dt: f64,
    pub t: f64,
    pub grid: usize,
    pub samples: usize,
    pub correlation: f64,
    pub initial: Initial,
    pub braided: bool,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

impl RunConfig {
    pub fn resolve(command: &Command) -> Result<Self, CliError> {
        let mut opts = command.options().clone();
        if let Some(path) = &opts.config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
            merge_config_file(&mut opts, &text)?;
        }
        let name = command.name();
        let (n, dt, t) = match name {
            "move" => (4, 0.02, 100.0),
            "oracle-compare" => (3, 0.005, 3.0),
            _ => (20, 0.01, 10.0),
        };
        let epsilon = opts.epsilon.unwrap_or(0.0);
        let kind = opts.kind.unwrap_or(Kind::Ideal);
        let initial = opts.initial.unwrap_or(Initial::Mixed);
        let mut seed = opts.seed;
        let random_initial = name == "oracle-compare" || (name == "evolve" && initial == Initial::Random);
        if seed.is_none() && random_initial && epsilon <= 0.0 {
            seed = Some(0);
        }
        let cfg = RunConfig {
            command: name,
            kind,
            n: opts.n.unwrap_or(n),
            theta: opts.theta.unwrap_or(std::f64::consts::FRAC_PI_4),
            phi: opts.phi.unwrap_or(0.0),
            epsilon,
            seed,
            kappa: opts.kappa.unwrap_or(1.0),
            dt: opts.dt.unwrap_or(dt),
            t: opts.t.unwrap_or(t),
            grid: opts.grid.unwrap_or(256),
            samples: opts.samples.unwrap_or(10),
            correlation: opts.correlation.unwrap_or(1.0),
            initial,
            braided: opts.braided.unwrap_or(false),
            format: opts.format.unwrap_or(Format::Json),
            output: opts.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        for (name, v) in [("kappa", self.kappa), ("dt", self.dt), ("t", self.t)] {
            if !(v.is_finite() && v > 0.0) {
                return err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.n == 0 || self.grid == 0 || self.samples == 0 {
            return err("n, grid and samples must be positive".into());
        }
        if !self.theta.is_finite() || !self.phi.is_finite() {
            return err("theta and phi must be finite".into());
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return err(format!("epsilon must be non-negative, got {}", self.epsilon));
        }
        if self.correlation.is_nan() || self.correlation.abs() > 1.0 {
            return err(format!("correlation must lie in [-1, 1], got {}", self.correlation));
        }
        if self.kind == Kind::Imperfect && self.command != "winding" {
            return err("kind imperfect is only available for winding".into());
        }
        if self.epsilon > 0.0 && self.kind != Kind::Imperfect {
            if self.seed.is_none() {
                return err("seed is required when epsilon > 0".into());
            }
            if self.kind == Kind::Ideal {
                return err("disorder needs a deformed wire (kind canonical or noncanonical)".into());
            }
        }
        Ok(())
    }
}
