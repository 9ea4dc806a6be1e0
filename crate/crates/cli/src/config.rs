//! Run configuration: defaults, an optional JSON file, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::Deserialize;
use suther_lax::dynamics::{IntegratorConfig, Method};
use suther_lax::model::{CouplingParams, PhasePoint};

/// Largest accepted `n`; matrices are `2n × 2n` and tensors `4n² × 4n²`.
pub const MAX_N: usize = 16;
const MAX_STEPS: f64 = 1e7;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Simulate,
    Project,
    Rmatrix,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Simulate => "simulate",
            Command::Project => "project",
            Command::Rmatrix => "rmatrix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Debug, Parser)]
#[command(
    name = "suther-lax",
    version,
    about = "Hyperbolic BC_n Sutherland model: checks and simulations"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// Every field optional; unset fields fall back to the config file, then defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Positions, comma separated, strictly decreasing and positive.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Momenta, comma separated; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rtol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub atol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// Fields set in `self` win over `base`.
    fn over(self, base: Options) -> Options {
        Options {
            n: self.n.or(base.n),
            mu: self.mu.or(base.mu),
            nu: self.nu.or(base.nu),
            kappa: self.kappa.or(base.kappa),
            seed: self.seed.or(base.seed),
            samples: self.samples.or(base.samples),
            q: self.q.or(base.q),
            p: self.p.or(base.p),
            method: self.method.or(base.method),
            dt: self.dt.or(base.dt),
            rtol: self.rtol.or(base.rtol),
            atol: self.atol.or(base.atol),
            t_end: self.t_end.or(base.t_end),
            stride: self.stride.or(base.stride),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config,
        }
    }
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub couplings: CouplingParams,
    pub seed: u64,
    pub samples: usize,
    pub integrator: IntegratorConfig,
    /// Explicit `q` (and `p`, zero-filled) when given.
    pub point: Option<PhasePoint>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn load_file(path: &Path) -> Result<Options, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

impl RunConfig {
    /// Reads `--config` if present, layers the flags over it and validates.
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let file = match &cli.options.config {
            Some(path) => load_file(path)?,
            None => Options::default(),
        };
        Self::resolve(cli.command, cli.options.over(file))
    }

    pub fn resolve(command: Command, o: Options) -> Result<Self, ConfigError> {
        let invalid = |m: String| ConfigError::Invalid(m);

        let n = match (o.n, o.q.as_ref()) {
            (Some(n), Some(q)) if n != q.len() => {
                return Err(invalid(format!("--n {n} but --q has {} entries", q.len())))
            }
            (Some(n), _) => n,
            (None, Some(q)) => q.len(),
            (None, None) => 2,
        };
        if n == 0 || n > MAX_N {
            return Err(invalid(format!("n must lie in 1..={MAX_N}, got {n}")));
        }

        let couplings = CouplingParams::new(
            o.mu.unwrap_or(1.0),
            o.nu.unwrap_or(1.2),
            o.kappa.unwrap_or(0.7),
        )
        .map_err(|e| invalid(format!("parameter constraint violated: {e}")))?;

        let point = match (o.q, o.p) {
            (None, None) => None,
            (None, Some(_)) => return Err(invalid("--p given without --q".into())),
            (Some(q), p) => {
                let p = p.unwrap_or_else(|| vec![0.0; q.len()]);
                if p.len() != q.len() {
                    return Err(invalid(format!(
                        "--q has {} entries but --p has {}",
                        q.len(),
                        p.len()
                    )));
                }
                if p.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("momenta must be finite".into()));
                }
                Some(PhasePoint::new(q, p).map_err(|e| invalid(e.to_string()))?)
            }
        };
        if command == Command::Rmatrix && point.is_none() {
            return Err(invalid("rmatrix needs explicit positions (--q)".into()));
        }

        let samples = o.samples.unwrap_or(20);
        if samples == 0 {
            return Err(invalid("samples must be at least 1".into()));
        }

        let defaults = IntegratorConfig::default();
        let integrator = IntegratorConfig {
            method: match o.method {
                Some(MethodArg::Rk4) => Method::Rk4,
                Some(MethodArg::Rk45) => Method::Rk45,
                None => defaults.method,
            },
            dt: o.dt.unwrap_or(defaults.dt),
            rtol: o.rtol.unwrap_or(defaults.rtol),
            atol: o.atol.unwrap_or(defaults.atol),
            t_end: o.t_end.unwrap_or(defaults.t_end),
            sample_stride: o.stride.unwrap_or(defaults.sample_stride),
        };
        integrator.validate().map_err(|e| invalid(e.to_string()))?;
        if integrator.t_end / integrator.dt > MAX_STEPS {
            return Err(invalid(format!(
                "t_end / dt = {:e} exceeds the step budget {MAX_STEPS:e}",
                integrator.t_end / integrator.dt
            )));
        }

        let format = o.format.unwrap_or(match command {
            Command::Simulate | Command::Project => Format::Csv,
            Command::Verify | Command::Rmatrix => Format::Json,
        });

        Ok(RunConfig {
            command,
            n,
            couplings,
            seed: o.seed.unwrap_or(0),
            samples,
            integrator,
            point,
            out: o.out,
            format,
        })
    }
}
