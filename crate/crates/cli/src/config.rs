use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use steerkit::Tolerances;

use crate::error::CliError;

pub const TOLERANCE_LP_ENV: &str = "STEERKIT_TOLERANCE_LP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    ParadoxQubit,
    ParadoxQudit,
    ParadoxNopa,
    SeparableLhs,
    Feasibility,
    Ghz,
    Sweep,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSet {
    /// Normalized conditional states plus Bob's reduced state.
    #[default]
    Default,
    /// The four eigenstates of σ_z and σ_x.
    AxisEigenstates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridAxis {
    Theta,
    D,
    R,
    K,
}

impl GridAxis {
    pub fn default_base(self) -> Scenario {
        match self {
            GridAxis::Theta | GridAxis::K => Scenario::ParadoxQubit,
            GridAxis::D => Scenario::ParadoxQudit,
            GridAxis::R => Scenario::ParadoxNopa,
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, GridAxis::D | GridAxis::K)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Grid {
    pub axis: GridAxis,
    pub values: Vec<f64>,
}

impl Grid {
    /// Parses `axis=a:b:n` (n evenly spaced points, endpoints included),
    /// `axis=lo..hi` (inclusive integer range) or `axis=v1,v2,...`.
    pub fn parse(spec: &str) -> Result<Grid, CliError> {
        let bad = |msg: &str| CliError::Config(format!("grid `{spec}`: {msg}"));
        let (axis, body) = spec
            .split_once('=')
            .ok_or_else(|| bad("expected axis=values"))?;
        let axis = match axis.trim() {
            "theta" => GridAxis::Theta,
            "d" => GridAxis::D,
            "r" => GridAxis::R,
            "k" => GridAxis::K,
            other => return Err(bad(&format!("unknown axis `{other}`"))),
        };
        let body = body.trim();
        let values = if let Some((lo, hi)) = body.split_once("..") {
            let lo: i64 = lo
                .trim()
                .parse()
                .map_err(|_| bad("range bounds must be integers"))?;
            let hi: i64 = hi
                .trim()
                .parse()
                .map_err(|_| bad("range bounds must be integers"))?;
            (lo..=hi).map(|v| v as f64).collect()
        } else if body.contains(':') {
            let parts: Vec<&str> = body.split(':').collect();
            let [a, b, n] = parts[..] else {
                return Err(bad("linspace takes start:stop:count"));
            };
            let a: f64 = parse_num(a).map_err(|e| bad(&e))?;
            let b: f64 = parse_num(b).map_err(|e| bad(&e))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| bad("count must be a non-negative integer"))?;
            match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect(),
            }
        } else if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(parse_num)
                .collect::<Result<_, _>>()
                .map_err(|e| bad(&e))?
        };
        if axis.is_integer() && values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(bad("values must be non-negative integers"));
        }
        Ok(Grid { axis, values })
    }
}

/// Accepts plain numbers and `pi`, `pi/n`, `m*pi/n` style expressions.
pub fn parse_num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let err = || format!("`{s}` is not a number");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| err())?),
        None => (s, 1.0),
    };
    let factor = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(m) => m
            .trim_end_matches('*')
            .trim()
            .parse::<f64>()
            .map_err(|_| err())?,
        None => return Err(err()),
    };
    Ok(factor * std::f64::consts::PI / den)
}

#[derive(Debug, Parser, Default)]
#[command(
    name = "steerkit",
    version,
    about = "Steering contradiction certificates for pure entangled states"
)]
pub struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    pub scenario: Option<Scenario>,
    /// Config file with one `key=value` per line; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Angle of `cos θ|00⟩ + sin θ|11⟩`; accepts `pi/4` style values.
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Local dimension (qudit, NOPA truncation).
    #[arg(long)]
    pub d: Option<usize>,
    /// NOPA squeezing parameter.
    #[arg(long, value_parser = parse_num)]
    pub r: Option<f64>,
    /// Number of measurement settings.
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated settings: x, y, z, -x, bloch:nx:ny:nz, angle:α,
    /// Z (computational) and X (Fourier).
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
    /// Schmidt coefficients for paradox-qudit, comma-separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_num)]
    pub lambdas: Option<Vec<f64>>,
    /// Angle of Bob's state in separable-lhs.
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Candidate hidden states for feasibility.
    #[arg(long, value_enum)]
    pub candidates: Option<CandidateSet>,
    /// Sweep grid: theta=a:b:n, d=lo..hi or k=v1,v2,...
    #[arg(long)]
    pub grid: Option<String>,
    /// Scenario run at each grid point.
    #[arg(long, value_enum)]
    pub base: Option<Scenario>,
    #[arg(long)]
    pub tol_herm: Option<f64>,
    #[arg(long)]
    pub tol_eig: Option<f64>,
    #[arg(long)]
    pub tol_state_eq: Option<f64>,
    #[arg(long)]
    pub tol_rank1: Option<f64>,
    #[arg(long)]
    pub tol_lp: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Cli {
    fn or(self, other: Cli) -> Cli {
        Cli {
            scenario: self.scenario.or(other.scenario),
            config: self.config.or(other.config),
            theta: self.theta.or(other.theta),
            d: self.d.or(other.d),
            r: self.r.or(other.r),
            k: self.k.or(other.k),
            settings: self.settings.or(other.settings),
            lambdas: self.lambdas.or(other.lambdas),
            beta: self.beta.or(other.beta),
            candidates: self.candidates.or(other.candidates),
            grid: self.grid.or(other.grid),
            base: self.base.or(other.base),
            tol_herm: self.tol_herm.or(other.tol_herm),
            tol_eig: self.tol_eig.or(other.tol_eig),
            tol_state_eq: self.tol_state_eq.or(other.tol_state_eq),
            tol_rank1: self.tol_rank1.or(other.tol_rank1),
            tol_lp: self.tol_lp.or(other.tol_lp),
            output: self.output.or(other.output),
            format: self.format.or(other.format),
        }
    }
}

/// Turns `key=value` lines into the equivalent argument list. `#` starts a
/// comment; `scenario` becomes the positional argument.
pub fn config_file_args(text: &str, path: &Path) -> Result<Vec<OsString>, CliError> {
    let mut seen = BTreeMap::new();
    let mut args = vec![OsString::from("steerkit")];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(CliError::Config(format!(
                "{}: nested config files are not supported",
                path.display()
            )));
        }
        if seen.insert(key.clone(), lineno).is_some() {
            return Err(CliError::Config(format!(
                "{}: duplicate key `{key}`",
                path.display()
            )));
        }
        if key == "scenario" {
            args.insert(1, value.into());
        } else {
            args.push(format!("--{key}={value}").into());
        }
    }
    Ok(args)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    pub scenario: Scenario,
    pub theta: Option<f64>,
    pub d: Option<usize>,
    pub r: Option<f64>,
    pub k: Option<usize>,
    pub settings: Option<String>,
    pub lambdas: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub candidates: CandidateSet,
    pub grid: Option<Grid>,
    pub base: Option<Scenario>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            theta: None,
            d: None,
            r: None,
            k: None,
            settings: None,
            lambdas: None,
            beta: None,
            candidates: CandidateSet::Default,
            grid: None,
            base: None,
            tolerances: Tolerances::default(),
            output: None,
            format: Format::Json,
        }
    }

    /// Merges flags, the optional config file and the environment.
    /// Precedence: flag, then `STEERKIT_TOLERANCE_LP` for `tol_lp`, then file.
    pub fn resolve(cli: Cli, env_tol_lp: Option<&str>) -> Result<RunConfig, CliError> {
        let cli = match &cli.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                let file = Cli::try_parse_from(config_file_args(&text, path)?).map_err(|e| {
                    CliError::Config(format!(
                        "{}: {}",
                        path.display(),
                        first_line(&e.to_string())
                    ))
                })?;
                let flag_tol_lp = cli.tol_lp;
                let mut merged = cli.or(file);
                if flag_tol_lp.is_none() && env_tol_lp.is_some() {
                    merged.tol_lp = None;
                }
                merged
            }
            None => cli,
        };
        Self::from_merged(cli, env_tol_lp)
    }

    fn from_merged(cli: Cli, env_tol_lp: Option<&str>) -> Result<RunConfig, CliError> {
        let scenario = cli
            .scenario
            .ok_or_else(|| CliError::Usage("missing scenario".into()))?;
        let mut tolerances = Tolerances::default();
        let overrides = [
            (&mut tolerances.tol_herm, cli.tol_herm),
            (&mut tolerances.tol_eig, cli.tol_eig),
            (&mut tolerances.tol_state_eq, cli.tol_state_eq),
            (&mut tolerances.tol_rank1, cli.tol_rank1),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        tolerances.tol_lp = match (cli.tol_lp, env_tol_lp) {
            (Some(v), _) => v,
            (None, Some(env)) => parse_tol(TOLERANCE_LP_ENV, env)?,
            (None, None) => tolerances.tol_lp,
        };
        tolerances
            .validate()
            .map_err(|e| CliError::Config(format!("{e}: tolerances must be positive")))?;
        let grid = cli.grid.as_deref().map(Grid::parse).transpose()?;
        let config = RunConfig {
            scenario,
            theta: cli.theta,
            d: cli.d,
            r: cli.r,
            k: cli.k,
            settings: cli.settings,
            lambdas: cli.lambdas,
            beta: cli.beta,
            candidates: cli.candidates.unwrap_or_default(),
            grid,
            base: cli.base,
            tolerances,
            output: cli.output,
            format: cli.format.unwrap_or_default(),
        };
        config.check_required()?;
        Ok(config)
    }

    /// Scenario-specific required fields.
    pub fn check_required(&self) -> Result<(), CliError> {
        let need = |present: bool, field: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Config(format!(
                    "scenario {} requires --{field}",
                    self.scenario
                        .to_possible_value()
                        .map_or_else(String::new, |v| v.get_name().to_owned())
                )))
            }
        };
        match self.scenario {
            Scenario::ParadoxQubit | Scenario::Feasibility => need(self.theta.is_some(), "theta"),
            Scenario::ParadoxQudit => need(self.d.is_some() || self.lambdas.is_some(), "d"),
            Scenario::ParadoxNopa => {
                need(self.r.is_some(), "r")?;
                need(self.d.is_some(), "d")
            }
            Scenario::SeparableLhs => need(self.beta.is_some(), "beta"),
            Scenario::Ghz => Ok(()),
            Scenario::Sweep => {
                need(self.grid.is_some(), "grid")?;
                if self.base == Some(Scenario::Sweep) {
                    return Err(CliError::Config("sweeps cannot be nested".into()));
                }
                Ok(())
            }
        }
    }
}

fn parse_tol(name: &str, value: &str) -> Result<f64, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{name}: `{value}` is not a number")))
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or(s)
}
