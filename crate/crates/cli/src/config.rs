// SPDX-License-Identifier: Apache-2.0

//! Flags and TOML config files, merged into one resolved run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopfdisc::analysis::{CheckToggles, RunOptions};
use hopfdisc::families::{FamilyKind, FiberFamily, Point};
use hopfdisc::field::PrimeFieldContext;
use hopfdisc::par::Execution;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! bail {
    ($($arg:tt)*) => { return Err(ConfigError(format!($($arg)*))) };
}

#[derive(Debug, Parser)]
#[command(
    name = "hopfdisc",
    version,
    about = "Fiber analysis for Cayley-Hamilton Hopf algebras over F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    AnalyzeFiber,
    ScanFamily,
    VerifyTheorems,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on one fiber.
    AnalyzeFiber(RunArgs),
    /// Analyze a grid of fibers and report the discriminant strata.
    ScanFamily(RunArgs),
    /// Scan a grid and print the pass/fail matrix of every check.
    VerifyTheorems(RunArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::AnalyzeFiber(a) => (CommandKind::AnalyzeFiber, a),
            Command::ScanFamily(a) => (CommandKind::ScanFamily, a),
            Command::VerifyTheorems(a) => (CommandKind::VerifyTheorems, a),
        }
    }
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::AnalyzeFiber => "analyze-fiber",
            CommandKind::ScanFamily => "scan-family",
            CommandKind::VerifyTheorems => "verify-theorems",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// central-ext-finite, central-ext-infinite or quantum-borel-rank1
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Field characteristic; defaults to the least prime p = 1 mod l above l^4.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Primitive l-th root of unity in F_p; defaults to one derived from the least generator.
    #[arg(long)]
    pub epsilon: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-parameter values, e.g. "s=0,1;u=1,8". Parameters left out get defaults.
    #[arg(long)]
    pub grid: Option<String>,
    /// Seeded draws per continuous parameter in default grids.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub u: Option<u64>,
    #[arg(long)]
    pub v: Option<u64>,
    #[arg(long)]
    pub x: Option<u64>,
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of ch,cocycles,tensor, or all / none.
    #[arg(long)]
    pub checks: Option<String>,
    /// Run sequentially instead of on the thread pool.
    #[arg(long)]
    pub sequential: bool,
}

/// Grid given either as the flag string or as a table of value lists.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    Table(BTreeMap<String, GridValue>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    One(u64),
    Many(Vec<u64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ChecksSpec {
    Text(String),
    List(Vec<String>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub ell: Option<usize>,
    pub prime: Option<u64>,
    pub epsilon: Option<u64>,
    pub seed: Option<u64>,
    pub grid: Option<GridSpec>,
    pub samples: Option<usize>,
    pub s: Option<u64>,
    pub u: Option<u64>,
    pub v: Option<u64>,
    pub x: Option<u64>,
    pub y: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub checks: Option<ChecksSpec>,
    pub sequential: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

/// Everything a run needs, after merging and validation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub family: FamilyKind,
    pub ell: usize,
    pub prime: u64,
    pub epsilon: u64,
    pub seed: u64,
    pub grid: BTreeMap<String, Vec<u64>>,
    pub format: Format,
    pub checks: CheckToggles,
    pub execution: Execution,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub family_def: FiberFamily,
    #[serde(skip)]
    pub points: Vec<Point>,
}

impl RunConfig {
    pub fn options(&self) -> RunOptions {
        RunOptions {
            mode: self.execution,
            checks: self.checks,
            ..RunOptions::default()
        }
    }
}

pub fn parse_checks(spec: &ChecksSpec) -> Result<CheckToggles, ConfigError> {
    let items: Vec<String> = match spec {
        ChecksSpec::Text(t) => t
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        ChecksSpec::List(l) => l.clone(),
    };
    let mut toggles = CheckToggles {
        ch: false,
        cocycles: false,
        tensor: false,
    };
    for item in items {
        match item.as_str() {
            "all" => toggles = CheckToggles::default(),
            "none" => {}
            "ch" => toggles.ch = true,
            "cocycles" => toggles.cocycles = true,
            "tensor" => toggles.tensor = true,
            other => bail!("unknown check `{other}` (expected ch, cocycles, tensor, all or none)"),
        }
    }
    Ok(toggles)
}

/// Per-parameter value lists and an optional sample count.
type GridValues = (BTreeMap<String, Vec<u64>>, Option<usize>);

/// "s=0,1;u=1,8;samples=4" into per-parameter lists and an optional sample count.
pub fn parse_grid_text(text: &str) -> Result<GridValues, ConfigError> {
    let mut values = BTreeMap::new();
    let mut samples = None;
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let Some((key, list)) = part.split_once('=') else {
            bail!("grid entry `{part}` is not of the form name=v1,v2");
        };
        let key = key.trim();
        let nums = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u64>().map_err(|_| {
                    ConfigError(format!(
                        "grid value `{s}` for `{key}` is not a nonnegative integer"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if key == "samples" {
            match nums.as_slice() {
                [n] => samples = Some(*n as usize),
                _ => bail!("`samples` takes one value"),
            }
        } else {
            values.insert(key.to_string(), nums);
        }
    }
    Ok((values, samples))
}

fn grid_from_spec(spec: &GridSpec) -> Result<GridValues, ConfigError> {
    match spec {
        GridSpec::Text(t) => parse_grid_text(t),
        GridSpec::Table(table) => {
            let mut values = BTreeMap::new();
            let mut samples = None;
            for (k, v) in table {
                let list = match v {
                    GridValue::One(x) => vec![*x],
                    GridValue::Many(xs) => xs.clone(),
                };
                if k == "samples" {
                    samples = list.first().map(|&n| n as usize);
                } else {
                    values.insert(k.clone(), list);
                }
            }
            Ok((values, samples))
        }
    }
}

pub fn resolve(kind: CommandKind, args: RunArgs) -> Result<RunConfig, ConfigError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let family_name = args
        .family
        .or(file.family)
        .ok_or_else(|| ConfigError("--family is required".into()))?;
    let family: FamilyKind = family_name.parse().map_err(ConfigError)?;
    let ell = args
        .ell
        .or(file.ell)
        .ok_or_else(|| ConfigError("--ell is required".into()))?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let prime = args.prime.or(file.prime);
    let epsilon = args.epsilon.or(file.epsilon);

    let ctx = match (prime, epsilon) {
        (None, None) => {
            FiberFamily::default_context(ell, seed).map_err(|e| ConfigError(e.to_string()))?
        }
        (Some(p), None) => PrimeFieldContext::with_prime(p, ell as u64, seed)
            .map_err(|e| ConfigError(e.to_string()))?,
        (p, Some(eps)) => {
            let p = match p {
                Some(p) => p,
                None => {
                    FiberFamily::default_context(ell, seed)
                        .map_err(|e| ConfigError(e.to_string()))?
                        .p
                }
            };
            PrimeFieldContext::with_epsilon(p, ell as u64, eps, seed)
                .map_err(|e| ConfigError(e.to_string()))?
        }
    };
    let family_def = FiberFamily::new(family, ell, ctx).map_err(|e| ConfigError(e.to_string()))?;

    let checks = match args.checks.map(ChecksSpec::Text).or(file.checks) {
        Some(spec) => parse_checks(&spec)?,
        None => CheckToggles::default(),
    };
    let format = args.format.or(file.format).unwrap_or(Format::Json);
    let execution = if args.sequential || file.sequential.unwrap_or(false) {
        Execution::Sequential
    } else {
        Execution::Parallel
    };

    // grid: file, then flag grid, then single-parameter flags, each overriding per parameter
    let mut values: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let mut samples = None;
    for spec in [file.grid.clone(), args.grid.clone().map(GridSpec::Text)]
        .into_iter()
        .flatten()
    {
        let (v, s) = grid_from_spec(&spec)?;
        values.extend(v);
        samples = s.or(samples);
    }
    let pinned = [
        ("s", args.s.or(file.s)),
        ("u", args.u.or(file.u)),
        ("v", args.v.or(file.v)),
        ("x", args.x.or(file.x)),
        ("y", args.y.or(file.y)),
    ];
    let params = family.parameters();
    for (name, val) in pinned {
        if let Some(val) = val {
            if !params.contains(&name) {
                bail!(
                    "--{name} does not apply to {family} (parameters: {})",
                    params.join(", ")
                );
            }
            values.insert(name.to_string(), vec![val]);
        }
    }
    for key in values.keys() {
        if !params.contains(&key.as_str()) {
            bail!(
                "grid parameter `{key}` does not apply to {family} (parameters: {})",
                params.join(", ")
            );
        }
    }
    let samples = args.samples.or(file.samples).or(samples).unwrap_or(4);

    if kind == CommandKind::AnalyzeFiber {
        let missing: Vec<&str> = params
            .iter()
            .copied()
            .filter(|p| values.get(*p).is_none_or(|v| v.len() != 1))
            .collect();
        if !missing.is_empty() {
            bail!(
                "analyze-fiber needs exactly one value for each of: {}",
                missing.join(", ")
            );
        }
    } else {
        let mut rng = family_def.ctx.rng_for(&[0x6772_6964]);
        for p in params {
            if !values.contains_key(*p) {
                values.insert(
                    p.to_string(),
                    family_def.default_values(p, samples, &mut rng),
                );
            }
        }
    }
    let points = family_def
        .grid(&values)
        .map_err(|e| ConfigError(e.to_string()))?;
    if points.is_empty() {
        bail!("grid is empty");
    }
    // record the reduced values actually used
    let mut grid: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for (name, val) in points.iter().flat_map(Point::params) {
        grid.entry(name.to_string()).or_default().push(val);
    }
    for vals in grid.values_mut() {
        vals.sort_unstable();
        vals.dedup();
    }

    Ok(RunConfig {
        command: kind.name(),
        family,
        ell,
        prime: family_def.ctx.p,
        epsilon: family_def.ctx.epsilon.value(),
        seed,
        grid,
        format,
        checks,
        execution,
        out: args.out.or(file.out),
        family_def,
        points,
    })
}
