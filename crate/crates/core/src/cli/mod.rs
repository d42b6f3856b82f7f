//! Command-line front end: `constants`, `space`, `verify` and `sandbox`.
//!
//! Exit codes: 0 success, 1 an inequality or invariant was violated,
//! 2 usage, domain or unsupported-operation error.

mod commands;
pub mod format;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::spaces::SpaceDescriptor;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SHARPINEQ_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sharpineq", version, about = "Sharp constants and desk-scale verification of isoperimetric-type inequalities")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv, global = true)]
    pub format: OutputFormat,
    /// Output file; relative paths resolve against $SHARPINEQ_OUT_DIR when set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// First random seed.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Tolerance override `KEY=VALUE`; keys: margin, eigen.
    #[arg(long = "tol", value_name = "KEY=VALUE", global = true)]
    pub tol: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Table of sharp constants for (n, p, alpha, avr).
    Constants(ConstantsArgs),
    /// AVR, Bishop–Gromov, curvature and isoperimetric sweep of a model space.
    Space(SpaceArgs),
    /// Run a verification suite on a model space.
    Verify(VerifyArgs),
    /// Finite metric and lattice experiments.
    #[command(subcommand)]
    Sandbox(SandboxCommand),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub n: f64,
    /// Sobolev exponent; omit for the Faber–Krahn and isoperimetric constants only.
    #[arg(long)]
    pub p: Option<f64>,
    /// Gagliardo–Nirenberg exponent; defaults to n/(n-p).
    #[arg(long, requires = "p")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub avr: f64,
}

/// Model-space selection, either as flags or as one descriptor record.
#[derive(Debug, Args, Serialize)]
pub struct SpaceFlags {
    /// Whole descriptor, e.g. "variant=warped n=2 a=0.5 beta=1".
    #[arg(long, conflicts_with_all = ["variant", "a", "beta", "m", "alpha_w", "k"])]
    pub space: Option<String>,
    /// euclidean, warped, cone, monomial or ale.
    #[arg(long, default_value = "euclidean")]
    pub variant: String,
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    /// Warping tail slope (warped).
    #[arg(long)]
    pub a: Option<f64>,
    /// Warping decay rate (warped).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Link measure m_M (cone).
    #[arg(long)]
    pub m: Option<f64>,
    /// Weight exponent (monomial).
    #[arg(long)]
    pub alpha_w: Option<f64>,
    /// Group order (ale).
    #[arg(long)]
    pub k: Option<f64>,
}

impl SpaceFlags {
    pub fn descriptor(&self) -> Result<SpaceDescriptor> {
        if let Some(text) = &self.space {
            return text.parse();
        }
        Ok(SpaceDescriptor {
            variant: self.variant.clone(),
            n: Some(self.n),
            a: self.a,
            beta: self.beta,
            m_m: self.m,
            alpha_w: self.alpha_w,
            k: self.k,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SpaceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub space: SpaceFlags,
    /// Radius sweep `start:stop:lin|log:count` (default 1:1000:log:50).
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PolyaSzego,
    Sobolev,
    Gn,
    FaberKrahn,
    FkSweep,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    #[serde(flatten)]
    pub space: SpaceFlags,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Gagliardo–Nirenberg exponent; defaults to N/(N-p).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ball radii for faber-krahn, comma separated.
    #[arg(long = "R", alias = "radius", value_delimiter = ',', default_value = "1")]
    pub radii: Vec<f64>,
    /// Radius sweep for fk-sweep (default 1:500:log:12).
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SandboxCommand {
    /// Check Z_s(Ω, B_x0(R)) ⊆ Ω_{s(d0+R)} on random graphs or one given graph.
    ZInclusion(ZInclusionArgs),
    /// Brunn–Minkowski deficits of lattice samples under dyadic refinement.
    Bm(BmArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ZInclusionArgs {
    /// Number of random instances, seeded seed..seed+seeds.
    #[arg(long, default_value_t = 200)]
    pub seeds: u64,
    /// pathN, gridRxC, or an edge-list CSV file (u,v,w).
    #[arg(long)]
    pub graph: Option<String>,
    /// Ω as comma-separated points.
    #[arg(long, value_delimiter = ',', requires = "graph")]
    pub omega: Vec<usize>,
    /// Ball center; defaults to the first point of Ω.
    #[arg(long, requires = "graph")]
    pub x0: Option<usize>,
    /// Ball radius; defaults to diam(M) + 1.
    #[arg(long, requires = "graph")]
    pub radius: Option<f64>,
    #[arg(long, requires = "graph")]
    pub s: Option<f64>,
    /// Interpolant slack; defaults to 0 on integral metrics, 1e-9·diam otherwise.
    #[arg(long)]
    pub slack: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub neighborhood_slack: f64,
    /// Write the metric of --graph as an edge-list CSV.
    #[arg(long, requires = "graph")]
    pub save_graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Box,
    Ball,
}

#[derive(Debug, Args, Serialize)]
pub struct BmArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Coarsest lattice spacing; must be 1/m for an integer m.
    #[arg(long, default_value_t = 0.015625)]
    pub h: f64,
    /// Interpolation parameter as num/den or decimal.
    #[arg(long, default_value = "1/2")]
    pub s: String,
    #[arg(long, default_value_t = 2)]
    pub refinements: u32,
    #[arg(long, value_enum, default_value_t = Shape::Box)]
    pub shape: Shape,
    /// Exponent N in the inequality; defaults to n.
    #[arg(long)]
    pub big_n: Option<f64>,
}

/// Overridable tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative margin below zero still counted as holding.
    pub margin: f64,
    /// Relative bisection width of the eigenvalue solver.
    pub eigen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            margin: crate::verify::MARGIN_TOLERANCE,
            eigen: crate::specfun::Precision::default().abs_tol,
        }
    }
}

/// Parsed invocation: command name, every flag as a flat `key=value`
/// record, and the shared settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub record: BTreeMap<String, String>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub tolerances: Tolerances,
}

fn flatten(prefix: &str, value: &Value, out: &mut BTreeMap<String, String>) {
    match value {
        Value::Null => {}
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            if !parts.is_empty() {
                out.insert(prefix.to_string(), parts.join(","));
            }
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

fn parse_tolerances(items: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for item in items {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("tolerance {item:?} is not KEY=VALUE")))?;
        let x: f64 = val
            .parse()
            .map_err(|_| Error::Parse(format!("tolerance {key} is not a number: {val:?}")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("tolerance > 0 violated: {key}={x}")));
        }
        match key {
            "margin" => tol.margin = x,
            "eigen" => tol.eigen = x,
            other => return Err(Error::Parse(format!("unknown tolerance key {other:?}; expected margin or eigen"))),
        }
    }
    Ok(tol)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let tree = serde_json::to_value(&cli.command).map_err(|e| Error::Parse(e.to_string()))?;
        let mut record = BTreeMap::new();
        let mut command = String::new();
        if let Value::Object(map) = &tree {
            for (name, args) in map {
                command = name.clone();
                match args {
                    Value::Object(inner) if name == "sandbox" => {
                        for (sub, sub_args) in inner {
                            command = format!("sandbox-{sub}");
                            flatten("", sub_args, &mut record);
                        }
                    }
                    other => flatten("", other, &mut record),
                }
            }
        }
        if let Command::Verify(_) = &cli.command {
            command = format!("verify-{}", record.remove("suite").unwrap_or_default());
        }
        Ok(Self {
            command,
            record,
            format: cli.format,
            out: cli.out.clone(),
            seed: cli.seed,
            tolerances: parse_tolerances(&cli.tol)?,
        })
    }

    /// The record as `key=value` pairs separated by spaces.
    pub fn record_line(&self) -> String {
        self.record.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

/// Result of one command before rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub json: Value,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
    pub violation: bool,
}

impl Outcome {
    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            OutputFormat::Csv => self.csv.clone(),
            OutputFormat::Json => {
                let doc = serde_json::json!({
                    "command": config.command,
                    "config": config.record,
                    "seed": config.seed,
                    "tolerances": config.tolerances,
                    "violation": self.violation,
                    "result": self.json,
                });
                let mut text = serde_json::to_string_pretty(&doc).unwrap_or_default();
                text.push('\n');
                text
            }
        }
    }
}

/// Execute a parsed invocation without touching stdout or the filesystem.
pub fn execute(cli: &Cli) -> Result<(RunConfig, Outcome)> {
    let config = RunConfig::from_cli(cli)?;
    let outcome = match &cli.command {
        Command::Constants(a) => commands::constants(a)?,
        Command::Space(a) => commands::space(a)?,
        Command::Verify(a) => commands::verify(a, &config.tolerances)?,
        Command::Sandbox(SandboxCommand::ZInclusion(a)) => commands::z_inclusion(a, config.seed)?,
        Command::Sandbox(SandboxCommand::Bm(a)) => commands::bm(a)?,
    };
    Ok((config, outcome))
}

fn target_path(config: &RunConfig, out_dir: Option<&Path>) -> Option<PathBuf> {
    match (&config.out, out_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.{}", config.command, config.format.extension()))),
        (None, None) => None,
    }
}

/// Full CLI run; returns the process exit code.
pub fn run<I, T>(args: I, out_dir: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (config, outcome) = match execute(&cli) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let body = outcome.render(&config);
    match target_path(&config, out_dir) {
        Some(path) => {
            let written = path
                .parent()
                .filter(|d| !d.as_os_str().is_empty())
                .map_or(Ok(()), std::fs::create_dir_all)
                .and_then(|()| std::fs::write(&path, &body));
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
            let _ = writeln!(stderr, "wrote {}", path.display());
        }
        None => {
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    for line in &outcome.summary {
        let _ = writeln!(stderr, "{line}");
    }
    if outcome.violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}
