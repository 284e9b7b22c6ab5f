use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nrcg_core::sweep::{AxisGrid, KtGrid, OutputFormat, SweepConfig};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "nrcg",
    version,
    about = "Nth-root CNOT quantum heat engine sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peak work over the full (θ, φ) grid for each temperature.
    TempScan(CommonArgs),
    /// Peak-work map over (θ, φ) at one temperature.
    GridScan(CommonArgs),
    /// Dephased qubit-B scan and its gap to the coherent scan.
    ThermalBaseline(CommonArgs),
    /// Per-iteration energies (and correlations) at one initialisation.
    Trace(CommonArgs),
    /// Root-gate run against the full-CNOT run over the same cycles.
    CnotCompare(CommonArgs),
    /// Pearson coefficients between correlation measures and energies.
    PccReport(CommonArgs),
}

impl Command {
    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::TempScan(a)
            | Command::GridScan(a)
            | Command::ThermalBaseline(a)
            | Command::Trace(a)
            | Command::CnotCompare(a)
            | Command::PccReport(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Protocol case.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub case: Option<u8>,
    /// Register size.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub qubits: Option<u8>,
    /// Root N of the gates.
    #[arg(long)]
    pub root: Option<u32>,
    /// Protocol iterations M.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Temperature(s) k_B T of qubits A and C, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub kt: Option<Vec<f64>>,
    /// Polar angle of qubit B; accepts radians or e.g. `0.83pi`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Azimuthal angle of qubit B; accepts radians or e.g. `0.32pi`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Number of θ grid points on [0, π].
    #[arg(long)]
    pub grid_theta: Option<usize>,
    /// Number of φ grid points on [0, 2π].
    #[arg(long)]
    pub grid_phi: Option<usize>,
    /// Add correlation columns to traces.
    #[arg(long)]
    pub correlations: bool,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// TOML configuration file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Per-iteration gate list such as `A>B,B>A`.
    #[arg(long)]
    pub gate_sequence: Option<String>,
    /// Accept gate lists that break the case's structural rules.
    #[arg(long)]
    pub allow_custom: bool,
}

/// Parses `1.2`, `pi`, `0.83pi` or `0.83*pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase();
    let value = match t.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = if coef.is_empty() {
                1.0
            } else {
                coef.parse::<f64>()
                    .map_err(|e| format!("bad angle {text:?}: {e}"))?
            };
            c * PI
        }
        None => t
            .parse::<f64>()
            .map_err(|e| format!("bad angle {text:?}: {e}"))?,
    };
    if !value.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(value)
}

pub fn load_config(path: &Path) -> Result<SweepConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Defaults, overlaid by the config file, overlaid by flags.
pub fn resolve(args: &CommonArgs) -> Result<SweepConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => SweepConfig::default(),
    };
    let p = &mut cfg.protocol;
    if let Some(v) = args.case {
        p.case = v;
    }
    if let Some(v) = args.qubits {
        p.qubits = v as usize;
    }
    if let Some(v) = args.root {
        p.root = v;
    }
    if let Some(v) = &args.gate_sequence {
        p.gate_sequence = Some(v.clone());
    }
    if args.allow_custom {
        p.allow_custom = true;
    }
    if let Some(v) = args.iterations {
        cfg.iterations = Some(v);
    }
    if let Some(v) = &args.kt {
        cfg.kt_grid = match v.as_slice() {
            [one] => KtGrid::One(*one),
            many => KtGrid::Many(many.to_vec()),
        };
    }
    if let Some(v) = args.theta {
        cfg.theta = Some(v);
    }
    if let Some(v) = args.phi {
        cfg.phi = Some(v);
    }
    if let Some(n) = args.grid_theta {
        cfg.theta_grid = AxisGrid {
            count: n,
            ..cfg.theta_grid
        };
    }
    if let Some(n) = args.grid_phi {
        cfg.phi_grid = AxisGrid {
            count: n,
            ..cfg.phi_grid
        };
    }
    if args.correlations {
        cfg.correlations = true;
    }
    if let Some(v) = args.jobs {
        cfg.jobs = Some(v);
    }
    if let Some(v) = &args.out {
        cfg.output.path = Some(v.clone());
    }
    if let Some(f) = args.format {
        cfg.output.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}
