mod args;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;
use log::info;
use nrcg_core::report::Table;
use nrcg_core::sweep::{self, SweepConfig};

use args::{Cli, Command};
use error::CliError;

fn run(command: &Command) -> Result<(), CliError> {
    let mut cfg = args::resolve(command.args())?;
    let name = match command {
        Command::TempScan(_) => "temp-scan",
        Command::GridScan(_) => "grid-scan",
        Command::ThermalBaseline(_) => "thermal-baseline",
        Command::Trace(_) => "trace",
        Command::CnotCompare(_) => "cnot-compare",
        Command::PccReport(_) => "pcc-report",
    };
    if matches!(command, Command::PccReport(_)) {
        cfg.correlations = true;
    }
    info!("{name}: {} iterations", cfg.iterations());
    let table = build(command, &cfg)?;
    output::emit(&table, &cfg.resolved(), name)
}

fn build(command: &Command, cfg: &SweepConfig) -> Result<Table, CliError> {
    let table = match command {
        Command::TempScan(_) => sweep::temp_table(&sweep::temp_scan(cfg)?),
        Command::GridScan(_) => sweep::grid_scan(cfg)?.to_table(),
        Command::ThermalBaseline(_) => sweep::thermal_baseline_scan(cfg)?.to_table(),
        Command::Trace(_) => sweep::trace_report(cfg)?.to_table(),
        Command::CnotCompare(_) => sweep::cnot_compare(cfg)?.to_table(),
        Command::PccReport(_) => {
            let report = sweep::trace_report(cfg)?;
            sweep::pcc_table(&sweep::pcc_report(&report)?)
        }
    };
    Ok(table)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
