//! Command-line experiments: clock-game win rates, noise sweeps, the
//! phase-extraction Fisher curve and the entanglement/qubit audit.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, CliResult};
pub use output::{Report, Table};

#[derive(Debug, Parser)]
#[command(name = "clockgame", version, about = "Clock-game and phase-extraction experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Win probability over sweeps of N, D, K and ancilla.
    ClockGame(#[command(flatten)] Common),
    /// Noisy-ancilla win probability against the closed forms.
    NoiseSweep(#[command(flatten)] Common),
    /// Average Fisher information per pair, as CSV and SVG.
    FisherCurve(#[command(flatten)] Common),
    /// Entanglement audit and qubit cost table.
    Audit(#[command(flatten)] Common),
}

#[derive(Debug, Clone, PartialEq, Eq, Args, Default)]
pub struct Common {
    /// JSON config file, or `-` for stdin.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long)]
    pub reproducible: bool,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::ClockGame(c) | Command::NoiseSweep(c) | Command::FisherCurve(c) | Command::Audit(c) => c,
        }
    }
}

fn read_config(path: &Option<PathBuf>) -> CliResult<String> {
    match path {
        None => Ok(String::new()),
        Some(p) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Config(format!("config {}: {e}", p.display()))),
    }
}

/// Runs a subcommand on an already-loaded config document.
pub fn execute(command: &Command, config_text: &str) -> CliResult<Report> {
    let common = command.common();
    match command {
        Command::ClockGame(_) => {
            let mut cfg: config::ClockGameConfig = config::parse(config_text)?;
            cfg.seed = common.seed.unwrap_or(cfg.seed);
            cfg.trials = common.trials.unwrap_or(cfg.trials);
            commands::clock_game(&cfg)
        }
        Command::NoiseSweep(_) => {
            let mut cfg: config::NoiseSweepConfig = config::parse(config_text)?;
            cfg.seed = common.seed.unwrap_or(cfg.seed);
            commands::noise_sweep(&cfg)
        }
        Command::FisherCurve(_) => {
            let mut cfg: config::FisherCurveConfig = config::parse(config_text)?;
            cfg.seed = common.seed.unwrap_or(cfg.seed);
            commands::fisher_curve(&cfg)
        }
        Command::Audit(_) => {
            let mut cfg: config::AuditConfig = config::parse(config_text)?;
            cfg.seed = common.seed.unwrap_or(cfg.seed);
            commands::audit(&cfg)
        }
    }
}

/// `out.csv` → `out.<name>.csv` for secondary tables.
fn sibling(path: &Path, name: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let file = if name.is_empty() {
        format!("{stem}.{ext}")
    } else {
        format!("{stem}.{name}.{ext}")
    };
    path.with_file_name(file)
}

/// Writes a report: the first table to `--out` (or stdout), further tables
/// next to it, and any SVG beside the CSV.
pub fn write_report(report: &Report, common: &Common, stdout: &mut impl Write) -> CliResult<()> {
    for (i, table) in report.tables.iter().enumerate() {
        let csv = output::render_csv(table, report.seed, common.reproducible);
        match &common.out {
            Some(path) if i == 0 => fs::write(path, csv)?,
            Some(path) => fs::write(sibling(path, table.name, "csv"), csv)?,
            None => {
                if i > 0 {
                    writeln!(stdout)?;
                }
                stdout.write_all(csv.as_bytes())?;
            }
        }
    }
    if let Some(svg) = &report.svg {
        let path = report.svg_path.clone().or_else(|| common.out.as_deref().map(|p| sibling(p, "", "svg")));
        if let Some(path) = path {
            fs::write(path, svg)?;
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let common = cli.command.common();
    let text = read_config(&common.config)?;
    let report = execute(&cli.command, &text)?;
    write_report(&report, common, &mut io::stdout().lock())
}
