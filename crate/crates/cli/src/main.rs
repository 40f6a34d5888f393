mod compute;
mod config;
mod presets;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use mcso_core::crosscheck;
use mcso_core::Parity;

use crate::config::SweepConfig;

/// Everything that ends a run early, by exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Io(String),
    Numerical(String),
    OracleMismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::OracleMismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical error: {m}"),
            Failure::OracleMismatch(m) => write!(f, "oracle mismatch: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "mcso", version, about = "Nonclassicality diagnostics of operated odd cat states")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a quantity over the parameter sweep in a JSON config.
    Compute {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Write the dataset behind a figure preset (or `all`).
    Figure {
        name: String,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Cross-check every closed form against the Fock-space oracle.
    Verify,
}

fn run_compute(path: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let cfg = SweepConfig::parse(&text)?;
    let done = compute::run(&cfg)?;
    done.table.save(&cfg.output)?;
    eprintln!("wrote {} rows to {}", done.table.rows.len(), cfg.output.display());
    if done.mismatches > 0 {
        return Err(Failure::OracleMismatch(format!(
            "{} rows differ from the oracle by more than {} relative",
            done.mismatches,
            compute::ORACLE_REL_TOL
        )));
    }
    Ok(())
}

fn run_figure(name: &str, out: &Path) -> Result<(), Failure> {
    let names: Vec<&str> = if name == "all" { presets::NAMES.to_vec() } else { vec![name] };
    for name in names {
        let preset = presets::preset(name).ok_or_else(|| {
            Failure::Config(format!("unknown figure `{name}`; expected one of {} or all", presets::NAMES.join(", ")))
        })?;
        let start = Instant::now();
        let done = compute::run(&preset.config)?;
        let path = out.join(&preset.config.output);
        done.table.save(&path)?;
        let verdict = preset.check.map(|c| format!(", {}", c(&done.table))).unwrap_or_default();
        println!(
            "{}: {} ({:.1}s){verdict}",
            preset.name,
            path.display(),
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

fn run_verify() -> Result<(), Failure> {
    let mut failed = 0;
    let mut total = 0;
    for parity in [Parity::Odd, Parity::Even] {
        let start = Instant::now();
        let results = crosscheck::run(&crosscheck::grid(parity)).map_err(|e| Failure::Numerical(e.to_string()))?;
        let bad: Vec<_> = results.iter().filter(|c| !c.passes()).collect();
        for c in &bad {
            println!(
                "MISMATCH {} m={} theta={} phi={} alpha0={}: closed {} oracle {}",
                c.quantity, c.params.m, c.params.theta, c.params.phi, c.params.alpha0, c.closed, c.oracle
            );
        }
        println!(
            "{parity:?} parity: {} comparisons, {} mismatches ({:.1}s)",
            results.len(),
            bad.len(),
            start.elapsed().as_secs_f64()
        );
        failed += bad.len();
        total += results.len();
    }
    if failed > 0 {
        return Err(Failure::OracleMismatch(format!("{failed} of {total} comparisons outside tolerance")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("config error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Compute { config } => run_compute(config),
        Command::Figure { name, out } => run_figure(name, out),
        Command::Verify => run_verify(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
