use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

/// Energy-constrained online coverage on grid maps.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mission and write trajectory.csv, report.txt and trajectory.svg.
    ///
    /// Exits with 2 when some free cells were left uncovered.
    Run {
        map: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, env = "EPSPLUS_OUT", default_value = ".")]
        out: PathBuf,
    },
    /// Draw a trajectory log over its map.
    Render {
        log: PathBuf,
        map: PathBuf,
        #[arg(long, default_value = "trajectory.svg")]
        out: PathBuf,
        /// Metres per cell, as used for the run.
        #[arg(long, default_value_t = 1.0)]
        cell_size: f64,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { map, config, out } => {
            let cfg = epsplus::read_config(config.as_deref())?;
            let map = epsplus::read_map(&map)?;
            let report = epsplus::run_scenario(&map, &cfg, &out)?;
            println!(
                "{} trajectories, {} recharges, {} cells covered, {} uncoverable, length {:.3} m",
                report.trajectories.len(),
                report.recharge_count,
                report.covered_cell_count,
                report.uncoverable_cell_count,
                report.total_length
            );
            Ok(if report.uncoverable_cell_count > 0 {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Render {
            log,
            map,
            out,
            cell_size,
        } => {
            let svg = epsplus::render_files(&log, &map, cell_size)?;
            std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for incomplete coverage.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
