//! File formats and batch runs for the coverage planner in `epsplus-core`.
//!
//! [`run_scenario`] loads a map and a config, runs the mission and writes
//! `trajectory.csv`, `report.txt` and `trajectory.svg` to an output
//! directory.

pub mod config;
pub mod log;
pub mod map;
pub mod report;
pub mod svg;

use std::fs;
use std::io::BufWriter;
use std::path::Path;

pub use epsplus_core as core;
use epsplus_core::{run_mission, MissionError, MissionReport, WorldError};
use thiserror::Error;

pub use config::{parse_config, RunConfig};
pub use map::{parse_map, MapFile};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Map {
        path: String,
        source: map::MapParseError,
    },
    #[error("{path}: {source}")]
    Config {
        path: String,
        source: config::ConfigError,
    },
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Mission(#[from] MissionError),
    #[error(transparent)]
    Log(#[from] log::LogError),
    #[error(transparent)]
    Render(#[from] svg::RenderError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn read_map(path: &Path) -> Result<MapFile, RunError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_map(&text).map_err(|source| RunError::Map {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_config(path: Option<&Path>) -> Result<RunConfig, RunError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text).map_err(|source| RunError::Config {
        path: path.display().to_string(),
        source,
    })
}

/// Runs one scenario and writes its artifacts into `out_dir`.
pub fn run_scenario(
    map: &MapFile,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<MissionReport, RunError> {
    let world = map.ground_truth(config.cell_size)?;
    let report = run_mission(&world, &config.mission)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let csv_path = out_dir.join("trajectory.csv");
    let file = fs::File::create(&csv_path).map_err(io_err(&csv_path))?;
    log::write_log(BufWriter::new(file), &report.log)?;

    let report_path = out_dir.join("report.txt");
    fs::write(&report_path, report::format_report(&report)).map_err(io_err(&report_path))?;

    let svg_path = out_dir.join("trajectory.svg");
    fs::write(&svg_path, svg::render_svg(&world, &report.log)?).map_err(io_err(&svg_path))?;
    Ok(report)
}

/// Renders a saved log over its map.
pub fn render_files(log_path: &Path, map_path: &Path, cell_size: f64) -> Result<String, RunError> {
    let map = read_map(map_path)?;
    let world = map.ground_truth(cell_size)?;
    let file = fs::File::open(log_path).map_err(io_err(log_path))?;
    let records = log::read_log(file)?;
    Ok(svg::render_svg(&world, &records)?)
}
