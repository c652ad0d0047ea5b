//! Ground-truth world and disk-shaped sonar.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::ray_clear;
use crate::grid::{CellGrid, CellIndex, MapError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorldError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("the station {0} sits on an obstacle")]
    StationBlocked(CellIndex),
    #[error("sensor range must be positive and finite (got {0})")]
    InvalidRange(f64),
}

/// The true obstacle layout, fixed for a mission.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    width: usize,
    height: usize,
    cell_size: f64,
    station: CellIndex,
    obstacles: Vec<bool>,
}

impl GroundTruth {
    pub fn new(
        width: usize,
        height: usize,
        cell_size: f64,
        station: CellIndex,
        obstacles: &[CellIndex],
    ) -> Result<Self, WorldError> {
        // Reuse the grid constructor's validation of size, cell size and station.
        CellGrid::new(width, height, cell_size, station)?;
        let mut mask = vec![false; width * height];
        for &o in obstacles {
            if o.col >= width || o.row >= height {
                return Err(MapError::OutOfBounds {
                    cell: o,
                    width,
                    height,
                }
                .into());
            }
            if o == station {
                return Err(WorldError::StationBlocked(o));
            }
            mask[o.row * width + o.col] = true;
        }
        Ok(GroundTruth {
            width,
            height,
            cell_size,
            station,
            obstacles: mask,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn station(&self) -> CellIndex {
        self.station
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.col < self.width && cell.row < self.height
    }

    pub fn is_obstacle(&self, cell: CellIndex) -> bool {
        self.contains(cell) && self.obstacles[cell.row * self.width + cell.col]
    }

    pub fn obstacles(&self) -> impl Iterator<Item = CellIndex> + '_ {
        self.obstacles
            .iter()
            .enumerate()
            .filter(|(_, &o)| o)
            .map(|(i, _)| CellIndex::new(i % self.width, i / self.width))
    }

    pub fn free_cell_count(&self) -> usize {
        self.obstacles.iter().filter(|&&o| !o).count()
    }

    /// Fresh, fully unexplored belief grid of the same shape.
    pub fn blank_belief(&self) -> CellGrid {
        CellGrid::new(self.width, self.height, self.cell_size, self.station)
            .expect("ground truth dimensions were validated on construction")
    }

    /// Obstacle cells whose centre lies within range of the pose centre and
    /// whose ray from the pose is not cut by a nearer obstacle. Sorted.
    pub fn sense(&self, sensor: &SensorModel, pose: CellIndex) -> Vec<CellIndex> {
        let reach = libm::floor(sensor.range / self.cell_size) as usize;
        let cols = pose.col.saturating_sub(reach)..(pose.col + reach + 1).min(self.width);
        let rows = pose.row.saturating_sub(reach)..(pose.row + reach + 1).min(self.height);
        let mut found = Vec::new();
        for row in rows {
            for col in cols.clone() {
                let cell = CellIndex::new(col, row);
                if !self.is_obstacle(cell) {
                    continue;
                }
                let dc = col.abs_diff(pose.col) as f64;
                let dr = row.abs_diff(pose.row) as f64;
                if libm::hypot(dc, dr) * self.cell_size > sensor.range {
                    continue;
                }
                if ray_clear(pose, cell, |c| self.is_obstacle(c)) {
                    found.push(cell);
                }
            }
        }
        found.sort();
        found
    }

    /// A single step onto a free cell that shares an edge or corner with
    /// `from`, or staying put.
    pub fn validate_move(&self, from: CellIndex, to: CellIndex) -> bool {
        self.contains(to) && !self.is_obstacle(to) && (from == to || from.is_adjacent8(to))
    }
}

/// Omnidirectional range sensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensorModel {
    range: f64,
}

impl SensorModel {
    pub fn new(range: f64) -> Result<Self, WorldError> {
        if range.is_finite() && range > 0.0 {
            Ok(SensorModel { range })
        } else {
            Err(WorldError::InvalidRange(range))
        }
    }

    pub fn range(&self) -> f64 {
        self.range
    }
}
