//! Online coverage planning for a battery-limited vehicle on an unknown grid.
//!
//! The vehicle starts on a charging station, explores a rectangular cell map
//! whose obstacles it only learns by sensing, and returns to recharge
//! whenever the remaining energy would no longer cover the trip home.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod energy;
pub mod geometry;
pub mod grid;
pub mod hierarchy;
pub mod mission;
pub mod planner;
pub mod simulator;
pub mod visibility;

pub use energy::{EnergyError, EnergyState, SegmentKind};
pub use grid::{CellGrid, CellIndex, CellState, MapError};
pub use hierarchy::MapsHierarchy;
pub use mission::{
    run_mission, LogRecord, Mission, MissionConfig, MissionError, MissionEvent, MissionReport,
    Trajectory, TrajectorySegment,
};
pub use planner::{next_waypoint, restart_point, Waypoint};
pub use simulator::{GroundTruth, SensorModel, WorldError};
pub use visibility::{shortest_path, PathResult};
