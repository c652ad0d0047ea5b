//! The charge-cycle loop: cover until the battery only just covers the way
//! home, retreat, recharge, advance to a fresh start point, repeat.
//!
//! [`Mission::step`] executes one decision at a time and reports it as a
//! [`MissionEvent`]; [`run_mission`] drives it to completion and returns the
//! [`MissionReport`].
//!
//! Every coverage move is gated on the energy needed for the move itself plus
//! the shortest explored-only retreat from the cell being entered. The path
//! that passed the gate is kept as a retreat certificate: it only crosses
//! explored cells, which never change state, so it stays executable and
//! affordable until the next move replaces it.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use thiserror::Error;

use crate::energy::{EnergyError, EnergyState, SegmentKind, ENERGY_EPSILON};
use crate::geometry::{los_clear, traverse, Crossing};
use crate::grid::{CellGrid, CellIndex, CellState, MapError};
use crate::hierarchy::MapsHierarchy;
use crate::planner::{next_waypoint_excluding, restart_point, PlannerState};
use crate::simulator::{GroundTruth, SensorModel, WorldError};
use crate::visibility::{polyline_length, shortest_path, PathResult};

/// Mission parameters. Rates are energy units per metre.
#[derive(Clone, Debug, PartialEq)]
pub struct MissionConfig {
    pub capacity: f64,
    pub travel_rate: f64,
    pub coverage_rate: f64,
    pub sensor_range: f64,
    /// Number of coarse levels; `None` picks the depth whose top level is a
    /// single cell.
    pub depth: Option<usize>,
}

impl MissionConfig {
    /// Coverage rate set to twice the travel rate.
    pub fn new(capacity: f64, travel_rate: f64, sensor_range: f64) -> Self {
        MissionConfig {
            capacity,
            travel_rate,
            coverage_rate: 2.0 * travel_rate,
            sensor_range,
            depth: None,
        }
    }
}

impl Default for MissionConfig {
    fn default() -> Self {
        MissionConfig::new(320.0, 0.5, 5.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MissionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("no explored path from {0} back to the station")]
    NoRetreatPath(CellIndex),
    #[error("move from {from} to {to} rejected by the world model")]
    IllegalMove { from: CellIndex, to: CellIndex },
    #[error("mission already completed")]
    Finished,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySegment {
    pub kind: SegmentKind,
    pub cells: Vec<CellIndex>,
    /// Metres.
    pub length: f64,
    pub energy: f64,
}

impl TrajectorySegment {
    fn new(kind: SegmentKind, start: CellIndex) -> Self {
        TrajectorySegment {
            kind,
            cells: vec![start],
            length: 0.0,
            energy: 0.0,
        }
    }
}

/// One charge cycle, from the station back to the station.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// 1-based.
    pub index: usize,
    pub segments: Vec<TrajectorySegment>,
}

impl Trajectory {
    pub fn energy(&self) -> f64 {
        self.segments.iter().map(|s| s.energy).sum()
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    pub fn first_cell(&self) -> Option<CellIndex> {
        self.segments.first().and_then(|s| s.cells.first().copied())
    }

    pub fn last_cell(&self) -> Option<CellIndex> {
        self.segments.last().and_then(|s| s.cells.last().copied())
    }

    pub fn segment(&self, kind: SegmentKind) -> Option<&TrajectorySegment> {
        self.segments.iter().find(|s| s.kind == kind)
    }
}

/// One executed cell move.
#[derive(Clone, Debug, PartialEq)]
pub struct LogRecord {
    pub trajectory: usize,
    pub kind: SegmentKind,
    pub cell: CellIndex,
    pub remaining: f64,
    pub cumulative_length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MissionEvent {
    Sensed { new_obstacles: usize },
    Moved(LogRecord),
    RetreatStarted { from: CellIndex, length: f64, last: bool },
    Recharged,
    AdvanceStarted { target: CellIndex, length: f64 },
    Completed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MissionReport {
    pub trajectories: Vec<Trajectory>,
    pub covered_cell_count: usize,
    pub uncoverable_cell_count: usize,
    /// Free ground-truth cells left unexplored, row-major.
    pub uncoverable_cells: Vec<CellIndex>,
    /// Restart candidates dropped because no full charge could reach and
    /// return from them.
    pub infeasible_cells: Vec<CellIndex>,
    /// Cells entered more than once during coverage.
    pub overlap_count: usize,
    pub total_length: f64,
    pub recharge_count: usize,
    pub log: Vec<LogRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Hop {
    cell: CellIndex,
    distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct Route {
    target: CellIndex,
    hops: VecDeque<CellIndex>,
}

#[derive(Clone, Debug, PartialEq)]
enum Phase {
    Cover,
    Retreat { hops: VecDeque<Hop>, last: bool },
    Restart,
    Advance {
        target: CellIndex,
        path: PathResult,
        hops: VecDeque<Hop>,
        announced: bool,
    },
    Finished,
}

/// Splits a polyline into per-cell hops. Each hop is charged the arc length
/// from the previous cell's entry point to this one's, so the hops sum to
/// the polyline length.
fn polyline_hops(grid: &CellGrid, path: &PathResult) -> VecDeque<Hop> {
    let mut hops = VecDeque::new();
    for pair in path.cells.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        let seg = grid.distance(from, to);
        let mut at = 0.0;
        let _ = traverse(from, to, |x| {
            if let Crossing::Enter { cell, t } = x {
                if cell != from {
                    let reach = if cell == to { seg } else { t * seg };
                    hops.push_back(Hop {
                        cell,
                        distance: reach - at,
                    });
                    at = reach;
                }
            }
            ControlFlow::Continue(())
        });
    }
    hops
}

/// Mission state over a ground-truth world.
#[derive(Clone, Debug)]
pub struct Mission {
    world: GroundTruth,
    sensor: SensorModel,
    grid: CellGrid,
    maps: MapsHierarchy,
    energy: EnergyState,
    planner: PlannerState,
    phase: Phase,
    pending_sense: bool,
    route: Option<Route>,
    certificate: PathResult,
    unroutable: BTreeSet<CellIndex>,
    excluded: BTreeSet<CellIndex>,
    infeasible: BTreeSet<CellIndex>,
    coverage_visits: Vec<u32>,
    trajectories: Vec<Trajectory>,
    open: Trajectory,
    log: Vec<LogRecord>,
    total_length: f64,
    recharges: usize,
}

impl Mission {
    pub fn new(world: GroundTruth, config: &MissionConfig) -> Result<Self, MissionError> {
        let sensor = SensorModel::new(config.sensor_range)?;
        let energy = EnergyState::new(config.capacity, config.travel_rate, config.coverage_rate)?;
        let mut grid = world.blank_belief();
        let station = grid.station();
        let maps = match config.depth {
            Some(k) => MapsHierarchy::with_depth(&grid, k),
            None => MapsHierarchy::new(&grid),
        };
        let mut mission = Mission {
            sensor,
            energy,
            planner: PlannerState::new(station),
            phase: Phase::Cover,
            pending_sense: true,
            route: None,
            certificate: PathResult {
                cells: vec![station],
                length: 0.0,
            },
            unroutable: BTreeSet::new(),
            excluded: BTreeSet::new(),
            infeasible: BTreeSet::new(),
            coverage_visits: vec![0; grid.len()],
            trajectories: Vec::new(),
            open: Trajectory {
                index: 1,
                segments: vec![TrajectorySegment::new(SegmentKind::Coverage, station)],
            },
            log: Vec::new(),
            total_length: 0.0,
            recharges: 0,
            maps,
            world,
            grid: {
                // The vehicle starts on the station and covers it.
                grid.mark_traversed(station)?;
                grid
            },
        };
        mission.maps.rebuild_counts(&mission.grid);
        let i = mission.grid.index_of(station);
        mission.coverage_visits[i] = 1;
        Ok(mission)
    }

    pub fn grid(&self) -> &CellGrid {
        &self.grid
    }

    pub fn maps(&self) -> &MapsHierarchy {
        &self.maps
    }

    pub fn energy(&self) -> &EnergyState {
        &self.energy
    }

    pub fn world(&self) -> &GroundTruth {
        &self.world
    }

    pub fn position(&self) -> CellIndex {
        self.planner.current
    }

    pub fn is_finished(&self) -> bool {
        self.phase == Phase::Finished
    }

    pub fn log(&self) -> &[LogRecord] {
        &self.log
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    /// Executes one decision of the loop.
    pub fn step(&mut self) -> Result<MissionEvent, MissionError> {
        if self.phase == Phase::Finished {
            return Err(MissionError::Finished);
        }
        if self.pending_sense {
            self.pending_sense = false;
            return self.sense();
        }
        match self.phase {
            Phase::Cover => self.cover_step(),
            Phase::Retreat { .. } => self.retreat_step(),
            Phase::Restart => self.restart_step(),
            Phase::Advance { .. } => self.advance_step(),
            Phase::Finished => Err(MissionError::Finished),
        }
    }

    /// Steps until completion and returns the report.
    pub fn run(mut self) -> Result<MissionReport, MissionError> {
        while self.step()? != MissionEvent::Completed {}
        Ok(self.report())
    }

    fn sense(&mut self) -> Result<MissionEvent, MissionError> {
        let detected = self.world.sense(&self.sensor, self.planner.current);
        let changed = self.grid.apply_sensor_update(&detected)?;
        for &cell in &changed {
            self.maps
                .record_transition(cell, CellState::Unexplored, CellState::Obstacle);
        }
        Ok(MissionEvent::Sensed {
            new_obstacles: changed.len(),
        })
    }

    fn station(&self) -> CellIndex {
        self.grid.station()
    }

    /// Cheapest way from `next` onto the certificate: a straight leg to one
    /// of its vertices, then the rest of it. `current` is always a candidate.
    fn shortcut(&self, next: CellIndex) -> PathResult {
        let cert = &self.certificate.cells;
        let mut tail = vec![0.0; cert.len()];
        for i in (0..cert.len().saturating_sub(1)).rev() {
            tail[i] = tail[i + 1] + self.grid.distance(cert[i], cert[i + 1]);
        }
        let passable = |c: CellIndex| c == next || self.grid.is_explored(c);
        let mut best = (f64::INFINITY, 0);
        for (i, &v) in cert.iter().enumerate() {
            let len = self.grid.distance(next, v) + tail[i];
            if len < best.0 && los_clear(&self.grid, next, v, passable) {
                best = (len, i);
            }
        }
        let mut cells = Vec::with_capacity(cert.len() - best.1 + 1);
        cells.push(next);
        cells.extend_from_slice(&cert[best.1..]);
        let length = polyline_length(&self.grid, &cells);
        PathResult { cells, length }
    }

    fn explored_path(&self, from: CellIndex, to: CellIndex) -> Option<PathResult> {
        shortest_path(&self.grid, from, to, |c| self.grid.is_explored(c))
    }

    fn move_to(
        &mut self,
        next: CellIndex,
        kind: SegmentKind,
        distance: f64,
    ) -> Result<MissionEvent, MissionError> {
        let from = self.planner.current;
        if !self.world.validate_move(from, next) || self.grid.is_obstacle(next) {
            return Err(MissionError::IllegalMove { from, to: next });
        }
        if self.grid.mark_traversed(next)? {
            self.maps
                .record_transition(next, CellState::Unexplored, CellState::Explored);
        }
        let spent = self.energy.consume(distance, kind)?;
        let segment = self
            .open
            .segments
            .last_mut()
            .expect("an open trajectory always has a segment");
        debug_assert_eq!(segment.kind, kind);
        segment.cells.push(next);
        segment.length += distance;
        segment.energy += spent;
        self.total_length += distance;
        if kind == SegmentKind::Coverage {
            let i = self.grid.index_of(next);
            self.coverage_visits[i] += 1;
        }
        self.planner.current = next;
        self.pending_sense = true;
        let record = LogRecord {
            trajectory: self.open.index,
            kind,
            cell: next,
            remaining: self.energy.remaining(),
            cumulative_length: self.total_length,
        };
        self.log.push(record.clone());
        Ok(MissionEvent::Moved(record))
    }

    /// Cell sequence for a coverage-time route. Corner passes without an
    /// explored side are split into two edge moves through an open side.
    fn plan_route(&self, target: CellIndex) -> Option<Route> {
        let current = self.planner.current;
        let path = shortest_path(&self.grid, current, target, |c| !self.grid.is_obstacle(c))?;
        let mut hops = VecDeque::new();
        for pair in path.cells.windows(2) {
            let _ = traverse(pair[0], pair[1], |x| {
                match x {
                    Crossing::Enter { cell, .. } if cell != pair[0] => hops.push_back(cell),
                    Crossing::Corner { sides } => {
                        if !self.grid.is_explored(sides[0]) && !self.grid.is_explored(sides[1]) {
                            let side = if self.grid.is_obstacle(sides[0]) {
                                sides[1]
                            } else {
                                sides[0]
                            };
                            hops.push_back(side);
                        }
                    }
                    _ => {}
                }
                ControlFlow::Continue(())
            });
        }
        Some(Route { target, hops })
    }

    fn route_valid(&self, route: &Route) -> bool {
        self.grid.is_unexplored(route.target)
            && route
                .hops
                .front()
                .is_some_and(|&next| self.grid.is_legal_move(self.planner.current, next))
    }

    fn cover_step(&mut self) -> Result<MissionEvent, MissionError> {
        let current = self.planner.current;
        if self.route.as_ref().is_some_and(|r| !self.route_valid(r)) {
            self.route = None;
        }
        let next = loop {
            if let Some(route) = &self.route {
                break route.hops[0];
            }
            let Some(wp) =
                next_waypoint_excluding(&self.grid, &self.maps, current, &self.unroutable)
            else {
                return self.finish_coverage();
            };
            self.planner.last_waypoint = Some(wp);
            if wp.source_level == 0 {
                break wp.cell;
            }
            match self.plan_route(wp.cell) {
                Some(route) if self.route_valid(&route) => self.route = Some(route),
                _ => {
                    self.unroutable.insert(wp.cell);
                }
            }
        };

        if self.world.is_obstacle(next) {
            // Contact: the sensor never saw it, the bumper does.
            let changed = self.grid.apply_sensor_update(&[next])?;
            for &cell in &changed {
                self.maps
                    .record_transition(cell, CellState::Unexplored, CellState::Obstacle);
            }
            self.route = None;
            return Ok(MissionEvent::Sensed {
                new_obstacles: changed.len(),
            });
        }

        let step_len = self.grid.distance(current, next);
        let step_cost = self.energy.cost(step_len, SegmentKind::Coverage);
        // Joining the current certificate at any vertex visible from `next`
        // bounds the shortest retreat from above. When that bound already
        // passes the gate the exact search cannot change the answer.
        let shortcut = self.shortcut(next);
        let bound = shortcut.length;
        // The straight line home bounds it from below.
        let floor = self.grid.distance(next, self.station());
        let retreat = if self
            .energy
            .can_continue(step_cost, self.energy.cost(bound, SegmentKind::Retreat))
        {
            None
        } else if !self
            .energy
            .can_continue(step_cost, self.energy.cost(floor, SegmentKind::Retreat))
        {
            self.route = None;
            return self.begin_retreat(false);
        } else {
            let exact = self
                .explored_path(next, self.station())
                .ok_or(MissionError::NoRetreatPath(next))?;
            let retreat_cost = self.energy.cost(exact.length, SegmentKind::Retreat);
            if !self.energy.can_continue(step_cost, retreat_cost) {
                self.route = None;
                return self.begin_retreat(false);
            }
            Some(exact)
        };
        let event = self.move_to(next, SegmentKind::Coverage, step_len)?;
        if let Some(route) = &mut self.route {
            route.hops.pop_front();
            if route.hops.is_empty() {
                self.route = None;
            }
        }
        match retreat {
            Some(exact) => self.certificate = exact,
            None => self.certificate = shortcut,
        }
        Ok(event)
    }

    fn finish_coverage(&mut self) -> Result<MissionEvent, MissionError> {
        if self.planner.current == self.station() {
            let station = self.station();
            self.open
                .segments
                .push(TrajectorySegment::new(SegmentKind::Retreat, station));
            self.close_trajectory();
            self.phase = Phase::Finished;
            return Ok(MissionEvent::Completed);
        }
        self.begin_retreat(true)
    }

    fn begin_retreat(&mut self, last: bool) -> Result<MissionEvent, MissionError> {
        let from = self.planner.current;
        debug_assert_eq!(self.certificate.cells.first(), Some(&from));
        let path = match self.explored_path(from, self.station()) {
            Some(fresh) if fresh.length <= self.certificate.length => fresh,
            _ => self.certificate.clone(),
        };
        if self.energy.cost(path.length, SegmentKind::Retreat)
            > self.energy.remaining() + ENERGY_EPSILON
        {
            return Err(EnergyError::Exhausted {
                required: self.energy.cost(path.length, SegmentKind::Retreat),
                remaining: self.energy.remaining(),
            }
            .into());
        }
        self.open
            .segments
            .push(TrajectorySegment::new(SegmentKind::Retreat, from));
        let hops = polyline_hops(&self.grid, &path);
        self.phase = Phase::Retreat { hops, last };
        Ok(MissionEvent::RetreatStarted {
            from,
            length: path.length,
            last,
        })
    }

    fn retreat_step(&mut self) -> Result<MissionEvent, MissionError> {
        let Phase::Retreat { hops, last } = &mut self.phase else {
            unreachable!("retreat_step outside the retreat phase");
        };
        match hops.pop_front() {
            Some(hop) => self.move_to(hop.cell, SegmentKind::Retreat, hop.distance),
            None => {
                let last = *last;
                self.close_trajectory();
                if last {
                    self.phase = Phase::Finished;
                    Ok(MissionEvent::Completed)
                } else {
                    self.phase = Phase::Restart;
                    self.restart_step()
                }
            }
        }
    }

    fn close_trajectory(&mut self) {
        let next = Trajectory {
            index: self.open.index + 1,
            segments: Vec::new(),
        };
        let done = core::mem::replace(&mut self.open, next);
        self.trajectories.push(done);
    }

    fn restart_step(&mut self) -> Result<MissionEvent, MissionError> {
        let station = self.station();
        let cell_size = self.grid.cell_size();
        loop {
            let Some(wp) = restart_point(&self.grid, &self.maps, station, &self.excluded) else {
                self.phase = Phase::Finished;
                return Ok(MissionEvent::Completed);
            };
            let needed = |length: f64| {
                self.energy.cost(length, SegmentKind::Advance)
                    + self.energy.cost(cell_size, SegmentKind::Coverage)
                    + self.energy.cost(length, SegmentKind::Retreat)
            };
            if needed(self.grid.distance(station, wp.cell)) > self.energy.capacity() {
                self.excluded.insert(wp.cell);
                self.infeasible.insert(wp.cell);
                continue;
            }
            let Some(path) = self.explored_path(station, wp.cell) else {
                self.excluded.insert(wp.cell);
                self.unroutable.insert(wp.cell);
                continue;
            };
            if needed(path.length) > self.energy.capacity() {
                self.excluded.insert(wp.cell);
                self.infeasible.insert(wp.cell);
                continue;
            }
            self.planner.last_waypoint = Some(wp);
            self.energy.charge_full();
            self.recharges += 1;
            self.open
                .segments
                .push(TrajectorySegment::new(SegmentKind::Advance, station));
            let hops = polyline_hops(&self.grid, &path);
            self.phase = Phase::Advance {
                target: wp.cell,
                path,
                hops,
                announced: false,
            };
            return Ok(MissionEvent::Recharged);
        }
    }

    fn advance_step(&mut self) -> Result<MissionEvent, MissionError> {
        let Phase::Advance {
            target,
            path,
            hops,
            announced,
        } = &mut self.phase
        else {
            unreachable!("advance_step outside the advance phase");
        };
        if !*announced {
            *announced = true;
            return Ok(MissionEvent::AdvanceStarted {
                target: *target,
                length: path.length,
            });
        }
        if let Some(hop) = hops.pop_front() {
            return self.move_to(hop.cell, SegmentKind::Advance, hop.distance);
        }
        let certificate = path.reversed();
        let here = self.planner.current;
        self.certificate = certificate;
        self.open
            .segments
            .push(TrajectorySegment::new(SegmentKind::Coverage, here));
        self.phase = Phase::Cover;
        self.cover_step()
    }

    /// Summary of the mission so far; complete once the mission finished.
    pub fn report(&self) -> MissionReport {
        let mut trajectories = self.trajectories.clone();
        if !self.open.segments.is_empty() {
            trajectories.push(self.open.clone());
        }
        let uncoverable_cells: Vec<CellIndex> = self
            .grid
            .cells()
            .filter(|&c| !self.world.is_obstacle(c) && !self.grid.is_explored(c))
            .collect();
        MissionReport {
            trajectories,
            covered_cell_count: self.grid.count(CellState::Explored),
            uncoverable_cell_count: uncoverable_cells.len(),
            uncoverable_cells,
            infeasible_cells: self.infeasible.iter().copied().collect(),
            overlap_count: self.coverage_visits.iter().filter(|&&v| v > 1).count(),
            total_length: self.total_length,
            recharge_count: self.recharges,
            log: self.log.clone(),
        }
    }
}

/// Runs a full mission on `world`.
pub fn run_mission(world: &GroundTruth, config: &MissionConfig) -> Result<MissionReport, MissionError> {
    Mission::new(world.clone(), config)?.run()
}
