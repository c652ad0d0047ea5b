//! Waypoint selection on the potential surfaces.
//!
//! The vehicle normally steps to the neighbouring cell of highest level-0
//! potential. When no neighbour is positive it sits in a local extremum and
//! the search climbs the coarse levels, looking at the Moore neighbourhood of
//! the vehicle's coarse cell on each, until it finds a block that still holds
//! eligible unexplored cells. The same climb, started from the station, picks
//! the restart point after a recharge.

use alloc::collections::BTreeSet;
use core::cmp::Ordering;

use crate::grid::{CellGrid, CellIndex};
use crate::hierarchy::{potential_level0, CoarseCell, MapsHierarchy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Waypoint {
    pub cell: CellIndex,
    /// 0 for a neighbour step, otherwise the coarse level that located it.
    pub source_level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlannerState {
    pub current: CellIndex,
    pub last_waypoint: Option<Waypoint>,
}

impl PlannerState {
    pub fn new(current: CellIndex) -> Self {
        PlannerState {
            current,
            last_waypoint: None,
        }
    }
}

/// Travel cost between two cells: centre-to-centre distance in metres.
pub fn cost_to_reach(grid: &CellGrid, from: CellIndex, to: CellIndex) -> f64 {
    grid.distance(from, to)
}

fn dist2(a: CellIndex, b: CellIndex) -> usize {
    let dc = a.col.abs_diff(b.col);
    let dr = a.row.abs_diff(b.row);
    dc * dc + dr * dr
}

/// Squared distance from a cell centre to a coarse-cell centre, in half-cell
/// units so it stays an exact integer.
fn coarse_dist2(origin: CellIndex, coarse: &CoarseCell) -> usize {
    let ox = 2 * origin.col + 1;
    let oy = 2 * origin.row + 1;
    let cx = coarse.cols.start + coarse.cols.end;
    let cy = coarse.rows.start + coarse.rows.end;
    let dx = ox.abs_diff(cx);
    let dy = oy.abs_diff(cy);
    dx * dx + dy * dy
}

/// Exact comparison of two unexplored fractions.
fn cmp_potential(a: &CoarseCell, b: &CoarseCell) -> Ordering {
    (a.unexplored_count * b.area()).cmp(&(b.unexplored_count * a.area()))
}

fn nearest(origin: CellIndex, cells: impl Iterator<Item = CellIndex>) -> Option<CellIndex> {
    cells.min_by_key(|&c| (dist2(origin, c), c))
}

/// Climbs levels `1..=K` from `origin` and returns the eligible cell nearest
/// to `origin` inside the best block of the first level that has one. Falls
/// back to a whole-map search when the configured depth stops short of a
/// single top cell.
fn climb(
    grid: &CellGrid,
    maps: &MapsHierarchy,
    origin: CellIndex,
    eligible: impl Fn(CellIndex) -> bool,
) -> Option<Waypoint> {
    for level in maps.levels() {
        let best = level
            .neighborhood(origin)
            .filter(|&idx| level.get(idx).cells().any(&eligible))
            .max_by(|&a, &b| {
                let (ca, cb) = (level.get(a), level.get(b));
                cmp_potential(ca, cb)
                    .then_with(|| coarse_dist2(origin, cb).cmp(&coarse_dist2(origin, ca)))
                    .then_with(|| b.cmp(&a))
            });
        if let Some(idx) = best {
            let cell = nearest(origin, level.get(idx).cells().filter(|&c| eligible(c)))?;
            return Some(Waypoint {
                cell,
                source_level: level.level(),
            });
        }
    }
    nearest(origin, grid.cells().filter(|&c| eligible(c))).map(|cell| Waypoint {
        cell,
        source_level: maps.depth(),
    })
}

/// Next navigation goal from `current`, or `None` once no reachable
/// unexplored cell is left.
pub fn next_waypoint(grid: &CellGrid, maps: &MapsHierarchy, current: CellIndex) -> Option<Waypoint> {
    next_waypoint_excluding(grid, maps, current, &BTreeSet::new())
}

/// [`next_waypoint`] ignoring the cells in `excluded`.
pub fn next_waypoint_excluding(
    grid: &CellGrid,
    maps: &MapsHierarchy,
    current: CellIndex,
    excluded: &BTreeSet<CellIndex>,
) -> Option<Waypoint> {
    let step = grid
        .neighbors8(current)
        .filter(|&n| grid.is_legal_move(current, n) && !excluded.contains(&n))
        .map(|n| (potential_level0(grid, n), n))
        .filter(|&(p, _)| p > 0)
        .max_by(|&(pa, a), &(pb, b)| {
            pa.cmp(&pb)
                .then_with(|| dist2(current, b).cmp(&dist2(current, a)))
                .then_with(|| b.cmp(&a))
        });
    if let Some((_, cell)) = step {
        return Some(Waypoint {
            cell,
            source_level: 0,
        });
    }
    let reachable = grid.reachable_mask();
    climb(grid, maps, current, |c| {
        reachable[grid.index_of(c)] && grid.is_unexplored(c) && !excluded.contains(&c)
    })
}

/// Coverage start point after a recharge, searched from `station`.
///
/// Candidates are reachable unexplored cells that border the explored region
/// along an edge (or the station itself while it is unexplored), so an
/// explored-only advance path to them exists. Cells in `excluded` are
/// skipped.
pub fn restart_point(
    grid: &CellGrid,
    maps: &MapsHierarchy,
    station: CellIndex,
    excluded: &BTreeSet<CellIndex>,
) -> Option<Waypoint> {
    let reachable = grid.reachable_mask();
    let frontier = |c: CellIndex| {
        c == station
            || [(-1, 0), (1, 0), (0, -1), (0, 1)]
                .iter()
                .filter_map(|&(dc, dr)| c.offset(dc, dr))
                .any(|n| grid.is_explored(n))
    };
    climb(grid, maps, station, |c| {
        reachable[grid.index_of(c)]
            && grid.is_unexplored(c)
            && !excluded.contains(&c)
            && frontier(c)
    })
}
