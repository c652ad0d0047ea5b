//! The finest tiling of the search area.
//!
//! Every cell carries one of three symbolic states. Cells start out
//! [`CellState::Unexplored`]; traversal turns them [`CellState::Explored`] and
//! sensing turns them [`CellState::Obstacle`]. Both of those states are
//! absorbing. Unexplored cells additionally carry a static potential from the
//! column field, which is constant along a column and decreases from left to
//! right so that the sweep runs column by column from the left edge.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// Column/row address of a cell. Column 0 is the left edge, row 0 the bottom.
///
/// The derived ordering is lexicographic in `(col, row)` and is used
/// everywhere a deterministic tie-break is needed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub col: usize,
    pub row: usize,
}

impl CellIndex {
    pub const fn new(col: usize, row: usize) -> Self {
        CellIndex { col, row }
    }

    /// Shifted index, or `None` when it would leave the non-negative quadrant.
    pub fn offset(self, dc: isize, dr: isize) -> Option<CellIndex> {
        let col = self.col.checked_add_signed(dc)?;
        let row = self.row.checked_add_signed(dr)?;
        Some(CellIndex { col, row })
    }

    /// True when the two cells share an edge or a corner.
    pub fn is_adjacent8(self, other: CellIndex) -> bool {
        self != other && self.col.abs_diff(other.col) <= 1 && self.row.abs_diff(other.row) <= 1
    }
}

impl core::fmt::Display for CellIndex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellState {
    Obstacle,
    Explored,
    Unexplored,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("grid must have at least one row and one column (got {width}x{height})")]
    EmptyGrid { width: usize, height: usize },
    #[error("cell size must be positive and finite (got {0})")]
    InvalidCellSize(f64),
    #[error("cell {cell} is outside the {width}x{height} grid")]
    OutOfBounds {
        cell: CellIndex,
        width: usize,
        height: usize,
    },
    #[error("obstacle reported on cell {cell} which is {state:?}")]
    Conflict { cell: CellIndex, state: CellState },
    #[error("the station cell {0} cannot hold an obstacle")]
    StationObstacle(CellIndex),
    #[error("cell {0} is an obstacle and cannot be traversed")]
    TraverseObstacle(CellIndex),
}

/// Offsets of the Moore neighbourhood, in a fixed order.
pub const MOORE: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// Belief map over the finest tiling.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGrid {
    width: usize,
    height: usize,
    cell_size: f64,
    station: CellIndex,
    states: Vec<CellState>,
    b_field: Vec<u32>,
}

impl CellGrid {
    /// All cells start unexplored; the field value of column `c` is `width - c`.
    pub fn new(
        width: usize,
        height: usize,
        cell_size: f64,
        station: CellIndex,
    ) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::EmptyGrid { width, height });
        }
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(MapError::InvalidCellSize(cell_size));
        }
        if station.col >= width || station.row >= height {
            return Err(MapError::OutOfBounds {
                cell: station,
                width,
                height,
            });
        }
        let b_field = (0..width).map(|col| (width - col) as u32).collect();
        Ok(CellGrid {
            width,
            height,
            cell_size,
            station,
            states: vec![CellState::Unexplored; width * height],
            b_field,
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

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.col < self.width && cell.row < self.height
    }

    pub fn index_of(&self, cell: CellIndex) -> usize {
        debug_assert!(self.contains(cell));
        cell.row * self.width + cell.col
    }

    pub fn cell_at(&self, index: usize) -> CellIndex {
        CellIndex::new(index % self.width, index / self.width)
    }

    fn check(&self, cell: CellIndex) -> Result<(), MapError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(MapError::OutOfBounds {
                cell,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Panics when `cell` is out of bounds.
    pub fn state(&self, cell: CellIndex) -> CellState {
        assert!(self.contains(cell), "cell {cell} out of bounds");
        self.states[self.index_of(cell)]
    }

    pub fn get(&self, cell: CellIndex) -> Option<CellState> {
        self.contains(cell).then(|| self.states[self.index_of(cell)])
    }

    pub fn is_obstacle(&self, cell: CellIndex) -> bool {
        self.get(cell) == Some(CellState::Obstacle)
    }

    pub fn is_explored(&self, cell: CellIndex) -> bool {
        self.get(cell) == Some(CellState::Explored)
    }

    pub fn is_unexplored(&self, cell: CellIndex) -> bool {
        self.get(cell) == Some(CellState::Unexplored)
    }

    /// Static field value of the cell's column.
    pub fn b_value(&self, cell: CellIndex) -> u32 {
        self.b_field[cell.col]
    }

    /// Largest field value (the leftmost column).
    pub fn b_max(&self) -> u32 {
        self.b_field[0]
    }

    /// Iterates every cell in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.states.len()).map(move |i| self.cell_at(i))
    }

    pub fn count(&self, state: CellState) -> usize {
        self.states.iter().filter(|&&s| s == state).count()
    }

    /// In-bounds Moore neighbours, in [`MOORE`] order.
    pub fn neighbors8(&self, cell: CellIndex) -> impl Iterator<Item = CellIndex> + '_ {
        MOORE
            .iter()
            .filter_map(move |&(dc, dr)| cell.offset(dc, dr))
            .filter(move |c| self.contains(*c))
    }

    /// Marks detected obstacle cells and returns those that changed state.
    ///
    /// The whole batch is validated before any cell is touched, so a conflict
    /// leaves the grid unchanged.
    pub fn apply_sensor_update(
        &mut self,
        detected: &[CellIndex],
    ) -> Result<Vec<CellIndex>, MapError> {
        for &cell in detected {
            self.check(cell)?;
            if cell == self.station {
                return Err(MapError::StationObstacle(cell));
            }
            let state = self.state(cell);
            if state == CellState::Explored {
                return Err(MapError::Conflict { cell, state });
            }
        }
        let mut changed = Vec::new();
        for &cell in detected {
            let i = self.index_of(cell);
            if self.states[i] == CellState::Unexplored {
                self.states[i] = CellState::Obstacle;
                changed.push(cell);
            }
        }
        Ok(changed)
    }

    /// Marks a cell as covered. Returns whether the state changed.
    pub fn mark_traversed(&mut self, cell: CellIndex) -> Result<bool, MapError> {
        self.check(cell)?;
        let i = self.index_of(cell);
        match self.states[i] {
            CellState::Obstacle => Err(MapError::TraverseObstacle(cell)),
            CellState::Explored => Ok(false),
            CellState::Unexplored => {
                self.states[i] = CellState::Explored;
                Ok(true)
            }
        }
    }

    /// Whether an 8-connected step between neighbours is open under `blocked`:
    /// diagonal steps may not squeeze between two blocked side cells.
    pub fn step_open(
        &self,
        from: CellIndex,
        to: CellIndex,
        blocked: impl Fn(CellIndex) -> bool,
    ) -> bool {
        if from.col == to.col || from.row == to.row {
            return true;
        }
        let side_a = CellIndex::new(to.col, from.row);
        let side_b = CellIndex::new(from.col, to.row);
        !(blocked(side_a) && blocked(side_b))
    }

    /// A move the vehicle may execute on its belief: the target is an
    /// in-bounds non-obstacle neighbour and a diagonal move keeps at least
    /// one explored side cell, so the retreat map stays connected behind it.
    pub fn is_legal_move(&self, from: CellIndex, to: CellIndex) -> bool {
        self.contains(to)
            && from.is_adjacent8(to)
            && !self.is_obstacle(to)
            && self.step_open(from, to, |c| !self.is_explored(c))
    }

    /// Mask of non-obstacle cells connected to the station.
    ///
    /// Connectivity is 8-way except that a diagonal step between two obstacle
    /// cells that touch at a corner is closed.
    pub fn reachable_mask(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let start = self.station;
        if self.is_obstacle(start) {
            return seen;
        }
        seen[self.index_of(start)] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(cell) = queue.pop_front() {
            for next in self.neighbors8(cell) {
                let i = self.index_of(next);
                if seen[i] || self.states[i] == CellState::Obstacle {
                    continue;
                }
                if !self.step_open(cell, next, |c| self.is_obstacle(c)) {
                    continue;
                }
                seen[i] = true;
                queue.push_back(next);
            }
        }
        seen
    }

    /// Unexplored cells still connected to the station, in row-major order.
    pub fn reachable_unexplored(&self) -> Vec<CellIndex> {
        let mask = self.reachable_mask();
        self.cells()
            .filter(|&c| mask[self.index_of(c)] && self.is_unexplored(c))
            .collect()
    }

    /// Centre of a cell in metres.
    pub fn center(&self, cell: CellIndex) -> (f64, f64) {
        (
            (cell.col as f64 + 0.5) * self.cell_size,
            (cell.row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Straight-line distance between cell centres in metres.
    pub fn distance(&self, a: CellIndex, b: CellIndex) -> f64 {
        let dc = a.col.abs_diff(b.col) as f64;
        let dr = a.row.abs_diff(b.row) as f64;
        libm::hypot(dc, dr) * self.cell_size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> CellGrid {
        CellGrid::new(w, h, 1.0, CellIndex::new(0, 0)).unwrap()
    }

    #[test]
    fn new_grid_field_and_states() {
        let g = grid(50, 50);
        assert_eq!(g.len(), 2500);
        assert_eq!(g.count(CellState::Unexplored), 2500);
        assert_eq!(g.b_value(CellIndex::new(0, 0)), 50);
        assert_eq!(g.b_value(CellIndex::new(49, 17)), 1);
        assert_eq!(g.b_max(), 50);

        let g = grid(1, 1);
        assert_eq!(g.len(), 1);
        assert_eq!(g.b_value(CellIndex::new(0, 0)), 1);

        let g = grid(3, 2);
        let cols: Vec<[u32; 2]> = (0..3)
            .map(|c| [g.b_value(CellIndex::new(c, 0)), g.b_value(CellIndex::new(c, 1))])
            .collect();
        assert_eq!(cols, vec![[3, 3], [2, 2], [1, 1]]);
    }

    #[test]
    fn new_grid_rejects_bad_input() {
        assert!(matches!(
            CellGrid::new(3, 3, 1.0, CellIndex::new(3, 0)),
            Err(MapError::OutOfBounds { .. })
        ));
        assert!(matches!(
            CellGrid::new(0, 3, 1.0, CellIndex::new(0, 0)),
            Err(MapError::EmptyGrid { .. })
        ));
        assert!(matches!(
            CellGrid::new(3, 3, 0.0, CellIndex::new(0, 0)),
            Err(MapError::InvalidCellSize(_))
        ));
    }

    #[test]
    fn sensor_update_counts_changes() {
        let mut g = grid(5, 5);
        let c = CellIndex::new(2, 3);
        assert_eq!(g.apply_sensor_update(&[c]).unwrap().len(), 1);
        assert_eq!(g.state(c), CellState::Obstacle);
        assert_eq!(g.apply_sensor_update(&[]).unwrap().len(), 0);
        assert_eq!(g.apply_sensor_update(&[c]).unwrap().len(), 0);
    }

    #[test]
    fn sensor_update_conflicts() {
        let mut g = grid(5, 5);
        g.mark_traversed(CellIndex::new(1, 1)).unwrap();
        let before = g.clone();
        let err = g
            .apply_sensor_update(&[CellIndex::new(3, 3), CellIndex::new(1, 1)])
            .unwrap_err();
        assert!(matches!(err, MapError::Conflict { .. }));
        assert_eq!(g, before);
        assert!(matches!(
            g.apply_sensor_update(&[CellIndex::new(0, 0)]),
            Err(MapError::StationObstacle(_))
        ));
        assert!(matches!(
            g.apply_sensor_update(&[CellIndex::new(9, 0)]),
            Err(MapError::OutOfBounds { .. })
        ));
    }

    #[test]
    fn mark_traversed_rules() {
        let mut g = grid(4, 4);
        let c = CellIndex::new(1, 2);
        assert!(g.mark_traversed(c).unwrap());
        assert_eq!(g.state(c), CellState::Explored);
        assert!(!g.mark_traversed(c).unwrap());
        let o = CellIndex::new(3, 3);
        g.apply_sensor_update(&[o]).unwrap();
        assert_eq!(g.mark_traversed(o), Err(MapError::TraverseObstacle(o)));
    }

    #[test]
    fn reachability_examples() {
        let g = grid(3, 3);
        assert_eq!(g.reachable_unexplored().len(), 9);

        let mut g = grid(5, 5);
        let ring: Vec<CellIndex> = g
            .neighbors8(CellIndex::new(2, 2))
            .collect();
        g.apply_sensor_update(&ring).unwrap();
        let r = g.reachable_unexplored();
        assert!(!r.contains(&CellIndex::new(2, 2)));
        assert_eq!(r.len(), 25 - 9);

        let mut g = grid(5, 5);
        let wall: Vec<CellIndex> = (0..5).map(|r| CellIndex::new(2, r)).collect();
        g.apply_sensor_update(&wall).unwrap();
        let r = g.reachable_unexplored();
        assert_eq!(r.len(), 10);
        assert!(r.iter().all(|c| c.col < 2));
    }

    #[test]
    fn diagonal_obstacle_pair_seals() {
        // Staircase wall: (1,0) and (0,1) touch at a corner and close off (0,0)'s
        // quadrant from the rest.
        let mut g = CellGrid::new(3, 3, 1.0, CellIndex::new(0, 0)).unwrap();
        g.apply_sensor_update(&[CellIndex::new(1, 0), CellIndex::new(0, 1)])
            .unwrap();
        assert_eq!(g.reachable_unexplored(), vec![CellIndex::new(0, 0)]);
    }

    #[test]
    fn legal_moves_need_an_explored_side_on_diagonals() {
        let mut g = grid(3, 3);
        let o = CellIndex::new(0, 0);
        g.mark_traversed(o).unwrap();
        assert!(g.is_legal_move(o, CellIndex::new(1, 0)));
        assert!(!g.is_legal_move(o, CellIndex::new(1, 1)));
        g.mark_traversed(CellIndex::new(0, 1)).unwrap();
        assert!(g.is_legal_move(o, CellIndex::new(1, 1)));
        assert!(!g.is_legal_move(o, CellIndex::new(2, 0)));
    }

    #[test]
    fn distances() {
        let g = CellGrid::new(5, 5, 2.0, CellIndex::new(0, 0)).unwrap();
        assert_eq!(g.distance(CellIndex::new(3, 3), CellIndex::new(4, 3)), 2.0);
        assert!((g.distance(CellIndex::new(0, 0), CellIndex::new(1, 1)) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(g.center(CellIndex::new(1, 0)), (3.0, 1.0));
    }
}
