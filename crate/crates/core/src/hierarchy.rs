//! Multiscale potential surfaces over the grid.
//!
//! Level 0 is the grid itself. Level `k` groups `2^k x 2^k` blocks of fine
//! cells (edge blocks are clipped), and each coarse cell keeps running counts
//! of the fine cells it covers so its potential can be read in O(1).

use alloc::vec::Vec;
use core::ops::Range;

use crate::grid::{CellGrid, CellIndex, CellState};

/// Level-0 potential: `-1` for obstacles, `0` for explored cells and the
/// column field value for unexplored cells.
pub fn potential_level0(grid: &CellGrid, cell: CellIndex) -> i64 {
    match grid.state(cell) {
        CellState::Obstacle => -1,
        CellState::Explored => 0,
        CellState::Unexplored => grid.b_value(cell) as i64,
    }
}

/// Address of a coarse cell within one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoarseIndex {
    pub col: usize,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarseCell {
    pub cols: Range<usize>,
    pub rows: Range<usize>,
    pub unexplored_count: usize,
    pub free_or_unknown_count: usize,
}

impl CoarseCell {
    pub fn area(&self) -> usize {
        self.cols.len() * self.rows.len()
    }

    /// Fraction of the extent that is still unexplored.
    pub fn potential(&self) -> f64 {
        self.unexplored_count as f64 / self.area() as f64
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        self.cols.contains(&cell.col) && self.rows.contains(&cell.row)
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        self.rows
            .clone()
            .flat_map(move |row| self.cols.clone().map(move |col| CellIndex::new(col, row)))
    }

    /// Centre of the extent in fine-cell units (not metres).
    pub fn center_units(&self) -> (f64, f64) {
        (
            (self.cols.start + self.cols.end) as f64 / 2.0,
            (self.rows.start + self.rows.end) as f64 / 2.0,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseLevel {
    level: usize,
    cols: usize,
    rows: usize,
    cells: Vec<CoarseCell>,
}

impl CoarseLevel {
    fn new(level: usize, width: usize, height: usize) -> Self {
        let side = 1usize << level;
        let cols = width.div_ceil(side);
        let rows = height.div_ceil(side);
        let mut cells = Vec::with_capacity(cols * rows);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(CoarseCell {
                    cols: c * side..((c + 1) * side).min(width),
                    rows: r * side..((r + 1) * side).min(height),
                    unexplored_count: 0,
                    free_or_unknown_count: 0,
                });
            }
        }
        CoarseLevel {
            level,
            cols,
            rows,
            cells,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cells(&self) -> &[CoarseCell] {
        &self.cells
    }

    pub fn get(&self, idx: CoarseIndex) -> &CoarseCell {
        &self.cells[idx.row * self.cols + idx.col]
    }

    fn get_mut(&mut self, idx: CoarseIndex) -> &mut CoarseCell {
        &mut self.cells[idx.row * self.cols + idx.col]
    }

    /// Coarse cell holding a fine cell.
    pub fn parent_of(&self, cell: CellIndex) -> CoarseIndex {
        CoarseIndex {
            col: cell.col >> self.level,
            row: cell.row >> self.level,
        }
    }

    /// The coarse cell holding `cell` together with its in-bounds Moore
    /// neighbours, in row-major order.
    pub fn neighborhood(&self, cell: CellIndex) -> impl Iterator<Item = CoarseIndex> + '_ {
        let p = self.parent_of(cell);
        let rows = p.row.saturating_sub(1)..(p.row + 2).min(self.rows);
        let cols = p.col.saturating_sub(1)..(p.col + 2).min(self.cols);
        rows.flat_map(move |row| cols.clone().map(move |col| CoarseIndex { col, row }))
    }
}

/// Smallest depth whose top level is a single cell.
pub fn auto_depth(width: usize, height: usize) -> usize {
    let side = width.max(height).max(1);
    side.next_power_of_two().trailing_zeros() as usize
}

/// Coarse levels `1..=K` over a [`CellGrid`]. The grid itself is level 0 and
/// is passed in by reference wherever states are needed.
#[derive(Clone, Debug, PartialEq)]
pub struct MapsHierarchy {
    width: usize,
    height: usize,
    levels: Vec<CoarseLevel>,
}

impl MapsHierarchy {
    /// Hierarchy with [`auto_depth`] levels, counters filled from `grid`.
    pub fn new(grid: &CellGrid) -> Self {
        Self::with_depth(grid, auto_depth(grid.width(), grid.height()))
    }

    pub fn with_depth(grid: &CellGrid, depth: usize) -> Self {
        let levels = (1..=depth)
            .map(|k| CoarseLevel::new(k, grid.width(), grid.height()))
            .collect();
        let mut h = MapsHierarchy {
            width: grid.width(),
            height: grid.height(),
            levels,
        };
        h.rebuild_counts(grid);
        h
    }

    /// `K`, the number of coarse levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `k` in `1..=K`.
    pub fn level(&self, k: usize) -> Option<&CoarseLevel> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn levels(&self) -> &[CoarseLevel] {
        &self.levels
    }

    /// Potential of a coarse cell, or `None` for an invalid level or index.
    pub fn potential_coarse(&self, k: usize, idx: CoarseIndex) -> Option<f64> {
        let level = self.level(k)?;
        (idx.col < level.cols && idx.row < level.rows).then(|| level.get(idx).potential())
    }

    /// Applies one level-0 state change to every level's counters.
    pub fn record_transition(&mut self, cell: CellIndex, from: CellState, to: CellState) {
        if from == to {
            return;
        }
        debug_assert!(cell.col < self.width && cell.row < self.height);
        for level in &mut self.levels {
            let idx = level.parent_of(cell);
            let c = level.get_mut(idx);
            if from == CellState::Unexplored {
                c.unexplored_count -= 1;
            }
            if to == CellState::Unexplored {
                c.unexplored_count += 1;
            }
            if from != CellState::Obstacle && to == CellState::Obstacle {
                c.free_or_unknown_count -= 1;
            }
            if from == CellState::Obstacle && to != CellState::Obstacle {
                c.free_or_unknown_count += 1;
            }
        }
    }

    /// Recomputes every counter from scratch.
    pub fn rebuild_counts(&mut self, grid: &CellGrid) {
        for level in &mut self.levels {
            for c in &mut level.cells {
                c.unexplored_count = 0;
                c.free_or_unknown_count = 0;
            }
        }
        for cell in grid.cells() {
            let state = grid.state(cell);
            for level in &mut self.levels {
                let idx = level.parent_of(cell);
                let c = level.get_mut(idx);
                if state == CellState::Unexplored {
                    c.unexplored_count += 1;
                }
                if state != CellState::Obstacle {
                    c.free_or_unknown_count += 1;
                }
            }
        }
    }
}
