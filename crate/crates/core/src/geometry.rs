//! Exact traversal of the cells crossed by a segment between two cell centres.
//!
//! Coordinates are doubled internally so that centres sit on odd integers and
//! cell boundaries on even ones; every crossing comparison is then an integer
//! cross-multiplication with no rounding.

use core::ops::ControlFlow;

use alloc::vec::Vec;

use crate::grid::{CellGrid, CellIndex};

/// One event while walking a segment from its start cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Crossing {
    /// The segment enters `cell` at parameter `t` in `(0, 1)`; the start cell
    /// is reported first with `t = 0`.
    Enter { cell: CellIndex, t: f64 },
    /// The segment passes exactly through the shared corner of `sides[0]` and
    /// `sides[1]` without entering either. Reported before the diagonal cell.
    Corner { sides: [CellIndex; 2] },
}

/// Walks every cell whose interior the segment between the centres of `a`
/// and `b` touches, in order from `a` to `b`. The visitor may stop early.
pub fn traverse<F>(a: CellIndex, b: CellIndex, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(Crossing) -> ControlFlow<()>,
{
    visit(Crossing::Enter { cell: a, t: 0.0 })?;
    if a == b {
        return ControlFlow::Continue(());
    }
    let x0 = 2 * a.col as i64 + 1;
    let y0 = 2 * a.row as i64 + 1;
    let dx = 2 * (b.col as i64 - a.col as i64);
    let dy = 2 * (b.row as i64 - a.row as i64);
    let (sx, sy) = (dx.signum(), dy.signum());
    let (adx, ady) = (dx.abs(), dy.abs());
    let (mut cx, mut cy) = (a.col as i64, a.row as i64);

    while (cx, cy) != (b.col as i64, b.row as i64) {
        // Distance (doubled units) from the start to the next boundary on each axis.
        let nx = if sx > 0 { 2 * (cx + 1) - x0 } else { x0 - 2 * cx };
        let ny = if sy > 0 { 2 * (cy + 1) - y0 } else { y0 - 2 * cy };
        // Compare nx / adx against ny / ady; a zero delta never crosses.
        let order = if adx == 0 {
            core::cmp::Ordering::Greater
        } else if ady == 0 {
            core::cmp::Ordering::Less
        } else {
            (nx * ady).cmp(&(ny * adx))
        };
        let t = match order {
            core::cmp::Ordering::Less => {
                cx += sx;
                nx as f64 / adx as f64
            }
            core::cmp::Ordering::Greater => {
                cy += sy;
                ny as f64 / ady as f64
            }
            core::cmp::Ordering::Equal => {
                let sides = [
                    CellIndex::new((cx + sx) as usize, cy as usize),
                    CellIndex::new(cx as usize, (cy + sy) as usize),
                ];
                visit(Crossing::Corner { sides })?;
                cx += sx;
                cy += sy;
                nx as f64 / adx as f64
            }
        };
        visit(Crossing::Enter {
            cell: CellIndex::new(cx as usize, cy as usize),
            t,
        })?;
    }
    ControlFlow::Continue(())
}

/// Cells whose interior the segment touches, start and end included.
pub fn supercover(a: CellIndex, b: CellIndex) -> Vec<CellIndex> {
    let mut cells = Vec::new();
    let _ = traverse(a, b, |c| {
        if let Crossing::Enter { cell, .. } = c {
            cells.push(cell);
        }
        ControlFlow::Continue(())
    });
    cells
}

/// Line of sight between two cell centres.
///
/// Every cell the segment enters (endpoints included) must satisfy
/// `passable`, and a pass through a corner needs at least one passable side.
/// A segment inside a single cell is always clear.
pub fn los_clear(
    grid: &CellGrid,
    a: CellIndex,
    b: CellIndex,
    passable: impl Fn(CellIndex) -> bool,
) -> bool {
    if a == b {
        return true;
    }
    debug_assert!(grid.contains(a) && grid.contains(b));
    traverse(a, b, |c| match c {
        Crossing::Enter { cell, .. } if !passable(cell) => ControlFlow::Break(()),
        Crossing::Corner { sides } if !passable(sides[0]) && !passable(sides[1]) => {
            ControlFlow::Break(())
        }
        _ => ControlFlow::Continue(()),
    })
    .is_continue()
}

/// Ray from `a` to `b` ignoring both endpoint cells: blocked by any
/// intermediate cell for which `blocks` holds, or by a corner pinched between
/// two blocking cells.
pub fn ray_clear(a: CellIndex, b: CellIndex, blocks: impl Fn(CellIndex) -> bool) -> bool {
    traverse(a, b, |c| match c {
        Crossing::Enter { cell, .. } if cell != a && cell != b && blocks(cell) => {
            ControlFlow::Break(())
        }
        Crossing::Corner { sides } if blocks(sides[0]) && blocks(sides[1]) => {
            ControlFlow::Break(())
        }
        _ => ControlFlow::Continue(()),
    })
    .is_continue()
}
