//! ASCII maps.
//!
//! One line per row, top row first. `#` is an obstacle, `.` free space and
//! `C` the charging station, which must appear exactly once. Belief
//! snapshots additionally use `?` for cells not yet visited.

use std::fmt::Write as _;

use epsplus_core::{CellGrid, CellIndex, CellState, GroundTruth, WorldError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapParseError {
    #[error("map is empty")]
    Empty,
    #[error("line {line} has {found} columns, expected {expected} like line 1")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("unexpected character {ch:?} at line {line}, column {column}")]
    BadChar { line: usize, column: usize, ch: char },
    #[error("no charging station `C` in map")]
    NoStation,
    #[error("second charging station `C` at line {line}, column {column}")]
    MultipleStations { line: usize, column: usize },
}

/// Parsed ground-truth layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFile {
    pub width: usize,
    pub height: usize,
    pub station: CellIndex,
    /// Row-major, bottom row first.
    pub obstacles: Vec<CellIndex>,
}

impl MapFile {
    pub fn ground_truth(&self, cell_size: f64) -> Result<GroundTruth, WorldError> {
        GroundTruth::new(
            self.width,
            self.height,
            cell_size,
            self.station,
            &self.obstacles,
        )
    }
}

pub fn parse_map(text: &str) -> Result<MapFile, MapParseError> {
    let mut lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    while lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    if lines.is_empty() || lines[0].is_empty() {
        return Err(MapParseError::Empty);
    }
    let width = lines[0].chars().count();
    let height = lines.len();
    let mut station = None;
    let mut obstacles = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let found = line.chars().count();
        if found != width {
            return Err(MapParseError::Ragged {
                line: i + 1,
                expected: width,
                found,
            });
        }
        let row = height - 1 - i;
        for (col, ch) in line.chars().enumerate() {
            let cell = CellIndex::new(col, row);
            match ch {
                '.' => {}
                '#' => obstacles.push(cell),
                'C' => {
                    if station.is_some() {
                        return Err(MapParseError::MultipleStations {
                            line: i + 1,
                            column: col + 1,
                        });
                    }
                    station = Some(cell);
                }
                _ => {
                    return Err(MapParseError::BadChar {
                        line: i + 1,
                        column: col + 1,
                        ch,
                    })
                }
            }
        }
    }
    obstacles.sort_by_key(|c| (c.row, c.col));
    Ok(MapFile {
        width,
        height,
        station: station.ok_or(MapParseError::NoStation)?,
        obstacles,
    })
}

fn draw(width: usize, height: usize, glyph: impl Fn(CellIndex) -> char) -> String {
    let mut out = String::with_capacity((width + 1) * height);
    for row in (0..height).rev() {
        for col in 0..width {
            out.push(glyph(CellIndex::new(col, row)));
        }
        out.push('\n');
    }
    out
}

/// Ground truth back to map text.
pub fn render_map(world: &GroundTruth) -> String {
    draw(world.width(), world.height(), |c| {
        if c == world.station() {
            'C'
        } else if world.is_obstacle(c) {
            '#'
        } else {
            '.'
        }
    })
}

/// Belief state as map text, with `?` for unexplored cells.
pub fn snapshot_belief(grid: &CellGrid) -> String {
    draw(grid.width(), grid.height(), |c| {
        if c == grid.station() {
            return 'C';
        }
        match grid.state(c) {
            CellState::Obstacle => '#',
            CellState::Explored => '.',
            CellState::Unexplored => '?',
        }
    })
}

/// Cell list as `(col,row)` pairs separated by spaces.
pub fn format_cells(cells: &[CellIndex]) -> String {
    let mut out = String::new();
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "({},{})", c.col, c.row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rows_bottom_up() {
        let m = parse_map("..#\n#..\nC..\n").unwrap();
        assert_eq!((m.width, m.height), (3, 3));
        assert_eq!(m.station, CellIndex::new(0, 0));
        assert_eq!(m.obstacles, vec![CellIndex::new(0, 1), CellIndex::new(2, 2)]);
    }

    #[test]
    fn round_trip() {
        let text = "....#\n.##..\nC....\n";
        let world = parse_map(text).unwrap().ground_truth(1.0).unwrap();
        assert_eq!(render_map(&world), text);
    }

    #[test]
    fn crlf_and_trailing_blank_lines() {
        let m = parse_map("C.\r\n..\r\n\r\n").unwrap();
        assert_eq!((m.width, m.height), (2, 2));
    }

    #[test]
    fn defects_are_named() {
        assert_eq!(parse_map(""), Err(MapParseError::Empty));
        assert_eq!(parse_map("...\n...\n"), Err(MapParseError::NoStation));
        assert_eq!(
            parse_map("C..\n..\n"),
            Err(MapParseError::Ragged {
                line: 2,
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            parse_map("C.C\n"),
            Err(MapParseError::MultipleStations { line: 1, column: 3 })
        );
        assert_eq!(
            parse_map("C.x\n"),
            Err(MapParseError::BadChar {
                line: 1,
                column: 3,
                ch: 'x'
            })
        );
        let msg = parse_map("...\n").unwrap_err().to_string();
        assert!(msg.contains("charging station"));
    }

    #[test]
    fn belief_snapshot() {
        let mut g = CellGrid::new(3, 2, 1.0, CellIndex::new(0, 0)).unwrap();
        g.mark_traversed(CellIndex::new(0, 0)).unwrap();
        g.mark_traversed(CellIndex::new(1, 0)).unwrap();
        g.apply_sensor_update(&[CellIndex::new(2, 1)]).unwrap();
        assert_eq!(snapshot_belief(&g), "??#\nC.?\n");
    }

    #[test]
    fn cell_list() {
        let cells = [CellIndex::new(1, 2), CellIndex::new(0, 0)];
        assert_eq!(format_cells(&cells), "(1,2) (0,0)");
        assert_eq!(format_cells(&[]), "");
    }
}
