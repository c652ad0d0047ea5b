//! SVG rendering of a trajectory log over its map.
//!
//! Coverage is drawn red, retreat blue and advance green. Rows grow upwards,
//! so the image is flipped relative to cell coordinates.

use std::fmt::Write as _;

use epsplus_core::{CellIndex, GroundTruth, LogRecord, SegmentKind};
use thiserror::Error;

const SCALE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("log record {record} names cell {cell} outside the {width}x{height} map")]
    OutOfBounds {
        record: usize,
        cell: CellIndex,
        width: usize,
        height: usize,
    },
}

fn color(kind: SegmentKind) -> &'static str {
    match kind {
        SegmentKind::Coverage => "red",
        SegmentKind::Retreat => "blue",
        SegmentKind::Advance => "green",
    }
}

/// Polylines of consecutive records with the same trajectory and kind, each
/// starting from the position before its first move.
fn runs(start: CellIndex, log: &[LogRecord]) -> Vec<(SegmentKind, Vec<CellIndex>)> {
    let mut out: Vec<(SegmentKind, Vec<CellIndex>)> = Vec::new();
    let mut at = start;
    let mut key = None;
    for r in log {
        if key != Some((r.trajectory, r.kind)) {
            key = Some((r.trajectory, r.kind));
            out.push((r.kind, vec![at]));
        }
        out.last_mut().expect("run pushed above").1.push(r.cell);
        at = r.cell;
    }
    out
}

pub fn render_svg(world: &GroundTruth, log: &[LogRecord]) -> Result<String, RenderError> {
    let (w, h) = (world.width(), world.height());
    for (i, r) in log.iter().enumerate() {
        if !world.contains(r.cell) {
            return Err(RenderError::OutOfBounds {
                record: i + 1,
                cell: r.cell,
                width: w,
                height: h,
            });
        }
    }
    let px = |c: CellIndex| {
        (
            (c.col as f64 + 0.5) * SCALE,
            (h as f64 - c.row as f64 - 0.5) * SCALE,
        )
    };
    let (wp, hp) = (w as f64 * SCALE, h as f64 * SCALE);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{wp}" height="{hp}" viewBox="0 0 {wp} {hp}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{wp}" height="{hp}" fill="white" stroke="black"/>"#
    );
    for o in world.obstacles() {
        let (x, y) = px(o);
        let _ = writeln!(
            s,
            r#"<rect x="{:.1}" y="{:.1}" width="{SCALE}" height="{SCALE}" fill="dimgray"/>"#,
            x - SCALE / 2.0,
            y - SCALE / 2.0
        );
    }
    for (kind, cells) in runs(world.station(), log) {
        let points: Vec<String> = cells
            .iter()
            .map(|&c| {
                let (x, y) = px(c);
                format!("{x:.1},{y:.1}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5" stroke-linejoin="round"/>"#,
            points.join(" "),
            color(kind)
        );
    }
    let (x, y) = px(world.station());
    let _ = writeln!(
        s,
        r#"<circle cx="{x:.1}" cy="{y:.1}" r="{:.1}" fill="orange" stroke="black"/>"#,
        SCALE * 0.4
    );
    s.push_str("</svg>\n");
    Ok(s)
}
