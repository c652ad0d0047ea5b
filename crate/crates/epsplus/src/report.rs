//! `report.txt`: mission summary as `key = value` lines.

use std::fmt::Write as _;

use epsplus_core::{MissionReport, SegmentKind};

use crate::map::format_cells;

pub fn format_report(report: &MissionReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    line("trajectory_count", report.trajectories.len().to_string());
    line("recharge_count", report.recharge_count.to_string());
    line("covered_cell_count", report.covered_cell_count.to_string());
    line(
        "uncoverable_cell_count",
        report.uncoverable_cell_count.to_string(),
    );
    line("overlap_count", report.overlap_count.to_string());
    line("total_length", format!("{:.6}", report.total_length));
    line("uncoverable_cells", format_cells(&report.uncoverable_cells));
    line("infeasible_cells", format_cells(&report.infeasible_cells));
    for t in &report.trajectories {
        let part = |kind| t.segment(kind).map_or(0.0, |s| s.length);
        line(
            &format!("trajectory.{}", t.index),
            format!(
                "energy {:.6} length {:.6} advance {:.6} coverage {:.6} retreat {:.6}",
                t.energy(),
                t.length(),
                part(SegmentKind::Advance),
                part(SegmentKind::Coverage),
                part(SegmentKind::Retreat),
            ),
        );
    }
    out
}
