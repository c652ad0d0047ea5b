use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn epsplus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsplus"))
        .args(args)
        .env_remove("EPSPLUS_OUT")
        .output()
        .expect("spawn epsplus")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_then_render_reproduces_the_svg() {
    let dir = tempfile::tempdir().unwrap();
    let map = scenario("small.map");
    let out = epsplus(&[
        "run",
        s(&map),
        "--config",
        s(&scenario("small.cfg")),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("uncoverable_cell_count = 0"));

    let svg = dir.path().join("again.svg");
    let out = epsplus(&[
        "render",
        s(&dir.path().join("trajectory.csv")),
        s(&map),
        "--out",
        s(&svg),
        "--cell-size",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(
        fs::read(&svg).unwrap(),
        fs::read(dir.path().join("trajectory.svg")).unwrap()
    );
}

#[test]
fn sealed_room_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("sealed.map");
    fs::write(&map, "C.....\n..###.\n..#.#.\n..###.\n").unwrap();
    let out = epsplus(&["run", s(&map), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("uncoverable_cell_count = 1"));
    assert!(report.contains("uncoverable_cells = (3,1)"), "{report}");
}

#[test]
fn map_without_station_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("bad.map");
    fs::write(&map, "....\n.#..\n").unwrap();
    let out = epsplus(&["run", s(&map), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no charging station"), "{err}");
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn bad_config_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "capacity = 10\nspeed = 3\n").unwrap();
    let out = epsplus(&[
        "run",
        s(&scenario("small.map")),
        "--config",
        s(&cfg),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("speed"), "{err}");
}

#[test]
fn empty_log_renders_the_map() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("empty.csv");
    fs::write(
        &log,
        "trajectory_index,segment_kind,col,row,remaining_energy,cumulative_length\n",
    )
    .unwrap();
    let svg = dir.path().join("map.svg");
    let out = epsplus(&[
        "render",
        s(&log),
        s(&scenario("small.map")),
        "--out",
        s(&svg),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && !text.contains("<polyline"));
}

#[test]
fn unknown_flag_exits_with_1() {
    let out = epsplus(&["run", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}
