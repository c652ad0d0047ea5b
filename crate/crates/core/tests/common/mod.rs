#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use epsplus_core::{CellGrid, CellIndex, GroundTruth};
use rand::Rng;

pub fn c(col: usize, row: usize) -> CellIndex {
    CellIndex::new(col, row)
}

/// Random obstacle field; the station and its edge neighbours stay free.
pub fn random_world(rng: &mut impl Rng, w: usize, h: usize, density: f64) -> GroundTruth {
    let station = c(0, 0);
    let keep = [c(0, 0), c(1, 0), c(0, 1)];
    let obstacles: Vec<_> = (0..w * h)
        .map(|k| c(k % w, k / w))
        .filter(|cell| !keep.contains(cell) && rng.random_bool(density))
        .collect();
    GroundTruth::new(w, h, 1.0, station, &obstacles).unwrap()
}

/// Free cells 4-connected to the station.
pub fn flood_fill(world: &GroundTruth) -> Vec<bool> {
    let (w, h) = (world.width(), world.height());
    let mut seen = vec![false; w * h];
    let s = world.station();
    seen[s.row * w + s.col] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(cell) = queue.pop_front() {
        for (dc, dr) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            let Some(n) = cell.offset(dc, dr) else { continue };
            if n.col < w && n.row < h && !world.is_obstacle(n) && !seen[n.row * w + n.col] {
                seen[n.row * w + n.col] = true;
                queue.push_back(n);
            }
        }
    }
    seen
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Plain Dijkstra over an adjacency list. Returns the distance and the node
/// sequence of the path found.
pub fn dijkstra(
    adjacency: &[Vec<(usize, f64)>],
    start: usize,
    goal: usize,
) -> Option<(f64, Vec<usize>)> {
    let mut dist = vec![f64::INFINITY; adjacency.len()];
    let mut parent = vec![usize::MAX; adjacency.len()];
    dist[start] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, start)]);
    while let Some(Item(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == goal {
            let mut nodes = vec![goal];
            let mut at = goal;
            while at != start {
                at = parent[at];
                nodes.push(at);
            }
            nodes.reverse();
            return Some((d, nodes));
        }
        for &(v, len) in &adjacency[u] {
            if d + len < dist[v] {
                dist[v] = d + len;
                parent[v] = u;
                heap.push(Item(d + len, v));
            }
        }
    }
    None
}

/// 8-connected cell graph over `passable` cells. A diagonal step is allowed
/// unless both cells beside it are blocked.
pub fn grid_graph(grid: &CellGrid, passable: impl Fn(CellIndex) -> bool) -> Vec<Vec<(usize, f64)>> {
    let (w, h) = (grid.width(), grid.height());
    let open = |c: Option<CellIndex>| c.is_some_and(|c| c.col < w && c.row < h && passable(c));
    let mut adjacency = vec![Vec::new(); w * h];
    for cell in grid.cells() {
        if !passable(cell) {
            continue;
        }
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                if (dc, dr) == (0, 0) || !open(cell.offset(dc, dr)) {
                    continue;
                }
                let diagonal = dc != 0 && dr != 0;
                if diagonal && !open(cell.offset(dc, 0)) && !open(cell.offset(0, dr)) {
                    continue;
                }
                let n = cell.offset(dc, dr).unwrap();
                let len = if diagonal { std::f64::consts::SQRT_2 } else { 1.0 } * grid.cell_size();
                adjacency[grid.index_of(cell)].push((grid.index_of(n), len));
            }
        }
    }
    adjacency
}
