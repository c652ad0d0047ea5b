//! Visibility graphs over the belief grid and A* on them.
//!
//! Nodes sit at cell centres: the two query endpoints plus every convex corner
//! of the blocked region. Which cells count as blocked is decided by a
//! caller-supplied predicate, so the same machinery serves retreat and
//! advance planning (explored cells only) and coverage routing (anything not
//! known to be an obstacle).

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geometry::los_clear;
use crate::grid::{CellGrid, CellIndex};

/// Cells from which a shortest path may need to turn.
///
/// Paths bend at cell centres, pivoting on a corner point of some blocked
/// cell. A pivot is only useful where the blocked region is convex: among
/// the four cells around the point exactly one is blocked, or two
/// diagonally opposite ones are. Cells outside the grid count as blocked.
/// Every passable cell touching such a point qualifies.
pub fn obstacle_vertices(grid: &CellGrid, passable: impl Fn(CellIndex) -> bool) -> Vec<CellIndex> {
    let shut = |c: Option<CellIndex>| !c.is_some_and(|c| grid.contains(c) && passable(c));
    grid.cells()
        .filter(|&cell| passable(cell))
        .filter(|&cell| {
            [(-1, -1), (1, -1), (-1, 1), (1, 1)].iter().any(|&(dc, dr)| {
                let d = shut(cell.offset(dc, dr));
                let s1 = shut(cell.offset(dc, 0));
                let s2 = shut(cell.offset(0, dr));
                // v itself is open, so the pattern is fixed by the other three.
                matches!((d, s1, s2), (true, false, false) | (false, true, false) | (false, false, true))
                    || (s1 && s2 && !d)
            })
        })
        .collect()
}

/// Undirected graph with straight-line edge weights in metres.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityGraph {
    nodes: Vec<CellIndex>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl VisibilityGraph {
    pub fn nodes(&self) -> &[CellIndex] {
        &self.nodes
    }

    pub fn node_of(&self, cell: CellIndex) -> Option<usize> {
        self.nodes.iter().position(|&c| c == cell)
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    /// Each undirected edge once, as `(a, b, length)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, adj)| {
            adj.iter()
                .filter(move |&&(b, _)| a < b)
                .map(move |&(b, len)| (a, b, len))
        })
    }

    /// Graph from explicit nodes and edges, used for testing the search on
    /// hand-built topologies.
    pub fn from_edges(nodes: Vec<CellIndex>, edges: &[(usize, usize, f64)]) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(a, b, len) in edges {
            adjacency[a].push((b, len));
            adjacency[b].push((a, len));
        }
        VisibilityGraph { nodes, adjacency }
    }

    /// A* from node `start` to node `goal`. The heuristic is the straight-line
    /// distance between node cells scaled by `cell_size`, which never
    /// overestimates for edges measured the same way.
    pub fn astar(&self, start: usize, goal: usize, cell_size: f64) -> Option<PathResult> {
        search(&self.nodes, start, goal, cell_size, |node, _, _, out| {
            out.extend_from_slice(&self.adjacency[node]);
        })
    }
}

/// A* over `nodes`, asking `expand` for the edges of each node as it is
/// closed. `expand` gets the node's cost and the current labels so it can
/// skip edges that could not relax anything.
fn search(
    nodes: &[CellIndex],
    start: usize,
    goal: usize,
    cell_size: f64,
    mut expand: impl FnMut(usize, f64, &Labels, &mut Vec<(usize, f64)>),
) -> Option<PathResult> {
    let n = nodes.len();
    let target = nodes[goal];
    let heuristic = |i: usize| {
        let c = nodes[i];
        libm::hypot(
            c.col as f64 - target.col as f64,
            c.row as f64 - target.row as f64,
        ) * cell_size
    };
    let mut labels = Labels {
        best: vec![f64::INFINITY; n],
        closed: vec![false; n],
    };
    let mut parent = vec![(usize::MAX, 0.0); n];
    let mut open = BinaryHeap::new();
    let mut edges = Vec::new();
    labels.best[start] = 0.0;
    open.push(Entry {
        f: heuristic(start),
        g: 0.0,
        node: start,
    });
    while let Some(Entry { g, node, .. }) = open.pop() {
        if labels.closed[node] {
            continue;
        }
        labels.closed[node] = true;
        if node == goal {
            let mut cells = vec![nodes[goal]];
            let mut legs = Vec::new();
            let mut at = goal;
            while at != start {
                let (prev, len) = parent[at];
                legs.push(len);
                at = prev;
                cells.push(nodes[at]);
            }
            cells.reverse();
            return Some(PathResult {
                cells,
                length: canonical_sum(legs),
            });
        }
        edges.clear();
        expand(node, g, &labels, &mut edges);
        for &(next, len) in &edges {
            let cand = g + len;
            if labels.improves(next, cand) {
                labels.best[next] = cand;
                parent[next] = (node, len);
                open.push(Entry {
                    f: cand + heuristic(next),
                    g: cand,
                    node: next,
                });
            }
        }
    }
    None
}

struct Labels {
    best: Vec<f64>,
    closed: Vec<bool>,
}

impl Labels {
    fn improves(&self, node: usize, cost: f64) -> bool {
        !self.closed[node] && cost < self.best[node]
    }
}

fn canonical_sum(mut legs: Vec<f64>) -> f64 {
    legs.sort_by(f64::total_cmp);
    legs.iter().sum()
}

/// Splits `n` into `(s, m)` with `n = s² m` and `m` square-free.
fn split_square(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut f = 2;
    while f * f <= n {
        while n.is_multiple_of(f * f) {
            n /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, n)
}

/// Length of a polyline through cell centres, in metres.
///
/// Each leg is written as `s·√m` with `m` square-free and the integer
/// multiples of each root are summed exactly before rounding, so polylines
/// of equal true length get bit-identical values.
pub fn polyline_length(grid: &CellGrid, cells: &[CellIndex]) -> f64 {
    let mut terms: BTreeMap<u64, u64> = BTreeMap::new();
    for p in cells.windows(2) {
        let dc = p[0].col.abs_diff(p[1].col) as u64;
        let dr = p[0].row.abs_diff(p[1].row) as u64;
        if dc == 0 && dr == 0 {
            continue;
        }
        let (s, m) = split_square(dc * dc + dr * dr);
        *terms.entry(m).or_default() += s;
    }
    let units: f64 = terms
        .iter()
        .map(|(&m, &s)| s as f64 * libm::sqrt(m as f64))
        .sum();
    units * grid.cell_size()
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    f: f64,
    g: f64,
    node: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Min-heap on f, then prefer deeper g, then lower node index.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.g.total_cmp(&other.g))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// A polyline through cell centres.
#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub cells: Vec<CellIndex>,
    /// Sum of segment lengths in metres.
    pub length: f64,
}

impl PathResult {
    /// Waypoints in metres.
    pub fn points(&self, grid: &CellGrid) -> Vec<(f64, f64)> {
        self.cells.iter().map(|&c| grid.center(c)).collect()
    }

    pub fn reversed(&self) -> PathResult {
        let mut cells = self.cells.clone();
        cells.reverse();
        PathResult {
            cells,
            length: self.length,
        }
    }
}

fn graph_nodes(
    grid: &CellGrid,
    start: CellIndex,
    goal: CellIndex,
    open: impl Fn(CellIndex) -> bool,
) -> Vec<CellIndex> {
    let mut nodes = vec![start];
    if goal != start {
        nodes.push(goal);
    }
    nodes.extend(
        obstacle_vertices(grid, open)
            .into_iter()
            .filter(|&c| c != start && c != goal),
    );
    nodes
}

/// Visibility graph between `start` and `goal`.
///
/// Both endpoints are treated as passable even when `passable` rejects them,
/// so a not-yet-explored goal can still be joined to the explored region.
/// Node 0 is `start`; node 1 is `goal` unless the two coincide.
pub fn build_visibility_graph(
    grid: &CellGrid,
    start: CellIndex,
    goal: CellIndex,
    passable: impl Fn(CellIndex) -> bool,
) -> VisibilityGraph {
    let open = |c: CellIndex| c == start || c == goal || passable(c);
    let nodes = graph_nodes(grid, start, goal, open);
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if los_clear(grid, nodes[i], nodes[j], open) {
                let len = grid.distance(nodes[i], nodes[j]);
                adjacency[i].push((j, len));
                adjacency[j].push((i, len));
            }
        }
    }
    VisibilityGraph { nodes, adjacency }
}

/// Shortest polyline from `start` to `goal` over cells accepted by
/// `passable`, or `None` when the goal is cut off.
///
/// Runs the same search as [`VisibilityGraph::astar`] on
/// [`build_visibility_graph`], but tests visibility only from nodes the
/// search actually expands.
pub fn shortest_path(
    grid: &CellGrid,
    start: CellIndex,
    goal: CellIndex,
    passable: impl Fn(CellIndex) -> bool,
) -> Option<PathResult> {
    if start == goal {
        return Some(PathResult {
            cells: vec![start],
            length: 0.0,
        });
    }
    let open = |c: CellIndex| c == start || c == goal || passable(c);
    let nodes = graph_nodes(grid, start, goal, open);
    let mut path = search(&nodes, 0, 1, grid.cell_size(), |node, g, labels, out| {
        let from = nodes[node];
        for (j, &to) in nodes.iter().enumerate() {
            let len = grid.distance(from, to);
            if j != node && labels.improves(j, g + len) && los_clear(grid, from, to, open) {
                out.push((j, len));
            }
        }
    })?;
    path.length = polyline_length(grid, &path.cells);
    Some(path)
}
