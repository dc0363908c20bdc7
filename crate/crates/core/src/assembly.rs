//! Final graph assembly: `γ(Q)` gadgets, the union `G1 ∪ G2 ∪ G3`, and an
//! Euler circuit of its doubled multigraph.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{self, Disk, GeometricGraph, Point, Segment};
use crate::grid::{GridSquare, StratifiedGrid};
use crate::math;

/// Closed polygonal curve through `vertices` (the last vertex connects back
/// to the first). A single vertex is a degenerate tour of length zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tour {
    pub vertices: Vec<Point>,
}

impl Tour {
    pub fn new(vertices: Vec<Point>) -> Self {
        Tour { vertices }
    }

    pub fn length(&self) -> f64 {
        self.segments().iter().map(Segment::length).fold(0.0, |a, b| a + b)
    }

    /// Edges of the closed curve; one degenerate edge for a single vertex.
    pub fn segments(&self) -> Vec<Segment> {
        let n = self.vertices.len();
        match n {
            0 => Vec::new(),
            1 => vec![Segment::new(self.vertices[0], self.vertices[0])],
            _ => (0..n)
                .map(|i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
                .collect(),
        }
    }

    pub fn as_graph(&self) -> GeometricGraph {
        GeometricGraph::from_segments(self.segments())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// Distance from each disk to the tour (zero when touched).
    pub per_disk: Vec<f64>,
    pub max_violation: f64,
    pub tolerance: f64,
    pub valid: bool,
}

/// Checks that the tour comes within `eps` of every disk.
pub fn validate_tour(tour: &Tour, disks: &[Disk], eps: f64) -> ValidationReport {
    let graph = tour.as_graph();
    let per_disk: Vec<f64> = disks
        .iter()
        .map(|d| geom::dist_disk_graph(d, &graph).unwrap_or(f64::INFINITY))
        .collect();
    let max_violation = per_disk.iter().copied().fold(0.0, f64::max);
    ValidationReport {
        valid: max_violation <= eps,
        per_disk,
        max_violation,
        tolerance: eps,
    }
}

/// Boundary of the cell plus a shortest segment from it to `g1` when the two
/// are apart.
pub fn gamma(q: &GridSquare, g1: &GeometricGraph) -> Result<GeometricGraph> {
    let mut g = GeometricGraph::from_segments(q.cell.boundary().to_vec());
    if q.dist_to_g1 > 0.0 {
        let c = geom::shortest_connector(&q.cell, g1)?;
        if !c.is_degenerate() {
            g.push(c);
        }
    }
    Ok(g)
}

/// Union of `γ(Q)` over the selected cells.
pub fn build_g3(selected: &[usize], grid: &StratifiedGrid, g1: &GeometricGraph) -> Result<GeometricGraph> {
    let mut g3 = GeometricGraph::new();
    for &i in selected {
        g3.extend_from(&gamma(&grid.squares[i], g1)?);
    }
    Ok(g3)
}

/// Planar-graph view of a set of segments: segments are split wherever
/// another segment ends on them or crosses them, and endpoints closer than
/// the identification tolerance become one vertex.
#[derive(Clone, Debug, Default)]
pub struct Arrangement {
    pub vertices: Vec<Point>,
    /// Edges as vertex pairs; parallel edges and loops are kept.
    pub edges: Vec<(usize, usize)>,
}

struct VertexIndex {
    tol: f64,
    cells: BTreeMap<(i64, i64), Vec<usize>>,
    points: Vec<Point>,
}

impl VertexIndex {
    fn new(tol: f64) -> Self {
        VertexIndex { tol, cells: BTreeMap::new(), points: Vec::new() }
    }

    fn cell(&self, p: Point) -> (i64, i64) {
        (math::floor(p.x / self.tol) as i64, math::floor(p.y / self.tol) as i64)
    }

    fn intern(&mut self, p: Point) -> usize {
        let (cx, cy) = self.cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &id in ids {
                        if self.points[id].dist(p) <= self.tol {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.cells.entry((cx, cy)).or_default().push(id);
        id
    }
}

fn bbox_overlap(s: &Segment, o: &Segment, tol: f64) -> bool {
    s.a.x.min(s.b.x) <= o.a.x.max(o.b.x) + tol
        && o.a.x.min(o.b.x) <= s.a.x.max(s.b.x) + tol
        && s.a.y.min(s.b.y) <= o.a.y.max(o.b.y) + tol
        && o.a.y.min(o.b.y) <= s.a.y.max(s.b.y) + tol
}

/// Builds the arrangement of `segments` with identification tolerance `tol`.
pub fn arrange(segments: &[Segment], tol: f64) -> Result<Arrangement> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("identification tolerance must be positive"));
    }
    let m = segments.len();
    let mut splits: Vec<Vec<f64>> = vec![vec![0.0, 1.0]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let (s, o) = (&segments[i], &segments[j]);
            if !bbox_overlap(s, o, tol) {
                continue;
            }
            for p in [o.a, o.b] {
                if s.dist_to_point(p) <= tol {
                    splits[i].push(s.closest_param(p));
                }
            }
            for p in [s.a, s.b] {
                if o.dist_to_point(p) <= tol {
                    splits[j].push(o.closest_param(p));
                }
            }
            if let Some((t, u)) = geom::segment_crossing(s, o) {
                splits[i].push(t);
                splits[j].push(u);
            }
        }
    }
    let mut index = VertexIndex::new(tol);
    let mut edges = Vec::new();
    for (s, ts) in segments.iter().zip(splits.iter_mut()) {
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let ids: Vec<usize> = ts.iter().map(|&t| index.intern(s.point_at(t))).collect();
        if s.is_degenerate() {
            edges.push((ids[0], ids[0]));
            continue;
        }
        for w in ids.windows(2) {
            edges.push((w[0], w[1]));
        }
    }
    Ok(Arrangement { vertices: index.points, edges })
}

impl Arrangement {
    /// Number of connected components among vertices that carry an edge.
    pub fn components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut used = vec![false; n];
        for &(u, v) in &self.edges {
            used[u] = true;
            used[v] = true;
        }
        (0..n).filter(|&v| used[v] && find(&mut parent, v) == v).count()
    }

    /// Euler circuit of the multigraph with every edge taken twice, as a
    /// vertex sequence (first vertex not repeated at the end).
    pub fn doubled_euler_circuit(&self) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        if self.edges.is_empty() {
            return Ok(Vec::new());
        }
        let components = self.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        // copy k of edge e has id 2e + k
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            for k in 0..2 {
                let id = 2 * e + k;
                adj[u].push((id, v));
                adj[v].push((id, u));
            }
        }
        for (v, list) in adj.iter().enumerate() {
            if list.len() % 2 != 0 {
                return Err(Error::OddDegree { vertex: v });
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut used = vec![false; 2 * self.edges.len()];
        let mut next = vec![0usize; n];
        let start = self.edges[0].0;
        let mut stack = vec![start];
        let mut circuit = Vec::with_capacity(2 * self.edges.len() + 1);
        while let Some(&v) = stack.last() {
            while next[v] < adj[v].len() && used[adj[v][next[v]].0] {
                next[v] += 1;
            }
            if next[v] < adj[v].len() {
                let (id, w) = adj[v][next[v]];
                used[id] = true;
                stack.push(w);
            } else {
                circuit.push(v);
                stack.pop();
            }
        }
        circuit.reverse();
        circuit.pop();
        Ok(circuit)
    }
}

/// Doubles every edge of `G = g1 ∪ g2 ∪ g3` and walks an Euler circuit.
///
/// No shortcutting is applied; consecutive repeated vertices (from loops
/// and sub-tolerance edges) are dropped since they add no length.
pub fn assemble_tour(
    g1: &GeometricGraph,
    g2: &GeometricGraph,
    g3: &GeometricGraph,
    tol: f64,
) -> Result<Tour> {
    let mut all: Vec<Segment> = Vec::with_capacity(g1.num_segments() + g2.num_segments() + g3.num_segments());
    all.extend_from_slice(g1.segments());
    all.extend_from_slice(g2.segments());
    all.extend_from_slice(g3.segments());
    let arr = arrange(&all, tol)?;
    let circuit = arr.doubled_euler_circuit()?;
    let mut vertices: Vec<Point> = Vec::with_capacity(circuit.len());
    for v in circuit {
        let p = arr.vertices[v];
        if vertices.last() != Some(&p) {
            vertices.push(p);
        }
    }
    while vertices.len() > 1 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    Ok(Tour::new(vertices))
}
