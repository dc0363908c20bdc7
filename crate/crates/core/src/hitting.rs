//! Square and sentinel hypergraphs, minimum-weight hitting set solvers,
//! and the lift from sentinels back to grid cells.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{self, AxisSquare, Disk, Point};
use crate::grid::StratifiedGrid;

/// Largest vertex count the exact solver accepts by default.
pub const DEFAULT_EXACT_LIMIT: usize = 24;

/// Sentinel offsets along each axis, in half-sides of the cell.
pub const SENTINEL_OFFSETS: [i64; 5] = [-1, 0, 1, 2, 3];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedHypergraph {
    pub weights: Vec<f64>,
    pub edges: Vec<Vec<usize>>,
}

impl WeightedHypergraph {
    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn weight_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.weights[v]).fold(0.0, |a, b| a + b)
    }

    pub fn is_hitting_set(&self, set: &[usize]) -> bool {
        let mut mark = vec![false; self.num_vertices()];
        for &v in set {
            if v < mark.len() {
                mark[v] = true;
            }
        }
        self.edges.iter().all(|e| e.iter().any(|&v| mark[v]))
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check_edges(&self) -> Result<()> {
        match self.edges.iter().position(Vec::is_empty) {
            Some(edge) => Err(Error::EmptyEdge { edge }),
            None => Ok(()),
        }
    }

    /// Restriction to the vertices that occur in some edge. Returns the
    /// smaller hypergraph and the original index of each kept vertex.
    pub fn compact(&self) -> (WeightedHypergraph, Vec<usize>) {
        let mut used = vec![false; self.num_vertices()];
        for e in &self.edges {
            for &v in e {
                used[v] = true;
            }
        }
        let kept: Vec<usize> = (0..self.num_vertices()).filter(|&v| used[v]).collect();
        let mut new_id = vec![usize::MAX; self.num_vertices()];
        for (k, &v) in kept.iter().enumerate() {
            new_id[v] = k;
        }
        let h = WeightedHypergraph {
            weights: kept.iter().map(|&v| self.weights[v]).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| new_id[v]).collect())
                .collect(),
        };
        (h, kept)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverKind {
    Greedy,
    Exact,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Greedy => "greedy",
            SolverKind::Exact => "exact",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingSetSolution {
    /// Chosen vertices, sorted.
    pub chosen: Vec<usize>,
    pub weight: f64,
    pub solver: SolverKind,
}

/// Weighted greedy: repeatedly take the vertex with the smallest weight per
/// newly hit edge; ties go to the lowest index.
pub fn greedy_mwhs(h: &WeightedHypergraph) -> Result<HittingSetSolution> {
    h.check_edges()?;
    let nv = h.num_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, verts) in h.edges.iter().enumerate() {
        for &v in verts {
            incident[v].push(e);
        }
    }
    let mut hit = vec![false; h.edges.len()];
    let mut remaining = h.edges.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..nv {
            let count = incident[v].iter().filter(|&&e| !hit[e]).count();
            if count == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((b, bc)) => h.weights[v] * (bc as f64) < h.weights[b] * (count as f64),
            };
            if better {
                best = Some((v, count));
            }
        }
        let (v, _) = best.expect("an unhit edge has a vertex");
        for &e in &incident[v] {
            if !hit[e] {
                hit[e] = true;
                remaining -= 1;
            }
        }
        chosen.push(v);
    }
    chosen.sort_unstable();
    Ok(HittingSetSolution { weight: h.weight_of(&chosen), chosen, solver: SolverKind::Greedy })
}

struct BranchAndBound<'a> {
    h: &'a WeightedHypergraph,
    /// Each edge's vertices sorted by weight, then index.
    sorted_edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    hit_count: Vec<usize>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_weight: f64,
}

impl BranchAndBound<'_> {
    fn search(&mut self, weight: f64) {
        let Some(e) = self.hit_count.iter().position(|&c| c == 0) else {
            if weight < self.best_weight {
                self.best_weight = weight;
                self.best.clone_from(&self.current);
            }
            return;
        };
        let choices = self.sorted_edges[e].clone();
        for v in choices {
            let w = weight + self.h.weights[v];
            if w >= self.best_weight {
                // sorted by weight: the remaining choices are no lighter
                break;
            }
            for k in 0..self.incident[v].len() {
                let f = self.incident[v][k];
                self.hit_count[f] += 1;
            }
            self.current.push(v);
            self.search(w);
            self.current.pop();
            for k in 0..self.incident[v].len() {
                let f = self.incident[v][k];
                self.hit_count[f] -= 1;
            }
        }
    }
}

/// Minimum-weight hitting set by branching on the first unhit edge, lighter
/// vertices first, pruning on the incumbent weight.
pub fn exact_mwhs(h: &WeightedHypergraph, limit: usize) -> Result<HittingSetSolution> {
    if h.num_vertices() > limit {
        return Err(Error::TooLarge { size: h.num_vertices(), limit });
    }
    h.check_edges()?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.num_vertices()];
    for (e, verts) in h.edges.iter().enumerate() {
        for &v in verts {
            incident[v].push(e);
        }
    }
    let sorted_edges = h
        .edges
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.sort_by(|&a, &b| h.weights[a].total_cmp(&h.weights[b]).then(a.cmp(&b)));
            e.dedup();
            e
        })
        .collect();
    let mut bb = BranchAndBound {
        h,
        sorted_edges,
        incident,
        hit_count: vec![0; h.edges.len()],
        current: Vec::new(),
        best: Vec::new(),
        best_weight: f64::INFINITY,
    };
    bb.search(0.0);
    let mut chosen = bb.best;
    chosen.sort_unstable();
    chosen.dedup();
    Ok(HittingSetSolution { weight: h.weight_of(&chosen), chosen, solver: SolverKind::Exact })
}

pub fn solve_mwhs(h: &WeightedHypergraph, solver: SolverKind, exact_limit: usize) -> Result<HittingSetSolution> {
    match solver {
        SolverKind::Greedy => greedy_mwhs(h),
        SolverKind::Exact => exact_mwhs(h, exact_limit),
    }
}

/// Cells as vertices weighted by diameter; one edge per far disk listing
/// the cells it meets.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareHypergraph {
    pub graph: WeightedHypergraph,
    /// Instance index of the disk behind each edge.
    pub disks: Vec<usize>,
}

pub fn build_square_hypergraph(grid: &StratifiedGrid, disks: &[Disk], s3: &[usize]) -> Result<SquareHypergraph> {
    let weights = grid.squares.iter().map(|q| q.diam()).collect();
    let mut edges = Vec::with_capacity(s3.len());
    for (e, &i) in s3.iter().enumerate() {
        let d = &disks[i];
        let edge: Vec<usize> = (0..grid.len())
            .filter(|&q| geom::square_disk_intersects(&grid.squares[q].cell, d))
            .collect();
        if edge.is_empty() {
            return Err(Error::EmptyEdge { edge: e });
        }
        edges.push(edge);
    }
    Ok(SquareHypergraph { graph: WeightedHypergraph { weights, edges }, disks: s3.to_vec() })
}

/// The 25 sentinel points of a square, `i` major then `j`.
pub fn make_sentinels(q: &AxisSquare) -> [Point; 25] {
    let half = 0.5 * q.side;
    let mut out = [Point::default(); 25];
    for (a, &i) in SENTINEL_OFFSETS.iter().enumerate() {
        for (b, &j) in SENTINEL_OFFSETS.iter().enumerate() {
            out[a * 5 + b] = Point::new(q.corner.x + i as f64 * half, q.corner.y + j as f64 * half);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sentinel {
    pub location: Point,
    /// Exact position in units of `r / 2^(max_depth + 1)`.
    pub key: (i64, i64),
    /// Cells that generated this point as one of their 25 sentinels.
    pub generators: Vec<usize>,
    /// Cells whose closed region contains the point.
    pub containers: Vec<usize>,
    /// Union of generators and containers.
    pub owners: Vec<usize>,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SentinelHypergraph {
    pub sentinels: Vec<Sentinel>,
    pub graph: WeightedHypergraph,
    pub disks: Vec<usize>,
    /// Exponent of the integer key units.
    pub units: u32,
}

impl SentinelHypergraph {
    /// Sentinels owned by any of the given cells.
    pub fn sentinels_of_squares(&self, squares: &[usize]) -> Vec<usize> {
        let mut pick: Vec<bool> = Vec::new();
        let max_q = squares.iter().copied().max().map_or(0, |m| m + 1);
        pick.resize(max_q, false);
        for &q in squares {
            pick[q] = true;
        }
        (0..self.sentinels.len())
            .filter(|&s| self.sentinels[s].owners.iter().any(|&q| q < max_q && pick[q]))
            .collect()
    }

    /// Largest `weight / diam(owner)` over all sentinels and their owners.
    pub fn weight_ratio(&self, grid: &StratifiedGrid) -> f64 {
        self.sentinels
            .iter()
            .flat_map(|s| s.owners.iter().map(move |&q| s.weight / grid.squares[q].diam()))
            .fold(0.0, f64::max)
    }
}

/// Sentinels of every cell that lie in the closed bounding square,
/// merged by exact position; one edge per far disk listing the sentinels
/// it contains.
pub fn build_sentinel_hypergraph(grid: &StratifiedGrid, disks: &[Disk], s3: &[usize]) -> Result<SentinelHypergraph> {
    let units = grid.max_depth + 1;
    let full = 1i64 << units;
    let r = grid.bounding;
    let unit = libm::ldexp(r.side, -(units as i32));
    let mut by_key: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut sentinels: Vec<Sentinel> = Vec::new();
    for (qi, q) in grid.squares.iter().enumerate() {
        let size = 1i64 << (units - q.depth);
        let half = size / 2;
        let (bx, by) = (q.ix as i64 * size, q.iy as i64 * size);
        for &i in &SENTINEL_OFFSETS {
            for &j in &SENTINEL_OFFSETS {
                let key = (bx + i * half, by + j * half);
                if key.0 < 0 || key.1 < 0 || key.0 > full || key.1 > full {
                    continue;
                }
                let id = *by_key.entry(key).or_insert_with(|| {
                    sentinels.push(Sentinel {
                        location: Point::new(r.corner.x + key.0 as f64 * unit, r.corner.y + key.1 as f64 * unit),
                        key,
                        generators: Vec::new(),
                        containers: Vec::new(),
                        owners: Vec::new(),
                        weight: 0.0,
                    });
                    sentinels.len() - 1
                });
                sentinels[id].generators.push(qi);
            }
        }
    }
    for s in &mut sentinels {
        s.generators.dedup();
        s.containers = grid.cells_containing(units, s.key.0, s.key.1);
        let mut owners = s.generators.clone();
        owners.extend_from_slice(&s.containers);
        owners.sort_unstable();
        owners.dedup();
        s.weight = owners.iter().map(|&q| grid.squares[q].diam()).sum();
        s.owners = owners;
    }
    let mut edges = Vec::with_capacity(s3.len());
    for (e, &i) in s3.iter().enumerate() {
        let d = &disks[i];
        let edge: Vec<usize> = (0..sentinels.len()).filter(|&s| d.contains(sentinels[s].location)).collect();
        if edge.is_empty() {
            return Err(Error::EmptyEdge { edge: e });
        }
        edges.push(edge);
    }
    let weights = sentinels.iter().map(|s| s.weight).collect();
    Ok(SentinelHypergraph { sentinels, graph: WeightedHypergraph { weights, edges }, disks: s3.to_vec(), units })
}

/// Cells whose closed region contains a chosen sentinel, sorted.
pub fn lift_to_squares(sol: &HittingSetSolution, h: &SentinelHypergraph) -> Vec<usize> {
    let mut out: Vec<usize> = sol
        .chosen
        .iter()
        .flat_map(|&s| h.sentinels[s].containers.iter().copied())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
