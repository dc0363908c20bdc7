//! Stratified grid: an adaptive dyadic subdivision of the bounding square.
//!
//! A cell splits while its diameter is at least both `r / 2n` and its
//! distance to `G1`. Cells are addressed by depth and integer position so
//! that disjointness and adjacency are decided exactly.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::error::Result;
use crate::geom::{self, AxisSquare, GeometricGraph, Point};
use crate::math::SQRT_2;

/// Hard stop on subdivision depth; never reached for `n` below 2^40.
const MAX_DEPTH: u32 = 48;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSquare {
    pub cell: AxisSquare,
    /// Side is `r / 2^depth`.
    pub depth: u32,
    pub ix: u64,
    pub iy: u64,
    /// `dist(cell, G1)`, computed when the cell was emitted.
    pub dist_to_g1: f64,
}

impl GridSquare {
    pub fn diam(&self) -> f64 {
        self.cell.diam()
    }

    /// Integer extent `[lo, hi]` per axis in units of `r / 2^depth_units`.
    pub fn span(&self, depth_units: u32) -> ((u64, u64), (u64, u64)) {
        let k = depth_units - self.depth;
        (
            (self.ix << k, (self.ix + 1) << k),
            (self.iy << k, (self.iy + 1) << k),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratifiedGrid {
    pub bounding: AxisSquare,
    pub squares: Vec<GridSquare>,
    pub max_depth: u32,
    index: BTreeMap<(u32, u64, u64), usize>,
}

fn cell_at(r: &AxisSquare, depth: u32, ix: u64, iy: u64) -> AxisSquare {
    let side = libm::ldexp(r.side, -(depth as i32));
    AxisSquare::new(
        Point::new(r.corner.x + ix as f64 * side, r.corner.y + iy as f64 * side),
        side,
    )
}

impl StratifiedGrid {
    fn from_squares(bounding: AxisSquare, squares: Vec<GridSquare>) -> Self {
        let max_depth = squares.iter().map(|q| q.depth).max().unwrap_or(0);
        let index = squares
            .iter()
            .enumerate()
            .map(|(i, q)| ((q.depth, q.ix, q.iy), i))
            .collect();
        StratifiedGrid { bounding, squares, max_depth, index }
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Index of the emitted cell at `(depth, ix, iy)`, if any.
    pub fn find(&self, depth: u32, ix: u64, iy: u64) -> Option<usize> {
        self.index.get(&(depth, ix, iy)).copied()
    }

    /// Emitted cells whose closed region contains the point with integer
    /// coordinates `(x, y)` in units of `r / 2^units`.
    pub fn cells_containing(&self, units: u32, x: i64, y: i64) -> Vec<usize> {
        let full = 1i64 << units;
        let mut out = Vec::new();
        if x < 0 || y < 0 || x > full || y > full {
            return out;
        }
        for depth in 0..=self.max_depth.min(units) {
            let size = 1i64 << (units - depth);
            let cands = |v: i64| -> [Option<i64>; 2] {
                let k = v / size;
                let lo = if v % size == 0 { Some(k - 1) } else { None };
                [lo, Some(k)]
            };
            let cells = 1i64 << depth;
            for cx in cands(x).into_iter().flatten() {
                if cx < 0 || cx >= cells {
                    continue;
                }
                for cy in cands(y).into_iter().flatten() {
                    if cy < 0 || cy >= cells {
                        continue;
                    }
                    if let Some(i) = self.find(depth, cx as u64, cy as u64) {
                        out.push(i);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Adaptive subdivision of `r` driven by the distance to `g1`.
///
/// Cells are processed first-in first-out; children are enqueued in the
/// order SW, SE, NW, NE. A zero-side square is returned as the only cell.
pub fn stratify(r: &AxisSquare, g1: &GeometricGraph, n: usize) -> Result<StratifiedGrid> {
    let n = n.max(1);
    let threshold = r.side / (2.0 * n as f64);
    let mut queue: VecDeque<(u32, u64, u64)> = VecDeque::new();
    let mut out = Vec::new();
    queue.push_back((0, 0, 0));
    while let Some((depth, ix, iy)) = queue.pop_front() {
        let cell = cell_at(r, depth, ix, iy);
        let dist = geom::dist_square_graph(&cell, g1)?;
        let diam = cell.side * SQRT_2;
        let split = r.side > 0.0 && depth < MAX_DEPTH && diam >= threshold.max(dist);
        if split {
            let (cx, cy) = (2 * ix, 2 * iy);
            queue.push_back((depth + 1, cx, cy));
            queue.push_back((depth + 1, cx + 1, cy));
            queue.push_back((depth + 1, cx, cy + 1));
            queue.push_back((depth + 1, cx + 1, cy + 1));
        } else {
            out.push(GridSquare { cell, depth, ix, iy, dist_to_g1: dist });
        }
    }
    Ok(StratifiedGrid::from_squares(*r, out))
}

/// All unordered pairs of cells whose closed regions meet (shared edge
/// part or corner), sorted.
pub fn adjacency_pairs(grid: &StratifiedGrid) -> Vec<(usize, usize)> {
    let units = grid.max_depth;
    let mut pairs = BTreeSet::new();
    for (i, q) in grid.squares.iter().enumerate() {
        let ((x0, x1), (y0, y1)) = q.span(units);
        // every pair is found from its finer (or equal) member
        for depth in 0..=q.depth {
            let shift = q.depth - depth;
            let (kx, ky) = ((q.ix >> shift) as i64, (q.iy >> shift) as i64);
            let cells = 1i64 << depth;
            for cx in (kx - 1)..=(kx + 1) {
                for cy in (ky - 1)..=(ky + 1) {
                    if cx < 0 || cy < 0 || cx >= cells || cy >= cells {
                        continue;
                    }
                    let Some(j) = grid.find(depth, cx as u64, cy as u64) else {
                        continue;
                    };
                    if j == i {
                        continue;
                    }
                    let ((a0, a1), (b0, b1)) = grid.squares[j].span(units);
                    if a0 <= x1 && x0 <= a1 && b0 <= y1 && y0 <= b1 {
                        pairs.insert((i.min(j), i.max(j)));
                    }
                }
            }
        }
    }
    pairs.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Segment;
    use alloc::vec;

    fn unit() -> AxisSquare {
        AxisSquare::new(Point::new(0.0, 0.0), 1.0)
    }

    #[test]
    fn far_graph_keeps_one_cell() {
        let g1 = GeometricGraph::from_segments(vec![Segment::new(Point::new(10.0, 10.0), Point::new(11.0, 10.0))]);
        let grid = stratify(&unit(), &g1, 4).unwrap();
        assert_eq!(grid.len(), 1);
        assert_eq!(grid.squares[0].cell, unit());
        assert!(adjacency_pairs(&grid).is_empty());
    }

    #[test]
    fn diagonal_graph_with_one_disk() {
        // n = 1: split while diam >= max(1/2, dist). Depth 1 cells have
        // diam 0.707 and touch the diagonal (the off-diagonal ones at the
        // center point), so all split; depth 2 cells have diam 0.354 < 0.5.
        let g1 = GeometricGraph::from_segments(vec![Segment::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0))]);
        let grid = stratify(&unit(), &g1, 1).unwrap();
        assert_eq!(grid.len(), 16);
        assert!(grid.squares.iter().all(|q| q.depth == 2));
        // FIFO with SW, SE, NW, NE children: first the SW parent's children
        let first: Vec<(u64, u64)> = grid.squares[..4].iter().map(|q| (q.ix, q.iy)).collect();
        assert_eq!(first, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn uniform_split_adjacency() {
        let two_by_two = StratifiedGrid::from_squares(
            unit(),
            (0..4)
                .map(|k| {
                    let (ix, iy) = (k % 2, k / 2);
                    GridSquare { cell: cell_at(&unit(), 1, ix, iy), depth: 1, ix, iy, dist_to_g1: 0.0 }
                })
                .collect(),
        );
        assert_eq!(adjacency_pairs(&two_by_two).len(), 6);
    }

    #[test]
    fn zero_side_square_is_not_split() {
        let r = AxisSquare::new(Point::new(1.0, 1.0), 0.0);
        let g1 = GeometricGraph::from_segments(vec![Segment::new(Point::new(1.0, 1.0), Point::new(1.0, 1.0))]);
        let grid = stratify(&r, &g1, 3).unwrap();
        assert_eq!(grid.len(), 1);
    }

    #[test]
    fn containment_lookup_on_shared_corner() {
        let two_by_two = StratifiedGrid::from_squares(
            unit(),
            (0..4)
                .map(|k| {
                    let (ix, iy) = (k % 2, k / 2);
                    GridSquare { cell: cell_at(&unit(), 1, ix, iy), depth: 1, ix, iy, dist_to_g1: 0.0 }
                })
                .collect(),
        );
        // center of R in units of r/4
        assert_eq!(two_by_two.cells_containing(2, 2, 2), vec![0, 1, 2, 3]);
        assert_eq!(two_by_two.cells_containing(2, 1, 1), vec![0]);
        assert_eq!(two_by_two.cells_containing(2, 2, 1), vec![0, 1]);
        assert!(two_by_two.cells_containing(2, 5, 1).is_empty());
    }
}
