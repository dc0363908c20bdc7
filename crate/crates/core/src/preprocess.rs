//! Independent set, its tour, the enclosing square, and the graphs `G1`
//! and `G2`.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::Tour;
use crate::error::{Error, Result};
use crate::geom::{self, AxisSquare, Disk, GeometricGraph, Point};
use crate::math;
use crate::oracle;

/// Ordered set of input disks; the position of a disk is its identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    disks: Vec<Disk>,
}

impl Instance {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if let Some(index) = disks.iter().position(|d| !d.is_valid()) {
            return Err(Error::InvalidDisk { index });
        }
        Ok(Instance { disks })
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Size of the instance's bounding box including radii; used as the
    /// length scale when the enclosing square degenerates to a point.
    pub fn extent(&self) -> f64 {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for d in &self.disks {
            lo.x = lo.x.min(d.center.x - d.radius);
            lo.y = lo.y.min(d.center.y - d.radius);
            hi.x = hi.x.max(d.center.x + d.radius);
            hi.y = hi.y.max(d.center.y + d.radius);
        }
        (hi.x - lo.x).max(hi.y - lo.y)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Partition {
    /// Disks touched by `G1`.
    pub s1: Vec<usize>,
    /// Disks within `r/n` of `G1` but not touching it.
    pub s2: Vec<usize>,
    /// Everything farther.
    pub s3: Vec<usize>,
    /// `dist(D_i, G1)` for every disk.
    pub dist_to_g1: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreprocessResult {
    pub independent: Vec<usize>,
    pub xi0: Tour,
    pub bounding: AxisSquare,
    pub g1: GeometricGraph,
    pub g2: GeometricGraph,
    pub partition: Partition,
}

impl PreprocessResult {
    pub fn r(&self) -> f64 {
        self.bounding.side
    }
}

/// Greedy maximal set of pairwise-disjoint disks, scanning by radius and
/// then by index. Tangent disks count as intersecting. Returned sorted by
/// index.
pub fn greedy_independent_set(inst: &Instance) -> Vec<usize> {
    let disks = inst.disks();
    let mut order: Vec<usize> = (0..disks.len()).collect();
    order.sort_by(|&a, &b| disks[a].radius.total_cmp(&disks[b].radius).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&j| !disks[i].intersects(&disks[j])) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

fn nearest_neighbor_order(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0;
    visited[0] = true;
    order.push(0);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .min_by(|&a, &b| {
                points[cur]
                    .dist(points[a])
                    .total_cmp(&points[cur].dist(points[b]))
                    .then(a.cmp(&b))
            })
            .expect("unvisited point");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    order
}

/// First-improvement 2-opt on the cyclic order; `pos[k]` is the location
/// used for item `k`. Returns the number of moves applied.
fn two_opt(order: &mut [usize], pos: &[Point], max_moves: usize, eps: f64) -> usize {
    let n = order.len();
    if n < 4 {
        return 0;
    }
    let d = |a: usize, b: usize| pos[a].dist(pos[b]);
    let mut moves = 0;
    'outer: loop {
        for i in 0..n - 1 {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (order[i], order[i + 1]);
                let (c, e) = (order[j], order[(j + 1) % n]);
                let delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if delta < -eps {
                    order[i + 1..=j].reverse();
                    moves += 1;
                    if moves >= max_moves {
                        break 'outer;
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    moves
}

/// Heuristic tour for pairwise-disjoint disks: nearest neighbour over the
/// centers, 2-opt, then fixed-order touring to slide the visit points
/// inside the disks. The last two steps are repeated on the visit points
/// while they keep shortening the tour.
pub fn disjoint_disk_tour(disks: &[Disk], touring_tol: f64) -> Result<Tour> {
    let n = disks.len();
    match n {
        0 => return Err(Error::EmptyInstance),
        1 => {
            let d = disks[0];
            return Ok(Tour::new(vec![Point::new(d.center.x + d.radius, d.center.y)]));
        }
        _ => {}
    }
    let centers: Vec<Point> = disks.iter().map(|d| d.center).collect();
    let scale = disks.iter().map(|d| d.radius).fold(0.0, f64::max);
    let cap = 50 * n * n;
    let mut order = nearest_neighbor_order(&centers);
    two_opt(&mut order, &centers, cap, 1e-12 * scale);
    let mut best = oracle::touring_disks_fixed_order(&order, disks, touring_tol)?;
    for _ in 0..4 {
        let mut pos = vec![Point::default(); n];
        for (k, &i) in best.order.iter().enumerate() {
            pos[i] = best.points[k];
        }
        let mut next = best.order.clone();
        if two_opt(&mut next, &pos, cap, 1e-12 * scale) == 0 {
            break;
        }
        let init: Vec<Point> = next.iter().map(|&i| pos[i]).collect();
        let cand = oracle::touring_from(&next, disks, init, touring_tol)?;
        if cand.length < best.length {
            best = cand;
        } else {
            break;
        }
    }
    Ok(Tour::new(best.points))
}

/// Feasible lower-left corner for a square of side `r` meeting every disk.
///
/// For a fixed left edge `x0` the admissible bottom edges form an interval
/// per disk, so feasibility reduces to minimizing the convex gap between
/// the largest lower end and the smallest upper end over `x0`.
fn feasible_corner(disks: &[Disk], r: f64, slack: f64) -> Option<Point> {
    let mut x_lo = f64::NEG_INFINITY;
    let mut x_hi = f64::INFINITY;
    for d in disks {
        x_lo = x_lo.max(d.center.x - r - d.radius);
        x_hi = x_hi.min(d.center.x + d.radius);
    }
    if x_lo > x_hi + slack {
        return None;
    }
    if x_lo > x_hi {
        let mid = 0.5 * (x_lo + x_hi);
        x_lo = mid;
        x_hi = mid;
    }
    let y_range = |x0: f64| -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for d in disks {
            let dx = (x0 - d.center.x).max(0.0).max(d.center.x - x0 - r);
            let s = math::sqrt((d.radius * d.radius - dx * dx).max(0.0));
            lo = lo.max(d.center.y - r - s);
            hi = hi.min(d.center.y + s);
        }
        (lo, hi)
    };
    let gap = |x0: f64| {
        let (lo, hi) = y_range(x0);
        lo - hi
    };
    let inv_phi = 0.5 * (math::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (x_lo, x_hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = gap(x1);
    let mut f2 = gap(x2);
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = gap(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = gap(x2);
        }
    }
    let mut best_x = if f1 <= f2 { x1 } else { x2 };
    let mut best_g = f1.min(f2);
    for x in [x_lo, x_hi] {
        let g = gap(x);
        if g < best_g {
            best_g = g;
            best_x = x;
        }
    }
    if best_g > slack {
        return None;
    }
    let (lo, hi) = y_range(best_x);
    let y0 = if lo <= hi { lo } else { 0.5 * (lo + hi) };
    Some(Point::new(best_x, y0))
}

/// Smallest axis-parallel square that every disk meets (closed).
///
/// Bisection on the side length over the convex feasibility test above.
/// A single disk gets a zero-side square at its rightmost point.
pub fn min_enclosing_square(inst: &Instance) -> AxisSquare {
    let disks = inst.disks();
    if disks.len() == 1 {
        let d = disks[0];
        return AxisSquare::new(Point::new(d.center.x + d.radius, d.center.y), 0.0);
    }
    let extent = inst.extent();
    let slack = 1e-14 * extent;
    let mut lo = 0.0;
    let mut hi = {
        let (mut x0, mut x1, mut y0, mut y1) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for d in disks {
            x0 = x0.min(d.center.x);
            x1 = x1.max(d.center.x);
            y0 = y0.min(d.center.y);
            y1 = y1.max(d.center.y);
        }
        (x1 - x0).max(y1 - y0)
    };
    let mut corner = feasible_corner(disks, hi, slack)
        .expect("a square spanning all centers is feasible");
    if let Some(c) = feasible_corner(disks, 0.0, slack) {
        return AxisSquare::new(c, 0.0);
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match feasible_corner(disks, mid, 0.0) {
            Some(c) => {
                hi = mid;
                corner = c;
            }
            None => lo = mid,
        }
    }
    AxisSquare::new(corner, hi)
}

fn square_boundary_graph(r: &AxisSquare) -> GeometricGraph {
    if r.side == 0.0 {
        GeometricGraph::from_segments(vec![geom::Segment::new(r.corner, r.corner)])
    } else {
        GeometricGraph::from_segments(r.boundary().to_vec())
    }
}

/// `ξ0 ∪ ∂R`, plus a shortest segment between them when they are apart.
pub fn build_g1(xi0: &Tour, r: &AxisSquare) -> Result<GeometricGraph> {
    let tour = xi0.as_graph();
    let boundary = square_boundary_graph(r);
    let mut g1 = tour.clone();
    g1.extend_from(&boundary);
    let connector = geom::shortest_connector(&tour, &boundary)?;
    if !connector.is_degenerate() {
        g1.push(connector);
    }
    Ok(g1)
}

/// Splits the disks by their distance to `g1`: touching (within `tol`),
/// within `r/n`, and farther.
pub fn partition_disks(inst: &Instance, g1: &GeometricGraph, r: f64, tol: f64) -> Result<Partition> {
    let threshold = r / inst.len() as f64;
    let mut part = Partition::default();
    for (i, d) in inst.disks().iter().enumerate() {
        let dist = geom::dist_disk_graph(d, g1)?;
        part.dist_to_g1.push(dist);
        if dist <= tol {
            part.s1.push(i);
        } else if dist <= threshold {
            part.s2.push(i);
        } else {
            part.s3.push(i);
        }
    }
    Ok(part)
}

/// One shortest connector from each disk to `g1`.
pub fn build_g2(inst: &Instance, s2: &[usize], g1: &GeometricGraph) -> Result<GeometricGraph> {
    let mut g2 = GeometricGraph::new();
    for &i in s2 {
        let c = geom::shortest_connector(&inst.disks()[i], g1)?;
        if c.is_degenerate() {
            return Err(Error::AlreadyConnected { index: i });
        }
        g2.push(c);
    }
    Ok(g2)
}

/// Runs the whole preprocessing stage.
pub fn preprocess(inst: &Instance, id_tol_rel: f64, touring_tol: f64) -> Result<PreprocessResult> {
    let independent = greedy_independent_set(inst);
    let chosen: Vec<Disk> = independent.iter().map(|&i| inst.disks()[i]).collect();
    let xi0 = disjoint_disk_tour(&chosen, touring_tol)?;
    let bounding = min_enclosing_square(inst);
    let g1 = build_g1(&xi0, &bounding)?;
    let scale = length_scale(bounding.side, inst);
    let partition = partition_disks(inst, &g1, bounding.side, id_tol_rel * scale)?;
    let g2 = build_g2(inst, &partition.s2, &g1)?;
    Ok(PreprocessResult { independent, xi0, bounding, g1, g2, partition })
}

/// `r`, or the instance extent when `r` is zero.
pub fn length_scale(r: f64, inst: &Instance) -> f64 {
    if r > 0.0 {
        r
    } else {
        inst.extent()
    }
}
