//! Ground truth for small instances.
//!
//! For a fixed visiting order the best tour is a convex problem in the visit
//! points. [`touring_disks_fixed_order`] solves it by coordinate descent and
//! certifies the result with a Lagrangian lower bound: for any unit vectors
//! `λ_i` attached to the edges, `Σ_i min_{p ∈ D_i} p · (λ_{i-1} - λ_i)`
//! never exceeds the optimal length. When coordinate descent stalls (two
//! consecutive visit points glued together inside overlapping disks) a
//! primal-dual polish closes the gap.
//!
//! [`optimal_tspn_small`] enumerates every cyclic order and keeps the best.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{Disk, Point};
use crate::math::{self, TAU};

const SCAN_SAMPLES: usize = 64;
const GOLDEN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 20_000;
const POLISH_ITERS: usize = 200_000;

/// Default size cap for the order enumeration.
pub const DEFAULT_ORACLE_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct TouringSolution {
    pub order: Vec<usize>,
    /// `points[k]` is the visit point of disk `order[k]`.
    pub points: Vec<Point>,
    pub length: f64,
    /// Certified lower bound on the optimal length for this order.
    pub lower_bound: f64,
    pub converged: bool,
}

impl TouringSolution {
    /// Visit point of each disk, indexed by disk.
    pub fn point_of(&self, disk: usize) -> Option<Point> {
        self.order
            .iter()
            .position(|&d| d == disk)
            .map(|k| self.points[k])
    }
}

fn cyclic_length(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| points[i].dist(points[(i + 1) % n])).fold(0.0, |a, b| a + b)
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotAPermutation);
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(Error::NotAPermutation);
        }
        seen[i] = true;
    }
    Ok(())
}

/// Minimizes `|a - p| + |p - b|` over the closed disk.
pub fn best_visit_point(disk: &Disk, a: Point, b: Point) -> Point {
    let chord = crate::geom::Segment::new(a, b);
    let foot = chord.closest_point(disk.center);
    if foot.dist(disk.center) <= disk.radius {
        return foot;
    }
    let cost = |theta: f64| {
        let q = disk.boundary_point(theta);
        q.dist(a) + q.dist(b)
    };
    let step = TAU / SCAN_SAMPLES as f64;
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..SCAN_SAMPLES {
        let v = cost(k as f64 * step);
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let center = best_k as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let inv_phi = 0.5 * (math::sqrt(5.0) - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = cost(x1);
    let mut f2 = cost(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = cost(x2);
        }
    }
    let theta = if f1 <= f2 { x1 } else { x2 };
    let candidate = disk.boundary_point(theta);
    let sample = disk.boundary_point(center);
    if cost(theta) <= best_v {
        candidate
    } else {
        sample
    }
}

/// Lagrangian lower bound for the closed tour through `disks` (already in
/// visiting order) using the edge directions of `points` as multipliers.
fn dual_bound_from(disks: &[Disk], lambdas: &[Point]) -> f64 {
    let n = disks.len();
    (0..n)
        .map(|i| {
            let g = lambdas[(i + n - 1) % n] - lambdas[i];
            disks[i].center.dot(g) - disks[i].radius * g.norm()
        })
        .sum()
}

fn edge_directions(points: &[Point]) -> Vec<Point> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let e = points[(i + 1) % n] - points[i];
            let len = e.norm();
            if len > 0.0 {
                e * (1.0 / len)
            } else {
                Point::default()
            }
        })
        .collect()
}

/// Coordinate-descent state for one visiting order.
struct Descent<'a> {
    disks: &'a [Disk],
    points: Vec<Point>,
    length: f64,
}

impl<'a> Descent<'a> {
    fn new(disks: &'a [Disk], init: Vec<Point>) -> Self {
        let points: Vec<Point> = init
            .into_iter()
            .zip(disks)
            .map(|(p, d)| d.project(p))
            .collect();
        let length = cyclic_length(&points);
        Descent { disks, points, length }
    }

    /// One cyclic pass; returns the length decrease.
    fn sweep(&mut self) -> f64 {
        let n = self.points.len();
        for i in 0..n {
            let a = self.points[(i + n - 1) % n];
            let b = self.points[(i + 1) % n];
            let old = self.points[i];
            let new = best_visit_point(&self.disks[i], a, b);
            if new.dist(a) + new.dist(b) < old.dist(a) + old.dist(b) {
                self.points[i] = new;
            }
        }
        let before = self.length;
        self.length = cyclic_length(&self.points);
        before - self.length
    }

    fn lower_bound(&self) -> f64 {
        dual_bound_from(self.disks, &edge_directions(&self.points)).max(0.0)
    }

    /// First-order primal-dual iterations on `min Σ|K p|` subject to
    /// `p_i ∈ D_i`, with `K` the cyclic difference operator.
    fn polish(&mut self, gap_tol: f64, scale: f64) -> f64 {
        let n = self.points.len();
        let disks = self.disks;
        let tau = 0.45 * scale;
        let sigma = 0.45 / scale / 4.0;
        let mut p = self.points.clone();
        let mut y = edge_directions(&p);
        let mut best_lb = self.lower_bound();
        let mut best_len = self.length;
        let mut best_points = self.points.clone();
        let mut kty = vec![Point::default(); n];
        let mut p_bar = p.clone();
        for it in 0..POLISH_ITERS {
            // K^T y: component i is y_{i-1} - y_i
            for i in 0..n {
                kty[i] = y[(i + n - 1) % n] - y[i];
            }
            for i in 0..n {
                let next = disks[i].project(p[i] - kty[i] * tau);
                p_bar[i] = next * 2.0 - p[i];
                p[i] = next;
            }
            for i in 0..n {
                let v = y[i] + (p_bar[(i + 1) % n] - p_bar[i]) * sigma;
                let nv = v.norm();
                y[i] = if nv > 1.0 { v * (1.0 / nv) } else { v };
            }
            if it % 64 == 63 {
                let len = cyclic_length(&p);
                if len < best_len {
                    best_len = len;
                    best_points.clone_from(&p);
                }
                best_lb = best_lb.max(dual_bound_from(disks, &y));
                let primal_lb = dual_bound_from(disks, &edge_directions(&p));
                best_lb = best_lb.max(primal_lb);
                if best_len - best_lb <= gap_tol {
                    break;
                }
            }
        }
        self.points = best_points;
        self.length = best_len;
        best_lb
    }
}

fn length_scale(disks: &[Disk]) -> f64 {
    disks.iter().map(|d| d.radius).fold(0.0, f64::max)
}

/// Best tour through the disks in the given order.
///
/// `tol` is relative: descent stops once a sweep shortens the tour by less
/// than `tol` times the current length (plus the largest radius, so that
/// zero-length tours terminate). The result is `converged` when the
/// duality gap is within `tol^(3/4)` relative.
pub fn touring_disks_fixed_order(order: &[usize], disks: &[Disk], tol: f64) -> Result<TouringSolution> {
    check_order(order, disks.len())?;
    let init: Vec<Point> = order.iter().map(|&i| disks[i].center).collect();
    touring_from(order, disks, init, tol)
}

/// Same as [`touring_disks_fixed_order`] but starting from the given visit
/// points (one per order slot, projected into their disks).
pub fn touring_from(order: &[usize], disks: &[Disk], init: Vec<Point>, tol: f64) -> Result<TouringSolution> {
    touring_with_cutoff(order, disks, init, tol, f64::INFINITY).map(|s| s.expect("no cutoff"))
}

fn touring_with_cutoff(
    order: &[usize],
    disks: &[Disk],
    init: Vec<Point>,
    tol: f64,
    cutoff: f64,
) -> Result<Option<TouringSolution>> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter("touring tolerance must be positive"));
    }
    check_order(order, disks.len())?;
    if init.len() != order.len() {
        return Err(Error::InvalidParameter("one initial point per disk"));
    }
    let ordered: Vec<Disk> = order.iter().map(|&i| disks[i]).collect();
    let n = ordered.len();
    if n == 1 {
        let p = ordered[0].project(init[0]);
        return Ok(Some(TouringSolution {
            order: order.to_vec(),
            points: vec![p],
            length: 0.0,
            lower_bound: 0.0,
            converged: true,
        }));
    }
    let scale = length_scale(&ordered);
    let gap_rel = libm::pow(tol, 0.75).max(1e-13);
    let mut state = Descent::new(&ordered, init);
    let mut stalled = false;
    for sweep in 0..MAX_SWEEPS {
        let gain = state.sweep();
        if gain <= tol * (state.length + scale) {
            stalled = true;
            break;
        }
        // cheap early exit for hopeless orders during enumeration
        if sweep % 4 == 3 && cutoff.is_finite() && state.lower_bound() >= cutoff {
            return Ok(None);
        }
    }
    let mut lower = state.lower_bound();
    let gap_tol = gap_rel * (state.length + scale);
    if state.length - lower > gap_tol {
        if cutoff.is_finite() && lower >= cutoff {
            return Ok(None);
        }
        lower = lower.max(state.polish(gap_tol, scale.max(state.length / n as f64)));
        // the polished points may still be improved coordinate-wise
        for _ in 0..MAX_SWEEPS {
            if state.sweep() <= tol * (state.length + scale) {
                break;
            }
        }
        lower = lower.max(state.lower_bound());
    }
    let converged = stalled && state.length - lower <= gap_tol;
    Ok(Some(TouringSolution {
        order: order.to_vec(),
        length: state.length,
        lower_bound: lower.min(state.length),
        points: state.points,
        converged,
    }))
}

/// Advances `perm` to the next lexicographic permutation.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Every cyclic order of `n` items with item 0 first and each reflection
/// pair listed once, in lexicographic order.
pub fn cyclic_orders(n: usize) -> Vec<Vec<usize>> {
    if n <= 2 {
        return vec![(0..n).collect()];
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    loop {
        if rest[0] < rest[rest.len() - 1] {
            let mut order = Vec::with_capacity(n);
            order.push(0);
            order.extend_from_slice(&rest);
            out.push(order);
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

/// Loose tolerance for the first pass over all orders.
const SCREEN_TOL: f64 = 1e-5;

/// Shortest tour over all visiting orders, for up to `n_max` disks.
///
/// Every order is first solved loosely, which gives an upper and a
/// certified lower bound. Orders are then refined to `tol` by increasing
/// upper bound, skipping those whose lower bound reaches the incumbent.
pub fn optimal_tspn_small(disks: &[Disk], n_max: usize, tol: f64) -> Result<TouringSolution> {
    if disks.is_empty() {
        return Err(Error::EmptyInstance);
    }
    if disks.len() > n_max {
        return Err(Error::TooLarge { size: disks.len(), limit: n_max });
    }
    let mut screened = Vec::new();
    for order in cyclic_orders(disks.len()) {
        let init: Vec<Point> = order.iter().map(|&i| disks[i].center).collect();
        let loose = touring_with_cutoff(&order, disks, init, SCREEN_TOL.max(tol), f64::INFINITY)?
            .expect("no cutoff");
        screened.push(loose);
    }
    // stable: ties keep enumeration order
    screened.sort_by(|a, b| a.length.total_cmp(&b.length));
    let mut best: Option<TouringSolution> = None;
    for loose in screened {
        let cutoff = best.as_ref().map_or(f64::INFINITY, |b| b.length);
        if loose.lower_bound >= cutoff {
            continue;
        }
        if let Some(sol) = touring_with_cutoff(&loose.order, disks, loose.points, tol, cutoff)? {
            if best.as_ref().is_none_or(|b| sol.length < b.length) {
                best = Some(sol);
            }
        }
    }
    Ok(best.expect("the first refined order is always kept"))
}
