//! Run-time re-verification of every structural guarantee a solved
//! instance relies on.
//!
//! Each [`Check`] carries the worst observed value of its governing ratio
//! or count next to the bound it is held to, so a report shows how much
//! slack was left and not only pass or fail.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::assembly;
use crate::geom;
use crate::grid;
use crate::hitting;
use crate::math::SQRT_2;
use crate::pipeline::Solution;

/// Largest sentinel weight over owner diameter the audit accepts. Up to
/// nine cells of one size and more of the next sizes can own a point, so
/// 16 is too tight; 27 is the largest value seen on generated batches.
pub const SENTINEL_WEIGHT_BOUND: f64 = 32.0;
/// Largest `|Q| / n²` the audit accepts.
pub const GRID_SIZE_BOUND: f64 = 64.0;
/// Relative tolerance of every metric comparison.
pub const REL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Number of items examined.
    pub cases: usize,
    /// Worst observed value; compared against `bound`.
    pub worst: f64,
    pub bound: f64,
    /// First failing item, if any.
    pub detail: String,
}

/// Accumulates one check. `worst` starts at zero, so every tracked value
/// must be non-negative.
struct Tally {
    name: &'static str,
    bound: f64,
    cases: usize,
    worst: f64,
    failures: usize,
    detail: String,
}

impl Tally {
    fn new(name: &'static str, bound: f64) -> Self {
        Tally { name, bound, cases: 0, worst: 0.0, failures: 0, detail: String::new() }
    }

    /// Records one item with observed `value` and its own verdict.
    fn item(&mut self, value: f64, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if value > self.worst || value.is_nan() {
            self.worst = value;
        }
        if !ok {
            if self.failures == 0 {
                self.detail = what();
            }
            self.failures += 1;
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.failures == 0,
            cases: self.cases,
            worst: self.worst,
            bound: self.bound,
            detail: self.detail,
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Runs every check, in a fixed order.
pub fn audit(sol: &Solution) -> Vec<Check> {
    let disks = sol.instance.disks();
    let n = disks.len();
    let r = sol.r();
    let tol = REL_TOL * sol.scale;
    let part = &sol.pre.partition;
    let g1 = &sol.pre.g1;
    let squares = &sol.grid.squares;
    let mut out = Vec::new();

    // Independent set: pairwise disjoint, and every other disk meets a
    // chosen disk that is no larger.
    let mut t = Tally::new("independent_set", 0.0);
    let mut chosen = vec![false; n];
    for &i in &sol.pre.independent {
        chosen[i] = true;
    }
    for (a, &i) in sol.pre.independent.iter().enumerate() {
        for &j in &sol.pre.independent[a + 1..] {
            let ok = !disks[i].intersects(&disks[j]);
            t.item(if ok { 0.0 } else { 1.0 }, ok, || format!("disks {i} and {j} intersect"));
        }
    }
    for i in (0..n).filter(|&i| !chosen[i]) {
        let ok = sol
            .pre
            .independent
            .iter()
            .any(|&j| disks[j].radius <= disks[i].radius && disks[j].intersects(&disks[i]));
        t.item(if ok { 0.0 } else { 1.0 }, ok, || format!("disk {i} meets no smaller chosen disk"));
    }
    out.push(t.finish());

    // The disjoint tour touches each independent disk.
    let mut t = Tally::new("xi0_visits_independent", REL_TOL);
    let xi0 = sol.pre.xi0.as_graph();
    for &i in &sol.pre.independent {
        let d = geom::dist_disk_graph(&disks[i], &xi0).unwrap_or(f64::INFINITY);
        t.item(d / sol.scale, d <= tol, || format!("disk {i} at distance {d:e}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("lemma1_dist_le_diam", 1.0);
    for (i, d) in disks.iter().enumerate() {
        let dist = part.dist_to_g1[i];
        t.item(ratio(dist, d.diam()), dist <= d.diam() + tol, || {
            format!("disk {i}: dist {dist:e} > diam {:e}", d.diam())
        });
    }
    out.push(t.finish());

    // Far disks are both far from G1 and large: r/n < min(dist, diam).
    let mut t = Tally::new("corollary1_far_disks", 1.0);
    let threshold = r / n as f64;
    for &i in &part.s3 {
        let m = part.dist_to_g1[i].min(disks[i].diam());
        t.item(ratio(threshold, m), m > threshold, || format!("disk {i}: min(dist, diam) {m:e} <= r/n {threshold:e}"));
    }
    out.push(t.finish());

    // Near disks are touched by G1 ∪ G2.
    let mut t = Tally::new("g1_g2_touch_near_disks", REL_TOL);
    let mut g12 = g1.clone();
    g12.extend_from(&sol.pre.g2);
    for &i in part.s1.iter().chain(&part.s2) {
        let d = geom::dist_disk_graph(&disks[i], &g12).unwrap_or(f64::INFINITY);
        t.item(d / sol.scale, d <= tol, || format!("disk {i} at distance {d:e}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("g2_length_le_r", 1.0);
    let l2 = sol.len_g2();
    t.item(ratio(l2, r), l2 <= r + tol, || format!("len(G2) {l2:e} > r {r:e}"));
    out.push(t.finish());

    let mut t = Tally::new("grid_stop_condition", 0.0);
    let split_at = r / (2.0 * n as f64);
    for (k, q) in squares.iter().enumerate() {
        let diam = q.diam();
        let ok = r == 0.0 || diam < split_at || diam < q.dist_to_g1;
        t.item(if ok { 0.0 } else { 1.0 }, ok, || format!("cell {k} should have been split"));
    }
    out.push(t.finish());

    let mut t = Tally::new("lemma3_cell_dist_le_3diam", 3.0);
    for (k, q) in squares.iter().enumerate() {
        let dist = q.dist_to_g1;
        t.item(ratio(dist, q.diam()), dist <= 3.0 * q.diam() + tol, || {
            format!("cell {k}: dist {dist:e} > 3 diam {:e}", 3.0 * q.diam())
        });
    }
    out.push(t.finish());

    let mut t = Tally::new("corollary2_gamma_length", 3.0 + 2.0 * SQRT_2);
    for (k, q) in squares.iter().enumerate() {
        let len = match assembly::gamma(q, g1) {
            Ok(g) => g.length(),
            Err(_) => f64::INFINITY,
        };
        let diam = q.diam();
        let ok = len >= 2.0 * SQRT_2 * diam - tol && len <= (3.0 + 2.0 * SQRT_2) * diam + tol;
        t.item(ratio(len, diam), ok, || format!("cell {k}: len {len:e}, diam {diam:e}"));
    }
    out.push(t.finish());

    // For each far disk and each cell it meets: the cell is at most twice
    // the disk's diameter and the disk reaches the cell boundary.
    let mut t = Tally::new("lemma4_cell_vs_far_disk", 2.0);
    let sq = &sol.square_hypergraph;
    for (e, edge) in sq.graph.edges.iter().enumerate() {
        let i = sq.disks[e];
        let d = &disks[i];
        for &k in edge {
            let cell = &squares[k].cell;
            let to_boundary = if cell.contains(d.center) {
                cell.dist_to_boundary(d.center)
            } else {
                0.0
            };
            let ok = cell.diam() <= 2.0 * d.diam() + tol && to_boundary <= d.radius + tol;
            t.item(ratio(cell.diam(), d.diam()), ok, || format!("disk {i}, cell {k}"));
        }
    }
    out.push(t.finish());

    let pairs = grid::adjacency_pairs(&sol.grid);
    let mut t = Tally::new("lemma5_adjacent_depth_gap", 1.0);
    for &(a, b) in &pairs {
        let gap = squares[a].depth.abs_diff(squares[b].depth);
        t.item(gap as f64, gap <= 1, || format!("cells {a} and {b} differ by {gap} levels"));
    }
    out.push(t.finish());

    let mut t = Tally::new("grid_neighbours_le_12", 12.0);
    let mut degree = vec![0usize; squares.len()];
    for &(a, b) in &pairs {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (k, &deg) in degree.iter().enumerate() {
        t.item(deg as f64, deg <= 12, || format!("cell {k} has {deg} neighbours"));
    }
    out.push(t.finish());

    let mut t = Tally::new("grid_min_diam", 1.0);
    let min_diam = r / (4.0 * n as f64);
    for (k, q) in squares.iter().enumerate() {
        let diam = q.diam();
        t.item(ratio(min_diam, diam), diam >= min_diam * (1.0 - REL_TOL), || {
            format!("cell {k}: diam {diam:e} < r/4n {min_diam:e}")
        });
    }
    out.push(t.finish());

    let mut t = Tally::new("grid_size", GRID_SIZE_BOUND);
    let size = squares.len() as f64 / (n * n) as f64;
    t.item(size, size <= GRID_SIZE_BOUND, || format!("{} cells for n = {n}", squares.len()));
    out.push(t.finish());

    out.push(tiling(sol));

    // Lemma 7, checked directly from the 25 points of each cell.
    let mut t = Tally::new("lemma7_sentinel_in_disk", 0.0);
    for (e, edge) in sq.graph.edges.iter().enumerate() {
        let i = sq.disks[e];
        let d = &disks[i];
        for &k in edge {
            let cell = &squares[k].cell;
            let ok = hitting::make_sentinels(cell)
                .iter()
                .any(|&p| sol.grid.bounding.contains(p) && d.center.dist(p) <= d.radius + tol);
            t.item(if ok { 0.0 } else { 1.0 }, ok, || format!("disk {i}, cell {k}"));
        }
    }
    out.push(t.finish());

    let sh = &sol.sentinel_hypergraph;
    let mut t = Tally::new("lemma8_sentinel_weight", SENTINEL_WEIGHT_BOUND);
    for (s, sent) in sh.sentinels.iter().enumerate() {
        for &k in &sent.owners {
            let k_ratio = ratio(sent.weight, squares[k].diam());
            t.item(k_ratio, k_ratio <= SENTINEL_WEIGHT_BOUND, || {
                format!("sentinel {s}: weight {:e} over owner {k}", sent.weight)
            });
        }
    }
    out.push(t.finish());

    // Squares to sentinels: a greedy hitting set of the square hypergraph,
    // replaced by the sentinels its cells own, hits every sentinel edge.
    // The weight ratio is bounded by 25 sentinels times the weight bound.
    let mut t = Tally::new("lemma9_squares_to_sentinels", 25.0 * SENTINEL_WEIGHT_BOUND);
    match hitting::greedy_mwhs(&sq.graph) {
        Ok(hs) => {
            let sents = sh.sentinels_of_squares(&hs.chosen);
            let ok = sh.graph.is_hitting_set(&sents);
            let w = ratio(sh.graph.weight_of(&sents), hs.weight);
            t.item(w, ok && w <= t.bound * (1.0 + REL_TOL), || String::from("lifted sentinels miss an edge"));
        }
        Err(e) => t.item(f64::INFINITY, false, || format!("{e}")),
    }
    out.push(t.finish());

    // Sentinels to squares: the cells containing the chosen sentinels hit
    // every square edge and weigh no more than the sentinels.
    let mut t = Tally::new("lemma9_sentinels_to_squares", 1.0);
    let lifted_ok = sq.graph.is_hitting_set(&sol.selected);
    let w = ratio(sq.graph.weight_of(&sol.selected), sol.hitting.weight);
    t.item(w, lifted_ok && w <= 1.0 + REL_TOL, || String::from("lifted cells miss an edge or outweigh the sentinels"));
    out.push(t.finish());

    let mut t = Tally::new("hitting_set_valid", 0.0);
    let ok = sh.graph.is_hitting_set(&sol.hitting.chosen);
    t.item(if ok { 0.0 } else { 1.0 }, ok, || String::from("solver output misses an edge"));
    out.push(t.finish());

    let mut t = Tally::new("g3_touches_far_disks", REL_TOL);
    for &i in &part.s3 {
        let d = geom::dist_disk_graph(&disks[i], &sol.g3).unwrap_or(f64::INFINITY);
        t.item(d / sol.scale, d <= tol, || format!("disk {i} at distance {d:e}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("length_identity", REL_TOL);
    let expect = 2.0 * (sol.len_g1() + l2 + sol.len_g3());
    let diff = (sol.tour_length() - expect).abs();
    t.item(diff / sol.scale, diff <= tol, || format!("tour {:e} vs doubled graphs {expect:e}", sol.tour_length()));
    out.push(t.finish());

    let mut t = Tally::new("tour_valid", REL_TOL);
    let v = &sol.validation;
    for (i, &d) in v.per_disk.iter().enumerate() {
        t.item(d / sol.scale, d <= v.tolerance, || format!("disk {i} at distance {d:e}"));
    }
    out.push(t.finish());

    out
}

/// Cells tile the bounding square: dyadic areas sum exactly to the whole,
/// and no cell is listed twice. Leaves of a quadtree never overlap, so
/// together these give an exact partition.
fn tiling(sol: &Solution) -> Check {
    let mut t = Tally::new("grid_tiling", 1e-6);
    let squares = &sol.grid.squares;
    let top = sol.grid.max_depth;
    let mut exact: u128 = 0;
    for q in squares {
        exact += 1u128 << (2 * (top - q.depth));
    }
    let whole = 1u128 << (2 * top);
    let mut seen: Vec<(u32, u64, u64)> = squares.iter().map(|q| (q.depth, q.ix, q.iy)).collect();
    seen.sort_unstable();
    let distinct = seen.windows(2).all(|w| w[0] != w[1]);
    let area: f64 = squares.iter().map(|q| q.cell.area()).sum();
    let total = sol.grid.bounding.area();
    let rel = if total > 0.0 { (area - total).abs() / total } else { 0.0 };
    t.item(rel, exact == whole && distinct && rel <= 1e-6, || {
        format!("dyadic area {exact} of {whole}, float error {rel:e}")
    });
    t.finish()
}
