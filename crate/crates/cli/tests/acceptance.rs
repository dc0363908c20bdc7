//! The full acceptance suite over a fixed 200-instance batch. Each
//! criterion prints one line on stderr (outside the test harness capture)
//! and the test fails if any criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tspn::report::{run_pipeline, OracleMode, RunConfig};
use tspn::suite::{batch_plan, run_batch, BatchItem};
use tspn_core::hitting::{exact_mwhs, greedy_mwhs};
use tspn_core::oracle::{touring_disks_fixed_order, touring_from};
use tspn_core::{Instance, Point, Solution, WeightedHypergraph};

const BATCH: usize = 200;
const SEED: u64 = 20_240_601;
const CHUNK: usize = 20;
const REL: f64 = 1e-9;

/// 1.1 times the largest tour/oracle ratio of the calibration batch
/// (same plan and seed; observed maximum 5.8615).
const RATIO_REGRESSION_BOUND: f64 = 6.448;
/// Extra instances built to leave far disks; the generated batch almost
/// never has any.
const FAR_FAMILY: usize = 200;
/// Sentinel count up to which exact and greedy are compared.
const SMALL_SENTINELS: usize = 20;
/// Cells per n² allowed before the constant needs recalibrating.
const GRID_CONSTANT: f64 = 64.0;

const LEMMA_CHECKS: [&str; 9] = [
    "lemma1_dist_le_diam",
    "corollary1_far_disks",
    "lemma3_cell_dist_le_3diam",
    "corollary2_gamma_length",
    "lemma4_cell_vs_far_disk",
    "lemma5_adjacent_depth_gap",
    "lemma7_sentinel_in_disk",
    "lemma9_squares_to_sentinels",
    "lemma9_sentinels_to_squares",
];

fn say(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn point_seg(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 > 0.0 { (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(Point::new(a.x + t * dx, a.y + t * dy))
}

#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    cases: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Acc {
    lemmas: Tally,
    grid: Tally,
    validity: Tally,
    lengths: Tally,
    oracle: Tally,
    greedy: Tally,
    small_sentinel_graphs: usize,
    restricted_graphs: usize,
    far_disks: usize,
    worst_degree_factor: f64,
    max_cells_per_n2: f64,
    min_diam_ratio: f64,
    worst_gap: f64,
    worst_identity: f64,
    worst_g2: f64,
    ratios: Vec<f64>,
    errors: Vec<String>,
    reports: Vec<String>,
}

/// Keeps at most `cap` relevant sentinels, at least one per edge, and
/// drops the rest from every edge. Weights are untouched.
fn restricted(h: &WeightedHypergraph, rng: &mut ChaCha8Rng, cap: usize) -> WeightedHypergraph {
    let mut keep: Vec<usize> = Vec::new();
    for e in &h.edges {
        if !e.iter().any(|v| keep.contains(v)) {
            keep.push(e[rng.gen_range(0..e.len())]);
        }
    }
    let mut pool: Vec<usize> = h.edges.iter().flatten().copied().filter(|v| !keep.contains(v)).collect();
    pool.sort_unstable();
    pool.dedup();
    while keep.len() < cap && !pool.is_empty() {
        keep.push(pool.swap_remove(rng.gen_range(0..pool.len())));
    }
    let edges = h.edges.iter().map(|e| e.iter().copied().filter(|v| keep.contains(v)).collect()).collect();
    WeightedHypergraph { weights: h.weights.clone(), edges }.compact().0
}

fn compare_solvers(acc: &mut Acc, tag: &str, h: &WeightedHypergraph) {
    let greedy = greedy_mwhs(h).unwrap();
    let exact = exact_mwhs(h, SMALL_SENTINELS).unwrap();
    let brute = support::brute_mwhs(&h.weights, &h.edges);
    acc.greedy.check((exact.weight - brute).abs() <= REL * brute, || format!("{tag}: exact {} vs {brute}", exact.weight));
    let m = h.max_edge_size();
    acc.greedy.check(greedy.weight <= support::harmonic(m) * exact.weight * (1.0 + 1e-12), || {
        format!("{tag}: greedy {} > H({m}) x {}", greedy.weight, exact.weight)
    });
    let deg = (0..h.num_vertices()).map(|v| h.edges.iter().filter(|e| e.contains(&v)).count()).max().unwrap();
    acc.worst_degree_factor = acc.worst_degree_factor.max(greedy.weight / exact.weight / support::harmonic(deg));
}

fn inspect(acc: &mut Acc, tag: &str, sol: &Solution, report: &tspn::report::RunReport, rng: &mut ChaCha8Rng) {
    acc.far_disks += sol.pre.partition.s3.len();
    let n = sol.instance.len() as f64;
    let r = sol.r();
    let scale = sol.scale;
    let disks = sol.instance.disks();

    // 1. lemma suite: run-time audit plus an independent recheck of the
    //    distance lemmas from raw segments.
    for name in LEMMA_CHECKS {
        let row = report.checks.iter().find(|c| c.name == name);
        acc.lemmas.check(row.is_some_and(|c| c.passed), || format!("{tag}: {name} {:?}", row.map(|c| &c.detail)));
    }
    let g1 = sol.pre.g1.segments();
    for (i, d) in disks.iter().enumerate() {
        let dist = (g1.iter().map(|s| point_seg(d.center, s.a, s.b)).fold(f64::INFINITY, f64::min) - d.radius).max(0.0);
        acc.lemmas.check(dist <= d.diam() + REL * scale, || format!("{tag}: disk {i} at {dist:e} from G1"));
    }
    for &i in &sol.pre.partition.s3 {
        let d = disks[i];
        let dist = (g1.iter().map(|s| point_seg(d.center, s.a, s.b)).fold(f64::INFINITY, f64::min) - d.radius).max(0.0);
        acc.lemmas.check(dist > r / n - REL * scale && d.diam() > r / n, || format!("{tag}: far disk {i} too close"));
    }

    // 2. grid bounds
    let cells = sol.grid.len() as f64;
    acc.max_cells_per_n2 = acc.max_cells_per_n2.max(cells / (n * n));
    acc.grid.check(cells <= GRID_CONSTANT * n * n, || format!("{tag}: {cells} cells"));
    if r > 0.0 {
        for q in &sol.grid.squares {
            let diam = q.cell.side * std::f64::consts::SQRT_2;
            let ratio = diam / (r / (4.0 * n));
            acc.min_diam_ratio = acc.min_diam_ratio.min(ratio);
            acc.grid.check(diam >= r / (4.0 * n) * (1.0 - REL), || format!("{tag}: cell diam {diam:e}"));
        }
    }

    // 3. validity, recomputed against the polyline
    let v = &sol.tour.vertices;
    let gap = disks
        .iter()
        .map(|d| {
            let near = if v.len() == 1 {
                v[0].dist(d.center)
            } else {
                (0..v.len()).map(|k| point_seg(d.center, v[k], v[(k + 1) % v.len()])).fold(f64::INFINITY, f64::min)
            };
            (near - d.radius).max(0.0)
        })
        .fold(0.0, f64::max);
    acc.worst_gap = acc.worst_gap.max(gap / scale);
    acc.validity.check(sol.validation.valid && gap <= REL * scale, || format!("{tag}: gap {gap:e}"));

    // 4. length identity from segment sums
    let sum = |g: &tspn_core::GeometricGraph| g.segments().iter().map(|s| s.a.dist(s.b)).sum::<f64>();
    let polyline: f64 = (0..v.len()).map(|k| v[k].dist(v[(k + 1) % v.len()])).sum();
    let expect = 2.0 * (sum(&sol.pre.g1) + sum(&sol.pre.g2) + sum(&sol.g3));
    let diff = (polyline - expect).abs();
    acc.worst_identity = acc.worst_identity.max(diff / scale);
    acc.lengths.check(diff <= REL * scale, || format!("{tag}: tour {polyline:e} vs {expect:e}"));
    let g2 = sum(&sol.pre.g2);
    acc.worst_g2 = acc.worst_g2.max(if r > 0.0 { g2 / r } else { 0.0 });
    acc.lengths.check(g2 <= r + REL * scale, || format!("{tag}: len(G2) {g2:e} > r {r:e}"));

    // 5. oracle ratio, batch only
    if report.seed.is_some() && sol.instance.len() <= 8 {
        match report.ratio {
            Some(q) => {
                acc.ratios.push(q);
                acc.oracle.check(q >= 1.0 - 1e-6, || format!("{tag}: ratio {q}"));
                acc.oracle.check(q <= RATIO_REGRESSION_BOUND, || format!("{tag}: ratio {q} above regression bound"));
            }
            None => acc.oracle.check(
                report.oracle_length.is_some_and(|l| l <= 1e-12 * scale),
                || format!("{tag}: oracle missing"),
            ),
        }
    }

    // 6. hitting sets
    let h = &sol.sentinel_hypergraph.graph;
    acc.greedy.check(h.is_hitting_set(&sol.hitting.chosen), || format!("{tag}: pipeline set misses an edge"));
    let (small, _) = h.compact();
    let greedy = greedy_mwhs(&small).unwrap();
    acc.greedy.check(small.is_hitting_set(&greedy.chosen), || format!("{tag}: greedy misses an edge"));
    if small.edges.is_empty() {
        return;
    }
    if small.num_vertices() <= SMALL_SENTINELS {
        acc.small_sentinel_graphs += 1;
        compare_solvers(acc, tag, &small);
    } else if small.edges.len() > 1 {
        // every far disk holds many sentinels, so compare on restrictions
        for k in 0..5 {
            acc.restricted_graphs += 1;
            compare_solvers(acc, &format!("{tag} restriction {k}"), &restricted(&small, rng, SMALL_SENTINELS));
        }
    }
}

fn run(plan: &[BatchItem], cfg: &RunConfig, acc: &mut Acc, inspect_runs: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    for chunk in plan.chunks(CHUNK) {
        for res in run_batch(chunk, cfg) {
            match res.run {
                Ok(run) => {
                    if inspect_runs {
                        inspect(acc, &res.item.file_stem(), &run.solution, &run.report, &mut rng);
                    }
                    acc.reports.push(run.report.to_toml());
                }
                Err(e) => {
                    acc.errors.push(format!("{}: {e}", res.item.file_stem()));
                    acc.reports.push(format!("error: {e}"));
                }
            }
        }
    }
}

fn run_far_family(acc: &mut Acc) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let cfg = RunConfig { oracle: OracleMode::Off, ..RunConfig::default() };
    for k in 0..FAR_FAMILY {
        let inst = Instance::new(support::far_disk_instance(&mut rng)).unwrap();
        let tag = format!("far-{k:03}");
        match run_pipeline(&inst, &cfg) {
            Ok(run) => inspect(acc, &tag, &run.solution, &run.report, &mut rng),
            Err(e) => acc.errors.push(format!("{tag}: {e}")),
        }
    }
}

fn median(v: &[f64]) -> f64 {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn line(k: usize, title: &str, ok: bool, detail: String, failures: &[String]) -> bool {
    say(format!("criterion {k} {title}: {} ({detail})", if ok { "PASS" } else { "FAIL" }));
    for f in failures {
        say(format!("    {f}"));
    }
    ok
}

/// Fixed-order touring against the gradient reference and against itself
/// from random starting points.
fn oracle_self_consistency() -> (bool, String, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_pg: f64 = 0.0;
    let mut worst_restart: f64 = 0.0;
    let mut failures = Vec::new();
    for case in 0..50 {
        let n = rng.gen_range(3..=8);
        let disks = support::rand_disks(&mut rng, n, 1.0, 0.005, 0.25);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let ours = touring_disks_fixed_order(&order, &disks, 1e-12).unwrap().length;
        let (pg, _) = support::pg_touring(&order, &disks, None);
        let rel = (ours - pg).abs() / ours.max(pg);
        worst_pg = worst_pg.max(rel);
        if rel > 1e-6 {
            failures.push(format!("pair {case}: {ours} vs {pg}"));
        }
        for _ in 0..3 {
            let init: Vec<Point> = order
                .iter()
                .map(|&i| {
                    let a = rng.gen_range(0.0..std::f64::consts::TAU);
                    let s = disks[i].radius * rng.gen_range(0.0..1.0f64).sqrt();
                    Point::new(disks[i].center.x + s * a.cos(), disks[i].center.y + s * a.sin())
                })
                .collect();
            let again = touring_from(&order, &disks, init, 1e-12).unwrap().length;
            let rel = (ours - again).abs() / ours.max(again);
            worst_restart = worst_restart.max(rel);
            if rel > 1e-6 {
                failures.push(format!("pair {case} restart: {ours} vs {again}"));
            }
        }
    }
    (
        failures.is_empty(),
        format!("50 pairs, worst vs gradient {worst_pg:.1e}, worst restart {worst_restart:.1e}"),
        failures,
    )
}

#[test]
fn acceptance() {
    let plan = batch_plan(BATCH, SEED);
    let cfg = RunConfig::default();

    let t0 = Instant::now();
    let mut acc = Acc { min_diam_ratio: f64::INFINITY, ..Acc::default() };
    run(&plan, &cfg, &mut acc, true);
    let elapsed = t0.elapsed().as_secs_f64();
    assert_eq!(acc.reports.len(), BATCH);
    let batch_far = acc.far_disks;
    run_far_family(&mut acc);
    for e in &acc.errors {
        say(format!("    run error {e}"));
    }
    let clean = acc.errors.is_empty();

    say(String::new());
    let mut ok = true;
    ok &= line(
        1,
        "lemma suite",
        clean && acc.lemmas.passed() && elapsed < 300.0,
        format!(
            "{} checks over {BATCH} batch runs with {batch_far} far disks plus {FAR_FAMILY} far-disk runs with {}, \
             batch took {elapsed:.1}s",
            acc.lemmas.cases,
            acc.far_disks - batch_far
        ),
        &acc.lemmas.failures,
    );
    ok &= line(
        2,
        "grid bounds",
        clean && acc.grid.passed(),
        format!(
            "max |Q|/n^2 = {:.2} against {GRID_CONSTANT}, min diam / (r/4n) = {:.3}",
            acc.max_cells_per_n2, acc.min_diam_ratio
        ),
        &acc.grid.failures,
    );
    ok &= line(
        3,
        "end-to-end validity",
        clean && acc.validity.passed(),
        format!("worst gap {:.1e} r", acc.worst_gap),
        &acc.validity.failures,
    );
    ok &= line(
        4,
        "length identity",
        clean && acc.lengths.passed(),
        format!("worst identity error {:.1e} r, max len(G2)/r {:.3}", acc.worst_identity, acc.worst_g2),
        &acc.lengths.failures,
    );
    let (med, max) = if acc.ratios.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (median(&acc.ratios), acc.ratios.iter().copied().fold(0.0, f64::max))
    };
    ok &= line(
        5,
        "oracle ratio",
        clean && acc.oracle.passed() && !acc.ratios.is_empty(),
        format!(
            "{} runs, median {med:.4}, max {max:.4}, regression bound {RATIO_REGRESSION_BOUND}",
            acc.ratios.len()
        ),
        &acc.oracle.failures,
    );
    ok &= line(
        6,
        "hitting set solvers",
        clean && acc.greedy.passed() && acc.small_sentinel_graphs + acc.restricted_graphs > 0,
        format!(
            "greedy valid on every run; {} sentinel hypergraphs with <= {SMALL_SENTINELS} sentinels, \
             {} restrictions; worst greedy/exact over H(max degree) {:.3}",
            acc.small_sentinel_graphs, acc.restricted_graphs, acc.worst_degree_factor
        ),
        &acc.greedy.failures,
    );
    let (c7, detail, failures) = oracle_self_consistency();
    ok &= line(7, "oracle self-consistency", c7, detail, &failures);

    let first = std::mem::take(&mut acc.reports);
    let mut again = Acc::default();
    run(&plan, &cfg, &mut again, false);
    let differing: Vec<String> = plan
        .iter()
        .zip(first.iter().zip(&again.reports))
        .filter(|(_, (a, b))| a != b)
        .map(|(item, _)| item.file_stem())
        .take(5)
        .collect();
    let same = first.len() == again.reports.len() && differing.is_empty();
    let bytes: usize = first.iter().map(String::len).sum();
    ok &= line(8, "determinism", same, format!("{BATCH} reports, {bytes} bytes compared"), &differing);

    assert!(ok, "acceptance criteria failed; see the lines above");
}
