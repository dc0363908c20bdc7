//! Independent reference computations for the integration and acceptance
//! tests. Nothing here calls into the library's algorithms; only the plain
//! value types are shared.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tspn_core::{Disk, Point, Segment};

pub fn rand_disk(rng: &mut ChaCha8Rng, spread: f64, rmin: f64, rmax: f64) -> Disk {
    let c = Point::new(rng.gen_range(0.0..spread), rng.gen_range(0.0..spread));
    Disk::new(c, rng.gen_range(rmin..rmax))
}

pub fn rand_disks(rng: &mut ChaCha8Rng, n: usize, spread: f64, rmin: f64, rmax: f64) -> Vec<Disk> {
    (0..n).map(|_| rand_disk(rng, spread, rmin, rmax)).collect()
}

fn project(d: &Disk, p: Point) -> Point {
    let v = Point::new(p.x - d.center.x, p.y - d.center.y);
    let len = (v.x * v.x + v.y * v.y).sqrt();
    if len <= d.radius {
        p
    } else {
        let k = d.radius / len;
        Point::new(d.center.x + v.x * k, d.center.y + v.y * k)
    }
}

fn cyc_len(p: &[Point]) -> f64 {
    let n = p.len();
    (0..n).map(|i| p[i].dist(p[(i + 1) % n])).sum()
}

/// Fixed-order touring by accelerated projected gradient on a smoothed
/// length `sum sqrt(|p_{i+1} - p_i|^2 + mu^2)`, with `mu` shrinking by 10
/// per stage. Returns the true length at the final (feasible) points.
pub fn pg_touring(order: &[usize], disks: &[Disk], init: Option<Vec<Point>>) -> (f64, Vec<Point>) {
    let ds: Vec<Disk> = order.iter().map(|&i| disks[i]).collect();
    let n = ds.len();
    let mut p: Vec<Point> = match init {
        Some(v) => v.iter().zip(&ds).map(|(q, d)| project(d, *q)).collect(),
        None => ds.iter().map(|d| d.center).collect(),
    };
    if n < 2 {
        return (0.0, p);
    }
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for d in &ds {
        lo.x = lo.x.min(d.center.x - d.radius);
        lo.y = lo.y.min(d.center.y - d.radius);
        hi.x = hi.x.max(d.center.x + d.radius);
        hi.y = hi.y.max(d.center.y + d.radius);
    }
    let scale = (hi.x - lo.x).max(hi.y - lo.y).max(1e-300);
    let grad = |p: &[Point], mu: f64| -> Vec<Point> {
        let mut g = vec![Point::new(0.0, 0.0); n];
        for i in 0..n {
            let j = (i + 1) % n;
            let v = Point::new(p[j].x - p[i].x, p[j].y - p[i].y);
            let s = (v.x * v.x + v.y * v.y + mu * mu).sqrt();
            let u = Point::new(v.x / s, v.y / s);
            g[j].x += u.x;
            g[j].y += u.y;
            g[i].x -= u.x;
            g[i].y -= u.y;
        }
        g
    };
    let mut mu = 0.1 * scale;
    while mu >= 1e-11 * scale {
        let step = mu / 4.0;
        let mut x = p.clone();
        let mut y = p.clone();
        let mut t = 1.0f64;
        let smooth = |q: &[Point]| -> f64 {
            (0..n)
                .map(|i| {
                    let v = q[(i + 1) % n];
                    let dx = v.x - q[i].x;
                    let dy = v.y - q[i].y;
                    (dx * dx + dy * dy + mu * mu).sqrt()
                })
                .sum()
        };
        let mut fx = smooth(&x);
        for _ in 0..20_000 {
            let g = grad(&y, mu);
            let xn: Vec<Point> = (0..n)
                .map(|i| project(&ds[i], Point::new(y[i].x - step * g[i].x, y[i].y - step * g[i].y)))
                .collect();
            let fxn = smooth(&xn);
            let moved = (0..n).map(|i| xn[i].dist(x[i])).fold(0.0, f64::max);
            if fxn > fx {
                // adaptive restart
                t = 1.0;
                y = x.clone();
                continue;
            }
            let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = (0..n)
                .map(|i| {
                    let k = (t - 1.0) / tn;
                    Point::new(xn[i].x + k * (xn[i].x - x[i].x), xn[i].y + k * (xn[i].y - x[i].y))
                })
                .collect();
            x = xn;
            fx = fxn;
            t = tn;
            if moved <= 1e-4 * mu {
                break;
            }
        }
        p = x;
        mu /= 10.0;
    }
    (cyc_len(&p), p)
}

/// Greedy independent set by repeated selection of the smallest remaining
/// disk (index breaks ties), discarding everything it meets.
pub fn brute_greedy_independent(disks: &[Disk]) -> Vec<usize> {
    let mut alive: Vec<bool> = vec![true; disks.len()];
    let mut out = Vec::new();
    loop {
        let mut pick: Option<usize> = None;
        for i in 0..disks.len() {
            if alive[i] && pick.is_none_or(|p| disks[i].radius < disks[p].radius) {
                pick = Some(i);
            }
        }
        let Some(i) = pick else { break };
        out.push(i);
        for j in 0..disks.len() {
            let gap = disks[i].center.dist(disks[j].center) - disks[i].radius - disks[j].radius;
            if gap <= 0.0 {
                alive[j] = false;
            }
        }
    }
    out.sort_unstable();
    out
}

/// Chebyshev (L∞) distance from `c` to the disk: the smallest half-side
/// of a square centred at `c` that meets it.
fn linf_dist(d: &Disk, c: Point) -> f64 {
    let a = (c.x - d.center.x).abs().max((c.y - d.center.y).abs());
    let b = (c.x - d.center.x).abs().min((c.y - d.center.y).abs());
    let rho = d.radius;
    if a * a + b * b <= rho * rho {
        return 0.0;
    }
    if a - rho >= b {
        return a - rho;
    }
    0.5 * ((a + b) - (2.0 * rho * rho - (a - b) * (a - b)).max(0.0).sqrt())
}

fn ternary(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Minimum side of an axis-parallel square meeting every disk: twice the
/// minimum over centres of the largest L∞ distance to a disk, which is
/// convex, found by nested ternary search.
pub fn grid_min_square(disks: &[Disk]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in disks {
        x0 = x0.min(d.center.x);
        x1 = x1.max(d.center.x);
        y0 = y0.min(d.center.y);
        y1 = y1.max(d.center.y);
    }
    let f = |x: f64, y: f64| disks.iter().map(|d| linf_dist(d, Point::new(x, y))).fold(0.0, f64::max);
    let g = |x: f64| ternary(y0, y1, |y| f(x, y)).1;
    2.0 * ternary(x0, x1, g).1
}

/// Minimum hitting-set weight by trying every subset.
pub fn brute_mwhs(weights: &[f64], edges: &[Vec<usize>]) -> f64 {
    let k = weights.len();
    assert!(k <= 24);
    let masks: Vec<u32> = edges.iter().map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v))).collect();
    let mut best = f64::INFINITY;
    for set in 0u32..(1u32 << k) {
        if masks.iter().all(|&m| m & set != 0) {
            let w: f64 = (0..k).filter(|&v| set & (1 << v) != 0).map(|v| weights[v]).sum();
            best = best.min(w);
        }
    }
    best
}

pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|k| 1.0 / k as f64).sum()
}

/// Points spread along a segment, endpoints included.
pub fn sample_segment(s: &Segment, k: usize) -> impl Iterator<Item = Point> + '_ {
    (0..=k).map(move |i| {
        let t = i as f64 / k as f64;
        Point::new(s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y))
    })
}

/// Distance between two segments from dense samples of both plus exact
/// point-to-segment distances of the sampled points.
pub fn sampled_segment_dist(s: &Segment, o: &Segment) -> f64 {
    let ps = |p: Point, seg: &Segment| {
        let (dx, dy) = (seg.b.x - seg.a.x, seg.b.y - seg.a.y);
        let l2 = dx * dx + dy * dy;
        let t = if l2 > 0.0 { (((p.x - seg.a.x) * dx + (p.y - seg.a.y) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
        p.dist(Point::new(seg.a.x + t * dx, seg.a.y + t * dy))
    };
    let a = sample_segment(s, 2000).map(|p| ps(p, o)).fold(f64::INFINITY, f64::min);
    let b = sample_segment(o, 2000).map(|p| ps(p, s)).fold(f64::INFINITY, f64::min);
    a.min(b)
}

/// Mid-sized anchor disks, about half of them overlapped by a larger disk
/// leaning away in a random direction. Such instances tend to leave disks
/// that are far from the first tour, which plain random instances rarely do.
pub fn far_disk_instance(rng: &mut ChaCha8Rng) -> Vec<Disk> {
    let m = rng.gen_range(8..=16);
    let mut disks = Vec::new();
    for _ in 0..m {
        let a = Disk::new(Point::new(rng.gen_range(0.15..0.85), rng.gen_range(0.15..0.85)), rng.gen_range(0.03..0.06));
        disks.push(a);
        if rng.gen_bool(0.5) {
            let big = a.radius * rng.gen_range(2.0..4.0);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let off = a.radius + big * 0.95;
            disks.push(Disk::new(Point::new(a.center.x + off * t.cos(), a.center.y + off * t.sin()), big));
        }
    }
    disks
}
