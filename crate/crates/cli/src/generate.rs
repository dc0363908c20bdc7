//! Seeded random instance families.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tspn_core::{Disk, Instance, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Uniform,
    Clustered,
    Nested,
    TouchingChain,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Uniform, Kind::Clustered, Kind::Nested, Kind::TouchingChain];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Uniform => "uniform",
            Kind::Clustered => "clustered",
            Kind::Nested => "nested",
            Kind::TouchingChain => "touching-chain",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown instance kind `{s}`"))
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..=hi.ln()).exp()
}

/// Deterministic instance of `n` disks (at least one) from `seed`.
///
/// * uniform: centers in the unit square, radii log-uniform in `[1e-3, 0.5]`.
/// * clustered: about `sqrt(n)` Gaussian clusters (σ = 0.05) with radii
///   log-uniform in `[1e-3, 0.05]`.
/// * nested: radii growing by 1.25; disk `k` sits just off the smallest
///   disk, turning by roughly a right angle each step, so every disk meets
///   the smallest one and its successor without covering its center.
/// * touching-chain: equal disks spaced 1.9 radii apart along a wobbly
///   line, so consecutive disks overlap and the greedy independent set is
///   every other disk.
pub fn generate_instance(kind: Kind, n: usize, seed: u64) -> Instance {
    let n = n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(kind as u64);
    let disks = match kind {
        Kind::Uniform => (0..n)
            .map(|_| {
                let c = Point::new(rng.gen(), rng.gen());
                Disk::new(c, log_uniform(&mut rng, 1e-3, 0.5))
            })
            .collect(),
        Kind::Clustered => {
            let k = ((n as f64).sqrt().round() as usize).max(1);
            let centers: Vec<Point> = (0..k).map(|_| Point::new(rng.gen(), rng.gen())).collect();
            let noise = Normal::new(0.0, 0.05).expect("valid sigma");
            (0..n)
                .map(|_| {
                    let m = centers[rng.gen_range(0..k)];
                    let c = Point::new(m.x + noise.sample(&mut rng), m.y + noise.sample(&mut rng));
                    Disk::new(c, log_uniform(&mut rng, 1e-3, 0.05))
                })
                .collect()
        }
        Kind::Nested => {
            let r0 = 0.01;
            let origin = Point::new(rng.gen(), rng.gen());
            let mut angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut disks = vec![Disk::new(origin, r0)];
            for k in 1..n {
                let rk = r0 * 1.25f64.powi(k as i32);
                let d = rk + 0.5 * r0;
                disks.push(Disk::new(Point::new(origin.x + d * angle.cos(), origin.y + d * angle.sin()), rk));
                angle += rng.gen_range(70f64..=90.0).to_radians();
            }
            disks
        }
        Kind::TouchingChain => {
            let rho = 0.02;
            let heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let mut p = Point::new(rng.gen(), rng.gen());
            let mut disks = Vec::with_capacity(n);
            for _ in 0..n {
                disks.push(Disk::new(p, rho));
                let a = heading + rng.gen_range(-30f64..=30.0).to_radians();
                p = Point::new(p.x + 1.9 * rho * a.cos(), p.y + 1.9 * rho * a.sin());
            }
            disks
        }
    };
    Instance::new(disks).expect("generated disks are valid")
}
