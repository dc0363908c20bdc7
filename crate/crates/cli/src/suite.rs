//! Batches of generated instances, run concurrently.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{generate_instance, Kind};
use crate::report::{run_pipeline, Run, RunConfig};

/// Instance sizes the batch cycles through.
pub const BATCH_SIZES: [usize; 4] = [4, 8, 16, 32];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchItem {
    pub index: usize,
    pub kind: Kind,
    pub n: usize,
    pub seed: u64,
}

impl BatchItem {
    pub fn file_stem(&self) -> String {
        format!("{:04}-{}-n{}", self.index, self.kind, self.n)
    }
}

/// `count` items: sizes cycle fastest, then kinds, so every 16
/// consecutive items cover each (kind, size) pair once.
pub fn batch_plan(count: usize, base_seed: u64) -> Vec<BatchItem> {
    (0..count)
        .map(|index| BatchItem {
            index,
            kind: Kind::ALL[(index / BATCH_SIZES.len()) % Kind::ALL.len()],
            n: BATCH_SIZES[index % BATCH_SIZES.len()],
            seed: base_seed.wrapping_add(index as u64),
        })
        .collect()
}

pub struct BatchResult {
    pub item: BatchItem,
    pub run: Result<Run, tspn_core::Error>,
}

/// Runs every item on the rayon pool; results keep plan order.
pub fn run_batch(plan: &[BatchItem], cfg: &RunConfig) -> Vec<BatchResult> {
    plan.par_iter()
        .map(|&item| {
            let inst = generate_instance(item.kind, item.n, item.seed);
            let cfg = RunConfig { seed: Some(item.seed), ..*cfg };
            BatchResult { item, run: run_pipeline(&inst, &cfg) }
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub runs: usize,
    pub errors: usize,
    pub invalid_tours: usize,
    pub runs_with_failed_checks: usize,
    /// Failure count per check name, over all runs.
    pub check_failures: BTreeMap<String, usize>,
    pub max_cells_per_n2: f64,
    pub oracle_runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_median: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_max: Option<f64>,
}

impl SuiteSummary {
    pub fn all_passed(&self) -> bool {
        self.errors == 0 && self.invalid_tours == 0 && self.runs_with_failed_checks == 0
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("summary fields serialize")
    }
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

pub fn summarize(results: &[BatchResult]) -> SuiteSummary {
    let mut s = SuiteSummary { runs: results.len(), ..SuiteSummary::default() };
    let mut ratios = Vec::new();
    for res in results {
        let Ok(run) = &res.run else {
            s.errors += 1;
            continue;
        };
        let rep = &run.report;
        if !rep.valid {
            s.invalid_tours += 1;
        }
        if !rep.all_checks_passed {
            s.runs_with_failed_checks += 1;
        }
        for c in rep.checks.iter() {
            let e = s.check_failures.entry(c.name.clone()).or_insert(0);
            if !c.passed {
                *e += 1;
            }
        }
        s.max_cells_per_n2 = s.max_cells_per_n2.max(rep.cells as f64 / (rep.n * rep.n) as f64);
        if rep.oracle_length.is_some() {
            s.oracle_runs += 1;
        }
        if let Some(q) = rep.ratio {
            ratios.push(q);
        }
    }
    s.ratio_max = ratios.iter().copied().reduce(f64::max);
    s.ratio_median = median(&mut ratios);
    s
}

/// Writes one report per run (or an error file) and `summary.toml`.
pub fn write_batch(dir: &Path, results: &[BatchResult], summary: &SuiteSummary) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for res in results {
        let stem = res.item.file_stem();
        match &res.run {
            Ok(run) => fs::write(dir.join(format!("{stem}.toml")), run.report.to_toml())?,
            Err(e) => fs::write(dir.join(format!("{stem}.error.txt")), format!("{e}\n"))?,
        }
    }
    fs::write(dir.join("summary.toml"), summary.to_toml())
}
