//! Running the pipeline with its audit and optional oracle, and the TOML
//! run report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use tspn_core::audit::{self, Check};
use tspn_core::oracle::{self, DEFAULT_ORACLE_LIMIT};
use tspn_core::pipeline::{self, Solution};
use tspn_core::{Instance, SolverKind};

use crate::format::instance_digest;

pub const REPORT_VERSION: &str = "tspn-report/1";

/// Oracle lengths at or below this fraction of the length scale are
/// treated as zero and no ratio is reported.
pub const RATIO_FLOOR: f64 = 1e-12;

/// Slack below 1 allowed for `tour / oracle`.
pub const RATIO_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    On,
    Off,
    /// On when the instance has at most `oracle_limit` disks.
    Auto,
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "on" => Ok(OracleMode::On),
            "off" => Ok(OracleMode::Off),
            "auto" => Ok(OracleMode::Auto),
            _ => Err(format!("unknown oracle mode `{s}` (expected on, off or auto)")),
        }
    }
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::On => "on",
            OracleMode::Off => "off",
            OracleMode::Auto => "auto",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub core: pipeline::RunConfig,
    pub oracle: OracleMode,
    pub oracle_limit: usize,
    /// Generator seed of the instance, echoed into the report.
    pub seed: Option<u64>,
    /// Include wall-clock stage timings. Reports with timings are not
    /// reproducible byte for byte.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            core: pipeline::RunConfig::default(),
            oracle: OracleMode::Auto,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            seed: None,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub worst: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl From<&Check> for CheckRow {
    fn from(c: &Check) -> Self {
        CheckRow {
            name: c.name.to_string(),
            passed: c.passed,
            cases: c.cases,
            worst: c.worst,
            bound: c.bound,
            detail: c.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub version: String,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    pub solver: String,
    pub r: f64,
    pub independent: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub cells: usize,
    pub sentinels: usize,
    pub hitting_set_size: usize,
    pub hitting_set_weight: f64,
    pub selected_cells: usize,
    pub len_g1: f64,
    pub len_g2: f64,
    pub len_g3: f64,
    pub tour_length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    pub valid: bool,
    pub max_violation: f64,
    pub all_checks_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub checks: Vec<CheckRow>,
    /// Closed tour; the last vertex connects back to the first.
    pub tour: Vec<[f64; 2]>,
}

impl RunReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report fields serialize")
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRow> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// One completed run: every artifact plus its report.
#[derive(Clone, Debug)]
pub struct Run {
    pub solution: Solution,
    pub report: RunReport,
}

fn wants_oracle(inst: &Instance, cfg: &RunConfig) -> bool {
    match cfg.oracle {
        OracleMode::On => true,
        OracleMode::Off => false,
        OracleMode::Auto => inst.len() <= cfg.oracle_limit,
    }
}

/// Solves, audits and (optionally) compares against the oracle.
///
/// Contract violations inside the pipeline abort with the core error;
/// failed audit checks are reported, not raised.
pub fn run_pipeline(inst: &Instance, cfg: &RunConfig) -> Result<Run, tspn_core::Error> {
    let mut stamps: Vec<(&'static str, f64)> = Vec::new();
    let start = Instant::now();
    let mut last = start;
    let solution = pipeline::solve_observed(inst, &cfg.core, &mut |stage| {
        let now = Instant::now();
        stamps.push((stage.as_str(), (now - last).as_secs_f64()));
        last = now;
    })?;
    let mut checks: Vec<CheckRow> = audit::audit(&solution).iter().map(CheckRow::from).collect();

    let (mut oracle_length, mut oracle_converged, mut ratio) = (None, None, None);
    if wants_oracle(inst, cfg) {
        let t0 = Instant::now();
        let best = oracle::optimal_tspn_small(inst.disks(), cfg.oracle_limit, cfg.core.tolerances.touring)?;
        stamps.push(("oracle", t0.elapsed().as_secs_f64()));
        oracle_length = Some(best.length);
        oracle_converged = Some(best.converged);
        let tour = solution.tour_length();
        if best.length > RATIO_FLOOR * solution.scale {
            let q = tour / best.length;
            ratio = Some(q);
            checks.push(CheckRow {
                name: "oracle_lower_bound".to_string(),
                passed: q >= 1.0 - RATIO_SLACK,
                cases: 1,
                worst: (1.0 - q).max(0.0),
                bound: RATIO_SLACK,
                detail: if q >= 1.0 - RATIO_SLACK {
                    String::new()
                } else {
                    format!("tour {tour:e} shorter than oracle {:e}", best.length)
                },
            });
        }
    }

    let timings = cfg.timings.then(|| {
        let mut m: BTreeMap<String, f64> = stamps.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        m.insert("total".to_string(), start.elapsed().as_secs_f64());
        m
    });

    let pre = &solution.pre;
    let report = RunReport {
        version: REPORT_VERSION.to_string(),
        digest: instance_digest(inst),
        seed: cfg.seed,
        n: inst.len(),
        solver: cfg.core.solver.as_str().to_string(),
        r: solution.r(),
        independent: pre.independent.len(),
        s1: pre.partition.s1.len(),
        s2: pre.partition.s2.len(),
        s3: pre.partition.s3.len(),
        cells: solution.grid.len(),
        sentinels: solution.sentinel_hypergraph.sentinels.len(),
        hitting_set_size: solution.hitting.chosen.len(),
        hitting_set_weight: solution.hitting.weight,
        selected_cells: solution.selected.len(),
        len_g1: solution.len_g1(),
        len_g2: solution.len_g2(),
        len_g3: solution.len_g3(),
        tour_length: solution.tour_length(),
        oracle_length,
        oracle_converged,
        ratio,
        valid: solution.validation.valid,
        max_violation: solution.validation.max_violation,
        all_checks_passed: checks.iter().all(|c| c.passed),
        timings,
        checks,
        tour: solution.tour.vertices.iter().map(|p| [p.x, p.y]).collect(),
    };
    Ok(Run { solution, report })
}

pub fn parse_solver(s: &str) -> Result<SolverKind, String> {
    match s {
        "greedy" => Ok(SolverKind::Greedy),
        "exact" => Ok(SolverKind::Exact),
        _ => Err(format!("unknown solver `{s}` (expected greedy or exact)")),
    }
}
