//! End-to-end construction: preprocessing, grid, hypergraphs, hitting set,
//! assembly and validation.

use alloc::vec::Vec;

use crate::assembly::{self, Tour, ValidationReport};
use crate::error::{Error, Result};
use crate::geom::GeometricGraph;
use crate::grid::{self, StratifiedGrid};
use crate::hitting::{self, HittingSetSolution, SentinelHypergraph, SolverKind, SquareHypergraph};
use crate::preprocess::{self, Instance, PreprocessResult};

/// Tolerances, all relative to the length scale of the instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Points closer than this are identified; also the `S1` threshold.
    pub identification: f64,
    /// Allowed distance from the tour to each disk.
    pub validation: f64,
    /// Stopping tolerance of the fixed-order touring solver.
    pub touring: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { identification: 1e-9, validation: 1e-9, touring: 1e-12 }
    }
}

impl Tolerances {
    pub fn check(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.identification) || !ok(self.validation) || !ok(self.touring) {
            return Err(Error::InvalidParameter("tolerances must be positive and finite"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub solver: SolverKind,
    /// Largest compacted sentinel hypergraph the exact solver accepts.
    pub exact_limit: usize,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            solver: SolverKind::Greedy,
            exact_limit: hitting::DEFAULT_EXACT_LIMIT,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Preprocess,
    Stratify,
    Hypergraphs,
    HittingSet,
    Assembly,
    Validation,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Preprocess,
        Stage::Stratify,
        Stage::Hypergraphs,
        Stage::HittingSet,
        Stage::Assembly,
        Stage::Validation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Preprocess => "preprocess",
            Stage::Stratify => "stratify",
            Stage::Hypergraphs => "hypergraphs",
            Stage::HittingSet => "hitting_set",
            Stage::Assembly => "assembly",
            Stage::Validation => "validation",
        }
    }
}

/// Every intermediate artifact of one run.
#[derive(Clone, Debug)]
pub struct Solution {
    pub instance: Instance,
    pub config: RunConfig,
    /// Length unit for all relative tolerances.
    pub scale: f64,
    pub pre: PreprocessResult,
    pub grid: StratifiedGrid,
    pub square_hypergraph: SquareHypergraph,
    pub sentinel_hypergraph: SentinelHypergraph,
    /// Hitting set of the sentinel hypergraph.
    pub hitting: HittingSetSolution,
    /// Cells lifted from the chosen sentinels.
    pub selected: Vec<usize>,
    pub g3: GeometricGraph,
    pub tour: Tour,
    pub validation: ValidationReport,
}

impl Solution {
    pub fn r(&self) -> f64 {
        self.pre.r()
    }

    pub fn len_g1(&self) -> f64 {
        self.pre.g1.length()
    }

    pub fn len_g2(&self) -> f64 {
        self.pre.g2.length()
    }

    pub fn len_g3(&self) -> f64 {
        self.g3.length()
    }

    pub fn tour_length(&self) -> f64 {
        self.tour.length()
    }
}

pub fn solve(inst: &Instance, cfg: &RunConfig) -> Result<Solution> {
    solve_observed(inst, cfg, &mut |_| {})
}

/// Like [`solve`], calling `observe` as each stage finishes.
pub fn solve_observed(inst: &Instance, cfg: &RunConfig, observe: &mut dyn FnMut(Stage)) -> Result<Solution> {
    cfg.tolerances.check()?;
    let tol = cfg.tolerances;
    let pre = preprocess::preprocess(inst, tol.identification, tol.touring)?;
    let scale = preprocess::length_scale(pre.r(), inst);
    observe(Stage::Preprocess);

    let grid = grid::stratify(&pre.bounding, &pre.g1, inst.len())?;
    observe(Stage::Stratify);

    let s3 = &pre.partition.s3;
    let square_hypergraph = hitting::build_square_hypergraph(&grid, inst.disks(), s3)?;
    let sentinel_hypergraph = hitting::build_sentinel_hypergraph(&grid, inst.disks(), s3)?;
    observe(Stage::Hypergraphs);

    let hitting = solve_sentinels(&sentinel_hypergraph, cfg)?;
    let selected = hitting::lift_to_squares(&hitting, &sentinel_hypergraph);
    observe(Stage::HittingSet);

    let g3 = assembly::build_g3(&selected, &grid, &pre.g1)?;
    let tour = assembly::assemble_tour(&pre.g1, &pre.g2, &g3, tol.identification * scale)?;
    observe(Stage::Assembly);

    let validation = assembly::validate_tour(&tour, inst.disks(), tol.validation * scale);
    observe(Stage::Validation);

    Ok(Solution {
        instance: inst.clone(),
        config: *cfg,
        scale,
        pre,
        grid,
        square_hypergraph,
        sentinel_hypergraph,
        hitting,
        selected,
        g3,
        tour,
        validation,
    })
}

/// The exact solver only sees sentinels that occur in some edge; the
/// answer is mapped back to full sentinel indices.
fn solve_sentinels(h: &SentinelHypergraph, cfg: &RunConfig) -> Result<HittingSetSolution> {
    match cfg.solver {
        SolverKind::Greedy => hitting::greedy_mwhs(&h.graph),
        SolverKind::Exact => {
            let (small, kept) = h.graph.compact();
            let sol = hitting::exact_mwhs(&small, cfg.exact_limit)?;
            let mut chosen: Vec<usize> = sol.chosen.iter().map(|&v| kept[v]).collect();
            chosen.sort_unstable();
            Ok(HittingSetSolution { weight: h.graph.weight_of(&chosen), chosen, solver: SolverKind::Exact })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Disk, Point};
    use alloc::vec;

    #[test]
    fn single_disk_gives_a_zero_length_valid_tour() {
        let inst = Instance::new(vec![Disk::new(Point::new(2.0, 3.0), 0.5)]).unwrap();
        let sol = solve(&inst, &RunConfig::default()).unwrap();
        assert_eq!(sol.r(), 0.0);
        assert_eq!(sol.tour_length(), 0.0);
        assert!(sol.validation.valid);
    }

    #[test]
    fn two_far_disks() {
        let inst = Instance::new(vec![
            Disk::new(Point::new(0.0, 0.0), 1.0),
            Disk::new(Point::new(10.0, 0.0), 1.0),
        ])
        .unwrap();
        let sol = solve(&inst, &RunConfig::default()).unwrap();
        assert!(sol.validation.valid);
        let expect = 2.0 * (sol.len_g1() + sol.len_g2() + sol.len_g3());
        assert!((sol.tour_length() - expect).abs() <= 1e-9 * sol.r());
        // optimum is 16, the tour must be no shorter
        assert!(sol.tour_length() >= 16.0 - 1e-9);
    }

    #[test]
    fn stages_are_reported_in_order() {
        let inst = Instance::new(vec![
            Disk::new(Point::new(0.0, 0.0), 0.1),
            Disk::new(Point::new(1.0, 0.3), 0.2),
            Disk::new(Point::new(0.4, 0.9), 0.05),
        ])
        .unwrap();
        let mut seen = Vec::new();
        solve_observed(&inst, &RunConfig::default(), &mut |s| seen.push(s)).unwrap();
        assert_eq!(seen, Stage::ALL.to_vec());
    }

    #[test]
    fn bad_tolerances_are_rejected() {
        let inst = Instance::new(vec![Disk::new(Point::new(0.0, 0.0), 1.0)]).unwrap();
        let mut cfg = RunConfig::default();
        cfg.tolerances.validation = 0.0;
        assert!(matches!(solve(&inst, &cfg), Err(Error::InvalidParameter(_))));
    }
}
