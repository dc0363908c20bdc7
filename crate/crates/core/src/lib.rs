//! Constant-factor TSP tours for arbitrary disks in the plane.
//!
//! The pipeline picks a greedy independent set of disks and tours it,
//! wraps the result with the minimum enclosing square, connects nearby
//! disks directly, and reaches the remaining far disks through a stratified
//! quadtree grid whose cells are selected by a weighted hitting set over
//! sentinel points. The union of all pieces is doubled and walked as an
//! Euler circuit.
//!
//! Every structural guarantee the construction relies on is re-checked at
//! run time by [`audit::audit`]; [`oracle`] supplies brute-force optima for
//! small instances.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assembly;
pub mod audit;
pub mod error;
pub mod geom;
pub mod grid;
pub mod hitting;
pub mod math;
pub mod oracle;
pub mod pipeline;
pub mod preprocess;

pub use assembly::{Tour, ValidationReport};
pub use error::{Error, Result};
pub use geom::{AxisSquare, Disk, GeometricGraph, Point, Segment};
pub use grid::{GridSquare, StratifiedGrid};
pub use hitting::{HittingSetSolution, SolverKind, WeightedHypergraph};
pub use pipeline::{solve, RunConfig, Solution, Stage, Tolerances};
pub use preprocess::{Instance, Partition, PreprocessResult};
