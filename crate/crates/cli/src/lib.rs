//! Command-line front end for `tspn-core`: seeded instance families, the
//! instance file format, run reports, SVG output and concurrent batches.

pub mod format;
pub mod generate;
pub mod report;
pub mod suite;
pub mod svg;

pub use format::{instance_digest, instance_from_json, instance_to_json, FormatError};
pub use generate::{generate_instance, Kind};
pub use report::{run_pipeline, OracleMode, Run, RunConfig, RunReport};
pub use suite::{batch_plan, run_batch, summarize, BatchItem, BatchResult, SuiteSummary};
pub use svg::render_svg;
