use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tspn::report::parse_solver;
use tspn::{
    batch_plan, generate_instance, instance_from_json, instance_to_json, render_svg, run_batch, run_pipeline, summarize,
    suite, Kind, OracleMode, RunConfig,
};
use tspn_core::oracle::DEFAULT_ORACLE_LIMIT;
use tspn_core::{Instance, SolverKind};

/// Constant-factor tours for disks, with run-time checks and SVG plots.
#[derive(Parser)]
#[command(name = "tspn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Gen {
        #[arg(long, default_value = "uniform")]
        kind: Kind,
        #[arg(long, short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance file and print or write its report.
    Run {
        instance: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Seed the instance was generated with, echoed into the report.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for the report (and SVG); standard output when omitted.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write an SVG next to the report; needs --out-dir.
        #[arg(long, requires = "out_dir")]
        svg: bool,
        /// Record wall-clock timings (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Generate and solve a batch, concurrently.
    Suite {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Directory for per-run reports and summary.toml.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Solve one instance file and write its SVG.
    Svg {
        instance: PathBuf,
        #[arg(long, default_value = "greedy", value_parser = parse_solver)]
        solver: SolverKind,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, default_value = "greedy", value_parser = parse_solver)]
    solver: SolverKind,
    /// on, off, or auto (on for at most --oracle-limit disks).
    #[arg(long, default_value = "auto")]
    oracle: OracleMode,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: usize,
}

impl PipelineArgs {
    fn config(&self) -> RunConfig {
        let mut cfg = RunConfig { oracle: self.oracle, oracle_limit: self.oracle_limit, ..RunConfig::default() };
        cfg.core.solver = self.solver;
        cfg
    }
}

/// Failed checks map to exit code 1; anything else that goes wrong is 2.
enum Outcome {
    Passed,
    Failed,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    instance_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to standard output"),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned())
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Gen { kind, n, seed, out } => {
            anyhow::ensure!(n >= 1, "n must be at least 1");
            write_or_print(out.as_deref(), &instance_to_json(&generate_instance(kind, n, seed)))?;
            Ok(Outcome::Passed)
        }
        Command::Run { instance, pipeline, seed, out_dir, svg, timings } => {
            let inst = read_instance(&instance)?;
            let cfg = RunConfig { seed, timings, ..pipeline.config() };
            let run = run_pipeline(&inst, &cfg).context("pipeline contract violated")?;
            let text = run.report.to_toml();
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    let name = stem(&instance);
                    write_or_print(Some(&dir.join(format!("{name}.report.toml"))), &text)?;
                    if svg {
                        write_or_print(Some(&dir.join(format!("{name}.svg"))), &render_svg(&run.solution))?;
                    }
                }
                None => write_or_print(None, &text)?,
            }
            for c in run.report.failed_checks() {
                eprintln!("check failed: {} ({})", c.name, c.detail);
            }
            Ok(if run.report.valid && run.report.all_checks_passed { Outcome::Passed } else { Outcome::Failed })
        }
        Command::Suite { count, seed, pipeline, out_dir } => {
            let results = run_batch(&batch_plan(count, seed), &pipeline.config());
            let summary = summarize(&results);
            if let Some(dir) = out_dir {
                suite::write_batch(&dir, &results, &summary).with_context(|| format!("writing to {}", dir.display()))?;
            }
            write_or_print(None, &summary.to_toml())?;
            Ok(if summary.all_passed() { Outcome::Passed } else { Outcome::Failed })
        }
        Command::Svg { instance, solver, out } => {
            let inst = read_instance(&instance)?;
            let mut cfg = RunConfig { oracle: OracleMode::Off, ..RunConfig::default() };
            cfg.core.solver = solver;
            let run = run_pipeline(&inst, &cfg).context("pipeline contract violated")?;
            write_or_print(out.as_deref(), &render_svg(&run.solution))?;
            Ok(if run.report.valid { Outcome::Passed } else { Outcome::Failed })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
