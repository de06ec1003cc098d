//! `meval` — score multi-speaker ASR output (MIMO / ORC / cp word error
//! rates) and benchmark the solvers.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 resource-budget
//! error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use meval::bench::{parse_grid, parse_methods, run_bench};
use meval::score::{Method, Metric, ScoreOptions, run_score};
use meval_core::matchers::DEFAULT_MEMORY_LIMIT;
use meval_core::{CostConfig, MevalError};

#[derive(Parser)]
#[command(name = "meval", version, about = "Multi-speaker word error rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score hypothesis segments against reference segments.
    Score {
        /// Which error rate to compute.
        #[arg(value_enum)]
        metric: Metric,
        /// Reference segment file (JSONL).
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Hypothesis segment file (JSONL).
        #[arg(long = "hyp")]
        hypothesis: PathBuf,
        /// Report output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Edit costs as correct,substitution,insertion,deletion.
        #[arg(long, default_value = "0,1,1,1", value_parser = parse_costs)]
        costs: CostConfig,
        /// Solver implementation.
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// Lattice memory budget in bytes.
        #[arg(long = "memory-limit", default_value_t = DEFAULT_MEMORY_LIMIT)]
        memory_limit: u64,
        /// Worker threads for session scoring; defaults to the processor
        /// count.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Benchmark solver runtimes over a scenario grid, writing CSV.
    Bench {
        /// Grid spec, e.g. "K=4;C=2;U=2:80;W=10;corruption=0.1;seeds=0".
        #[arg(long)]
        grid: String,
        /// Timed repetitions per point (median is reported).
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated subset of mimo,orc-dp,orc-brute-force,cpwer.
        #[arg(long)]
        methods: Option<String>,
        /// Edit costs as correct,substitution,insertion,deletion.
        #[arg(long, default_value = "0,1,1,1", value_parser = parse_costs)]
        costs: CostConfig,
    },
}

fn parse_costs(spec: &str) -> Result<CostConfig, String> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(
            "expected four comma-separated costs: correct,substitution,insertion,deletion"
                .to_string(),
        );
    }
    let mut values = [0u32; 4];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|e| format!("bad cost {part:?}: {e}"))?;
    }
    CostConfig::new(values[0], values[1], values[2], values[3]).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Score {
            metric,
            reference,
            hypothesis,
            out,
            costs,
            method,
            memory_limit,
            jobs,
        } => {
            let jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let options = ScoreOptions {
                metric,
                method,
                costs,
                memory_limit,
                jobs,
            };
            let report = run_score(&reference, &hypothesis, &options)?;
            match out {
                Some(path) => fs::write(&path, report)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout()
                    .write_all(&report)
                    .context("writing report to stdout")?,
            }
            Ok(())
        }
        Command::Bench {
            grid,
            reps,
            out,
            methods,
            costs,
        } => {
            let grid = parse_grid(&grid)?;
            let methods = parse_methods(methods.as_deref())?;
            let mut csv = Vec::new();
            run_bench(&grid, &methods, reps, &costs, &mut csv)?;
            fs::write(&out, csv).with_context(|| format!("writing {}", out.display()))?;
            Ok(())
        }
    }
}

/// Map failures onto the documented exit codes: budget exhaustion is 3,
/// everything else about the inputs is 2.
fn classify(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<MevalError>()) {
        Some(
            MevalError::BudgetExceeded { .. }
            | MevalError::InstanceTooLarge { .. }
            | MevalError::EnumerationLimit { .. },
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
