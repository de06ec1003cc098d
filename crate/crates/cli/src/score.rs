//! Corpus scoring: parse segment files, group sessions, run the selected
//! solver per session across a worker pool, and assemble the report.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

use meval_core::io::{Report, ReportMetadata, Session, group_sessions, parse_seglst, write_report};
use meval_core::matchers::{
    assignment_counts, cp_wer, mimo_wer_limited, orc_wer_limited, permutation_assignment,
};
use meval_core::oracle::{brute_force_cp, brute_force_mimo, brute_force_orc};
use meval_core::{CostConfig, WerResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Multiple-input multiple-output WER over all utterance assignments.
    Mimo,
    /// Optimal reference combination WER (merged references).
    #[value(name = "orcwer")]
    OrcWer,
    /// Concatenated minimum-permutation WER.
    #[value(name = "cpwer")]
    CpWer,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Mimo => "mimo",
            Metric::OrcWer => "orcwer",
            Metric::CpWer => "cpwer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Dynamic-programming solvers.
    Dp,
    /// Exhaustive enumeration (auditing; exponential).
    #[value(name = "brute-force")]
    BruteForce,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dp => "dp",
            Method::BruteForce => "brute-force",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScoreOptions {
    pub metric: Metric,
    pub method: Method,
    pub costs: CostConfig,
    pub memory_limit: u64,
    pub jobs: usize,
}

fn score_session(session: &Session, options: &ScoreOptions) -> meval_core::Result<WerResult> {
    let (refset, hypset, costs) = (&session.reference, &session.hypothesis, &options.costs);
    match (options.metric, options.method) {
        (Metric::Mimo, Method::Dp) => mimo_wer_limited(refset, hypset, costs, options.memory_limit),
        (Metric::OrcWer, Method::Dp) => {
            orc_wer_limited(refset, hypset, costs, options.memory_limit)
        }
        (Metric::CpWer, Method::Dp) => cp_wer(refset, hypset, costs),
        (Metric::Mimo, Method::BruteForce) => {
            let (_, assignment) = brute_force_mimo(refset, hypset, costs)?;
            let (counts, _) = assignment_counts(refset, hypset, &assignment, costs)?;
            Ok(WerResult::new(counts, assignment))
        }
        (Metric::OrcWer, Method::BruteForce) => {
            let (_, assignment) = brute_force_orc(refset, hypset, costs)?;
            let (counts, _) = assignment_counts(refset, hypset, &assignment, costs)?;
            Ok(WerResult::new(counts, assignment))
        }
        (Metric::CpWer, Method::BruteForce) => {
            let (_, permutation) = brute_force_cp(refset, hypset, costs)?;
            let assignment = permutation_assignment(refset, hypset, &permutation);
            let (counts, _) = assignment_counts(refset, hypset, &assignment, costs)?;
            Ok(WerResult::new(counts, assignment))
        }
    }
}

/// Score every session, pooling into a report. Sessions run on `jobs`
/// worker threads; results merge back in session order, so the report is
/// independent of scheduling.
pub fn score_sessions(sessions: &[Session], options: &ScoreOptions) -> Result<Report> {
    let jobs = options.jobs.max(1).min(sessions.len().max(1));
    let mut results: Vec<Option<meval_core::Result<WerResult>>> = Vec::new();
    results.resize_with(sessions.len(), || None);

    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for worker in 0..jobs {
            let handle = scope.spawn(move || {
                let mut out = Vec::new();
                let mut index = worker;
                while index < sessions.len() {
                    out.push((index, score_session(&sessions[index], options)));
                    index += jobs;
                }
                out
            });
            handles.push(handle);
        }
        for handle in handles {
            for (index, result) in handle.join().expect("scoring worker panicked") {
                results[index] = Some(result);
            }
        }
    });

    let mut report = Report::new(ReportMetadata::new(options.method.name(), options.costs));
    report.ensure_metric(options.metric.name());
    for (session, result) in sessions.iter().zip(results) {
        let result = result
            .expect("every session scored")
            .with_context(|| format!("scoring session {:?}", session.session_id))?;
        report.insert(&session.session_id, options.metric.name(), result);
    }
    Ok(report)
}

/// Parse one segment file, tagging errors with the path.
pub fn load_segments(path: &Path) -> Result<Vec<meval_core::io::SegmentRecord>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_seglst(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

/// The full scoring pipeline: files in, canonical report bytes out.
pub fn run_score(ref_path: &Path, hyp_path: &Path, options: &ScoreOptions) -> Result<Vec<u8>> {
    let ref_records = load_segments(ref_path)?;
    let hyp_records = load_segments(hyp_path)?;
    let sessions = group_sessions(&ref_records, &hyp_records)?;
    let report = score_sessions(&sessions, options)?;
    Ok(write_report(&report)?)
}
