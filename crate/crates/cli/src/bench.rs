//! Runtime benchmark harness: a grid of generated scenarios solved by each
//! method, wall-clock timings to CSV.
//!
//! The grid spec is a semicolon-separated list of `key=values` entries.
//! Values are comma lists; integer keys also accept `start:end[:step]`
//! ranges (inclusive). Keys: `K` (speakers), `C` (channels), `U`
//! (utterances), `W` (words per utterance), `V` (vocabulary),
//! `corruption`, `seeds`. Example:
//!
//! ```text
//! K=4;C=2;U=2:80;W=10;corruption=0.1;seeds=0
//! ```
//!
//! Runs are strictly sequential to avoid timer interference, and only the
//! solve is timed: generation and I/O stay outside the clock. Every point
//! runs one warm-up solve and `reps` timed solves; the CSV records the
//! median. Methods that exceed their memory or enumeration budget emit
//! `skipped` instead of a time.

use std::io::Write;
use std::time::Instant;

use anyhow::{Result, anyhow, bail};

use meval_core::CostConfig;
use meval_core::matchers::{
    DEFAULT_MEMORY_LIMIT, cp_wer, mimo_distance_limited, orc_distance_limited,
};
use meval_core::oracle::brute_force_orc;

use crate::scenario::{BenchScenario, generate_scenario};

/// CSV column header; the contract for downstream tooling.
pub const CSV_HEADER: &str = "method,K,C,U,W,seed,seconds";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    Mimo,
    OrcDp,
    OrcBruteForce,
    CpWer,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 4] = [
        BenchMethod::Mimo,
        BenchMethod::OrcDp,
        BenchMethod::OrcBruteForce,
        BenchMethod::CpWer,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Mimo => "mimo",
            BenchMethod::OrcDp => "orc-dp",
            BenchMethod::OrcBruteForce => "orc-brute-force",
            BenchMethod::CpWer => "cpwer",
        }
    }

    fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|m| m.name() == name)
            .ok_or_else(|| anyhow!("unknown bench method {name:?}"))
    }
}

/// Parse a comma-separated method list; `None` means all methods.
pub fn parse_methods(spec: Option<&str>) -> Result<Vec<BenchMethod>> {
    match spec {
        None => Ok(BenchMethod::ALL.to_vec()),
        Some(s) => s.split(',').map(|m| BenchMethod::parse(m.trim())).collect(),
    }
}

/// The cartesian grid of scenarios to benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchGrid {
    pub speakers: Vec<usize>,
    pub channels: Vec<usize>,
    pub utterances: Vec<usize>,
    pub words: Vec<usize>,
    pub vocabulary: Vec<usize>,
    pub corruption: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl Default for BenchGrid {
    fn default() -> Self {
        BenchGrid {
            speakers: vec![4],
            channels: vec![2],
            utterances: vec![10, 20, 40],
            words: vec![10],
            vocabulary: vec![100],
            corruption: vec![0.0],
            seeds: vec![0],
        }
    }
}

impl BenchGrid {
    /// All grid points in deterministic nested order.
    pub fn scenarios(&self) -> Vec<BenchScenario> {
        let mut out = Vec::new();
        for &k in &self.speakers {
            for &c in &self.channels {
                for &u in &self.utterances {
                    for &w in &self.words {
                        for &v in &self.vocabulary {
                            for &corruption in &self.corruption {
                                for &seed in &self.seeds {
                                    out.push(BenchScenario::new(k, c, u, w, v, seed, corruption));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn parse_int_values(values: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in values.split(',') {
        let part = part.trim();
        if let Some((start, rest)) = part.split_once(':') {
            let (end, step) = match rest.split_once(':') {
                Some((end, step)) => (end, step.parse::<usize>()?),
                None => (rest, 1),
            };
            let (start, end) = (start.parse::<usize>()?, end.parse::<usize>()?);
            if step == 0 || end < start {
                bail!("bad range {part:?}");
            }
            out.extend((start..=end).step_by(step));
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        bail!("empty value list");
    }
    Ok(out)
}

/// Parse a grid spec; missing keys keep their defaults.
pub fn parse_grid(spec: &str) -> Result<BenchGrid> {
    let mut grid = BenchGrid::default();
    for entry in spec.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (key, values) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("grid entry {entry:?} is not key=values"))?;
        match key.trim() {
            "K" => grid.speakers = parse_int_values(values)?,
            "C" => grid.channels = parse_int_values(values)?,
            "U" => grid.utterances = parse_int_values(values)?,
            "W" => grid.words = parse_int_values(values)?,
            "V" => grid.vocabulary = parse_int_values(values)?,
            "corruption" => {
                grid.corruption = values
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(Into::into))
                    .collect::<Result<_>>()?
            }
            "seeds" | "seed" => {
                grid.seeds = values
                    .split(',')
                    .map(|v| v.trim().parse::<u64>().map_err(Into::into))
                    .collect::<Result<_>>()?
            }
            other => bail!("unknown grid key {other:?}"),
        }
    }
    Ok(grid)
}

/// Run one method once; `Ok(())` if it solved, `Err` if it hit a budget.
fn solve_once(
    method: BenchMethod,
    refset: &meval_core::ReferenceSet,
    hypset: &meval_core::HypothesisSet,
    costs: &CostConfig,
) -> meval_core::Result<()> {
    match method {
        BenchMethod::Mimo => {
            mimo_distance_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT).map(|_| ())
        }
        BenchMethod::OrcDp => {
            orc_distance_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT).map(|_| ())
        }
        BenchMethod::OrcBruteForce => brute_force_orc(refset, hypset, costs).map(|_| ()),
        BenchMethod::CpWer => cp_wer(refset, hypset, costs).map(|_| ()),
    }
}

/// Time one grid point for one method: a warm-up solve, then `reps` timed
/// solves, reporting the median in seconds. `None` means the method
/// exceeded a budget and the point is skipped.
pub fn time_point(
    method: BenchMethod,
    scenario: &BenchScenario,
    reps: usize,
    costs: &CostConfig,
) -> Option<f64> {
    let (refset, hypset) = generate_scenario(scenario);
    if solve_once(method, &refset, &hypset, costs).is_err() {
        return None;
    }
    let mut times: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            solve_once(method, &refset, &hypset, costs).expect("warm-up succeeded");
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    Some(times[(times.len() - 1) / 2])
}

/// Run the full grid for every method, streaming CSV rows.
pub fn run_bench(
    grid: &BenchGrid,
    methods: &[BenchMethod],
    reps: usize,
    costs: &CostConfig,
    out: &mut dyn Write,
) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for scenario in grid.scenarios() {
        for &method in methods {
            let seconds = match time_point(method, &scenario, reps, costs) {
                Some(s) => format!("{s:.6}"),
                None => "skipped".to_string(),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                method.name(),
                scenario.speakers,
                scenario.channels,
                scenario.utterances,
                scenario.words_per_utterance,
                scenario.seed,
                seconds
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_lists() {
        let grid = parse_grid("K=2;U=2:8:2,20;seeds=1,2").unwrap();
        assert_eq!(grid.speakers, vec![2]);
        assert_eq!(grid.utterances, vec![2, 4, 6, 8, 20]);
        assert_eq!(grid.seeds, vec![1, 2]);
        // Unspecified keys keep defaults.
        assert_eq!(grid.channels, vec![2]);
        assert_eq!(grid.words, vec![10]);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(parse_grid("Q=4").is_err());
        assert!(parse_grid("K").is_err());
        assert!(parse_grid("U=5:1").is_err());
    }

    #[test]
    fn parses_method_lists() {
        assert_eq!(parse_methods(None).unwrap(), BenchMethod::ALL.to_vec());
        assert_eq!(
            parse_methods(Some("orc-dp,cpwer")).unwrap(),
            vec![BenchMethod::OrcDp, BenchMethod::CpWer]
        );
        assert!(parse_methods(Some("bogus")).is_err());
    }

    #[test]
    fn bench_emits_header_and_skips_over_budget_points() {
        // 2^24 assignments exceed the enumeration limit, so the brute-force
        // row must read "skipped" while the DP solves the same point.
        let grid = parse_grid("K=2;C=2;U=24;W=2;V=10").unwrap();
        let methods = [BenchMethod::OrcDp, BenchMethod::OrcBruteForce];
        let mut csv = Vec::new();
        run_bench(&grid, &methods, 1, &CostConfig::default(), &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let dp_row = lines.next().unwrap();
        assert!(dp_row.starts_with("orc-dp,2,2,24,2,0,"));
        assert!(!dp_row.ends_with("skipped"));
        let bf_row = lines.next().unwrap();
        assert_eq!(bf_row, "orc-brute-force,2,2,24,2,0,skipped");
    }

    #[test]
    fn identical_seeds_make_identical_non_time_columns() {
        let grid = parse_grid("K=2;C=2;U=4;W=3;V=10;seeds=5").unwrap();
        let methods = [BenchMethod::CpWer];
        let mut first = Vec::new();
        run_bench(&grid, &methods, 3, &CostConfig::default(), &mut first).unwrap();
        let mut second = Vec::new();
        run_bench(&grid, &methods, 3, &CostConfig::default(), &mut second).unwrap();
        let strip_time = |csv: &[u8]| -> Vec<String> {
            String::from_utf8(csv.to_vec())
                .unwrap()
                .lines()
                .map(|l| {
                    l.rsplit_once(',')
                        .map(|(head, _)| head.to_string())
                        .unwrap_or(l.to_string())
                })
                .collect()
        };
        assert_eq!(strip_time(&first), strip_time(&second));
    }
}
