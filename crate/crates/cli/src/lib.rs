//! Library side of the `meval` command-line tool: scenario generation, the
//! benchmark harness and the scoring pipeline. The binary in `main.rs` is a
//! thin argument-parsing wrapper over these.

pub mod bench;
pub mod scenario;
pub mod score;

pub use bench::{BenchGrid, BenchMethod, parse_grid, parse_methods, run_bench, time_point};
pub use scenario::{BenchScenario, generate_scenario};
pub use score::{Method, Metric, ScoreOptions, run_score, score_sessions};
