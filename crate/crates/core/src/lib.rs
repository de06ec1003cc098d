//! Word error rates for multi-speaker ASR.
//!
//! Computes the MIMO, ORC and concatenated-minimum-permutation (cp) word
//! error rates between multiple reference speakers and multiple hypothesis
//! channels. The MIMO and ORC solvers search a constrained multi-dimensional
//! Levenshtein lattice in which every reference utterance stays contiguous
//! on one channel and per-speaker utterance order is preserved; cpWER pairs
//! whole speakers with channels via the Hungarian algorithm. Brute-force
//! oracles for all three live in [`oracle`] for validation and auditing.
//!
//! ```
//! use meval_core::matchers::mimo_wer;
//! use meval_core::{Channel, CostConfig, HypothesisSet, ReferenceSet, Speaker, Utterance, tokenize};
//!
//! let refs = ReferenceSet::new(vec![
//!     Speaker::new("alice", vec![Utterance::new(tokenize("hello world"), Some(0.0), 0).unwrap()]),
//!     Speaker::new("bob", vec![Utterance::new(tokenize("good bye"), Some(1.0), 1).unwrap()]),
//! ]);
//! let hyps = HypothesisSet::new(vec![Channel::new("ch1", tokenize("hello world good bye"))]);
//! let result = mimo_wer(&refs, &hyps, &CostConfig::default()).unwrap();
//! assert_eq!(result.errors(), 0);
//! ```

pub mod error;
pub mod io;
pub mod levenshtein;
pub mod matchers;
pub mod oracle;
pub mod types;

pub use error::{MevalError, Result};
pub use types::{
    Assignment, Channel, CostConfig, Decision, ErrorCounts, HypothesisSet, Rate, ReferenceSet,
    Speaker, Utterance, WerResult, Word, combine, error_rate, tokenize,
};
