//! The three multi-speaker WER solvers: MIMO (constrained multi-dimensional
//! lattice), ORC (the single-reference specialization after merging), and
//! cpWER (Hungarian assignment over concatenated streams).

mod cpwer;
mod hungarian;
mod lattice;
mod mimo;
mod orc;
mod streams;

pub use cpwer::{cp_wer, pairwise_distances, permutation_assignment};
pub use mimo::{mimo_distance, mimo_distance_limited, mimo_wer, mimo_wer_limited};
pub use orc::{merge_references, orc_distance, orc_distance_limited, orc_wer, orc_wer_limited};
pub use streams::{ReferenceStream, StreamItem, build_reference_streams};

pub(crate) use orc::merged_reference_order;

use std::collections::HashMap;

use crate::error::Result;
use crate::levenshtein::distance_with_counts;
use crate::types::{Assignment, CostConfig, ErrorCounts, HypothesisSet, ReferenceSet, Word};

/// Default memory budget for the MIMO/ORC lattice: 2 GiB worth of cells.
/// Exceeding it is an explicit error, never silent truncation.
pub const DEFAULT_MEMORY_LIMIT: u64 = 2 * 1024 * 1024 * 1024;

/// Session words interned to dense integer symbols for O(1) comparisons in
/// the DP inner loops.
pub(crate) struct InternedSession {
    /// Per speaker, per utterance, the symbol sequence.
    pub ref_utts: Vec<Vec<Vec<lattice::Symbol>>>,
    /// Per channel, the symbol sequence.
    pub hyps: Vec<Vec<lattice::Symbol>>,
}

pub(crate) fn intern<'a>(refset: &'a ReferenceSet, hypset: &'a HypothesisSet) -> InternedSession {
    fn sym<'a>(table: &mut HashMap<&'a str, u32>, word: &'a Word) -> u32 {
        let next = table.len() as u32;
        *table.entry(word.as_str()).or_insert(next)
    }

    let mut table: HashMap<&'a str, u32> = HashMap::new();
    let ref_utts = refset
        .speakers()
        .iter()
        .map(|spk| {
            spk.utterances()
                .iter()
                .map(|u| u.words().iter().map(|w| sym(&mut table, w)).collect())
                .collect()
        })
        .collect();
    let hyps = hypset
        .channels()
        .iter()
        .map(|ch| ch.words().iter().map(|w| sym(&mut table, w)).collect())
        .collect();
    InternedSession { ref_utts, hyps }
}

/// Replay an assignment: concatenate the assigned reference words per
/// channel in decision order, align every channel with the two-dimensional
/// distance, and pool the counts. Utterances assigned to no channel (dummy
/// pairings) tally as pure deletions.
///
/// Returns the pooled counts and the replayed total cost; the cost of a
/// solver's winning assignment reproduces the solver's reported cost
/// exactly.
///
/// Panics if the assignment names speakers, utterances or channels that are
/// not part of the given sets.
pub fn assignment_counts(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    assignment: &Assignment,
    costs: &CostConfig,
) -> Result<(ErrorCounts, u64)> {
    let speaker_index: HashMap<&str, usize> = refset
        .speakers()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.label(), i))
        .collect();
    let channel_index: HashMap<&str, usize> = hypset
        .channels()
        .iter()
        .enumerate()
        .map(|(i, ch)| (ch.label(), i))
        .collect();

    let mut per_channel: Vec<Vec<&Word>> = vec![Vec::new(); hypset.channel_count()];
    let mut dummy_deletions = 0u64;
    for decision in assignment.decisions() {
        let speaker = speaker_index
            .get(decision.speaker.as_str())
            .copied()
            .expect("assignment names an unknown speaker");
        let words = refset.speakers()[speaker].utterances()[decision.utterance].words();
        match &decision.channel {
            Some(label) => {
                let channel = channel_index
                    .get(label.as_str())
                    .copied()
                    .expect("assignment names an unknown channel");
                per_channel[channel].extend(words.iter());
            }
            None => dummy_deletions += words.len() as u64,
        }
    }

    let mut counts = ErrorCounts::default();
    let mut cost = 0u64;
    for (channel, concatenated) in per_channel.iter().enumerate() {
        let hyp_words: Vec<&Word> = hypset.channels()[channel].words().iter().collect();
        let (block_cost, block_counts, _) = distance_with_counts(concatenated, &hyp_words, costs);
        cost += block_cost;
        counts = counts.combine(&block_counts)?;
    }
    counts.deletions += dummy_deletions;
    counts.ref_length += dummy_deletions;
    cost += dummy_deletions * costs.deletion as u64;
    Ok((counts, cost))
}
