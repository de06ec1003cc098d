//! MIMO WER: minimal edit cost over all assignments of reference utterances
//! to hypothesis channels and all cross-speaker interleavings, preserving
//! per-speaker utterance order and keeping every utterance contiguous on one
//! channel.

use super::{DEFAULT_MEMORY_LIMIT, assignment_counts, intern, lattice};
use crate::error::Result;
use crate::types::{Assignment, CostConfig, Decision, HypothesisSet, ReferenceSet, WerResult};

/// Minimal constrained edit cost and the assignment achieving it, under the
/// default 2 GiB lattice memory budget.
pub fn mimo_distance(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<(u64, Assignment)> {
    mimo_distance_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT)
}

/// [`mimo_distance`] with an explicit memory budget in bytes.
pub fn mimo_distance_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    memory_limit_bytes: u64,
) -> Result<(u64, Assignment)> {
    if hypset.channel_count() == 0 {
        // Degenerate sessions without channels: every reference word is a
        // deletion and no channel decision exists.
        let cost = refset.word_count() as u64 * costs.deletion as u64;
        let decisions = refset
            .speakers()
            .iter()
            .flat_map(|spk| {
                (0..spk.utterances().len()).map(|utterance| Decision {
                    speaker: spk.label().to_string(),
                    utterance,
                    channel: None,
                })
            })
            .collect();
        return Ok((cost, Assignment::new(decisions)));
    }

    let session = intern(refset, hypset);
    let solution = lattice::solve(&session.ref_utts, &session.hyps, costs, memory_limit_bytes)?;
    let decisions = solution
        .decisions
        .iter()
        .map(|&(speaker, utterance, channel)| Decision {
            speaker: refset.speakers()[speaker].label().to_string(),
            utterance,
            channel: Some(hypset.channels()[channel].label().to_string()),
        })
        .collect();
    Ok((solution.cost, Assignment::new(decisions)))
}

/// MIMO WER with full error counts, obtained by re-aligning every channel
/// against the reference words concatenated in the winning assignment's
/// order.
pub fn mimo_wer(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<WerResult> {
    mimo_wer_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT)
}

/// [`mimo_wer`] with an explicit memory budget in bytes.
pub fn mimo_wer_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    memory_limit_bytes: u64,
) -> Result<WerResult> {
    let (cost, assignment) = mimo_distance_limited(refset, hypset, costs, memory_limit_bytes)?;
    let (counts, replayed) = assignment_counts(refset, hypset, &assignment, costs)?;
    debug_assert_eq!(
        replayed, cost,
        "assignment replay must reproduce the DP cost"
    );
    Ok(WerResult::new(counts, assignment))
}
