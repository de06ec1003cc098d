//! ORC WER: the MIMO specialization that merges all reference speakers into
//! one stream sorted by utterance begin times. Polynomial in the number of
//! utterances because the progress vector degenerates to a scalar.

use super::{DEFAULT_MEMORY_LIMIT, assignment_counts, intern, lattice};
use crate::error::{MevalError, Result};
use crate::types::{
    Assignment, CostConfig, Decision, HypothesisSet, ReferenceSet, Speaker, WerResult,
};

/// The global utterance order used by the merge: begin time, ties broken by
/// source index. Requires begin times on every utterance when K > 1; a
/// single speaker keeps its existing order.
pub(crate) fn merged_reference_order(refset: &ReferenceSet) -> Result<Vec<(usize, usize)>> {
    if refset.speaker_count() <= 1 {
        return Ok(refset
            .speakers()
            .iter()
            .enumerate()
            .flat_map(|(k, spk)| (0..spk.utterances().len()).map(move |i| (k, i)))
            .collect());
    }
    let mut keyed = Vec::with_capacity(refset.utterance_count());
    for (k, spk) in refset.speakers().iter().enumerate() {
        for (i, utterance) in spk.utterances().iter().enumerate() {
            let begin = utterance
                .begin_time()
                .ok_or_else(|| MevalError::MissingBeginTime {
                    speaker: spk.label().to_string(),
                    utterance: i,
                    source_index: utterance.source_index(),
                })?;
            keyed.push((begin, utterance.source_index(), k, i));
        }
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, _, k, i)| (k, i)).collect())
}

/// Merge all speakers into one pseudo-speaker whose utterances are sorted by
/// begin time (stable on source index). Identity for a single speaker.
pub fn merge_references(refset: &ReferenceSet) -> Result<ReferenceSet> {
    if refset.speaker_count() <= 1 {
        return Ok(refset.clone());
    }
    let order = merged_reference_order(refset)?;
    let utterances = order
        .into_iter()
        .map(|(k, i)| refset.speakers()[k].utterances()[i].clone())
        .collect();
    Ok(ReferenceSet::new(vec![Speaker::new("merged", utterances)]))
}

/// Minimal edit cost over channel assignments of the merged utterance
/// sequence, and the assignment achieving it (reported against the original
/// speaker labels).
pub fn orc_distance(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<(u64, Assignment)> {
    orc_distance_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT)
}

/// [`orc_distance`] with an explicit memory budget in bytes.
pub fn orc_distance_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    memory_limit_bytes: u64,
) -> Result<(u64, Assignment)> {
    let order = merged_reference_order(refset)?;

    if hypset.channel_count() == 0 {
        let cost = refset.word_count() as u64 * costs.deletion as u64;
        let decisions = order
            .into_iter()
            .map(|(k, i)| Decision {
                speaker: refset.speakers()[k].label().to_string(),
                utterance: i,
                channel: None,
            })
            .collect();
        return Ok((cost, Assignment::new(decisions)));
    }

    let session = intern(refset, hypset);
    let merged: Vec<Vec<lattice::Symbol>> = order
        .iter()
        .map(|&(k, i)| session.ref_utts[k][i].clone())
        .collect();
    let solution = lattice::solve(&[merged], &session.hyps, costs, memory_limit_bytes)?;
    let decisions = solution
        .decisions
        .iter()
        .map(|&(_, merged_index, channel)| {
            let (k, i) = order[merged_index];
            Decision {
                speaker: refset.speakers()[k].label().to_string(),
                utterance: i,
                channel: Some(hypset.channels()[channel].label().to_string()),
            }
        })
        .collect();
    Ok((solution.cost, Assignment::new(decisions)))
}

/// ORC WER with full error counts, analogous to
/// [`mimo_wer`](super::mimo_wer) with the merged reference.
pub fn orc_wer(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<WerResult> {
    orc_wer_limited(refset, hypset, costs, DEFAULT_MEMORY_LIMIT)
}

/// [`orc_wer`] with an explicit memory budget in bytes.
pub fn orc_wer_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    memory_limit_bytes: u64,
) -> Result<WerResult> {
    let (cost, assignment) = orc_distance_limited(refset, hypset, costs, memory_limit_bytes)?;
    let (counts, replayed) = assignment_counts(refset, hypset, &assignment, costs)?;
    debug_assert_eq!(
        replayed, cost,
        "assignment replay must reproduce the DP cost"
    );
    Ok(WerResult::new(counts, assignment))
}
