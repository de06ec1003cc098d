//! cpWER: concatenated minimum-permutation WER. Each reference speaker is
//! concatenated into one stream and paired with exactly one hypothesis
//! channel by the permutation with minimal summed distance, found with the
//! Hungarian algorithm. The smaller side is padded with empty dummy streams.

use super::{assignment_counts, hungarian};
use crate::error::Result;
use crate::levenshtein::distance;
use crate::types::{
    Assignment, CostConfig, Decision, HypothesisSet, ReferenceSet, WerResult, Word,
};

/// Square matrix of pairwise distances between concatenated speaker streams
/// (rows) and channel streams (columns), padded with empty streams to
/// `max(K, C)`. Dummy rows and columns carry pure insertion and deletion
/// costs respectively.
pub fn pairwise_distances(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Vec<Vec<u64>> {
    let k = refset.speaker_count();
    let c = hypset.channel_count();
    let n = k.max(c);

    let speaker_words: Vec<Vec<&Word>> = (0..n)
        .map(|i| {
            if i < k {
                refset.speakers()[i]
                    .utterances()
                    .iter()
                    .flat_map(|u| u.words().iter())
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let channel_words: Vec<Vec<&Word>> = (0..n)
        .map(|j| {
            if j < c {
                hypset.channels()[j].words().iter().collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    speaker_words
        .iter()
        .map(|row| {
            channel_words
                .iter()
                .map(|col| distance(row, col, costs))
                .collect()
        })
        .collect()
}

/// Expand a speaker-to-column permutation over the padded matrix into
/// per-utterance decisions. Columns beyond the real channel count are dummy
/// pairings and record `channel: None`.
pub fn permutation_assignment(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    permutation: &[usize],
) -> Assignment {
    let c = hypset.channel_count();
    let mut decisions = Vec::with_capacity(refset.utterance_count());
    for (i, spk) in refset.speakers().iter().enumerate() {
        let channel = match permutation[i] {
            j if j < c => Some(hypset.channels()[j].label().to_string()),
            _ => None,
        };
        for utterance in 0..spk.utterances().len() {
            decisions.push(Decision {
                speaker: spk.label().to_string(),
                utterance,
                channel: channel.clone(),
            });
        }
    }
    Assignment::new(decisions)
}

/// cpWER over the optimal speaker-to-channel bijection. Dummy pairings are
/// recorded with `channel: None`; hypothesis channels left unmatched count
/// as pure insertions.
pub fn cp_wer(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<WerResult> {
    let matrix = pairwise_distances(refset, hypset, costs);
    let permutation = hungarian::solve(&matrix);
    let assignment = permutation_assignment(refset, hypset, &permutation);

    let (counts, replayed) = assignment_counts(refset, hypset, &assignment, costs)?;
    debug_assert_eq!(
        replayed,
        permutation
            .iter()
            .enumerate()
            .map(|(i, &j)| matrix[i][j])
            .sum::<u64>(),
        "winning permutation must replay to the Hungarian total"
    );
    Ok(WerResult::new(counts, assignment))
}
