//! Brute-force reference implementations of the three solvers.
//!
//! Exponential by design: flat enumeration with full rescoring of every
//! candidate, no shared state with the DP paths beyond the two-dimensional
//! distance. Used to validate the solvers on small instances and exposed
//! through the CLI (`--method brute-force`) for auditing.

use crate::error::{MevalError, Result};
use crate::levenshtein::distance;
use crate::matchers::{intern, merged_reference_order, pairwise_distances};
use crate::types::{Assignment, CostConfig, Decision, HypothesisSet, ReferenceSet};

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 20;

fn check_limit(count: Option<u128>, limit: u64) -> Result<()> {
    let count = count.unwrap_or(u128::MAX);
    if count > limit as u128 {
        return Err(MevalError::EnumerationLimit { count, limit });
    }
    Ok(())
}

/// Score one candidate: per-channel distance of the concatenated assigned
/// utterances against the channel words, summed over channels.
fn score_candidate(
    utterances: &[&Vec<u32>],
    channel_of: &[usize],
    hyps: &[Vec<u32>],
    costs: &CostConfig,
) -> u64 {
    (0..hyps.len())
        .map(|c| {
            let concatenated: Vec<u32> = utterances
                .iter()
                .zip(channel_of)
                .filter(|&(_, &ch)| ch == c)
                .flat_map(|(u, _)| u.iter().copied())
                .collect();
            distance(&concatenated, &hyps[c], costs)
        })
        .sum()
}

/// Enumerate all C^U channel assignments of the merged utterance sequence.
pub fn brute_force_orc(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<(u64, Assignment)> {
    brute_force_orc_limited(refset, hypset, costs, DEFAULT_ENUMERATION_LIMIT)
}

/// [`brute_force_orc`] with an explicit enumeration limit.
pub fn brute_force_orc_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    limit: u64,
) -> Result<(u64, Assignment)> {
    let order = merged_reference_order(refset)?;
    let session = intern(refset, hypset);
    let utterances: Vec<&Vec<u32>> = order
        .iter()
        .map(|&(k, i)| &session.ref_utts[k][i])
        .collect();
    let c = session.hyps.len();
    let u = utterances.len();

    if c == 0 {
        let cost = refset.word_count() as u64 * costs.deletion as u64;
        let decisions = order
            .iter()
            .map(|&(k, i)| decision(refset, hypset, k, i, None))
            .collect();
        return Ok((cost, Assignment::new(decisions)));
    }
    check_limit((c as u128).checked_pow(u as u32), limit)?;

    let mut channel_of = vec![0usize; u];
    let mut best_cost = u64::MAX;
    let mut best = channel_of.clone();
    loop {
        let cost = score_candidate(&utterances, &channel_of, &session.hyps, costs);
        if cost < best_cost {
            best_cost = cost;
            best.copy_from_slice(&channel_of);
        }
        if !next_assignment(&mut channel_of, c) {
            break;
        }
    }

    let decisions = order
        .iter()
        .zip(&best)
        .map(|(&(k, i), &ch)| decision(refset, hypset, k, i, Some(ch)))
        .collect();
    Ok((best_cost, Assignment::new(decisions)))
}

/// Enumerate all order-preserving cross-speaker interleavings crossed with
/// all channel assignments.
pub fn brute_force_mimo(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<(u64, Assignment)> {
    brute_force_mimo_limited(refset, hypset, costs, DEFAULT_ENUMERATION_LIMIT)
}

/// [`brute_force_mimo`] with an explicit enumeration limit.
pub fn brute_force_mimo_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    limit: u64,
) -> Result<(u64, Assignment)> {
    let session = intern(refset, hypset);
    let c = session.hyps.len();
    let counts: Vec<usize> = session.ref_utts.iter().map(|u| u.len()).collect();
    let u: usize = counts.iter().sum();

    if c == 0 {
        let cost = refset.word_count() as u64 * costs.deletion as u64;
        let decisions = refset
            .speakers()
            .iter()
            .enumerate()
            .flat_map(|(k, spk)| (0..spk.utterances().len()).map(move |i| (k, i)))
            .map(|(k, i)| decision(refset, hypset, k, i, None))
            .collect();
        return Ok((cost, Assignment::new(decisions)));
    }

    let candidates =
        interleaving_count(&counts).and_then(|n| n.checked_mul((c as u128).pow(u as u32)));
    check_limit(candidates, limit)?;

    let mut interleavings = Vec::new();
    enumerate_interleavings(
        &counts,
        &mut vec![0; counts.len()],
        &mut Vec::new(),
        &mut |seq| {
            interleavings.push(seq.to_vec());
        },
    );

    type Candidate = (Vec<(usize, usize)>, Vec<usize>);
    let mut best_cost = u64::MAX;
    let mut best: Option<Candidate> = None;
    for order in &interleavings {
        let utterances: Vec<&Vec<u32>> = order
            .iter()
            .map(|&(k, i)| &session.ref_utts[k][i])
            .collect();
        let mut channel_of = vec![0usize; u];
        loop {
            let cost = score_candidate(&utterances, &channel_of, &session.hyps, costs);
            if cost < best_cost {
                best_cost = cost;
                best = Some((order.clone(), channel_of.clone()));
            }
            if !next_assignment(&mut channel_of, c) {
                break;
            }
        }
    }

    let (order, channels) = best.expect("at least one candidate exists");
    let decisions = order
        .iter()
        .zip(&channels)
        .map(|(&(k, i), &ch)| decision(refset, hypset, k, i, Some(ch)))
        .collect();
    Ok((best_cost, Assignment::new(decisions)))
}

/// Enumerate all bijections over the padded pairwise-distance matrix.
/// Returns the minimal summed cost and the winning permutation
/// (`permutation[row] = column`).
pub fn brute_force_cp(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
) -> Result<(u64, Vec<usize>)> {
    brute_force_cp_limited(refset, hypset, costs, DEFAULT_ENUMERATION_LIMIT)
}

/// [`brute_force_cp`] with an explicit enumeration limit.
pub fn brute_force_cp_limited(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    costs: &CostConfig,
    limit: u64,
) -> Result<(u64, Vec<usize>)> {
    let matrix = pairwise_distances(refset, hypset, costs);
    let n = matrix.len();
    check_limit(factorial(n), limit)?;

    let mut best_cost = u64::MAX;
    let mut best = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    permute(
        &matrix,
        &mut current,
        &mut used,
        0,
        &mut best_cost,
        &mut best,
    );
    Ok((best_cost, best))
}

fn decision(
    refset: &ReferenceSet,
    hypset: &HypothesisSet,
    speaker: usize,
    utterance: usize,
    channel: Option<usize>,
) -> Decision {
    Decision {
        speaker: refset.speakers()[speaker].label().to_string(),
        utterance,
        channel: channel.map(|c| hypset.channels()[c].label().to_string()),
    }
}

/// Advance a base-`c` odometer; false once it wraps around.
fn next_assignment(channel_of: &mut [usize], c: usize) -> bool {
    for digit in (0..channel_of.len()).rev() {
        channel_of[digit] += 1;
        if channel_of[digit] < c {
            return true;
        }
        channel_of[digit] = 0;
    }
    false
}

/// Number of order-preserving interleavings: the multinomial coefficient.
fn interleaving_count(counts: &[usize]) -> Option<u128> {
    let mut total = 0u128;
    let mut result = 1u128;
    for &n in counts {
        for i in 1..=n as u128 {
            total += 1;
            result = result.checked_mul(total)?;
            result /= i; // exact: result accumulates binomial coefficients
        }
    }
    Some(result)
}

fn enumerate_interleavings(
    counts: &[usize],
    progress: &mut Vec<usize>,
    sequence: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    if progress.iter().zip(counts).all(|(p, c)| p == c) {
        emit(sequence);
        return;
    }
    for k in 0..counts.len() {
        if progress[k] < counts[k] {
            sequence.push((k, progress[k]));
            progress[k] += 1;
            enumerate_interleavings(counts, progress, sequence, emit);
            progress[k] -= 1;
            sequence.pop();
        }
    }
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, u128::checked_mul)
}

fn permute(
    matrix: &[Vec<u64>],
    current: &mut Vec<usize>,
    used: &mut [bool],
    acc: u64,
    best_cost: &mut u64,
    best: &mut Vec<usize>,
) {
    let n = matrix.len();
    if current.len() == n {
        if acc < *best_cost {
            *best_cost = acc;
            *best = current.clone();
        }
        return;
    }
    // Lexicographic enumeration keeps the winner canonical among ties.
    let row = current.len();
    for col in 0..n {
        if used[col] {
            continue;
        }
        used[col] = true;
        current.push(col);
        permute(
            matrix,
            current,
            used,
            acc + matrix[row][col],
            best_cost,
            best,
        );
        current.pop();
        used[col] = false;
    }
}
