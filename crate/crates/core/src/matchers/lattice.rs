//! The constrained multi-dimensional Levenshtein lattice shared by the MIMO
//! and ORC solvers.
//!
//! A lattice node is a per-speaker utterance-progress vector; each node
//! carries a C-dimensional grid of costs over hypothesis word positions.
//! Relaxing an edge consumes the next utterance of one speaker on one
//! channel by running a two-dimensional Levenshtein block along that
//! channel's axis while all other channel positions are carried through
//! unchanged. Because a change token precedes every utterance, the active
//! (speaker, channel) pair may be re-chosen freely at every edge, so
//! keeping one tensor slice per pair would be redundant: the slices
//! collapse into their pointwise minimum and the pair lives on edges
//! rather than in node keys.
//!
//! Nodes are visited topologically by total utterances consumed, then
//! lexicographically, so every layer is final before it is read.

use crate::error::{MevalError, Result};
use crate::types::CostConfig;

const INF: u32 = u32::MAX;

/// Interned word symbol. The change token needs no symbol: it is implicit in
/// the utterance boundaries the lattice operates on.
pub(crate) type Symbol = u32;

#[derive(Clone, Copy)]
struct Costs32 {
    correct: u32,
    substitution: u32,
    insertion: u32,
    deletion: u32,
}

impl Costs32 {
    fn sub_or_correct(&self, eq: bool) -> u32 {
        if eq { self.correct } else { self.substitution }
    }
}

pub(crate) struct LatticeSolution {
    pub cost: u64,
    /// (speaker index, utterance index within speaker, channel index), in
    /// consumption order.
    pub decisions: Vec<(usize, usize, usize)>,
}

/// Memory needed by the lattice according to the documented budget formula
/// `prod(U_k + 1) * K * C * prod(|H_c| + 1)` cells of 4 bytes.
pub(crate) fn lattice_bytes(ref_utts: &[Vec<Vec<Symbol>>], hyps: &[Vec<Symbol>]) -> u128 {
    let g: u128 = ref_utts.iter().map(|u| u.len() as u128 + 1).product();
    let h: u128 = hyps.iter().map(|h| h.len() as u128 + 1).product();
    let k = ref_utts.len().max(1) as u128;
    let c = hyps.len().max(1) as u128;
    g * k * c * h * 4
}

/// Solve the constrained assignment problem: minimal edit cost over all
/// utterance-to-channel assignments that preserve per-speaker utterance
/// order and keep every utterance contiguous on one channel.
pub(crate) fn solve(
    ref_utts: &[Vec<Vec<Symbol>>],
    hyps: &[Vec<Symbol>],
    costs: &CostConfig,
    memory_limit_bytes: u64,
) -> Result<LatticeSolution> {
    let k = ref_utts.len();
    let c = hyps.len();
    assert!(c >= 1, "lattice requires at least one hypothesis channel");

    let bytes = lattice_bytes(ref_utts, hyps);
    if bytes > memory_limit_bytes as u128 {
        return Err(MevalError::InstanceTooLarge {
            bytes,
            limit: memory_limit_bytes,
        });
    }

    let ref_words: u128 = ref_utts
        .iter()
        .flat_map(|u| u.iter())
        .map(|u| u.len() as u128)
        .sum();
    let hyp_words: u128 = hyps.iter().map(|h| h.len() as u128).sum();
    let max_cost = costs
        .correct
        .max(costs.substitution)
        .max(costs.insertion)
        .max(costs.deletion) as u128;
    if (ref_words + hyp_words) * max_cost >= INF as u128 {
        return Err(MevalError::InvalidCosts(
            "worst-case edit cost exceeds the 32-bit lattice cell range".to_string(),
        ));
    }

    let costs32 = Costs32 {
        correct: costs.correct,
        substitution: costs.substitution,
        insertion: costs.insertion,
        deletion: costs.deletion,
    };

    let gdims: Vec<usize> = ref_utts.iter().map(|u| u.len() + 1).collect();
    let hdims: Vec<usize> = hyps.iter().map(|h| h.len() + 1).collect();
    let layer_total: usize = gdims.iter().product();
    let grid_len: usize = hdims.iter().product();
    let gstrides = strides(&gdims);
    let hstrides = strides(&hdims);

    // Group progress vectors by total utterances consumed; within a level
    // the linear index order is the lexicographic order.
    let total_utts: usize = ref_utts.iter().map(|u| u.len()).sum();
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); total_utts + 1];
    {
        let mut gvec = vec![0usize; k];
        for idx in 0..layer_total {
            if idx > 0 {
                advance(&mut gvec, &gdims);
            }
            levels[gvec.iter().sum::<usize>()].push(idx);
        }
    }

    // Start layer: cost 0 at the origin, pure insertions along the faces.
    let mut layers: Vec<Option<Vec<u32>>> = vec![None; layer_total];
    {
        let mut start = vec![0u32; grid_len];
        let mut hvec = vec![0usize; c];
        for cell in start.iter_mut().skip(1) {
            advance(&mut hvec, &hdims);
            *cell = hvec.iter().sum::<usize>() as u32 * costs32.insertion;
        }
        layers[0] = Some(start);
    }

    let max_hdim = hdims.iter().copied().max().unwrap_or(1);
    let mut row = vec![0u32; max_hdim];
    let mut next = vec![0u32; max_hdim];

    // The last level has no outgoing edges.
    for level in levels.iter().take(total_utts) {
        for &g in level {
            let gvec = decode(g, &gdims);
            let (left, right) = layers.split_at_mut(g + 1);
            let src = left[g].as_ref().expect("source layer must be filled");
            for speaker in 0..k {
                if gvec[speaker] >= ref_utts[speaker].len() {
                    continue;
                }
                let utt = &ref_utts[speaker][gvec[speaker]];
                let dest = right[g + gstrides[speaker] - (g + 1)]
                    .get_or_insert_with(|| vec![INF; grid_len]);
                for channel in 0..c {
                    relax_edge(
                        src,
                        dest,
                        utt,
                        &hyps[channel],
                        hstrides[channel],
                        &costs32,
                        &mut row,
                        &mut next,
                    );
                }
            }
        }
    }

    // Final sweep: remaining hypothesis words on every channel are trailing
    // insertions (end-of-utterance is an implicit switch point).
    let full = layer_total - 1;
    let final_grid = layers[full].as_ref().expect("full-progress layer");
    let ins = costs32.insertion as u64;
    let mut best = u64::MAX;
    let mut best_cell = 0usize;
    {
        let mut hvec = vec![0usize; c];
        for (cell, &v) in final_grid.iter().enumerate() {
            if cell > 0 {
                advance(&mut hvec, &hdims);
            }
            if v == INF {
                continue;
            }
            let trailing: u64 = (0..c).map(|b| (hdims[b] - 1 - hvec[b]) as u64 * ins).sum();
            let total = v as u64 + trailing;
            if total < best {
                best = total;
                best_cell = cell;
            }
        }
    }
    debug_assert_ne!(best, u64::MAX);

    // Backtrack. Scan candidate predecessor edges preferring lower channel
    // index, then lower speaker index; the first edge whose block reproduces
    // the cell value is taken.
    let mut decisions = Vec::with_capacity(total_utts);
    let mut gvec = decode(full, &gdims);
    let mut g = full;
    let mut hpos = decode(best_cell, &hdims);
    let mut value = layers[full].as_ref().unwrap()[best_cell];
    let mut line = vec![0u32; max_hdim];

    while g != 0 {
        let mut found = false;
        'search: for channel in 0..c {
            for speaker in 0..k {
                if gvec[speaker] == 0 {
                    continue;
                }
                let src_idx = g - gstrides[speaker];
                let src = layers[src_idx].as_ref().expect("predecessor layer");
                let stride = hstrides[channel];
                let dim = hdims[channel];
                let base = cell_index(&hpos, &hstrides) - hpos[channel] * stride;
                for (t, slot) in line[..dim].iter_mut().enumerate() {
                    *slot = src[base + t * stride];
                }
                let utt = &ref_utts[speaker][gvec[speaker] - 1];
                if let Some((source_pos, source_value)) = backtrack_block_line(
                    &line[..dim],
                    utt,
                    &hyps[channel],
                    hpos[channel],
                    value,
                    &costs32,
                ) {
                    decisions.push((speaker, gvec[speaker] - 1, channel));
                    gvec[speaker] -= 1;
                    g = src_idx;
                    hpos[channel] = source_pos;
                    value = source_value;
                    found = true;
                    break 'search;
                }
            }
        }
        assert!(found, "lattice backtracking found no predecessor");
    }
    debug_assert_eq!(
        value as u64,
        hpos.iter().sum::<usize>() as u64 * costs32.insertion as u64
    );
    decisions.reverse();

    Ok(LatticeSolution {
        cost: best,
        decisions,
    })
}

/// Relax one edge: run the utterance against one channel for every grid line
/// along that channel's axis, taking the pointwise minimum into `dest`.
#[allow(clippy::too_many_arguments)]
fn relax_edge(
    src: &[u32],
    dest: &mut [u32],
    utt: &[Symbol],
    hyp: &[Symbol],
    stride: usize,
    costs: &Costs32,
    row: &mut [u32],
    next: &mut [u32],
) {
    let d = hyp.len() + 1;
    let chunk = stride * d;
    let mut block_start = 0;
    while block_start < src.len() {
        for offset in 0..stride {
            let base = block_start + offset;
            for t in 0..d {
                row[t] = src[base + t * stride];
            }
            // Deferred insertions on this channel may precede the utterance.
            for t in 1..d {
                row[t] = row[t].min(row[t - 1].saturating_add(costs.insertion));
            }
            for &w in utt {
                next[0] = row[0].saturating_add(costs.deletion);
                for t in 1..d {
                    let cs = costs.sub_or_correct(w == hyp[t - 1]);
                    next[t] = row[t - 1]
                        .saturating_add(cs)
                        .min(row[t].saturating_add(costs.deletion))
                        .min(next[t - 1].saturating_add(costs.insertion));
                }
                row[..d].swap_with_slice(&mut next[..d]);
            }
            for (t, &value) in row[..d].iter().enumerate() {
                let cell = base + t * stride;
                if value < dest[cell] {
                    dest[cell] = value;
                }
            }
        }
        block_start += chunk;
    }
}

/// Recompute one block line and, if it reaches `target_value` at
/// `target_pos`, trace the path back to its source cell on the line.
/// Ties break diagonal over delete over insert, and prefer entering the
/// source cell directly over arriving through leading insertions.
fn backtrack_block_line(
    line: &[u32],
    utt: &[Symbol],
    hyp: &[Symbol],
    target_pos: usize,
    target_value: u32,
    costs: &Costs32,
) -> Option<(usize, u32)> {
    let d = line.len();
    let l = utt.len();
    let mut rows = vec![vec![0u32; d]; l + 1];
    let mut origin = vec![0usize; d];
    rows[0][0] = line[0];
    for t in 1..d {
        let via_insert = rows[0][t - 1].saturating_add(costs.insertion);
        if line[t] <= via_insert {
            rows[0][t] = line[t];
            origin[t] = t;
        } else {
            rows[0][t] = via_insert;
            origin[t] = origin[t - 1];
        }
    }
    for i in 1..=l {
        rows[i][0] = rows[i - 1][0].saturating_add(costs.deletion);
        for t in 1..d {
            let cs = costs.sub_or_correct(utt[i - 1] == hyp[t - 1]);
            rows[i][t] = rows[i - 1][t - 1]
                .saturating_add(cs)
                .min(rows[i - 1][t].saturating_add(costs.deletion))
                .min(rows[i][t - 1].saturating_add(costs.insertion));
        }
    }
    if rows[l][target_pos] != target_value {
        return None;
    }

    let (mut i, mut t) = (l, target_pos);
    while i > 0 {
        let here = rows[i][t];
        if t > 0 {
            let cs = costs.sub_or_correct(utt[i - 1] == hyp[t - 1]);
            if rows[i - 1][t - 1].saturating_add(cs) == here {
                i -= 1;
                t -= 1;
                continue;
            }
        }
        if rows[i - 1][t].saturating_add(costs.deletion) == here {
            i -= 1;
            continue;
        }
        debug_assert!(t > 0 && rows[i][t - 1].saturating_add(costs.insertion) == here);
        t -= 1;
    }
    let source = origin[t];
    Some((source, line[source]))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for d in (0..dims.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * dims[d + 1];
    }
    strides
}

fn advance(index: &mut [usize], dims: &[usize]) {
    for d in (0..dims.len()).rev() {
        index[d] += 1;
        if index[d] < dims[d] {
            return;
        }
        index[d] = 0;
    }
}

fn decode(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for d in (0..dims.len()).rev() {
        out[d] = idx % dims[d];
        idx /= dims[d];
    }
    out
}

fn cell_index(index: &[usize], strides: &[usize]) -> usize {
    index.iter().zip(strides).map(|(&i, &s)| i * s).sum()
}
