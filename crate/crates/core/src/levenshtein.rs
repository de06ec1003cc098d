//! Levenshtein distance between word sequences: the two-dimensional dynamic
//! program with alignment backtracking, and its unconstrained
//! multi-dimensional generalization over several reference and hypothesis
//! sequences.
//!
//! The two-dimensional routines are the hot path of every solver; the
//! multi-dimensional tensor is exponential in the number of sequences and
//! serves as a building block and test oracle only.

use crate::error::{MevalError, Result};
use crate::types::{CostConfig, ErrorCounts};

/// Default state budget for [`multidim_distance`]: the dense tensor refuses
/// to allocate more than this many cells.
pub const DEFAULT_TENSOR_STATE_BUDGET: u64 = 100_000_000;

/// Kind of a single edit operation in an alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOpKind {
    Correct,
    Substitute,
    Insert,
    Delete,
}

/// One edit operation with its 1-based positions. `ref_pos` is `None` for
/// insertions, `hyp_pos` is `None` for deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditOp {
    pub kind: EditOpKind,
    pub ref_pos: Option<usize>,
    pub hyp_pos: Option<usize>,
}

/// An optimal alignment between a reference and a hypothesis, obtained by
/// backtracking through the distance matrix.
///
/// The reference positions of correct/substitute/delete ops enumerate `1..=n`
/// exactly once in order, the hypothesis positions of correct/substitute/
/// insert ops enumerate `1..=m` exactly once in order, and the summed
/// operation cost equals the distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    ops: Vec<EditOp>,
}

impl Alignment {
    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    /// Summed cost of the operations under `costs`.
    pub fn total_cost(&self, costs: &CostConfig) -> u64 {
        self.ops
            .iter()
            .map(|op| match op.kind {
                EditOpKind::Correct => costs.correct as u64,
                EditOpKind::Substitute => costs.substitution as u64,
                EditOpKind::Insert => costs.insertion as u64,
                EditOpKind::Delete => costs.deletion as u64,
            })
            .sum()
    }

    fn tally(&self, ref_length: u64) -> ErrorCounts {
        let mut counts = ErrorCounts {
            ref_length,
            ..Default::default()
        };
        for op in &self.ops {
            match op.kind {
                EditOpKind::Correct => counts.correct += 1,
                EditOpKind::Substitute => counts.substitutions += 1,
                EditOpKind::Insert => counts.insertions += 1,
                EditOpKind::Delete => counts.deletions += 1,
            }
        }
        counts
    }
}

fn sub_or_correct(eq: bool, costs: &CostConfig) -> u64 {
    if eq {
        costs.correct as u64
    } else {
        costs.substitution as u64
    }
}

/// Minimal edit cost between two sequences. With unit costs this is the
/// classic Levenshtein distance. Runs in O(n·m) time and O(min(n, m)++)
/// memory via two rolling rows.
pub fn distance<T: Eq>(reference: &[T], hypothesis: &[T], costs: &CostConfig) -> u64 {
    let n = reference.len();
    let m = hypothesis.len();
    let ins = costs.insertion as u64;
    let del = costs.deletion as u64;

    let mut prev: Vec<u64> = (0..=m as u64).map(|j| j * ins).collect();
    let mut curr = vec![0u64; m + 1];

    for i in 1..=n {
        curr[0] = i as u64 * del;
        for j in 1..=m {
            let cs = sub_or_correct(reference[i - 1] == hypothesis[j - 1], costs);
            curr[j] = (prev[j - 1] + cs).min(prev[j] + del).min(curr[j - 1] + ins);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[m]
}

/// Like [`distance`], but additionally backtracks one optimal alignment and
/// tallies it into error counts.
///
/// Ties break deterministically: correct/substitute (diagonal) over delete
/// over insert.
pub fn distance_with_counts<T: Eq>(
    reference: &[T],
    hypothesis: &[T],
    costs: &CostConfig,
) -> (u64, ErrorCounts, Alignment) {
    let n = reference.len();
    let m = hypothesis.len();
    let ins = costs.insertion as u64;
    let del = costs.deletion as u64;

    // Full matrix, row-major: matrix[i * (m + 1) + j].
    let w = m + 1;
    let mut matrix = vec![0u64; (n + 1) * w];
    for (j, cell) in matrix[..w].iter_mut().enumerate() {
        *cell = j as u64 * ins;
    }
    for i in 1..=n {
        matrix[i * w] = i as u64 * del;
        for j in 1..=m {
            let cs = sub_or_correct(reference[i - 1] == hypothesis[j - 1], costs);
            matrix[i * w + j] = (matrix[(i - 1) * w + j - 1] + cs)
                .min(matrix[(i - 1) * w + j] + del)
                .min(matrix[i * w + j - 1] + ins);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = matrix[i * w + j];
        if i > 0 && j > 0 {
            let eq = reference[i - 1] == hypothesis[j - 1];
            if matrix[(i - 1) * w + j - 1] + sub_or_correct(eq, costs) == here {
                ops.push(EditOp {
                    kind: if eq {
                        EditOpKind::Correct
                    } else {
                        EditOpKind::Substitute
                    },
                    ref_pos: Some(i),
                    hyp_pos: Some(j),
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && matrix[(i - 1) * w + j] + del == here {
            ops.push(EditOp {
                kind: EditOpKind::Delete,
                ref_pos: Some(i),
                hyp_pos: None,
            });
            i -= 1;
            continue;
        }
        ops.push(EditOp {
            kind: EditOpKind::Insert,
            ref_pos: None,
            hyp_pos: Some(j),
        });
        j -= 1;
    }
    ops.reverse();

    let alignment = Alignment { ops };
    let counts = alignment.tally(n as u64);
    let cost = matrix[n * w + m];
    debug_assert_eq!(alignment.total_cost(costs), cost);
    (cost, counts, alignment)
}

/// Minimal cost over all interleavings of K reference sequences matched
/// against all interleavings of C hypothesis sequences, preserving
/// within-sequence order. Equals [`distance`] when K = C = 1.
///
/// Dense tensor sweep with the default state budget of
/// [`DEFAULT_TENSOR_STATE_BUDGET`]; exponential in K and C.
pub fn multidim_distance<T: Eq>(
    references: &[Vec<T>],
    hypotheses: &[Vec<T>],
    costs: &CostConfig,
) -> Result<u64> {
    multidim_distance_limited(references, hypotheses, costs, DEFAULT_TENSOR_STATE_BUDGET)
}

/// [`multidim_distance`] with an explicit state budget.
pub fn multidim_distance_limited<T: Eq>(
    references: &[Vec<T>],
    hypotheses: &[Vec<T>],
    costs: &CostConfig,
    state_budget: u64,
) -> Result<u64> {
    assert!(
        !references.is_empty() && !hypotheses.is_empty(),
        "multidim_distance requires K >= 1 and C >= 1"
    );

    let dims: Vec<usize> = references
        .iter()
        .map(|r| r.len() + 1)
        .chain(hypotheses.iter().map(|h| h.len() + 1))
        .collect();
    let states: u128 = dims.iter().map(|&d| d as u128).product();
    if states > state_budget as u128 {
        return Err(MevalError::BudgetExceeded {
            states,
            limit: state_budget,
        });
    }

    let k = references.len();
    let c = hypotheses.len();
    let total = states as usize;

    // Row-major strides, last dimension fastest.
    let mut strides = vec![1usize; dims.len()];
    for d in (0..dims.len() - 1).rev() {
        strides[d] = strides[d + 1] * dims[d + 1];
    }

    let ins = costs.insertion as u64;
    let del = costs.deletion as u64;

    let mut tensor = vec![0u64; total];
    // Odometer over the multi-index; lexicographic order visits every
    // predecessor before its successors.
    let mut index = vec![0usize; dims.len()];
    for cell in 1..total {
        // Advance the odometer.
        for d in (0..dims.len()).rev() {
            index[d] += 1;
            if index[d] < dims[d] {
                break;
            }
            index[d] = 0;
        }

        let mut best = u64::MAX;
        for a in 0..k {
            let ra = index[a];
            if ra == 0 {
                continue;
            }
            // Deletion of reference word.
            best = best.min(tensor[cell - strides[a]] + del);
            for b in 0..c {
                let hb = index[k + b];
                if hb == 0 {
                    continue;
                }
                let eq = references[a][ra - 1] == hypotheses[b][hb - 1];
                best = best
                    .min(tensor[cell - strides[a] - strides[k + b]] + sub_or_correct(eq, costs));
            }
        }
        for b in 0..c {
            if index[k + b] == 0 {
                continue;
            }
            best = best.min(tensor[cell - strides[k + b]] + ins);
        }
        tensor[cell] = best;
    }

    Ok(tensor[total - 1])
}
