//! Square assignment-problem solver (Kuhn-Munkres with potentials), O(n^3).
//!
//! Used by the cpWER to pick the speaker-to-channel permutation with minimal
//! summed pairwise distance. Exact on integers; cross-checked against
//! factorial enumeration by the oracle tests.

/// Minimize the total cost of a perfect matching on a square matrix.
/// Returns `assignment[row] = column`. An empty matrix yields an empty
/// assignment.
pub(crate) fn solve(matrix: &[Vec<u64>]) -> Vec<usize> {
    let n = matrix.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(matrix.iter().all(|row| row.len() == n));

    // 1-indexed arrays with column 0 as the virtual start; p[j] is the row
    // currently matched to column j, 0 meaning unmatched.
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = matrix[i0 - 1][j - 1] as i64 - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}
