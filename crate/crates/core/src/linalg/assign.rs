use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::Complex64;

/// Optimal one-to-one pairing between two equally sized complex multisets.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `pairs[i]` is the index in the second set matched to element `i` of the first.
    pub pairs: Vec<usize>,
    /// Largest `|a_i - b_pairs[i]|`.
    pub max_distance: f64,
    pub total_distance: f64,
}

/// Minimum-total-distance bipartite matching (Hungarian algorithm, O(n^3)).
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> Result<Matching> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(Matching {
            pairs: Vec::new(),
            max_distance: 0.0,
            total_distance: 0.0,
        });
    }
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();

    // 1-based potentials; column 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs = vec![0usize; n];
    for j in 1..=n {
        pairs[owner[j] - 1] = j - 1;
    }
    let (max_distance, total_distance) = pairs
        .iter()
        .enumerate()
        .map(|(i, &j)| cost(i, j))
        .fold((0.0f64, 0.0), |(m, s), d| (m.max(d), s + d));
    Ok(Matching {
        pairs,
        max_distance,
        total_distance,
    })
}
