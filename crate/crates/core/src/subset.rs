//! Index subsets and the deterministic parallel enumeration used by the
//! exhaustive searches.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A strictly increasing list of zero-based frame indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetId(Vec<usize>);

impl SubsetId {
    /// Validates strict increase. Range checks happen against a concrete
    /// family in [`SubsetId::check_within`].
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSubset);
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates arbitrary indices.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn full(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubsetId) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Indices of `0..len` not in this subset.
    pub fn complement(&self, len: usize) -> SubsetId {
        SubsetId((0..len).filter(|&i| !self.contains(i)).collect())
    }

    pub fn union(&self, other: &SubsetId) -> SubsetId {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        Self::from_unsorted(all)
    }

    pub fn check_within(&self, len: usize) -> Result<()> {
        match self.0.last() {
            Some(&index) if index >= len => Err(Error::IndexOutOfRange { index, len }),
            _ => Ok(()),
        }
    }
}

/// Size-then-lexicographic order on index sets.
pub(crate) fn canonical_cmp(a: &SubsetId, b: &SubsetId) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0))
}

/// Relative gap under which two scores are treated as tied.
pub(crate) const TIE_TOL: f64 = 1e-12;

pub(crate) fn scores_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Number of work items handed to one rayon task. Fixed so the reduction
/// tree, and therefore every tie-break, is independent of thread count.
pub(crate) const CHUNK: usize = 256;

/// Evaluates `score` over `items` in parallel and returns the best
/// `(item, score)` under `better`, reducing chunk results in input order.
pub(crate) fn best_of<T, F, B>(items: &[T], score: F, better: B) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> Option<f64> + Sync,
    B: Fn((usize, f64), (usize, f64)) -> bool + Sync,
{
    let pick = |acc: Option<(usize, f64)>, cand: Option<(usize, f64)>| match (acc, cand) {
        (None, c) => c,
        (a, None) => a,
        (Some(a), Some(c)) => Some(if better(c, a) { c } else { a }),
    };
    let per_chunk: Vec<Option<(usize, f64)>> = items
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            chunk.iter().enumerate().fold(None, |acc, (k, item)| {
                pick(acc, score(item).map(|s| (ci * CHUNK + k, s)))
            })
        })
        .collect();
    per_chunk.into_iter().fold(None, pick)
}

/// All `k`-element subsets of `0..n` as bitmasks, in lexicographic order of
/// their index lists. Requires `n <= 64`.
pub(crate) fn combination_masks(n: usize, k: usize) -> Vec<u64> {
    combinations(n, k)
        .into_iter()
        .map(|s| s.0.iter().fold(0u64, |m, &i| m | 1 << i))
        .collect()
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<SubsetId> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(SubsetId(idx.clone()));
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
