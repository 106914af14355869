//! Riesz-basis extraction from redundant frames.
//!
//! Three strategies pick `rank(F)` independent vectors: exhaustive search
//! for the best smallest Gram eigenvalue, a greedy lookahead, and the
//! projection scheme that seeds with a few vectors, projects the rest onto
//! the orthogonal complement of the seed, extracts there, and completes
//! with the seed.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{projector_onto_span, sym_eigen, Mat, TolerancePolicy, Vector};
use crate::subset::{best_of, binomial, combinations, scores_tie, SubsetId};

/// Largest number of candidate subsets the exhaustive strategy will scan.
pub const EXHAUSTIVE_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Greedy,
    /// Projection with a greedy seed of `seed_size` vectors
    /// (default `min(2, rank)`).
    Projection {
        seed_size: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Exhaustive,
    Greedy,
    Projection,
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Exhaustive => StrategyKind::Exhaustive,
            Strategy::Greedy => StrategyKind::Greedy,
            Strategy::Projection { .. } => StrategyKind::Projection,
        }
    }
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StrategyKind::Exhaustive => "exhaustive",
            StrategyKind::Greedy => "greedy",
            StrategyKind::Projection => "projection",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    /// Independent subset of size `rank(F)`.
    pub selected: SubsetId,
    pub riesz_lower: f64,
    pub riesz_upper: f64,
    pub strategy: StrategyKind,
    /// Seed vectors appended in the completion step (projection only).
    pub completed_with: SubsetId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationCertificate {
    /// `pairing[i]` is the reference vector matched with frame vector `i`.
    pub pairing: Vec<usize>,
    /// `sum_i ||f_i - e_pairing[i]||^2`
    pub mu: f64,
    /// `mu < 1`
    pub certified: bool,
    /// Independent Riesz-basis check, run only when certified.
    pub riesz_confirmed: Option<bool>,
}

/// Extreme Gram eigenvalues of the subfamily at `subset`.
///
/// A dependent subfamily is rejected with a unit null combination (the
/// Gram eigenvector of the smallest eigenvalue).
pub fn riesz_bounds_of_subset(
    frame: &Frame,
    subset: &SubsetId,
    pol: &TolerancePolicy,
) -> Result<(f64, f64)> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_within(frame.len())?;
    let vectors: Vec<&Vector> = subset.indices().iter().map(|&i| frame.vector(i)).collect();
    let eig = sym_eigen(&gram_of(&vectors), pol)?;
    if eig.rank(pol) < subset.len() {
        return Err(Error::Dependent {
            null_combination: eig.vector(0).into_inner(),
        });
    }
    Ok((eig.lambda_min(), eig.lambda_max()))
}

fn gram_of(vectors: &[&Vector]) -> Mat {
    let k = vectors.len();
    let mut g = Mat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = vectors[i].dot(vectors[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Smallest Gram eigenvalue of `vectors[idx]` when the set is independent
/// both relative to its own spectrum and above the absolute `floor`.
fn independent_score(
    vectors: &[Vector],
    idx: &[usize],
    floor: f64,
    pol: &TolerancePolicy,
) -> Option<f64> {
    let picked: Vec<&Vector> = idx.iter().map(|&i| &vectors[i]).collect();
    let eig = sym_eigen(&gram_of(&picked), pol).ok()?;
    let lmin = eig.lambda_min();
    (lmin > eig.cutoff(pol).max(floor)).then_some(lmin)
}

/// Grows `chosen` from `candidates` until it has `target` members, each
/// step adding the candidate that maximizes the smallest Gram eigenvalue
/// (ties to the smaller index).
fn greedy_select(
    vectors: &[Vector],
    candidates: &[usize],
    mut chosen: Vec<usize>,
    target: usize,
    floor: f64,
    pol: &TolerancePolicy,
) -> Result<Vec<usize>> {
    while chosen.len() < target {
        let mut best: Option<(usize, f64)> = None;
        for &i in candidates {
            if chosen.contains(&i) {
                continue;
            }
            let mut trial = chosen.clone();
            trial.push(i);
            let Some(score) = independent_score(vectors, &trial, floor, pol) else {
                continue;
            };
            if best.is_none_or(|(_, b)| score > b && !scores_tie(score, b)) {
                best = Some((i, score));
            }
        }
        match best {
            Some((i, _)) => chosen.push(i),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "no independent extension beyond {} vectors (target {target})",
                    chosen.len()
                )))
            }
        }
    }
    Ok(chosen)
}

/// Extracts an independent subset of size `rank(F)` with the given strategy.
///
/// Every result satisfies `||sum c_i f_i||^2 >= riesz_lower * sum c_i^2`
/// over the selected indices.
pub fn extract(
    frame: &Frame,
    strategy: Strategy,
    pol: &TolerancePolicy,
) -> Result<ExtractionResult> {
    let spectrum = frame.spectrum(pol)?;
    let rank = spectrum.rank(pol);
    if rank == 0 {
        return Err(Error::ZeroSpan);
    }
    let floor = spectrum.cutoff(pol);
    let n = frame.len();
    let all: Vec<usize> = (0..n).collect();
    let vectors = frame.vectors();

    let (selected, completed_with) = match strategy {
        Strategy::Exhaustive => {
            let count = binomial(n, rank);
            if count > EXHAUSTIVE_CAP {
                return Err(Error::TooLarge {
                    requested: count,
                    cap: EXHAUSTIVE_CAP,
                });
            }
            let candidates = combinations(n, rank);
            let larger = |c: (usize, f64), a: (usize, f64)| c.1 > a.1 && !scores_tie(c.1, a.1);
            let score = |s: &SubsetId| independent_score(vectors, s.indices(), floor, pol);
            let (pos, _) = best_of(&candidates, score, larger).ok_or(Error::ZeroSpan)?;
            (candidates[pos].clone(), SubsetId::default())
        }
        Strategy::Greedy => {
            let chosen = greedy_select(vectors, &all, Vec::new(), rank, floor, pol)?;
            (SubsetId::from_unsorted(chosen), SubsetId::default())
        }
        Strategy::Projection { seed_size } => {
            let k = seed_size.unwrap_or(rank.min(2));
            if k > rank {
                return Err(Error::InvalidArgument(format!(
                    "seed size {k} exceeds the rank {rank}"
                )));
            }
            let seed = greedy_select(vectors, &all, Vec::new(), k, floor, pol)?;
            let seed_vectors: Vec<Vector> = seed.iter().map(|&i| vectors[i].clone()).collect();
            let p = projector_onto_span(&seed_vectors, frame.ambient_dim(), pol)?;
            let projected: Vec<Vector> = vectors
                .iter()
                .map(|f| Ok(f.sub(&p.mul_vec(f)?)))
                .collect::<Result<_>>()?;
            let rest: Vec<usize> = all.iter().copied().filter(|i| !seed.contains(i)).collect();
            let tail = greedy_select(&projected, &rest, Vec::new(), rank - k, floor, pol)?;
            let seed = SubsetId::from_unsorted(seed);
            (seed.union(&SubsetId::from_unsorted(tail)), seed)
        }
    };

    let (riesz_lower, riesz_upper) = riesz_bounds_of_subset(frame, &selected, pol)?;
    Ok(ExtractionResult {
        selected,
        riesz_lower,
        riesz_upper,
        strategy: strategy.kind(),
        completed_with,
    })
}

/// Checks `sum_i ||f_i - e_pairing[i]||^2 < 1` against an orthonormal
/// reference system, and when it holds confirms independently that the
/// frame is a Riesz basis.
pub fn perturbation_certificate(
    frame: &Frame,
    reference: &[Vector],
    pairing: &[usize],
    pol: &TolerancePolicy,
) -> Result<PerturbationCertificate> {
    let n = frame.len();
    if reference.len() != n || pairing.len() != n {
        return Err(Error::InvalidPairing);
    }
    let mut seen = vec![false; n];
    for &p in pairing {
        if p >= n || seen[p] {
            return Err(Error::InvalidPairing);
        }
        seen[p] = true;
    }
    if let Some(bad) = reference.iter().find(|e| e.dim() != frame.ambient_dim()) {
        return Err(Error::DimensionMismatch {
            expected: frame.ambient_dim(),
            found: bad.dim(),
        });
    }
    for i in 0..n {
        for j in i..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            let gap = (reference[i].dot(&reference[j]) - delta).abs();
            if gap > pol.residual_abs {
                return Err(Error::NotOrthonormal { i, j, gap });
            }
        }
    }
    let mu: f64 = frame
        .vectors()
        .iter()
        .zip(pairing)
        .map(|(f, &p)| f.sub(&reference[p]).norm_sq())
        .sum();
    let certified = mu < 1.0;
    let riesz_confirmed = if certified {
        Some(frame.riesz_check(pol)?.is_riesz_basis)
    } else {
        None
    };
    Ok(PerturbationCertificate {
        pairing: pairing.to_vec(),
        mu,
        certified,
        riesz_confirmed,
    })
}
