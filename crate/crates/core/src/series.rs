//! Unconditional-convergence diagnostics on finite truncations of series
//! `sum c_i y_i`: sign suprema of tails, suprema over finite sub-sums, and
//! the excess of a frame over a Riesz basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extraction::{extract, Strategy};
use crate::frame::{Frame, FrameBounds};
use crate::linalg::{TolerancePolicy, Vector};
use crate::subset::SubsetId;

/// Longest tail (or family) enumerated pattern by pattern.
pub const EXHAUSTIVE_CAP: usize = 24;

const RANDOM_PATTERNS: usize = 4096;
const PATTERN_SEED: u64 = 0x51_65_5e;
/// High bits fixed per parallel block; the low bits run as a Gray code.
const BLOCK_BITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    Euclidean,
    /// Sup norm over coordinates; the finite model of `c_0`.
    CoordinateMax,
}

impl NormMode {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormMode::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormMode::CoordinateMax => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFamily {
    vectors: Vec<Vector>,
    coefficients: Vec<f64>,
    norm_mode: NormMode,
}

impl SeriesFamily {
    pub fn new(vectors: Vec<Vector>, coefficients: Vec<f64>, norm_mode: NormMode) -> Result<Self> {
        if vectors.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                found: coefficients.len(),
            });
        }
        if let Some(index) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(first) = vectors.first() {
            if let Some(bad) = vectors.iter().find(|v| v.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: bad.dim(),
                });
            }
        }
        Ok(Self {
            vectors,
            coefficients,
            norm_mode,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.first().map_or(0, |v| v.dim())
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn norm_mode(&self) -> NormMode {
        self.norm_mode
    }

    pub fn with_norm_mode(mut self, norm_mode: NormMode) -> Self {
        self.norm_mode = norm_mode;
        self
    }

    /// The terms `x_i = c_i y_i`.
    pub fn terms(&self) -> Vec<Vector> {
        self.vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(y, &c)| y.scaled(c))
            .collect()
    }

    pub fn to_frame(&self) -> Result<Frame> {
        Frame::new(self.dim().max(1), self.vectors.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SupMethod {
    /// Every sign pattern (or subset) was evaluated.
    Exhaustive,
    /// Exact per-coordinate formula for the sup norm.
    ClosedForm,
    /// Best of seeded random patterns refined by single flips; a lower
    /// bound, paired with the triangle-inequality upper bound.
    RandomizedLowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignSup {
    pub lower: f64,
    pub upper: f64,
    pub method: SupMethod,
}

impl SignSup {
    fn exact(value: f64, method: SupMethod) -> Self {
        Self {
            lower: value,
            upper: value,
            method,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method != SupMethod::RandomizedLowerBound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignSupReport {
    /// Zero-based tail starts.
    pub tail_starts: Vec<usize>,
    pub values: Vec<SignSup>,
    /// The weakest method used by any entry.
    pub method: SupMethod,
}

/// `sup_{eps_i = ±1} || sum_{i >= start} eps_i c_i y_i ||` with `start` zero-based.
pub fn sign_sup(family: &SeriesFamily, start: usize) -> SignSup {
    let terms = family.terms();
    let tail = terms.get(start..).unwrap_or(&[]);
    let mode = family.norm_mode;
    if tail.is_empty() {
        return SignSup::exact(0.0, SupMethod::Exhaustive);
    }
    if tail.len() <= EXHAUSTIVE_CAP {
        return SignSup::exact(max_over_signs(tail, mode), SupMethod::Exhaustive);
    }
    match mode {
        NormMode::CoordinateMax => {
            SignSup::exact(coordinate_abs_sum_max(tail), SupMethod::ClosedForm)
        }
        NormMode::Euclidean => SignSup {
            lower: randomized_sign_search(tail, mode),
            upper: tail.iter().map(|x| x.norm()).sum(),
            method: SupMethod::RandomizedLowerBound,
        },
    }
}

/// [`sign_sup`] for every tail start.
pub fn tail_decay_profile(family: &SeriesFamily) -> SignSupReport {
    let tail_starts: Vec<usize> = (0..family.len()).collect();
    let values: Vec<SignSup> = tail_starts.iter().map(|&m| sign_sup(family, m)).collect();
    let method = values
        .iter()
        .map(|v| v.method)
        .max()
        .unwrap_or(SupMethod::Exhaustive);
    SignSupReport {
        tail_starts,
        values,
        method,
    }
}

/// Exact maximum of `||sum eps_i x_i||` over sign patterns. The first sign
/// is fixed to `+`, since both norms are invariant under a global flip.
fn max_over_signs(terms: &[Vector], mode: NormMode) -> f64 {
    let free = terms.len() - 1;
    let high = free.min(BLOCK_BITS);
    let low = free - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|block| {
            // signs: bit k of the pattern set means term k+1 is negative
            let negative = |k: usize, low_bits: u64| -> bool {
                if k < low {
                    low_bits >> k & 1 == 1
                } else {
                    block >> (k - low) & 1 == 1
                }
            };
            let mut sum = terms[0].clone();
            for k in 0..free {
                let sign = if negative(k, 0) { -1.0 } else { 1.0 };
                sum.axpy(sign, &terms[k + 1]);
            }
            let mut best = mode.norm(&sum);
            let mut gray = 0u64;
            for step in 1u64..1 << low {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                let now_negative = gray >> bit & 1 == 1;
                sum.axpy(if now_negative { -2.0 } else { 2.0 }, &terms[bit + 1]);
                best = best.max(mode.norm(&sum));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// `max_j sum_i |x_i(j)|`: the sign sup in the sup norm, attained by
/// aligning every sign with the maximizing coordinate.
fn coordinate_abs_sum_max(terms: &[Vector]) -> f64 {
    let dim = terms.first().map_or(0, |t| t.dim());
    (0..dim)
        .map(|j| terms.iter().map(|x| x[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn randomized_sign_search(terms: &[Vector], mode: NormMode) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(PATTERN_SEED);
    let evaluate = |signs: &[f64]| {
        let mut sum = Vector::zeros(terms[0].dim());
        for (s, x) in signs.iter().zip(terms) {
            sum.axpy(*s, x);
        }
        mode.norm(&sum)
    };
    let mut best_signs = vec![1.0; terms.len()];
    let mut best = evaluate(&best_signs);
    for _ in 0..RANDOM_PATTERNS {
        let signs: Vec<f64> = (0..terms.len())
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let value = evaluate(&signs);
        if value > best {
            best = value;
            best_signs = signs;
        }
    }
    let mut improved = true;
    while improved {
        improved = false;
        for k in 0..terms.len() {
            best_signs[k] = -best_signs[k];
            let value = evaluate(&best_signs);
            if value > best {
                best = value;
                improved = true;
            } else {
                best_signs[k] = -best_signs[k];
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsetSup {
    pub value: f64,
    pub method: SupMethod,
}

/// `max_Δ ||sum_{n in Δ} x_n||` over all subsets Δ.
///
/// The sup norm uses the closed form
/// `max_j max(sum_n max(x_n(j), 0), sum_n max(-x_n(j), 0))`; the Euclidean
/// norm enumerates all subsets and is capped at [`EXHAUSTIVE_CAP`] vectors.
pub fn subset_sup(vectors: &[Vector], mode: NormMode) -> Result<SubsetSup> {
    if vectors.is_empty() {
        return Ok(SubsetSup {
            value: 0.0,
            method: SupMethod::Exhaustive,
        });
    }
    match mode {
        NormMode::CoordinateMax => Ok(SubsetSup {
            value: coordinate_sign_part_max(vectors),
            method: SupMethod::ClosedForm,
        }),
        NormMode::Euclidean => {
            if vectors.len() > EXHAUSTIVE_CAP {
                return Err(Error::TooLarge {
                    requested: vectors.len() as u128,
                    cap: EXHAUSTIVE_CAP as u128,
                });
            }
            Ok(SubsetSup {
                value: max_over_subsets(vectors, mode),
                method: SupMethod::Exhaustive,
            })
        }
    }
}

fn coordinate_sign_part_max(vectors: &[Vector]) -> f64 {
    let dim = vectors[0].dim();
    let mut best = 0.0f64;
    for j in 0..dim {
        let mut pos = 0.0;
        let mut neg = 0.0;
        for x in vectors {
            if x[j] > 0.0 {
                pos += x[j];
            } else if x[j] < 0.0 {
                neg -= x[j];
            }
        }
        best = best.max(pos).max(neg);
    }
    best
}

fn max_over_subsets(vectors: &[Vector], mode: NormMode) -> f64 {
    let n = vectors.len();
    let high = n.min(BLOCK_BITS);
    let low = n - high;
    (0u64..1 << high)
        .into_par_iter()
        .map(|block| {
            let mut sum = Vector::zeros(vectors[0].dim());
            for k in 0..high {
                if block >> k & 1 == 1 {
                    sum.axpy(1.0, &vectors[low + k]);
                }
            }
            let mut best = mode.norm(&sum);
            let mut gray = 0u64;
            for step in 1u64..1 << low {
                let bit = step.trailing_zeros() as usize;
                gray ^= 1 << bit;
                let added = gray >> bit & 1 == 1;
                sum.axpy(if added { 1.0 } else { -1.0 }, &vectors[bit]);
                best = best.max(mode.norm(&sum));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// `(e_1, e_1, e_2, e_2, ..., e_n, e_n)` in R^n under the sup norm, with
/// the given `2n` coefficients.
pub fn duplicated_basis_family(n: usize, coefficients: Vec<f64>) -> Result<SeriesFamily> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if coefficients.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: coefficients.len(),
        });
    }
    let vectors = (0..2 * n).map(|k| Vector::basis(n, k / 2)).collect();
    SeriesFamily::new(vectors, coefficients, NormMode::CoordinateMax)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearRieszReport {
    /// `count - rank`
    pub excess: usize,
    /// Independent spanning subfamily left after deletion.
    pub kept: SubsetId,
    /// The `excess` deleted indices.
    pub deleted: SubsetId,
    /// Frame bounds of the kept family, re-verified; `None` for a zero span.
    pub post_deletion_bounds: Option<FrameBounds>,
    /// Whether the kept family spans the same space as the full frame.
    pub span_preserved: bool,
    /// Finite excess; always true for a finite family.
    pub unconditional: bool,
}

/// Splits a frame into a Riesz basis for its span plus `excess` extra
/// vectors, and re-checks that the basis part is still a frame for the
/// same span.
pub fn near_riesz_diagnostic(frame: &Frame, pol: &TolerancePolicy) -> Result<NearRieszReport> {
    let rank = frame.rank(pol)?;
    let excess = frame.len() - rank;
    if rank == 0 {
        return Ok(NearRieszReport {
            excess,
            kept: SubsetId::default(),
            deleted: SubsetId::full(frame.len()),
            post_deletion_bounds: None,
            span_preserved: true,
            unconditional: true,
        });
    }
    let kept = extract(frame, Strategy::Greedy, pol)?.selected;
    let deleted = kept.complement(frame.len());
    let remaining = frame.subfamily(&kept)?;
    let bounds = remaining.frame_bounds(pol)?;
    Ok(NearRieszReport {
        excess,
        span_preserved: bounds.span_rank == rank,
        kept,
        deleted,
        post_deletion_bounds: Some(bounds),
        unconditional: true,
    })
}
