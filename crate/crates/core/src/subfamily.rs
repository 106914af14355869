//! Lower frame bounds of subfamilies: the common lower bound over all
//! subfamilies (the Riesz-frame constant) and localization of a frame's
//! energy on the span of a finite subfamily.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::gallery;
use crate::linalg::{orthonormal_basis_of_span, sym_eigen, Mat, TolerancePolicy, Vector};
use crate::subset::{best_of, canonical_cmp, combination_masks, scores_tie, SubsetId};

/// Default cap on the number of subsets examined by [`riesz_frame_constant`].
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 20;

const SAMPLE_SEED: u64 = 0x5eed_f4a3e;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMethod {
    /// Every nonempty subset was examined; the constant is exact.
    Exhaustive,
    /// A structured plus seeded random sample was examined; the constant
    /// is an upper bound on the true infimum.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszFrameCertificate {
    /// Smallest subfamily lower bound found.
    pub constant: f64,
    /// The subset attaining `constant`; the smallest such subset, then the
    /// lexicographically first.
    pub witness: SubsetId,
    pub subsets_examined: u64,
    pub method: CertificateMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    /// `J'`, containing the requested subset.
    pub extended: SubsetId,
    /// Largest eigenvalue of the tail operator compressed to `span(J)`.
    pub achieved: f64,
    /// Dimension of `span(J)`; each basis direction gets `eps / span_dim`.
    pub span_dim: usize,
}

/// Smallest nonzero eigenvalue of `sum_{i in J} f_i f_i^T`.
pub fn subfamily_lower_bound(
    frame: &Frame,
    subset: &SubsetId,
    pol: &TolerancePolicy,
) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_within(frame.len())?;
    let vectors: Vec<&Vector> = subset.indices().iter().map(|&i| frame.vector(i)).collect();
    lower_bound_of(&vectors, frame.ambient_dim(), pol)?.ok_or(Error::ZeroSpan)
}

/// Smallest nonzero eigenvalue of the frame operator of `vectors`, computed
/// from whichever of the Gram matrix and the frame operator is smaller.
fn lower_bound_of(vectors: &[&Vector], dim: usize, pol: &TolerancePolicy) -> Result<Option<f64>> {
    let k = vectors.len();
    let mut rows = Mat::zeros(k, dim);
    for (r, v) in vectors.iter().enumerate() {
        for (c, x) in v.iter().enumerate() {
            rows[(r, c)] = *x;
        }
    }
    let m = if k <= dim {
        rows.row_gram()
    } else {
        rows.column_gram()
    };
    Ok(sym_eigen(&m, pol)?.smallest_nonzero(pol))
}

fn mask_vectors(frame: &Frame, mask: u64) -> Vec<&Vector> {
    (0..frame.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| frame.vector(i))
        .collect()
}

/// Infimum of subfamily lower bounds over all nonempty subfamilies that
/// span a nonzero subspace.
///
/// Exhaustive when `2^len - 1 <= budget`. Otherwise examines all
/// singletons, pairs, leave-one-out subsets and the full family, then
/// fills the remaining budget with seeded random subsets; the result is
/// then an upper bound on the true constant.
pub fn riesz_frame_constant(
    frame: &Frame,
    pol: &TolerancePolicy,
    budget: u64,
) -> Result<RieszFrameCertificate> {
    let n = frame.len();
    if n == 0 {
        return Err(Error::EmptySubset);
    }
    let d = frame.ambient_dim();
    let smaller = |c: (usize, f64), a: (usize, f64)| c.1 < a.1 && !scores_tie(c.1, a.1);

    let exhaustive = n < 64 && (1u64 << n) - 1 <= budget;
    if exhaustive {
        let masks: Vec<u64> = (1..=n).flat_map(|k| combination_masks(n, k)).collect();
        let score = |&mask: &u64| {
            lower_bound_of(&mask_vectors(frame, mask), d, pol)
                .ok()
                .flatten()
        };
        let (pos, constant) = best_of(&masks, score, smaller).ok_or(Error::ZeroSpan)?;
        return Ok(RieszFrameCertificate {
            constant,
            witness: SubsetId::from_mask(masks[pos]),
            subsets_examined: masks.len() as u64,
            method: CertificateMethod::Exhaustive,
        });
    }

    let mut subsets = structured_subsets(n);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    while (subsets.len() as u64) < budget {
        let pick: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !pick.is_empty() {
            subsets.push(SubsetId::from_unsorted(pick));
        }
    }
    let score = |s: &SubsetId| {
        let vectors: Vec<&Vector> = s.indices().iter().map(|&i| frame.vector(i)).collect();
        lower_bound_of(&vectors, d, pol).ok().flatten()
    };
    let (pos, constant) = best_of(&subsets, score, smaller).ok_or(Error::ZeroSpan)?;
    Ok(RieszFrameCertificate {
        constant,
        witness: subsets[pos].clone(),
        subsets_examined: subsets.len() as u64,
        method: CertificateMethod::Sampled,
    })
}

/// Singletons, pairs, leave-one-out subsets and the full set, in
/// size-then-lexicographic order without duplicates.
fn structured_subsets(n: usize) -> Vec<SubsetId> {
    let mut out: Vec<SubsetId> = (0..n).map(|i| SubsetId::from_unsorted(vec![i])).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(SubsetId::from_unsorted(vec![i, j]));
        }
    }
    for skip in 0..n {
        out.push(SubsetId::from_unsorted(
            (0..n).filter(|&i| i != skip).collect(),
        ));
    }
    out.push(SubsetId::full(n));
    out.sort_by(canonical_cmp);
    out.dedup();
    out
}

/// Finds a finite `J' ⊇ J` with
/// `sum_{i not in J'} <f, f_i>^2 <= eps ||f||^2` for all `f` in `span(J)`.
///
/// With `{e_j}` an orthonormal basis of `span(J)` of size `n`, indices are
/// added in decreasing order of `sum_j <e_j, f_i>^2` until every
/// per-direction tail `sum_{i not in J'} <e_j, f_i>^2` is at most `eps/n`.
/// If `J` itself already meets the bound, it is returned unchanged.
pub fn tail_localization(
    frame: &Frame,
    subset: &SubsetId,
    eps: f64,
    pol: &TolerancePolicy,
) -> Result<LocalizationResult> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    subset.check_within(frame.len())?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let seed: Vec<Vector> = subset
        .indices()
        .iter()
        .map(|&i| frame.vector(i).clone())
        .collect();
    let basis = orthonormal_basis_of_span(&seed, pol)?;
    let n = basis.len();
    if n == 0 {
        return Ok(LocalizationResult {
            extended: subset.clone(),
            achieved: 0.0,
            span_dim: 0,
        });
    }

    // coefficients[i][j] = <e_j, f_i>
    let coefficients: Vec<Vec<f64>> = frame
        .vectors()
        .iter()
        .map(|f| basis.iter().map(|e| e.dot(f)).collect())
        .collect();
    let mut inside = vec![false; frame.len()];
    for &i in subset.indices() {
        inside[i] = true;
    }

    let achieved = compressed_tail_max(&coefficients, &inside, n, pol)?;
    if achieved <= eps {
        return Ok(LocalizationResult {
            extended: subset.clone(),
            achieved,
            span_dim: n,
        });
    }

    let weight = |i: usize| coefficients[i].iter().map(|c| c * c).sum::<f64>();
    let mut order: Vec<usize> = (0..frame.len()).filter(|&i| !inside[i]).collect();
    order.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)).then(a.cmp(&b)));

    let per_direction = eps / n as f64;
    let tails_ok = |inside: &[bool]| {
        (0..n).all(|j| {
            let tail: f64 = (0..frame.len())
                .filter(|&i| !inside[i])
                .map(|i| coefficients[i][j] * coefficients[i][j])
                .sum();
            tail <= per_direction
        })
    };
    let mut next = order.into_iter();
    while !tails_ok(&inside) {
        match next.next() {
            Some(i) => inside[i] = true,
            None => break,
        }
    }

    let extended = SubsetId::from_unsorted((0..frame.len()).filter(|&i| inside[i]).collect());
    let achieved = compressed_tail_max(&coefficients, &inside, n, pol)?;
    Ok(LocalizationResult {
        extended,
        achieved,
        span_dim: n,
    })
}

/// `lambda_max(E^T (sum_{i outside} f_i f_i^T) E)` for the basis `E`.
fn compressed_tail_max(
    coefficients: &[Vec<f64>],
    inside: &[bool],
    n: usize,
    pol: &TolerancePolicy,
) -> Result<f64> {
    let mut m = Mat::zeros(n, n);
    for (c, _) in coefficients.iter().zip(inside).filter(|(_, &inn)| !inn) {
        m.add_outer(1.0, c);
    }
    Ok(sym_eigen(&m, pol)?.lambda_max().max(0.0))
}

/// Families whose truncations feed [`common_bound_decay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayFamily {
    /// `{e_i, e_i + 2^-i e_1}_{i=2..n}` in R^n.
    Paper,
    /// Orthonormal basis of R^n.
    Onb,
    /// Each vector of the orthonormal basis of R^n twice.
    DuplicatedOnb,
}

impl DecayFamily {
    pub fn generate(self, n: usize) -> Result<Frame> {
        match self {
            DecayFamily::Paper => gallery::paper_example(n),
            DecayFamily::Onb => gallery::standard_frame(gallery::StandardKind::Onb, n),
            DecayFamily::DuplicatedOnb => {
                gallery::standard_frame(gallery::StandardKind::DuplicatedOnb, n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    pub certificate: RieszFrameCertificate,
}

/// The Riesz-frame constant of each truncation `n` in `sizes`.
pub fn common_bound_decay(
    family: DecayFamily,
    sizes: std::ops::RangeInclusive<usize>,
    pol: &TolerancePolicy,
    budget: u64,
) -> Result<Vec<DecayRow>> {
    if *sizes.start() < 3 {
        return Err(Error::InvalidArgument(format!(
            "truncation sizes must be at least 3, got {}",
            sizes.start()
        )));
    }
    sizes
        .map(|n| {
            let frame = family.generate(n)?;
            Ok(DecayRow {
                n,
                certificate: riesz_frame_constant(&frame, pol, budget)?,
            })
        })
        .collect()
}
