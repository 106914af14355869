//! Generators: the perturbed-basis example family with its explicit
//! expansion coefficients, seeded random frames, and a few standard frames.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::{orthonormal_basis_of_span, sym_eigen, TolerancePolicy, Vector};
use crate::subset::SubsetId;

/// `{e_i}_{i=2..n}` followed by `{e_i + 2^-i e_1}_{i=2..n}` in R^n.
///
/// Labels use one-based axis numbers. The first axis `e1` is reached only
/// through the perturbed vectors.
pub fn paper_example(n: usize) -> Result<Frame> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "truncation size must be at least 3, got {n}"
        )));
    }
    let mut vectors = Vec::with_capacity(2 * (n - 1));
    let mut labels = Vec::with_capacity(2 * (n - 1));
    for i in 2..=n {
        vectors.push(Vector::basis(n, i - 1));
        labels.push(format!("e{i}"));
    }
    for i in 2..=n {
        let mut v = Vector::basis(n, i - 1).into_inner();
        v[0] = 0.5f64.powi(i as i32);
        vectors.push(Vector::from_vec_unchecked(v));
        labels.push(format!("e{i}+2^-{i}e1"));
    }
    Frame::new(n, vectors)?.with_labels(labels)
}

/// Position of the plain vector `e_i` inside [`paper_example`]`(n)`.
pub fn paper_plain_index(n: usize, i: usize) -> usize {
    debug_assert!((2..=n).contains(&i));
    i - 2
}

/// Position of `e_i + 2^-i e_1` inside [`paper_example`]`(n)`.
pub fn paper_perturbed_index(n: usize, i: usize) -> usize {
    debug_assert!((2..=n).contains(&i));
    n - 1 + i - 2
}

/// Coefficients of `f` on the subfamily `{e_i}_{i in I} ∪ {e_i + 2^-i e_1}_{i in J}`
/// of [`paper_example`]`(trunc)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    /// Positions of the subfamily inside the truncated example.
    pub subset: SubsetId,
    /// One coefficient per entry of `subset`, same order.
    pub coefficients: Vec<f64>,
}

/// Explicit expansion of `f` over a subfamily of the example family whose
/// plain and perturbed index sets `I` (`plain`) and `J` (`perturbed`)
/// overlap at `pivot`.
///
/// With `alpha = 2^pivot (<f, e_1> - sum_{i in J \ I} <f, e_i> 2^-i)`:
/// the perturbed vector at `pivot` gets `alpha`, the plain one at `pivot`
/// gets `<f, e_pivot> - alpha`, every other plain `e_i` gets `<f, e_i>`,
/// perturbed vectors for `i in J \ I` get `<f, e_i>`, and the remaining
/// perturbed vectors get zero.
///
/// Indices `i` are the family's one-based axis numbers, `2..=trunc`.
pub fn example_expansion_coefficients(
    f: &Vector,
    plain: &[usize],
    perturbed: &[usize],
    pivot: usize,
    trunc: usize,
    pol: &TolerancePolicy,
) -> Result<ExpansionCoefficients> {
    if trunc < 3 {
        return Err(Error::InvalidArgument(format!(
            "truncation size must be at least 3, got {trunc}"
        )));
    }
    if f.dim() != trunc {
        return Err(Error::DimensionMismatch {
            expected: trunc,
            found: f.dim(),
        });
    }
    let normalize = |set: &[usize]| -> Result<Vec<usize>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&i| !(2..=trunc).contains(&i)) {
            return Err(Error::InvalidArgument(format!(
                "index {bad} outside 2..={trunc}"
            )));
        }
        Ok(s)
    };
    let plain = normalize(plain)?;
    let perturbed = normalize(perturbed)?;
    if !(plain.contains(&pivot) && perturbed.contains(&pivot)) {
        return Err(Error::InvalidArgument(format!(
            "pivot {pivot} is not in both index sets"
        )));
    }

    let coord = |i: usize| f[i - 1];
    let distance = (2..=trunc)
        .filter(|i| !plain.contains(i) && !perturbed.contains(i))
        .map(|i| coord(i) * coord(i))
        .sum::<f64>()
        .sqrt();
    if distance > pol.residual_abs * (1.0 + f.norm()) {
        return Err(Error::OutsideSpan { distance });
    }

    let only_perturbed = perturbed.iter().filter(|i| !plain.contains(i));
    let alpha = 2f64.powi(pivot as i32)
        * (coord(1)
            - only_perturbed
                .map(|&i| coord(i) * 0.5f64.powi(i as i32))
                .sum::<f64>());

    let mut positions = Vec::with_capacity(plain.len() + perturbed.len());
    let mut coefficients = Vec::with_capacity(plain.len() + perturbed.len());
    for &i in &plain {
        positions.push(paper_plain_index(trunc, i));
        coefficients.push(if i == pivot {
            coord(i) - alpha
        } else {
            coord(i)
        });
    }
    for &i in &perturbed {
        positions.push(paper_perturbed_index(trunc, i));
        coefficients.push(if i == pivot {
            alpha
        } else if plain.contains(&i) {
            0.0
        } else {
            coord(i)
        });
    }
    Ok(ExpansionCoefficients {
        subset: SubsetId::new(positions)?,
        coefficients,
    })
}

/// Seeded Gaussian frame of `count` vectors in R^d.
///
/// With `condition = Some(k)` (requires `count >= d`), the frame is
/// whitened and rescaled along the eigenbasis of its frame operator so
/// that `B / A = k`.
pub fn random_frame(d: usize, count: usize, seed: u64, condition: Option<f64>) -> Result<Frame> {
    if d == 0 || count == 0 {
        return Err(Error::InvalidArgument(
            "dimension and count must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vectors: Vec<Vector> = (0..count)
        .map(|_| {
            Vector::from_vec_unchecked((0..d).map(|_| StandardNormal.sample(&mut rng)).collect())
        })
        .collect();
    let frame = Frame::new(d, vectors)?;
    let Some(kappa) = condition else {
        return Ok(frame);
    };
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "condition target must be at least 1, got {kappa}"
        )));
    }
    if count < d {
        return Err(Error::InvalidArgument(format!(
            "a condition target needs count >= d ({count} < {d})"
        )));
    }
    let pol = TolerancePolicy::default();
    let eig = sym_eigen(&frame.frame_operator(), &pol)?;
    if eig.rank(&pol) < d {
        return Err(Error::ZeroSpan);
    }
    // f -> V diag(s_k / sqrt(lambda_k)) V^T f gives frame operator V diag(s_k^2) V^T
    let scale: Vec<f64> = (0..d)
        .map(|k| {
            let t = if d == 1 {
                0.0
            } else {
                k as f64 / (d - 1) as f64
            };
            kappa.powf(0.5 * t) / eig.values[k].sqrt()
        })
        .collect();
    let v = &eig.vectors;
    let vectors = frame
        .vectors()
        .iter()
        .map(|f| {
            let mut out = vec![0.0; d];
            for k in 0..d {
                let c = scale[k] * (0..d).map(|r| v[(r, k)] * f[r]).sum::<f64>();
                for (r, o) in out.iter_mut().enumerate() {
                    *o += c * v[(r, k)];
                }
            }
            Vector::from_vec_unchecked(out)
        })
        .collect();
    Frame::new(d, vectors)
}

/// Seeded random orthonormal basis of R^d (Gram-Schmidt of a Gaussian frame).
pub fn random_onb(d: usize, seed: u64) -> Result<Vec<Vector>> {
    let frame = random_frame(d, d, seed, None)?;
    let basis = orthonormal_basis_of_span(frame.vectors(), &TolerancePolicy::default())?;
    if basis.len() != d {
        return Err(Error::ZeroSpan);
    }
    Ok(basis)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// The coordinate basis.
    Onb,
    /// Three unit vectors at 120 degrees in R^2; tight with bound 3/2.
    Mercedes,
    /// `e_1, e_1, e_2, e_2, ...`
    DuplicatedOnb,
}

pub fn standard_frame(kind: StandardKind, d: usize) -> Result<Frame> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let (vectors, labels): (Vec<Vector>, Vec<String>) = match kind {
        StandardKind::Onb => (0..d)
            .map(|k| (Vector::basis(d, k), format!("e{}", k + 1)))
            .unzip(),
        StandardKind::Mercedes => {
            if d != 2 {
                return Err(Error::InvalidArgument(format!(
                    "the Mercedes-Benz frame lives in R^2, not R^{d}"
                )));
            }
            let h = 3f64.sqrt() / 2.0;
            [[0.0, 1.0], [-h, -0.5], [h, -0.5]]
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    (
                        Vector::from_vec_unchecked(v.to_vec()),
                        format!("m{}", k + 1),
                    )
                })
                .unzip()
        }
        StandardKind::DuplicatedOnb => (0..2 * d)
            .map(|k| {
                let copy = if k % 2 == 0 { "a" } else { "b" };
                (Vector::basis(d, k / 2), format!("e{}{copy}", k / 2 + 1))
            })
            .unzip(),
    };
    Frame::new(d, vectors)?.with_labels(labels)
}
