//! Oracles shared by the integration suites. Nothing here calls into the
//! crate's eigensolver or enumeration code.
#![allow(dead_code)]

use framelab_core::{Frame, Mat, Vector};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn to_na(m: &Mat) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Ascending eigenvalues from nalgebra's symmetric QR solver.
pub fn eigenvalues(m: &Mat) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues above `rel * max`, ascending.
pub fn nonzero_eigenvalues(m: &Mat, rel: f64) -> Vec<f64> {
    let v = eigenvalues(m);
    let max = v.last().copied().unwrap_or(0.0).max(0.0);
    v.into_iter()
        .filter(|&x| x > rel * max && x > 0.0)
        .collect()
}

/// Largest eigenvalue of a PSD matrix by power iteration.
pub fn power_lambda_max(m: &Mat) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let y: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)] * x[j]).sum())
            .collect();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next: Vec<f64> = y.iter().map(|v| v / norm).collect();
        let delta = (norm - lambda).abs();
        lambda = norm;
        x = next;
        if delta <= 1e-15 * lambda.max(1e-300) {
            break;
        }
    }
    lambda
}

/// Frame operator of `vectors`, built directly.
pub fn operator_of(vectors: &[&Vector], dim: usize) -> Mat {
    let mut data = vec![0.0; dim * dim];
    for v in vectors {
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] += v[i] * v[j];
            }
        }
    }
    Mat::new(dim, dim, data).unwrap()
}

pub fn gram_of(vectors: &[&Vector]) -> Mat {
    let k = vectors.len();
    let mut data = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            data[i * k + j] = vectors[i].dot(vectors[j]);
        }
    }
    Mat::new(k, k, data).unwrap()
}

/// Smallest eigenvalue of `[[a, b], [b, c]]` by the quadratic formula.
pub fn lmin_2x2(a: f64, b: f64, c: f64) -> f64 {
    let t = a + c;
    let det = a * c - b * b;
    (t - (t * t - 4.0 * det).sqrt()) / 2.0
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    use rand_distr::{Distribution, StandardNormal};
    Vector::new((0..dim).map(|_| StandardNormal.sample(rng)).collect()).unwrap()
}

/// Random element of `span(frame)`: a Gaussian combination of its vectors.
pub fn random_in_span(rng: &mut ChaCha8Rng, frame: &Frame) -> Vector {
    let c = gaussian_vector(rng, frame.len());
    frame.synthesize(&c).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.random_range(-1.0..1.0);
            data[i * n + j] = x;
            data[j * n + i] = x;
        }
    }
    Mat::new(n, n, data).unwrap()
}

/// Orthonormal basis from nalgebra's QR of a Gaussian matrix.
pub fn random_rotation(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    use rand_distr::{Distribution, StandardNormal};
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let q = g.qr().q();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(q[(i, j)]);
        }
    }
    Mat::new(n, n, data).unwrap()
}

/// Minimum over all nonempty subsets of the smallest nonzero eigenvalue
/// of the subset frame operator, with the minimizing mask.
pub fn brute_force_riesz_constant(frame: &Frame, rel: f64) -> (f64, u64) {
    let n = frame.len();
    let mut best = (f64::INFINITY, 0);
    for mask in 1u64..1 << n {
        let vs: Vec<&Vector> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| frame.vector(i))
            .collect();
        let nz = nonzero_eigenvalues(&operator_of(&vs, frame.ambient_dim()), rel);
        if let Some(&lmin) = nz.first() {
            if lmin < best.0 {
                best = (lmin, mask);
            }
        }
    }
    best
}

pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// lambda_max of the tail operator `sum_{i not in extended} f_i f_i^T`
/// compressed to span(seed). The span basis comes from a nalgebra SVD;
/// the eigenvalue is cross-checked against power iteration.
pub fn projected_tail_max(frame: &Frame, seed: &[usize], extended: &[usize]) -> f64 {
    let d = frame.ambient_dim();
    let a = DMatrix::from_fn(d, seed.len(), |r, c| frame.vector(seed[c])[r]);
    let svd = a.svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let basis: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-10 * smax)
        .collect();
    let n = basis.len();
    let mut data = vec![0.0; n * n];
    for i in (0..frame.len()).filter(|i| !extended.contains(i)) {
        let v = frame.vector(i);
        let c: Vec<f64> = basis
            .iter()
            .map(|&k| (0..d).map(|r| u[(r, k)] * v[r]).sum())
            .collect();
        for x in 0..n {
            for y in 0..n {
                data[x * n + y] += c[x] * c[y];
            }
        }
    }
    if n == 0 {
        return 0.0;
    }
    let m = Mat::new(n, n, data).unwrap();
    let by_qr = eigenvalues(&m).last().copied().unwrap_or(0.0);
    let by_power = power_lambda_max(&m);
    assert!((by_qr - by_power).abs() <= 1e-9 * (1.0 + by_qr));
    by_qr.max(by_power)
}
