use super::{Mat, TolerancePolicy, Vector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Full eigendecomposition of a symmetric matrix.
///
/// `values` are ascending and column `k` of `vectors` is the unit
/// eigenvector for `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl SymEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vector {
        self.vectors.column(k)
    }

    pub fn lambda_max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn lambda_min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rank cutoff for this spectrum: `rank_rel * lambda_max`.
    pub fn cutoff(&self, pol: &TolerancePolicy) -> f64 {
        pol.cutoff(self.lambda_max())
    }

    /// Positions of eigenvalues above the rank cutoff, ascending.
    pub fn nonzero_range(&self, pol: &TolerancePolicy) -> std::ops::Range<usize> {
        let lmax = self.lambda_max();
        if lmax <= 0.0 {
            return self.dim()..self.dim();
        }
        let cut = pol.cutoff(lmax);
        let start = self.values.partition_point(|&v| v <= cut);
        start..self.dim()
    }

    /// Number of eigenvalues above the rank cutoff. Meaningful for PSD input.
    pub fn rank(&self, pol: &TolerancePolicy) -> usize {
        self.nonzero_range(pol).len()
    }

    pub fn nonzero_values(&self, pol: &TolerancePolicy) -> &[f64] {
        &self.values[self.nonzero_range(pol)]
    }

    /// Smallest eigenvalue above the rank cutoff.
    pub fn smallest_nonzero(&self, pol: &TolerancePolicy) -> Option<f64> {
        self.nonzero_values(pol).first().copied()
    }

    /// `V diag(values) V^T`
    pub fn reconstruct(&self) -> Mat {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m.add_outer(self.values[k], &self.vectors.column(k));
        }
        m
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `rank_rel * ||M||_F`, then runs one more sweep, which the quadratic
/// convergence of the method drives to rounding level.
pub fn sym_eigen(m: &Mat, pol: &TolerancePolicy) -> Result<SymEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if let Some((row, col, gap)) = m.asymmetry() {
        if gap > pol.residual_abs {
            return Err(Error::NotSymmetric { row, col, gap });
        }
    }
    let n = m.rows();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let fro = m.frobenius();
    let target = pol.rank_rel * fro;
    let mut polished = false;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&a, n);
        if off == 0.0 || polished {
            break;
        }
        if off <= target {
            polished = true;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweep(&mut a, &mut v, n);
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[r * n + src];
        }
    }
    Ok(SymEigen { values, vectors })
}

fn off_diagonal(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn sweep(a: &mut [f64], v: &mut [f64], n: usize) {
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = a[p * n + q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
            let t = if theta.abs() > 1e150 {
                0.5 / theta
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..n {
                let akp = a[k * n + p];
                let akq = a[k * n + q];
                a[k * n + p] = c * akp - s * akq;
                a[k * n + q] = s * akp + c * akq;
            }
            for k in 0..n {
                let apk = a[p * n + k];
                let aqk = a[q * n + k];
                a[p * n + k] = c * apk - s * aqk;
                a[q * n + k] = s * apk + c * aqk;
            }
            a[p * n + q] = 0.0;
            a[q * n + p] = 0.0;
            for k in 0..n {
                let vkp = v[k * n + p];
                let vkq = v[k * n + q];
                v[k * n + p] = c * vkp - s * vkq;
                v[k * n + q] = s * vkp + c * vkq;
            }
        }
    }
}

/// Numerical rank of an arbitrary matrix: the number of eigenvalues of
/// `M^T M` (equivalently `M M^T`, whichever is smaller) above
/// `rank_rel * lambda_max`.
pub fn numerical_rank(m: &Mat, pol: &TolerancePolicy) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    let gram = if m.rows() <= m.cols() {
        m.row_gram()
    } else {
        m.column_gram()
    };
    Ok(sym_eigen(&gram, pol)?.rank(pol))
}
