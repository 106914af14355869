use super::{sym_eigen, Mat, SymEigen, TolerancePolicy, Vector};
use crate::error::{Error, Result};

/// Spectral pseudo-inverse of a symmetric positive semidefinite matrix,
/// restricted to the eigenvalues above the rank cutoff.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    eigen: SymEigen,
    kept: std::ops::Range<usize>,
}

impl PseudoInverse {
    pub fn new(m: &Mat, pol: &TolerancePolicy) -> Result<Self> {
        let eigen = sym_eigen(m, pol)?;
        Ok(Self::from_eigen(eigen, pol))
    }

    pub fn from_eigen(eigen: SymEigen, pol: &TolerancePolicy) -> Self {
        let kept = eigen.nonzero_range(pol);
        Self { eigen, kept }
    }

    pub fn eigen(&self) -> &SymEigen {
        &self.eigen
    }

    pub fn rank(&self) -> usize {
        self.kept.len()
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    /// `M^+ b = sum_k (v_k . b / lambda_k) v_k` over the kept eigenpairs.
    pub fn apply(&self, b: &[f64]) -> Result<Vector> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let v = &self.eigen.vectors;
        let mut x = vec![0.0; n];
        for k in self.kept.clone() {
            let coef = (0..n).map(|r| v[(r, k)] * b[r]).sum::<f64>() / self.eigen.values[k];
            for (r, xr) in x.iter_mut().enumerate() {
                *xr += coef * v[(r, k)];
            }
        }
        Ok(Vector::from_vec_unchecked(x))
    }

    /// Orthogonal projection of `b` onto the range of the matrix.
    pub fn project_to_range(&self, b: &[f64]) -> Result<Vector> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let v = &self.eigen.vectors;
        let mut x = vec![0.0; n];
        for k in self.kept.clone() {
            let coef: f64 = (0..n).map(|r| v[(r, k)] * b[r]).sum();
            for (r, xr) in x.iter_mut().enumerate() {
                *xr += coef * v[(r, k)];
            }
        }
        Ok(Vector::from_vec_unchecked(x))
    }
}

/// Result of [`spd_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpdSolution {
    pub x: Vector,
    /// Rank of `M` under the tolerance policy.
    pub rank: usize,
    /// True when `M` was singular and the solve was restricted to its range.
    pub rank_deficient: bool,
    /// `||b - P_range b||`, the part of `b` the solve could not reach.
    pub off_range: f64,
}

/// Solves `M x = b` for symmetric positive semidefinite `M`, taking the
/// minimum-norm least-squares solution when `M` is singular.
pub fn spd_solve(m: &Mat, b: &Vector, pol: &TolerancePolicy) -> Result<SpdSolution> {
    let pinv = PseudoInverse::new(m, pol)?;
    let x = pinv.apply(b)?;
    let off_range = b.sub(&pinv.project_to_range(b)?).norm();
    Ok(SpdSolution {
        x,
        rank: pinv.rank(),
        rank_deficient: pinv.rank() < pinv.dim(),
        off_range,
    })
}
