use super::{Mat, TolerancePolicy, Vector};
use crate::error::{Error, Result};

/// Orthonormal basis of `span(vectors)` by modified Gram-Schmidt with a
/// second orthogonalization pass.
///
/// A vector whose residual after both passes falls below
/// `rank_rel * max_i ||v_i||` is treated as dependent and dropped.
pub fn orthonormal_basis_of_span(vectors: &[Vector], pol: &TolerancePolicy) -> Result<Vec<Vector>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let max_norm = vectors.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Ok(Vec::new());
    }
    let drop_below = pol.rank_rel * max_norm;

    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&r);
                r.axpy(-c, q);
            }
        }
        let norm = r.norm();
        if norm > drop_below {
            basis.push(r.scaled(1.0 / norm));
        }
        if basis.len() == dim {
            break;
        }
    }
    Ok(basis)
}

/// Orthogonal projector `P = sum_j e_j e_j^T` onto `span(vectors)` in R^dim.
pub fn projector_onto_span(vectors: &[Vector], dim: usize, pol: &TolerancePolicy) -> Result<Mat> {
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut p = Mat::zeros(dim, dim);
    for e in orthonormal_basis_of_span(vectors, pol)? {
        p.add_outer(1.0, &e);
    }
    Ok(p)
}
