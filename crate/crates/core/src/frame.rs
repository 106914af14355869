//! Frames and their spectral quantities.
//!
//! A frame here is any finite indexed family in R^d. Bounds are always the
//! optimal constants for the span of the family: the extreme eigenvalues of
//! the frame operator that survive the rank cutoff.

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat, PseudoInverse, SymEigen, TolerancePolicy, Vector};
use crate::subset::SubsetId;

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    ambient_dim: usize,
    vectors: Vec<Vector>,
    labels: Option<Vec<String>>,
}

/// Optimal frame bounds of a family on its span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub span_rank: usize,
}

impl FrameBounds {
    pub fn condition(&self) -> f64 {
        self.upper / self.lower
    }
}

/// The canonical dual `g_i = S^+ f_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFrame {
    pub vectors: Vec<Vector>,
}

/// Outcome of the Riesz-basis test, with the Gram spectrum extremes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszCheck {
    pub is_riesz_basis: bool,
    pub count: usize,
    pub rank: usize,
    /// Smallest Gram eigenvalue; the lower Riesz bound when independent.
    pub gram_lower: f64,
    /// Largest Gram eigenvalue; the upper Riesz bound.
    pub gram_upper: f64,
}

impl Frame {
    pub fn new(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidArgument(
                "ambient dimension must be positive".into(),
            ));
        }
        if let Some(bad) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.dim(),
            });
        }
        Ok(Self {
            ambient_dim,
            vectors,
            labels: None,
        })
    }

    /// Builds a frame from raw rows, inferring the dimension from the first.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        let vectors = rows.into_iter().map(Vector::new).collect::<Result<_>>()?;
        Self::new(dim, vectors)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vectors.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of vector `i`, falling back to its one-based position.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("f{}", i + 1),
        }
    }

    /// The subfamily indexed by `subset`, keeping labels.
    pub fn subfamily(&self, subset: &SubsetId) -> Result<Frame> {
        subset.check_within(self.len())?;
        let vectors = subset
            .indices()
            .iter()
            .map(|&i| self.vectors[i].clone())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| subset.indices().iter().map(|&i| l[i].clone()).collect());
        Ok(Frame {
            ambient_dim: self.ambient_dim,
            vectors,
            labels,
        })
    }

    /// The frame with vectors at `subset` removed.
    pub fn without(&self, subset: &SubsetId) -> Result<Frame> {
        subset.check_within(self.len())?;
        self.subfamily(&subset.complement(self.len()))
    }

    /// Vectors stacked as rows (the transpose of the synthesis operator).
    pub fn rows_matrix(&self) -> Mat {
        Mat::from_rows(&self.vectors, self.ambient_dim).expect("dimensions checked on construction")
    }

    /// `S = sum_i f_i f_i^T`
    pub fn frame_operator(&self) -> Mat {
        let mut s = Mat::zeros(self.ambient_dim, self.ambient_dim);
        for f in &self.vectors {
            s.add_outer(1.0, f);
        }
        s
    }

    /// `G_ij = <f_i, f_j>`
    pub fn gram(&self) -> Mat {
        self.rows_matrix().row_gram()
    }

    pub fn spectrum(&self, pol: &TolerancePolicy) -> Result<SymEigen> {
        sym_eigen(&self.frame_operator(), pol)
    }

    pub fn rank(&self, pol: &TolerancePolicy) -> Result<usize> {
        Ok(self.spectrum(pol)?.rank(pol))
    }

    pub fn frame_bounds(&self, pol: &TolerancePolicy) -> Result<FrameBounds> {
        bounds_from_spectrum(&self.spectrum(pol)?, pol)
    }

    pub fn canonical_dual(&self, pol: &TolerancePolicy) -> Result<DualFrame> {
        let pinv = PseudoInverse::new(&self.frame_operator(), pol)?;
        let vectors = self
            .vectors
            .iter()
            .map(|f| pinv.apply(f))
            .collect::<Result<_>>()?;
        Ok(DualFrame { vectors })
    }

    /// Analysis coefficients `<f, f_i>` in index order.
    pub fn analyze(&self, f: &Vector) -> Result<Vec<f64>> {
        self.check_dim(f)?;
        Ok(self.vectors.iter().map(|fi| fi.dot(f)).collect())
    }

    /// Synthesis `sum_i c_i f_i`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<Vector> {
        if coefficients.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let mut out = Vector::zeros(self.ambient_dim);
        for (c, fi) in coefficients.iter().zip(&self.vectors) {
            out.axpy(*c, fi);
        }
        Ok(out)
    }

    /// `sum_i <f, g_i> f_i` with the canonical dual; the orthogonal
    /// projection of `f` onto the span.
    pub fn reconstruct(&self, f: &Vector, pol: &TolerancePolicy) -> Result<Vector> {
        self.check_dim(f)?;
        let dual = self.canonical_dual(pol)?;
        let coefficients: Vec<f64> = dual.vectors.iter().map(|g| g.dot(f)).collect();
        self.synthesize(&coefficients)
    }

    pub fn riesz_check(&self, pol: &TolerancePolicy) -> Result<RieszCheck> {
        let count = self.len();
        if count == 0 {
            return Ok(RieszCheck {
                is_riesz_basis: false,
                count,
                rank: 0,
                gram_lower: 0.0,
                gram_upper: 0.0,
            });
        }
        let eig = sym_eigen(&self.gram(), pol)?;
        let rank = eig.rank(pol);
        Ok(RieszCheck {
            is_riesz_basis: rank == count,
            count,
            rank,
            gram_lower: eig.lambda_min(),
            gram_upper: eig.lambda_max(),
        })
    }

    /// `count - rank`: how many vectors must go before an independent
    /// spanning family can remain.
    pub fn excess(&self, pol: &TolerancePolicy) -> Result<usize> {
        Ok(self.len() - self.rank(pol)?)
    }

    fn check_dim(&self, f: &Vector) -> Result<()> {
        if f.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: f.dim(),
            });
        }
        Ok(())
    }
}

impl DualFrame {
    pub fn into_frame(self, ambient_dim: usize) -> Result<Frame> {
        Frame::new(ambient_dim, self.vectors)
    }
}

pub(crate) fn bounds_from_spectrum(eig: &SymEigen, pol: &TolerancePolicy) -> Result<FrameBounds> {
    let nonzero = eig.nonzero_values(pol);
    match (nonzero.first(), nonzero.last()) {
        (Some(&lower), Some(&upper)) => Ok(FrameBounds {
            lower,
            upper,
            span_rank: nonzero.len(),
        }),
        _ => Err(Error::ZeroSpan),
    }
}
