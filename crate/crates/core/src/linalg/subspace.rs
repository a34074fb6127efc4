use nalgebra::{DMatrix, DVector};

use super::angles::principal_angles;
use super::metric::Metric;
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

/// A linear subspace given by a basis that is orthonormal under `metric`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    metric: Metric,
    /// `ambient_dim x dim`, columns orthonormal under `metric`.
    basis: DMatrix<f64>,
}

impl Subspace {
    /// The zero subspace of `R^ambient_dim`.
    pub fn zero(ambient_dim: usize, metric: Metric) -> Self {
        Self {
            metric,
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize, metric: Metric) -> Result<Self> {
        metric.check_dim(ambient_dim)?;
        let vectors: Vec<_> = (0..ambient_dim)
            .map(|i| DVector::from_fn(ambient_dim, |k, _| if k == i { 1.0 } else { 0.0 }))
            .collect();
        orthonormalize(&vectors, &metric)
    }

    /// Wrap a basis the caller already knows to be orthonormal under `metric`.
    pub(crate) fn from_orthonormal(metric: Metric, basis: DMatrix<f64>) -> Self {
        debug_assert!(metric.check_dim(basis.nrows()).is_ok());
        Self { metric, basis }
    }

    /// Span of `vectors` under the Euclidean metric.
    pub fn span(vectors: &[DVector<f64>]) -> Result<Self> {
        orthonormalize(vectors, &Metric::Euclidean)
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Basis mapped into coordinates where the metric is the dot product.
    /// The columns are Euclidean-orthonormal.
    pub fn euclidean_basis(&self) -> DMatrix<f64> {
        let mut out = self.basis.clone();
        for mut col in out.column_iter_mut() {
            let v = self.metric.to_euclidean(&col.clone_owned());
            col.copy_from(&v);
        }
        out
    }

    /// Metric Gram matrix of the basis; the identity up to rounding.
    pub fn gram(&self) -> DMatrix<f64> {
        let q = self.euclidean_basis();
        q.transpose() * q
    }

    /// Metric-orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        let q = self.euclidean_basis();
        let y = self.metric.to_euclidean(x);
        let p = &q * (q.transpose() * y);
        self.metric.from_euclidean(&p)
    }

    /// Metric distance from `x` to the subspace.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        self.metric.norm(&(x - self.project(x)))
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.distance(x) <= tol * self.metric.norm(x).max(1.0)
    }

    pub(crate) fn same_space(&self, other: &Subspace) -> Result<()> {
        if self.metric != other.metric {
            return Err(Error::MetricMismatch);
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        Ok(())
    }
}

/// Modified Gram–Schmidt with one full re-orthogonalization pass, in
/// Euclidean coordinates. Returns the accepted unit vectors.
fn mgs(columns: Vec<DVector<f64>>, prior: &[DVector<f64>], cut: f64) -> Vec<DVector<f64>> {
    let mut accepted: Vec<DVector<f64>> = Vec::new();
    for mut v in columns {
        for _pass in 0..2 {
            for q in prior.iter().chain(accepted.iter()) {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > cut {
            accepted.push(v / norm);
        }
    }
    accepted
}

/// Orthonormal basis (under `metric`) for the span of `vectors`.
///
/// Dependent inputs are dropped: a column whose residual norm falls below
/// `rank_cut * (largest input norm)` does not contribute.
pub fn orthonormalize(vectors: &[DVector<f64>], metric: &Metric) -> Result<Subspace> {
    let first = vectors.first().ok_or(Error::EmptyInput("orthonormalize needs at least one vector"))?;
    let n = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    metric.check_dim(n)?;
    let scaled: Vec<_> = vectors.iter().map(|v| metric.to_euclidean(v)).collect();
    let largest = scaled.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return Ok(Subspace::zero(n, metric.clone()));
    }
    let cut = NumericPolicy::DEFAULT.rank_cut * largest;
    let kept = mgs(scaled, &[], cut);
    Ok(from_euclidean_columns(n, metric, &kept))
}

fn from_euclidean_columns(n: usize, metric: &Metric, cols: &[DVector<f64>]) -> Subspace {
    let mut basis = DMatrix::zeros(n, cols.len());
    for (k, c) in cols.iter().enumerate() {
        basis.set_column(k, &metric.from_euclidean(c));
    }
    Subspace {
        metric: metric.clone(),
        basis,
    }
}

/// Metric-orthogonal complement of `f` in its ambient space.
pub fn orthogonal_complement(f: &Subspace) -> Subspace {
    let n = f.ambient_dim();
    let q: Vec<DVector<f64>> = f.euclidean_basis().column_iter().map(|c| c.into_owned()).collect();
    let mut found: Vec<DVector<f64>> = Vec::new();
    // Greedily extend with the coordinate axis that has the largest residual.
    while q.len() + found.len() < n {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for i in 0..n {
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            for _pass in 0..2 {
                for b in q.iter().chain(found.iter()) {
                    let c = b.dot(&v);
                    v.axpy(-c, b, 1.0);
                }
            }
            let norm = v.norm();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, v));
            }
        }
        match best {
            Some((norm, v)) if norm > NumericPolicy::DEFAULT.rank_cut => found.push(v / norm),
            _ => break,
        }
    }
    from_euclidean_columns(n, &f.metric, &found)
}

/// `F ∩ G`, spanned by the principal vectors whose angle is below the
/// zero-angle tolerance.
pub fn subspace_intersection(f: &Subspace, g: &Subspace) -> Result<Subspace> {
    f.same_space(g)?;
    let angles = principal_angles(f, g)?;
    let tol = NumericPolicy::DEFAULT.zero_angle;
    let vectors: Vec<_> = angles
        .angles
        .iter()
        .zip(&angles.pairs)
        .filter(|(a, _)| **a < tol)
        .map(|(_, (u, _))| u.clone())
        .collect();
    if vectors.is_empty() {
        return Ok(Subspace::zero(f.ambient_dim(), f.metric.clone()));
    }
    orthonormalize(&vectors, &f.metric)
}
