use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};

/// Strictly positive particle masses `m_1..m_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MassVector(Vec<f64>);

impl MassVector {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyMasses);
        }
        if let Some(&bad) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::NonPositiveMass(bad));
        }
        Ok(Self(masses))
    }

    pub fn unit(n: usize) -> Self {
        Self(vec![1.0; n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Mass of particle `i`, 1-based.
    pub fn mass(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::MAX, f64::min)
    }
}

/// Inner product on the ambient space.
///
/// `Mass` is the mass metric on `R^N` tensored with the Euclidean product on
/// `R^m`: coordinates are laid out particle-major, so ambient index
/// `k * spatial_dim + a` is axis `a` of particle `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    Mass {
        masses: MassVector,
        spatial_dim: usize,
    },
}

impl Metric {
    pub fn mass(masses: MassVector, spatial_dim: usize) -> Self {
        Metric::Mass {
            masses,
            spatial_dim: spatial_dim.max(1),
        }
    }

    /// Ambient dimension fixed by the metric, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            Metric::Euclidean => None,
            Metric::Mass {
                masses,
                spatial_dim,
            } => Some(masses.len() * spatial_dim),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(expected) if expected != n => Err(Error::DimensionMismatch { expected, got: n }),
            _ => Ok(()),
        }
    }

    /// Weight of ambient coordinate `idx`.
    fn weight(&self, idx: usize) -> f64 {
        match self {
            Metric::Euclidean => 1.0,
            Metric::Mass {
                masses,
                spatial_dim,
            } => masses.as_slice()[idx / spatial_dim],
        }
    }

    /// Map into coordinates where this metric is the dot product.
    pub fn to_euclidean(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            Metric::Euclidean => v.clone(),
            _ => DVector::from_fn(v.len(), |i, _| v[i] * self.weight(i).sqrt()),
        }
    }

    pub fn from_euclidean(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            Metric::Euclidean => v.clone(),
            _ => DVector::from_fn(v.len(), |i, _| v[i] / self.weight(i).sqrt()),
        }
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        metric_inner(u, v, self)
    }

    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        (0..v.len())
            .map(|i| self.weight(i) * v[i] * v[i])
            .sum::<f64>()
            .sqrt()
    }
}

/// `<u, v>` under `metric`.
pub fn metric_inner(u: &DVector<f64>, v: &DVector<f64>, metric: &Metric) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    metric.check_dim(u.len())?;
    Ok((0..u.len()).map(|i| metric.weight(i) * u[i] * v[i]).sum())
}
