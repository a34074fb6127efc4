use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jacobi::{reduced_walls, JacobiMasses};
use crate::linalg::{Metric, Subspace};

#[derive(Debug, Clone)]
pub struct Wall {
    pub label: String,
    pub subspace: Subspace,
    /// Euclidean-coordinate projector onto the wall.
    pub(crate) proj: DMatrix<f64>,
}

impl Wall {
    pub fn new(label: impl Into<String>, subspace: Subspace) -> Self {
        let q = subspace.euclidean_basis();
        let proj = &q * q.transpose();
        Self {
            label: label.into(),
            subspace,
            proj,
        }
    }

    /// Component of `x` (Euclidean coordinates) orthogonal to the wall.
    pub(crate) fn perp(&self, x: &DVector<f64>) -> DVector<f64> {
        x - &self.proj * x
    }
}

/// A finite union of linear walls sharing one ambient space and metric.
#[derive(Debug, Clone)]
pub struct SubspaceArrangement {
    ambient_dim: usize,
    metric: Metric,
    walls: Vec<Wall>,
}

impl SubspaceArrangement {
    pub fn new(walls: Vec<(String, Subspace)>) -> Result<Self> {
        let first = walls.first().ok_or(Error::EmptyInput("arrangement needs a wall"))?;
        let ambient_dim = first.1.ambient_dim();
        let metric = first.1.metric().clone();
        for (_, w) in &walls {
            if w.metric() != &metric {
                return Err(Error::MetricMismatch);
            }
            if w.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: w.ambient_dim(),
                });
            }
        }
        Ok(Self {
            ambient_dim,
            metric,
            walls: walls.into_iter().map(|(l, s)| Wall::new(l, s)).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn labels(&self) -> Vec<&str> {
        self.walls.iter().map(|w| w.label.as_str()).collect()
    }
}

/// The three reduced collision planes of the planar three-body problem in
/// `R^4`, labelled `12`, `23`, `13`.
pub fn reduced_arrangement(jm: &JacobiMasses) -> SubspaceArrangement {
    let walls = reduced_walls(jm)
        .into_iter()
        .map(|(p, s)| (p.to_string(), s))
        .collect();
    SubspaceArrangement::new(walls).expect("reduced walls share R^4")
}
