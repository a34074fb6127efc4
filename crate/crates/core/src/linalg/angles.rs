use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::policy::NumericPolicy;

/// Principal angles in nondecreasing order, with the principal vector pair
/// realizing each one.
#[derive(Debug, Clone, Default, Serialize)]
pub struct AngleVector {
    pub angles: Vec<f64>,
    #[serde(skip)]
    pub pairs: Vec<(DVector<f64>, DVector<f64>)>,
}

impl AngleVector {
    pub fn from_angles(angles: Vec<f64>) -> Self {
        Self {
            angles,
            pairs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn zero_count(&self, tol: f64) -> usize {
        self.angles.iter().filter(|a| **a < tol).count()
    }

    /// Largest elementwise difference; `INFINITY` when lengths differ.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        max_abs_diff(&self.angles, other)
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn clamp_unit(x: f64) -> f64 {
    // Values just above 1 are rounding noise; anything else is clamped too.
    if x > 1.0 && x <= 1.0 + NumericPolicy::DEFAULT.cosine_slack {
        1.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Thin SVD, singular values descending, with the matching singular vectors.
fn sorted_svd(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let svd = to_faer(m).thin_svd().map_err(|_| Error::SvdFailed)?;
    let (u, v) = (svd.U(), svd.V());
    let s = svd.S().column_vector().iter().copied().collect();
    let u = DMatrix::from_fn(u.nrows(), u.ncols(), |r, c| u[(r, c)]);
    let v = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)]);
    Ok((s, u, v))
}

fn singular_values_ascending(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let mut s = to_faer(m).singular_values().map_err(|_| Error::SvdFailed)?;
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Principal angles between `f` and `g` from the SVD of the cross-Gram
/// matrix of their metric-orthonormal bases.
///
/// Angles whose cosine satisfies `cos^2 >= 1/2` are recomputed from the
/// sines (singular values of the component of one basis orthogonal to the
/// other), which keeps exact shared directions at zero to rounding.
pub fn principal_angles(f: &Subspace, g: &Subspace) -> Result<AngleVector> {
    f.same_space(g)?;
    if f.dim() == 0 || g.dim() == 0 {
        return Ok(AngleVector::default());
    }
    let qf = f.euclidean_basis();
    let qg = g.euclidean_basis();
    let cross = qf.transpose() * &qg;
    let (cosines, u, v) = sorted_svd(&cross)?;
    let sines = if f.dim() >= g.dim() {
        singular_values_ascending(&(&qg - &qf * &cross))?
    } else {
        singular_values_ascending(&(&qf - &qg * cross.transpose()))?
    };

    let q = cosines.len();
    let mut angles = Vec::with_capacity(q);
    let mut pairs = Vec::with_capacity(q);
    let fu = f.basis() * &u;
    let gv = g.basis() * &v;
    for k in 0..q {
        let c = clamp_unit(cosines[k]);
        let angle = if c * c >= 0.5 {
            sines[k].clamp(0.0, 1.0).asin()
        } else {
            c.acos()
        };
        angles.push(angle.clamp(0.0, FRAC_PI_2));
        pairs.push((fu.column(k).into_owned(), gv.column(k).into_owned()));
    }
    // Sine and cosine routes can disagree in the last bit near pi/4.
    for k in 1..q {
        if angles[k] < angles[k - 1] {
            angles[k] = angles[k - 1];
        }
    }
    Ok(AngleVector { angles, pairs })
}
