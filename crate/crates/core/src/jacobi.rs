//! Translation reduction of the planar three-body configuration space by
//! Jacobi coordinates.
//!
//! A configuration `(q_1, q_2, q_3)` of points in the plane lives in `R^6`
//! (particle-major). Its reduced image `(v, w)` lives in `R^4` laid out as
//! `(v_x, v_y, w_x, w_y)`; reading each plane as `C` this is `C^2`, and a
//! complex line becomes a real 2-plane.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, Vector2};
use serde::Serialize;

use crate::collision::{build_delta, BilliardSystem, PairIndex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{principal_angles, MassVector, Metric, Subspace};
use crate::policy::NumericPolicy;
use crate::rng;

/// Three masses with the Jacobi scale factors
/// `1/mu1^2 = 1/m1 + 1/m2` and `1/mu2^2 = 1/m3 + 1/(m1 + m2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiMasses {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl JacobiMasses {
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        MassVector::new(vec![m1, m2, m3])?;
        let mu1 = (1.0 / (1.0 / m1 + 1.0 / m2)).sqrt();
        let mu2 = (1.0 / (1.0 / m3 + 1.0 / (m1 + m2))).sqrt();
        Ok(Self { m1, m2, m3, mu1, mu2 })
    }

    pub fn equal() -> Self {
        Self::new(1.0, 1.0, 1.0).expect("unit masses are valid")
    }

    pub fn masses(&self) -> MassVector {
        MassVector::new(vec![self.m1, self.m2, self.m3]).expect("validated on construction")
    }

    pub fn system(&self) -> BilliardSystem {
        BilliardSystem::new(3, 2, self.masses()).expect("three planar particles")
    }

    /// The linear map `R^6 -> R^4` as a matrix. Its kernel is the
    /// translations `q + (c, c, c)`.
    pub fn projection_matrix(&self) -> DMatrix<f64> {
        let s = self.m1 + self.m2;
        // Rows: v = mu1 (q1 - q2), w = mu2 (q3 - (m1 q1 + m2 q2)/(m1 + m2)).
        let v_coeffs = [self.mu1, -self.mu1, 0.0];
        let w_coeffs = [-self.mu2 * self.m1 / s, -self.mu2 * self.m2 / s, self.mu2];
        DMatrix::from_fn(4, 6, |r, c| {
            let (particle, axis) = (c / 2, c % 2);
            let (coeffs, out_axis) = if r < 2 { (&v_coeffs, r) } else { (&w_coeffs, r - 2) };
            if axis == out_axis {
                coeffs[particle]
            } else {
                0.0
            }
        })
    }

    pub fn project_vector(&self, q: &DVector<f64>) -> DVector<f64> {
        self.projection_matrix() * q
    }
}

/// Reduced configuration: the two Jacobi vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedConfig {
    pub v: [f64; 2],
    pub w: [f64; 2],
}

impl ReducedConfig {
    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_vec(vec![self.v[0], self.v[1], self.w[0], self.w[1]])
    }
}

pub fn jacobi_project(q: &[[f64; 2]; 3], jm: &JacobiMasses) -> ReducedConfig {
    let p = |k: usize| Vector2::new(q[k][0], q[k][1]);
    let v = (p(0) - p(1)) * jm.mu1;
    let cm12 = (p(0) * jm.m1 + p(1) * jm.m2) / (jm.m1 + jm.m2);
    let w = (p(2) - cm12) * jm.mu2;
    ReducedConfig {
        v: [v.x, v.y],
        w: [w.x, w.y],
    }
}

/// Image of `Δ_pair` under the Jacobi projection: a real 2-plane in `R^4`
/// with the Euclidean metric.
pub fn reduced_delta(pair: PairIndex, jm: &JacobiMasses) -> Result<Subspace> {
    if pair.j() > 3 {
        return Err(Error::InvalidPair {
            i: pair.i(),
            j: pair.j(),
            n: 3,
        });
    }
    let up = build_delta(&jm.system(), pair)?;
    let proj = jm.projection_matrix();
    let images: Vec<_> = up.basis_vectors().iter().map(|b| &proj * b).collect();
    crate::linalg::orthonormalize(&images, &Metric::Euclidean)
}

/// The three reduced collision planes, labelled `12`, `23`, `13`.
pub fn reduced_walls(jm: &JacobiMasses) -> Vec<(PairIndex, Subspace)> {
    [(1, 2), (2, 3), (1, 3)]
        .into_iter()
        .map(|(i, j)| {
            let p = PairIndex::new(i, j).expect("distinct");
            (p, reduced_delta(p, jm).expect("valid pair"))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageCheck {
    pub angle_upstairs: f64,
    pub angle_downstairs: f64,
    pub image_norm: f64,
    /// Distance of the normalized image from the downstairs principal span.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrincipalImageReport {
    pub pair_a: PairIndex,
    pub pair_b: PairIndex,
    pub checks: Vec<ImageCheck>,
    /// Largest image norm among zero-angle principal vectors.
    pub zero_angle_image_norm: f64,
    pub pass: bool,
}

/// Push the nonzero-angle principal vectors of `(Δ_a, Δ_b)` through the
/// projection and check they land in the principal span of `(Δ⁰_a, Δ⁰_b)`
/// for the same angle.
pub fn verify_principal_vector_image(a: PairIndex, b: PairIndex, jm: &JacobiMasses) -> Result<PrincipalImageReport> {
    if a == b {
        return Err(Error::SamePair);
    }
    let sys = jm.system();
    let up = principal_angles(&build_delta(&sys, a)?, &build_delta(&sys, b)?)?;
    let down = principal_angles(&reduced_delta(a, jm)?, &reduced_delta(b, jm)?)?;
    let proj = jm.projection_matrix();
    let tol = 1e-8;
    let zero = NumericPolicy::DEFAULT.zero_angle;

    let mut checks = Vec::new();
    let mut zero_angle_image_norm: f64 = 0.0;
    for (angle, (u, v)) in up.angles.iter().zip(&up.pairs) {
        if *angle < zero {
            zero_angle_image_norm = zero_angle_image_norm.max((&proj * u).norm()).max((&proj * v).norm());
            continue;
        }
        let matching: Vec<usize> = (0..down.len())
            .filter(|&k| (down.angles[k] - angle).abs() < tol)
            .collect();
        for (vec, side) in [(u, 0usize), (v, 1usize)] {
            let img = &proj * vec;
            let norm = img.norm();
            let residual = if matching.is_empty() || norm == 0.0 {
                f64::INFINITY
            } else {
                let span: Vec<_> = matching
                    .iter()
                    .map(|&k| if side == 0 { down.pairs[k].0.clone() } else { down.pairs[k].1.clone() })
                    .collect();
                let s = Subspace::span(&span)?;
                s.distance(&(img.clone() / norm))
            };
            let angle_downstairs = matching.first().map(|&k| down.angles[k]).unwrap_or(f64::NAN);
            checks.push(ImageCheck {
                angle_upstairs: *angle,
                angle_downstairs,
                image_norm: norm,
                residual,
            });
        }
    }
    let pass = !checks.is_empty()
        && checks
            .iter()
            .all(|c| c.residual < tol && (c.image_norm - 1.0).abs() < tol)
        && zero_angle_image_norm < tol;
    Ok(PrincipalImageReport {
        pair_a: a,
        pair_b: b,
        checks,
        zero_angle_image_norm,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VectorAngleRange {
    pub min: f64,
    pub max: f64,
    pub first_principal_angle: f64,
    pub trials: u64,
}

/// Unoriented angle `arccos|<V1, V2>|` between random unit vectors of two
/// reduced collision planes; returns the observed range.
pub fn min_vector_angle(
    a: PairIndex,
    b: PairIndex,
    jm: &JacobiMasses,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<VectorAngleRange> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if a == b {
        return Err(Error::SamePair);
    }
    let pa = reduced_delta(a, jm)?;
    let pb = reduced_delta(b, jm)?;
    let first = principal_angles(&pa, &pb)?.angles[0];
    let (qa, qb) = (pa.basis().clone(), pb.basis().clone());
    let (min, max) = exec.map_reduce(
        trials,
        (f64::INFINITY, f64::NEG_INFINITY),
        |t| {
            let mut r = rng::stream(seed, t);
            let v1 = &qa * rng::unit_vector(&mut r, 2);
            let v2 = &qb * rng::unit_vector(&mut r, 2);
            let a = unoriented_angle(&v1, &v2);
            (a, a)
        },
        |x, y| (x.0.min(y.0), x.1.max(y.1)),
    );
    Ok(VectorAngleRange {
        min,
        max,
        first_principal_angle: first,
        trials,
    })
}

pub fn unoriented_angle(v1: &DVector<f64>, v2: &DVector<f64>) -> f64 {
    let c = (v1.dot(v2) / (v1.norm() * v2.norm())).abs().min(1.0);
    c.acos().min(FRAC_PI_2)
}
