//! Great-circle arrangements on the sphere: tangent-vector angles, the
//! angle-sum feasibility test, the two triangle tilings, and line crossings.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::{DVector, Rotation3, Unit, UnitQuaternion, Vector3, Vector4};
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng;

const PARALLEL_GUARD: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-12;
/// Lines closer than this to a pairwise intersection line are discarded.
pub const INTERSECTION_CLEARANCE: f64 = 1e-7;
pub const DEFAULT_FACE_SAMPLES: u64 = 1_000_000;

/// Planes through the origin of `R^3`, stored by unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneArrangement {
    normals: Vec<Vector3<f64>>,
}

fn direction(n1: &Vector3<f64>, n2: &Vector3<f64>) -> Result<Vector3<f64>> {
    let line = n1.cross(n2);
    let norm = line.norm();
    if norm < PARALLEL_GUARD * n1.norm() * n2.norm() {
        return Err(Error::ParallelPlanes);
    }
    Ok(line / norm)
}

impl PlaneArrangement {
    /// Normals are rescaled to unit length; parallel pairs are rejected.
    pub fn new(normals: Vec<Vector3<f64>>) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::EmptyInput("plane normals"));
        }
        let mut unit = Vec::with_capacity(normals.len());
        for n in normals {
            let len = n.norm();
            if !(len > 0.0 && len.is_finite()) {
                return Err(Error::InvalidArgument("plane normal must be nonzero".into()));
            }
            unit.push(n / len);
        }
        for (a, n) in unit.iter().enumerate() {
            debug_assert!((n.norm() - 1.0).abs() < UNIT_TOL);
            for m in &unit[a + 1..] {
                if n.dot(m).abs() >= 1.0 - PARALLEL_GUARD {
                    return Err(Error::ParallelPlanes);
                }
            }
        }
        Ok(Self { normals: unit })
    }

    pub fn normals(&self) -> &[Vector3<f64>] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn rotated(&self, r: &Rotation3<f64>) -> Self {
        Self {
            normals: self.normals.iter().map(|n| r * n).collect(),
        }
    }

    /// Angle between planes `a` and `b` (0-based), measured on the sphere.
    pub fn angle(&self, a: usize, b: usize) -> Result<f64> {
        dihedral_angle_via_tangents(&self.normals[a], &self.normals[b])
    }

    /// Upper-triangular list `(a, b, angle)`.
    pub fn pairwise_angles(&self) -> Result<Vec<(usize, usize, f64)>> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                out.push((a, b, self.angle(a, b)?));
            }
        }
        Ok(out)
    }

    /// Vertices of the great-circle arrangement on the unit sphere.
    pub fn vertices(&self) -> Vec<Vector3<f64>> {
        let mut verts: Vec<Vector3<f64>> = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let d = direction(&self.normals[a], &self.normals[b]).expect("checked on construction");
                for p in [d, -d] {
                    if verts.iter().all(|v| (v - p).norm() > 1e-9) {
                        verts.push(p);
                    }
                }
            }
        }
        verts
    }

    /// `V`, `E` and `F = 2 - V + E` of the arrangement graph.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        let verts = self.vertices();
        let edges: usize = self
            .normals
            .iter()
            .map(|n| verts.iter().filter(|v| n.dot(v).abs() < 1e-9).count())
            .sum();
        (verts.len(), edges, 2 + edges - verts.len())
    }

    /// Distinct sign patterns of `samples` uniform sphere points.
    pub fn sampled_faces(&self, samples: u64, seed: u64, exec: Execution) -> usize {
        const CHUNK: u64 = 4096;
        let chunks = samples.div_ceil(CHUNK);
        let patterns = exec.map_reduce(
            chunks,
            BTreeSet::new(),
            |c| {
                let mut r = rng::stream(seed, c);
                let mut seen = BTreeSet::new();
                let count = CHUNK.min(samples - c * CHUNK);
                for _ in 0..count {
                    let x = rng::unit_vector(&mut r, 3);
                    let p = Vector3::new(x[0], x[1], x[2]);
                    let mut mask = 0u64;
                    let mut clear = true;
                    for (k, n) in self.normals.iter().enumerate() {
                        let s = n.dot(&p);
                        clear &= s.abs() > 1e-12;
                        mask |= u64::from(s > 0.0) << k;
                    }
                    if clear {
                        seen.insert(mask);
                    }
                }
                seen
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        patterns.len()
    }

    /// Face count from sampling, confirmed against the Euler count.
    pub fn face_count(&self, samples: u64, seed: u64, exec: Execution) -> FaceCount {
        let (vertices, edges, euler) = self.euler_counts();
        FaceCount {
            sampled: self.sampled_faces(samples, seed, exec),
            vertices,
            edges,
            euler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FaceCount {
    pub sampled: usize,
    pub vertices: usize,
    pub edges: usize,
    pub euler: usize,
}

impl FaceCount {
    pub fn agrees(&self) -> bool {
        self.sampled == self.euler
    }
}

/// Angle between two planes read off from the tangents of their great
/// circles at a common point.
pub fn dihedral_angle_via_tangents(n1: &Vector3<f64>, n2: &Vector3<f64>) -> Result<f64> {
    let p = direction(n1, n2)?;
    let t1 = n1.cross(&p);
    let t2 = n2.cross(&p);
    let c = (t1.dot(&t2) / (t1.norm() * t2.norm())).abs();
    Ok(c.min(1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeVerdict {
    pub feasible: bool,
    pub angle_sum: f64,
}

/// Whether three planes can bound a cone with the given dihedral angles:
/// a spherical triangle's angles sum to more than `pi`.
pub fn cone_feasibility(angles: [f64; 3]) -> ConeVerdict {
    let angle_sum: f64 = angles.iter().sum();
    let in_range = angles.iter().all(|&a| a > 0.0 && a < PI);
    ConeVerdict {
        feasible: in_range && angle_sum > PI + 1e-12,
        angle_sum,
    }
}

/// `z = 0`, `y = 0`, `y = sqrt(3) x`, `y = -sqrt(3) x`.
pub fn tiling_322() -> PlaneArrangement {
    let s = 3f64.sqrt();
    PlaneArrangement::new(vec![
        Vector3::new(0.0, 0.0, 1.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(s, -1.0, 0.0),
        Vector3::new(s, 1.0, 0.0),
    ])
    .expect("fixed arrangement")
}

/// `x = 0`, `y = 0` and four planes `+-x/2 +- y/2 +- z/sqrt(2) = 0`.
pub fn tiling_332() -> PlaneArrangement {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    PlaneArrangement::new(vec![
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(-0.5, -0.5, r),
        Vector3::new(-0.5, 0.5, -r),
        Vector3::new(0.5, -0.5, -r),
        Vector3::new(0.5, 0.5, r),
    ])
    .expect("fixed arrangement")
}

/// `x = y`, `y = z`, `x = z`: three planes through the line `span(1, 1, 1)`.
pub fn three_planes_common_line() -> PlaneArrangement {
    PlaneArrangement::new(vec![
        Vector3::new(1.0, -1.0, 0.0),
        Vector3::new(0.0, 1.0, -1.0),
        Vector3::new(1.0, 0.0, -1.0),
    ])
    .expect("fixed arrangement")
}

fn line_distance(a: &Vector3<f64>, u: &Vector3<f64>, dir: &Vector3<f64>) -> f64 {
    let c = u.cross(dir);
    let cn = c.norm();
    if cn < 1e-12 {
        (a - dir * a.dot(dir)).norm()
    } else {
        a.dot(&c).abs() / cn
    }
}

/// Number of planes crossed by `a + t u` for `t` in `interval`, or `None`
/// when the line passes within [`INTERSECTION_CLEARANCE`] of a line where two
/// planes meet.
pub fn count_crossings(
    arr: &PlaneArrangement,
    a: &Vector3<f64>,
    u: &Vector3<f64>,
    interval: (f64, f64),
) -> Option<usize> {
    let n = arr.normals();
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            let dir = direction(&n[i], &n[j]).expect("checked on construction");
            if line_distance(a, u, &dir) < INTERSECTION_CLEARANCE {
                return None;
            }
        }
    }
    // Sign change of each linear form between the ends of the interval.
    let crossed = n
        .iter()
        .filter(|normal| {
            let (f0, rate) = (normal.dot(a), normal.dot(u));
            if rate == 0.0 {
                return false;
            }
            let t = -f0 / rate;
            t > interval.0 && t < interval.1
        })
        .count();
    Some(crossed)
}

/// Max crossing count over random affine lines, against the plane count.
pub fn line_intersection_count(arr: &PlaneArrangement, trials: u64, seed: u64, exec: Execution) -> Result<BoundReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let empirical = exec.map_reduce(
        trials,
        0u64,
        |t| {
            let mut r = rng::stream(seed, t);
            let a = to3(&rng::gaussian_vector(&mut r, 3));
            let u = to3(&rng::unit_vector(&mut r, 3));
            count_crossings(arr, &a, &u, (f64::NEG_INFINITY, f64::INFINITY)).map_or(0, |c| c as u64)
        },
        u64::max,
    );
    let planes = arr.len() as f64;
    Ok(BoundReport::new("plane_line_crossings", &[("planes", planes)], planes).observe(empirical, None))
}

/// [`line_intersection_count`] on [`three_planes_common_line`].
pub fn three_planes_common_line_count(trials: u64, seed: u64, exec: Execution) -> Result<BoundReport> {
    let mut r = line_intersection_count(&three_planes_common_line(), trials, seed, exec)?;
    r.name = "common_line_crossings".into();
    Ok(r)
}

fn to3(v: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

/// Uniform random rotation from a normalized Gaussian quaternion.
pub fn random_rotation(seed: u64, index: u64) -> Rotation3<f64> {
    let mut r = rng::stream(seed, index);
    let q = rng::gaussian_vector(&mut r, 4);
    let q = Unit::new_normalize(nalgebra::Quaternion::from(Vector4::new(q[0], q[1], q[2], q[3])));
    UnitQuaternion::from(q).to_rotation_matrix()
}
