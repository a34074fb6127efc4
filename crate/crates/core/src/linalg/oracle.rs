//! Brute-force principal angles from the max-max characterization.
//!
//! Independent of the SVD path: it only evaluates inner products on grids
//! of unit vectors and deflates onto orthogonal complements of the maximizers.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::angles::AngleVector;
use super::subspace::Subspace;
use crate::error::{Error, Result};

pub const ORACLE_MAX_DIM: usize = 3;

/// Unit vectors of `R^dim` on a grid with angular spacing `2*pi/resolution`.
fn sphere_grid(dim: usize, resolution: usize) -> Vec<DVector<f64>> {
    let step = 2.0 * PI / resolution as f64;
    match dim {
        1 => vec![DVector::from_element(1, 1.0), DVector::from_element(1, -1.0)],
        2 => (0..resolution)
            .map(|k| {
                let t = k as f64 * step;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect(),
        3 => {
            let rings = (resolution / 2).max(1);
            let mut pts = vec![
                DVector::from_vec(vec![0.0, 0.0, 1.0]),
                DVector::from_vec(vec![0.0, 0.0, -1.0]),
            ];
            for j in 0..rings {
                let polar = PI * (j as f64 + 0.5) / rings as f64;
                for k in 0..resolution {
                    let az = k as f64 * step;
                    pts.push(DVector::from_vec(vec![
                        polar.sin() * az.cos(),
                        polar.sin() * az.sin(),
                        polar.cos(),
                    ]));
                }
            }
            pts
        }
        _ => unreachable!("oracle dimension checked by caller"),
    }
}

/// Orthonormal basis (columns) of `{x in span(w) : <x, a> = 0}`.
fn deflate(w: &DMatrix<f64>, a: &DVector<f64>) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for c in w.column_iter() {
        let mut v = c.into_owned();
        for _ in 0..2 {
            let d = a.dot(&v);
            v.axpy(-d, a, 1.0);
            for q in &cols {
                let d = q.dot(&v);
                v.axpy(-d, q, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            cols.push(v / n);
        }
    }
    let target = w.ncols() - 1;
    cols.truncate(target);
    DMatrix::from_columns(&cols).resize_horizontally(target, 0.0)
}

/// Principal angles by greedy grid maximization of `<u, v>` over unit
/// vectors of `f` and `g`, deflating after each maximizer is found.
///
/// Accurate to roughly `2*pi/resolution` per angle. Both subspaces must have
/// dimension at most [`ORACLE_MAX_DIM`].
pub fn principal_angles_oracle(f: &Subspace, g: &Subspace, resolution: usize) -> Result<AngleVector> {
    f.same_space(g)?;
    let big = f.dim().max(g.dim());
    if big > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge {
            max: ORACLE_MAX_DIM,
            got: big,
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let q = f.dim().min(g.dim());
    if q == 0 {
        return Ok(AngleVector::default());
    }

    // Cross inner products <f_a, g_b> under the shared metric.
    let metric = f.metric();
    let fb = f.basis_vectors();
    let gb = g.basis_vectors();
    let mut cross = DMatrix::zeros(fb.len(), gb.len());
    for (a, u) in fb.iter().enumerate() {
        for (b, v) in gb.iter().enumerate() {
            cross[(a, b)] = metric.inner(u, v)?;
        }
    }

    let mut wf = DMatrix::identity(fb.len(), fb.len());
    let mut wg = DMatrix::identity(gb.len(), gb.len());
    let mut angles = Vec::with_capacity(q);
    let mut pairs = Vec::with_capacity(q);
    for _ in 0..q {
        let reduced = wf.transpose() * &cross * &wg;
        let grid_f = sphere_grid(wf.ncols(), resolution);
        let grid_g = sphere_grid(wg.ncols(), resolution);
        let images: Vec<DVector<f64>> = grid_f.iter().map(|s| reduced.transpose() * s).collect();
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (i, img) in images.iter().enumerate() {
            for (j, t) in grid_g.iter().enumerate() {
                let val = img.dot(t);
                if val > best.0 {
                    best = (val, i, j);
                }
            }
        }
        let a = &wf * &grid_f[best.1];
        let b = &wg * &grid_g[best.2];
        angles.push(best.0.clamp(-1.0, 1.0).acos());
        pairs.push((f.basis() * &a, g.basis() * &b));
        if wf.ncols() > 1 {
            wf = deflate(&wf, &a);
        }
        if wg.ncols() > 1 {
            wg = deflate(&wg, &b);
        }
    }
    Ok(AngleVector { angles, pairs })
}
