//! Four identities relating the principal angles of `(F, G)`, their
//! orthogonal complements, and the mixed pairs.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::angles::{max_abs_diff, principal_angles};
use super::subspace::{orthogonal_complement, Subspace};
use crate::error::Result;

pub const DUALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub identities: Vec<IdentityCheck>,
    pub max_discrepancy: f64,
    pub pass: bool,
}

fn padded(zeros: usize, tail: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; zeros];
    v.extend_from_slice(tail);
    v
}

fn check(name: &'static str, lhs: Vec<f64>, rhs: Vec<f64>) -> IdentityCheck {
    let discrepancy = max_abs_diff(&lhs, &rhs);
    IdentityCheck {
        name,
        lhs,
        rhs,
        discrepancy,
    }
}

/// Evaluate both sides of each identity for `(f, g)`.
pub fn check_angle_duality(f: &Subspace, g: &Subspace) -> Result<DualityReport> {
    let n = f.ambient_dim();
    let (p, q) = (f.dim(), g.dim());
    let fc = orthogonal_complement(f);
    let gc = orthogonal_complement(g);

    let fg = principal_angles(f, g)?.angles;
    let gf = principal_angles(g, f)?.angles;
    let fcgc = principal_angles(&fc, &gc)?.angles;
    let fgc = principal_angles(f, &gc)?.angles;
    let fcg = principal_angles(&fc, g)?.angles;

    let sat = |x: isize| x.max(0) as usize;
    let (pi, qi, ni) = (p as isize, q as isize, n as isize);

    let mut identities = vec![check("symmetry", fg.clone(), gf)];
    identities.push(check(
        "complements",
        padded(sat(ni - pi - qi), &fg),
        padded(sat(pi + qi - ni), &fcgc),
    ));
    identities.push(check(
        "mixed",
        padded(sat(qi - pi), &fgc),
        padded(sat(pi - qi), &fcg),
    ));
    let mut lhs = fg.clone();
    lhs.extend(std::iter::repeat_n(FRAC_PI_2, sat(pi - qi)));
    // fgc is ascending; pi/2 minus its decreasing arrangement is ascending.
    let flipped: Vec<f64> = fgc.iter().rev().map(|a| FRAC_PI_2 - a).collect();
    identities.push(check("right_angle", lhs, padded(sat(pi + qi - ni), &flipped)));

    let max_discrepancy = identities.iter().map(|c| c.discrepancy).fold(0.0, f64::max);
    Ok(DualityReport {
        identities,
        max_discrepancy,
        pass: max_discrepancy < DUALITY_TOL,
    })
}
