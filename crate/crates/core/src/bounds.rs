//! Closed-form collision bounds and the line-intersection counts behind them.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::collision::{closed_form_angle, PairIndex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{orthonormalize, MassVector, Metric};
use crate::rng;

/// Relative slack used when `pi / alpha` lands on an integer.
const INTEGER_SNAP: f64 = 1e-9;
/// Two crossing times closer than this put the line through an
/// intersection of walls.
const CROSSING_SEPARATION: f64 = 1e-7;

/// A named bound with its inputs, the predicted ceiling, and what was seen.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    /// Predicted maximum; `None` when the value overflows `f64`.
    pub predicted: Option<f64>,
    pub empirical_max: Option<u64>,
    /// Count achieved by the explicit witness line, when one is built.
    pub witness: Option<u64>,
    /// Whether the hypotheses of the bound hold for these inputs.
    pub applicable: Option<bool>,
    pub consistent: bool,
}

impl BoundReport {
    pub(crate) fn new(name: &str, inputs: &[(&str, f64)], predicted: f64) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            predicted: predicted.is_finite().then_some(predicted),
            empirical_max: None,
            witness: None,
            applicable: None,
            consistent: true,
        }
    }

    pub(crate) fn observe(mut self, empirical: u64, witness: Option<u64>) -> Self {
        self.empirical_max = Some(empirical);
        self.witness = witness;
        self.consistent = self.predicted.is_none_or(|p| {
            empirical as f64 <= p && witness.is_none_or(|w| w as f64 <= p)
        });
        self
    }
}

/// Maximum number of collisions inside a wedge of opening `alpha`:
/// `ceil(pi / alpha)`.
pub fn wedge_bound(alpha: f64) -> Result<u64> {
    if !(alpha > 0.0 && alpha <= PI) {
        return Err(Error::AngleOutOfRange(alpha));
    }
    let ratio = PI / alpha;
    let nearest = ratio.round();
    let bound = if (ratio - nearest).abs() <= INTEGER_SNAP * ratio {
        nearest
    } else {
        ratio.ceil()
    };
    Ok(bound.max(1.0) as u64)
}

/// Collision bound for three point masses where `m_j` is the particle
/// shared by the two walls of the wedge.
pub fn three_mass_bound(m_i: f64, m_j: f64, m_k: f64) -> Result<u64> {
    wedge_bound(closed_form_angle(m_i, m_j, m_k)?)
}

/// Largest [`three_mass_bound`] over the three choices of shared particle.
pub fn arrangement_bound(m1: f64, m2: f64, m3: f64) -> Result<u64> {
    Ok(three_mass_bound(m2, m1, m3)?
        .max(three_mass_bound(m1, m2, m3)?)
        .max(three_mass_bound(m1, m3, m2)?))
}

/// Bound that applies to one three-body trajectory given its wall labels.
/// Walls sharing a particle `j` give [`three_mass_bound`] with `m_j` in the
/// middle; a trajectory touching all three walls gets [`arrangement_bound`].
pub fn trajectory_bound<S: AsRef<str>>(labels: &[S], masses: [f64; 3]) -> Result<u64> {
    let mut pairs: Vec<PairIndex> = labels
        .iter()
        .map(|l| l.as_ref().parse::<PairIndex>())
        .collect::<Result<_>>()?;
    pairs.sort_by_key(|p| (p.i(), p.j()));
    pairs.dedup();
    if pairs.iter().any(|p| p.j() > 3) {
        return Err(Error::InvalidArgument("labels must name particles 1..3".into()));
    }
    let m = |k: usize| masses[k - 1];
    match pairs.as_slice() {
        [] | [_] => Ok(1),
        [a, b] => {
            let j = a.shared_with(b).expect("distinct pairs of three particles share one");
            let i = a.other(j);
            let k = b.other(j);
            three_mass_bound(m(i), m(j), m(k))
        }
        _ => arrangement_bound(masses[0], masses[1], masses[2]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub bound: u64,
    /// Wedge angle reached `pi/2`.
    pub flag: bool,
}

/// Bound over `(alpha, beta)` with masses `(alpha, 1, beta)`.
#[derive(Debug, Clone, Serialize)]
pub struct MassRatioGrid {
    pub alpha_hi: f64,
    pub beta_hi: f64,
    pub step: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `cells[a][b]` for `alphas[a]`, `betas[b]`.
    pub cells: Vec<Vec<GridCell>>,
}

fn axis(hi: f64, step: f64) -> Vec<f64> {
    let count = (hi / step + 1e-9).floor() as usize;
    (1..=count).map(|k| k as f64 * step).collect()
}

/// Evaluate [`three_mass_bound`]`(alpha, 1, beta)` on `(0, alpha_hi] x (0, beta_hi]`
/// starting one step in from zero.
pub fn mass_ratio_grid(alpha_hi: f64, beta_hi: f64, step: f64, exec: Execution) -> Result<MassRatioGrid> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
    }
    if !(alpha_hi >= step && beta_hi >= step) {
        return Err(Error::InvalidArgument("grid upper limits must be at least one step".into()));
    }
    let alphas = axis(alpha_hi, step);
    let betas = axis(beta_hi, step);
    let rows = exec.map_range(alphas.len() as u64, |a| {
        let alpha = alphas[a as usize];
        betas
            .iter()
            .map(|&beta| {
                let angle = closed_form_angle(alpha, 1.0, beta).expect("positive grid masses");
                GridCell {
                    bound: wedge_bound(angle).expect("angle in (0, pi/2]"),
                    flag: angle >= FRAC_PI_2,
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(MassRatioGrid {
        alpha_hi,
        beta_hi,
        step,
        alphas,
        betas,
        cells: rows,
    })
}

impl MassRatioGrid {
    pub fn cell(&self, a: usize, b: usize) -> GridCell {
        self.cells[a][b]
    }

    /// Index of the grid coordinate closest to `x` on an axis.
    pub fn index_of(axis: &[f64], x: f64) -> Option<usize> {
        axis.iter().position(|v| (v - x).abs() < 1e-9)
    }

    /// `alpha,beta,bound,flag` rows sorted by `(alpha, beta)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,bound,flag\n");
        for (a, alpha) in self.alphas.iter().enumerate() {
            for (b, beta) in self.betas.iter().enumerate() {
                let c = self.cells[a][b];
                let _ = writeln!(out, "{alpha:.6},{beta:.6},{},{}", c.bound, u8::from(c.flag));
            }
        }
        out
    }
}

/// Crossing count of `a + t u` against walls described by linear forms
/// `<x, normal_i> = 0`; `None` if the line meets two walls at one instant.
pub fn hyperplane_crossings(a: &DVector<f64>, u: &DVector<f64>, normals: &[DVector<f64>]) -> Option<u64> {
    let mut times = Vec::new();
    for n in normals {
        let rate = n.dot(u);
        let offset = n.dot(a);
        if rate.abs() > 1e-14 {
            times.push(-offset / rate);
        } else if offset.abs() < 1e-12 {
            return None;
        }
    }
    times.sort_by(f64::total_cmp);
    if times.windows(2).any(|w| w[1] - w[0] < CROSSING_SEPARATION) {
        return None;
    }
    Some(times.len() as u64)
}

/// Lines against `N` mutually orthogonal hyperplanes of `R^N`.
pub fn hyperplane_line_bound(n: usize, trials: u64, seed: u64, exec: Execution) -> Result<BoundReport> {
    if n < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let mut r = rng::stream(seed, u64::MAX);
    let gauss: Vec<_> = (0..n).map(|_| rng::gaussian_vector(&mut r, n)).collect();
    let basis = orthonormalize(&gauss, &Metric::Euclidean)?.basis_vectors();

    // Positive coordinates in the basis, direction with all coefficients nonzero.
    let a: DVector<f64> = basis.iter().fold(DVector::zeros(n), |acc, v| acc + v);
    let u: DVector<f64> = basis
        .iter()
        .enumerate()
        .fold(DVector::zeros(n), |acc, (k, v)| acc - v * (k as f64 + 1.0));
    let witness = hyperplane_crossings(&a, &u, &basis);

    let empirical = exec.map_reduce(
        trials,
        0u64,
        |t| {
            let mut r = rng::stream(seed, t);
            let a = rng::gaussian_vector(&mut r, n);
            let u = rng::unit_vector(&mut r, n);
            hyperplane_crossings(&a, &u, &basis).unwrap_or(0)
        },
        u64::max,
    );
    Ok(BoundReport::new("hyperplane_line", &[("N", n as f64)], n as f64).observe(empirical, witness))
}

/// Number of coordinate subspaces `S_I` (`|I| = d`) met by `a + t u`, or
/// `None` if the line lies in one of them or passes through an intersection
/// (more than `d` coordinates vanishing at once).
pub fn coordinate_subspace_hits(a: &[f64], u: &[f64], d: usize) -> Option<u64> {
    const ZERO: f64 = 1e-9;
    let n = a.len();
    let identically_zero = (0..n).filter(|&i| a[i].abs() < ZERO && u[i].abs() < ZERO).count();
    if identically_zero >= d {
        return None;
    }
    let mut roots: Vec<f64> = (0..n)
        .filter(|&i| u[i].abs() >= ZERO)
        .map(|i| -a[i] / u[i])
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() < ZERO);
    let mut hits = 0;
    for t in roots {
        let zeros = (0..n).filter(|&i| (a[i] + t * u[i]).abs() < ZERO).count();
        if zeros > d {
            return None;
        }
        if zeros == d {
            hits += 1;
        }
    }
    Some(hits)
}

/// Lines against the `C(N, d)` coordinate subspaces of codimension `d`.
///
/// Sampled lines use small-integer coordinates so that simultaneous zeros
/// actually occur; lines through intersections are discarded.
pub fn codim_line_bound(n: usize, d: usize, trials: u64, seed: u64, exec: Execution) -> Result<BoundReport> {
    if !(d >= 1 && d < n) {
        return Err(Error::InvalidArgument(format!("need 1 <= d < N, got d = {d}, N = {n}")));
    }
    // a = (0, .., 0, 1, 2, ..), u = (0, .., 0, 1, .., 1); first d-1 entries zero.
    let a: Vec<f64> = (0..n).map(|i| if i + 1 < d { 0.0 } else { (i + 2 - d) as f64 }).collect();
    let u: Vec<f64> = (0..n).map(|i| if i + 1 < d { 0.0 } else { 1.0 }).collect();
    let witness = coordinate_subspace_hits(&a, &u, d);

    let empirical = exec.map_reduce(
        trials,
        0u64,
        |t| {
            let mut r = rng::stream(seed, t);
            let zeroed = r.random_range(0..d);
            let mut a: Vec<f64> = (0..n).map(|_| r.random_range(-3i32..=3) as f64).collect();
            let mut u: Vec<f64> = (0..n).map(|_| r.random_range(-2i32..=2) as f64).collect();
            for _ in 0..zeroed {
                let i = r.random_range(0..n);
                a[i] = 0.0;
                u[i] = 0.0;
            }
            coordinate_subspace_hits(&a, &u, d).unwrap_or(0)
        },
        u64::max,
    );
    let predicted = (n - d + 1) as f64;
    Ok(BoundReport::new("codim_line", &[("N", n as f64), ("d", d as f64)], predicted).observe(empirical, witness))
}

fn binomial2(n: usize) -> f64 {
    (n * (n - 1) / 2) as f64
}

/// Hard-rod bounds on a line: the `C(N, 2)` bound under each of its three
/// sufficient mass conditions, and the general mass-ratio bound
/// `2 (8 N^2 (N - 2) m_max / m_min)^(N - 2)`.
pub fn hard_rod_bounds(n: usize, masses: &MassVector) -> Result<Vec<BoundReport>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two rods".into()));
    }
    if masses.len() != n {
        return Err(Error::InvalidSystem(format!("{} masses for {n} rods", masses.len())));
    }
    let m = masses.as_slice();
    let equal = m.iter().all(|x| (x - m[0]).abs() <= 1e-12 * m[0]);
    let geometric = (1..n.saturating_sub(1)).all(|i| m[i] >= (m[i - 1] * m[i + 1]).sqrt());
    let arithmetic = (1..n.saturating_sub(1)).all(|i| m[i] >= 0.5 * (m[i - 1] + m[i + 1]));
    let inputs = [("N", n as f64), ("m_max", masses.max()), ("m_min", masses.min())];

    let mut out = Vec::new();
    for (name, ok) in [
        ("binomial_equal_mass", equal),
        ("binomial_geometric_mean", geometric),
        ("binomial_arithmetic_mean", arithmetic),
    ] {
        let mut r = BoundReport::new(name, &inputs, binomial2(n));
        r.applicable = Some(ok);
        out.push(r);
    }
    let base = 8.0 * (n * n) as f64 * (n - 2) as f64 * masses.max() / masses.min();
    let galperin = 2.0 * base.powi((n - 2) as i32);
    let mut r = BoundReport::new("mass_ratio_general", &inputs, galperin);
    r.applicable = Some(true);
    out.push(r);
    Ok(out)
}
