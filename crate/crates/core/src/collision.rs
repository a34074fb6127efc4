//! Binary collision subspaces of `R^N ⊗ R^m` under the mass metric, and
//! numerical checks of their principal angles.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    orthogonal_complement, orthonormalize, principal_angles, subspace_intersection, MassVector, Metric,
    Subspace,
};
use crate::policy::NumericPolicy;

/// Tolerance for agreement between computed and predicted angle lists.
pub const THEOREM_TOL: f64 = 1e-9;
/// Tolerance for agreement with explicitly constructed spans.
pub const SPAN_TOL: f64 = 1e-8;

/// `N` point masses moving in `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilliardSystem {
    n: usize,
    spatial_dim: usize,
    masses: MassVector,
}

impl BilliardSystem {
    pub fn new(n: usize, spatial_dim: usize, masses: MassVector) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSystem(format!("need at least 2 particles, got {n}")));
        }
        if spatial_dim < 1 {
            return Err(Error::InvalidSystem("spatial dimension must be at least 1".into()));
        }
        if masses.len() != n {
            return Err(Error::InvalidSystem(format!(
                "{} masses given for {n} particles",
                masses.len()
            )));
        }
        Ok(Self {
            n,
            spatial_dim,
            masses,
        })
    }

    pub fn equal_masses(n: usize, spatial_dim: usize) -> Result<Self> {
        Self::new(n, spatial_dim, MassVector::unit(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn masses(&self) -> &MassVector {
        &self.masses
    }

    pub fn ambient_dim(&self) -> usize {
        self.n * self.spatial_dim
    }

    pub fn metric(&self) -> Metric {
        Metric::mass(self.masses.clone(), self.spatial_dim)
    }

    /// All pairs `(i, j)` with `i < j`, in lexicographic order.
    pub fn pairs(&self) -> Vec<PairIndex> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                out.push(PairIndex { i, j });
            }
        }
        out
    }

    fn check_pair(&self, p: PairIndex) -> Result<()> {
        if p.j > self.n {
            return Err(Error::InvalidPair {
                i: p.i,
                j: p.j,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Ambient vector `sum_k coeffs[k] * eps_{particle k} ⊗ e_axis`.
    fn tensor(&self, coeffs: &[(usize, f64)], axis: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.ambient_dim());
        for &(particle, c) in coeffs {
            v[(particle - 1) * self.spatial_dim + axis] += c;
        }
        v
    }
}

/// Unordered pair of distinct particle labels, stored 1-based with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairIndex {
    i: usize,
    j: usize,
}

impl PairIndex {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a == b {
            return Err(Error::InvalidPair { i: a, j: b, n: 0 });
        }
        Ok(Self {
            i: a.min(b),
            j: a.max(b),
        })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn contains(&self, k: usize) -> bool {
        self.i == k || self.j == k
    }

    /// The particle both pairs involve, if exactly one is shared.
    pub fn shared_with(&self, other: &PairIndex) -> Option<usize> {
        if self == other {
            return None;
        }
        [self.i, self.j].into_iter().find(|k| other.contains(*k))
    }

    pub fn other(&self, k: usize) -> usize {
        if self.i == k {
            self.j
        } else {
            self.i
        }
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.j < 10 {
            write!(f, "{}{}", self.i, self.j)
        } else {
            write!(f, "{}-{}", self.i, self.j)
        }
    }
}

impl FromStr for PairIndex {
    type Err = Error;

    /// Accepts `"12"` (single-digit labels) or `"3-11"` / `"3:11"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse pair `{s}`"));
        let s = s.trim();
        let (a, b) = if let Some((a, b)) = s.split_once(['-', ':']) {
            (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?)
        } else if s.len() == 2 && s.chars().all(|c| c.is_ascii_digit()) {
            let d: Vec<usize> = s.chars().map(|c| c as usize - '0' as usize).collect();
            (d[0], d[1])
        } else {
            return Err(bad());
        };
        PairIndex::new(a, b)
    }
}

/// The binary collision subspace `{q : q_i = q_j}`.
///
/// Per spatial axis the basis holds `E_k ⊗ e_a` for every `k` outside the
/// pair and the merged vector `(eps_i + eps_j)/sqrt(m_i + m_j) ⊗ e_a`, placed
/// at the smaller index. The result has dimension `m(N-1)`.
pub fn build_delta(sys: &BilliardSystem, pair: PairIndex) -> Result<Subspace> {
    sys.check_pair(pair)?;
    let m = sys.spatial_dim;
    let masses = sys.masses();
    let mut columns = Vec::with_capacity(m * (sys.n - 1));
    for axis in 0..m {
        for k in 1..=sys.n {
            if k == pair.j {
                continue;
            }
            if k == pair.i {
                let c = 1.0 / (masses.mass(pair.i) + masses.mass(pair.j)).sqrt();
                columns.push(sys.tensor(&[(pair.i, c), (pair.j, c)], axis));
            } else {
                columns.push(sys.tensor(&[(k, 1.0 / masses.mass(k).sqrt())], axis));
            }
        }
    }
    Ok(Subspace::from_orthonormal(sys.metric(), DMatrix::from_columns(&columns)))
}

fn check_masses(ms: &[f64]) -> Result<()> {
    match ms.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        Some(&bad) => Err(Error::NonPositiveMass(bad)),
        None => Ok(()),
    }
}

/// Nonzero principal angle between `Δ_ij` and `Δ_jk`; `m_j` is the mass
/// of the shared particle.
///
/// `cos θ = sqrt(m_i m_k / ((m_i + m_j)(m_j + m_k)))`, the cosine between
/// the mass-orthogonal complements of the triple-collision direction inside
/// each subspace. Equals `pi/3` for equal masses.
pub fn closed_form_angle(m_i: f64, m_j: f64, m_k: f64) -> Result<f64> {
    check_masses(&[m_i, m_j, m_k])?;
    let c = (m_i * m_k / ((m_i + m_j) * (m_j + m_k))).sqrt();
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Mass-metric angle between `eps_i + eps_j - 2 eps_k` and
/// `2 eps_i - eps_j - eps_k`, i.e. the equal-mass complement directions
/// reused with unequal masses:
/// `cos = (2(m_i+m_k) - m_j) / sqrt((m_i+m_j+4m_k)(4m_i+m_j+m_k))`.
///
/// Agrees with [`closed_form_angle`] only when the masses are equal; it is
/// kept for comparison reports.
pub fn naive_complement_angle(m_i: f64, m_j: f64, m_k: f64) -> Result<f64> {
    check_masses(&[m_i, m_j, m_k])?;
    let num = 2.0 * (m_i + m_k) - m_j;
    let den = ((m_i + m_j + 4.0 * m_k) * (4.0 * m_i + m_j + m_k)).sqrt();
    Ok((num / den).clamp(-1.0, 1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairRelation {
    Disjoint,
    Shared { particle: usize, first: usize, last: usize },
}

fn relation(a: PairIndex, b: PairIndex) -> Result<PairRelation> {
    if a == b {
        return Err(Error::SamePair);
    }
    Ok(match a.shared_with(&b) {
        None => PairRelation::Disjoint,
        Some(s) => PairRelation::Shared {
            particle: s,
            first: a.other(s),
            last: b.other(s),
        },
    })
}

/// Expected nonzero angle between `Δ_a` and `Δ_b`.
fn predicted_angle(sys: &BilliardSystem, rel: PairRelation) -> Result<f64> {
    match rel {
        PairRelation::Disjoint => Ok(FRAC_PI_2),
        PairRelation::Shared {
            particle,
            first,
            last,
        } => {
            let m = sys.masses();
            closed_form_angle(m.mass(first), m.mass(particle), m.mass(last))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AngleTheoremReport {
    pub pair_a: PairIndex,
    pub pair_b: PairIndex,
    pub relation: PairRelation,
    pub expected: Vec<f64>,
    pub computed: Vec<f64>,
    pub zero_count: usize,
    pub expected_zero_count: usize,
    /// Value of [`naive_complement_angle`] for shared pairs.
    pub naive_angle: Option<f64>,
    pub max_discrepancy: f64,
    pub pass: bool,
}

/// Compare SVD principal angles of `(Δ_a, Δ_b)` with the predicted list:
/// `d(N-2)` zeros followed by `d` copies of `pi/2` (disjoint pairs) or of
/// [`closed_form_angle`] (one shared particle).
pub fn verify_angle_theorem(sys: &BilliardSystem, a: PairIndex, b: PairIndex) -> Result<AngleTheoremReport> {
    let rel = relation(a, b)?;
    let da = build_delta(sys, a)?;
    let db = build_delta(sys, b)?;
    let computed = principal_angles(&da, &db)?;
    let d = sys.spatial_dim;
    let zeros = d * (sys.n - 2);
    let theta = predicted_angle(sys, rel)?;
    let mut expected = vec![0.0; zeros];
    expected.extend(std::iter::repeat_n(theta, d));
    let naive_angle = match rel {
        PairRelation::Shared {
            particle,
            first,
            last,
        } => {
            let m = sys.masses();
            Some(naive_complement_angle(m.mass(first), m.mass(particle), m.mass(last))?)
        }
        PairRelation::Disjoint => None,
    };
    let max_discrepancy = computed.max_abs_diff(&expected);
    let zero_count = computed.zero_count(NumericPolicy::DEFAULT.zero_angle);
    Ok(AngleTheoremReport {
        pair_a: a,
        pair_b: b,
        relation: rel,
        expected,
        computed: computed.angles,
        zero_count,
        expected_zero_count: zeros,
        naive_angle,
        max_discrepancy,
        pass: max_discrepancy < THEOREM_TOL && zero_count == zeros,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub pair_a: PairIndex,
    pub pair_b: PairIndex,
    pub relation: PairRelation,
    pub intersection_dim: usize,
    pub dim_x: usize,
    pub dim_y: usize,
    /// Largest principal angle between the computed piece and its explicit span.
    pub x_span_error: f64,
    pub y_span_error: f64,
    pub angles_xy: Vec<f64>,
    pub expected_angle: f64,
    pub max_discrepancy: f64,
    pub pass: bool,
}

/// Explicit vector spanning `(Δ_a ∩ Δ_b)^⊥ ∩ Δ_a`, as particle coefficients.
fn explicit_piece(sys: &BilliardSystem, rel: PairRelation, b: PairIndex) -> Vec<(usize, f64)> {
    let m = |k| sys.masses().mass(k);
    match rel {
        // Lies in Δ_a because it vanishes on a's particles.
        PairRelation::Disjoint => vec![(b.i, m(b.j)), (b.j, -m(b.i))],
        // q_first = q_shared, orthogonal to the triple-collision direction.
        PairRelation::Shared {
            particle,
            first,
            last,
        } => vec![
            (first, m(last)),
            (particle, m(last)),
            (last, -(m(first) + m(particle))),
        ],
    }
}

fn explicit_span(sys: &BilliardSystem, coeffs: &[(usize, f64)]) -> Result<Subspace> {
    let vectors: Vec<_> = (0..sys.spatial_dim).map(|axis| sys.tensor(coeffs, axis)).collect();
    orthonormalize(&vectors, &sys.metric())
}

fn span_error(x: &Subspace, y: &Subspace) -> Result<f64> {
    if x.dim() != y.dim() {
        return Ok(f64::INFINITY);
    }
    Ok(principal_angles(x, y)?.angles.iter().copied().fold(0.0, f64::max))
}

/// Split `(Δ_a ∩ Δ_b)^⊥` into its parts inside `Δ_a` and `Δ_b`, and compare
/// them with explicitly constructed spanning vectors.
pub fn appendix_decomposition(sys: &BilliardSystem, a: PairIndex, b: PairIndex) -> Result<DecompositionReport> {
    let rel = relation(a, b)?;
    let da = build_delta(sys, a)?;
    let db = build_delta(sys, b)?;
    let inter = subspace_intersection(&da, &db)?;
    let perp = orthogonal_complement(&inter);
    let x = subspace_intersection(&perp, &da)?;
    let y = subspace_intersection(&perp, &db)?;

    let x_explicit = explicit_span(sys, &explicit_piece(sys, rel, b))?;
    let mirrored = match rel {
        PairRelation::Disjoint => PairRelation::Disjoint,
        PairRelation::Shared {
            particle,
            first,
            last,
        } => PairRelation::Shared {
            particle,
            first: last,
            last: first,
        },
    };
    let y_explicit = explicit_span(sys, &explicit_piece(sys, mirrored, a))?;

    let x_span_error = span_error(&x, &x_explicit)?;
    let y_span_error = span_error(&y, &y_explicit)?;
    let angles_xy = principal_angles(&x, &y)?.angles;
    let expected_angle = predicted_angle(sys, rel)?;
    let d = sys.spatial_dim;
    let max_discrepancy = if angles_xy.len() == d {
        angles_xy.iter().map(|t| (t - expected_angle).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let pass = x.dim() == d
        && y.dim() == d
        && x_span_error < SPAN_TOL
        && y_span_error < SPAN_TOL
        && max_discrepancy < THEOREM_TOL;
    Ok(DecompositionReport {
        pair_a: a,
        pair_b: b,
        relation: rel,
        intersection_dim: inter.dim(),
        dim_x: x.dim(),
        dim_y: y.dim(),
        x_span_error,
        y_span_error,
        angles_xy,
        expected_angle,
        max_discrepancy,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn pair(s: &str) -> PairIndex {
        s.parse().unwrap()
    }

    fn sys(n: usize, m: usize, masses: &[f64]) -> BilliardSystem {
        BilliardSystem::new(n, m, MassVector::new(masses.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn pair_parsing_and_normalization() {
        assert_eq!(pair("21"), PairIndex::new(1, 2).unwrap());
        assert_eq!(pair("3-11").j(), 11);
        assert!("11".parse::<PairIndex>().is_err());
        assert!("1x".parse::<PairIndex>().is_err());
        assert_eq!(pair("23").to_string(), "23");
    }

    #[test]
    fn delta_basis_for_three_on_a_line() {
        let s = sys(3, 1, &[1.0, 1.0, 1.0]);
        let d = build_delta(&s, pair("12")).unwrap();
        assert_eq!(d.dim(), 2);
        let h = 0.5f64.sqrt();
        let b = d.basis();
        assert!((b[(0, 0)] - h).abs() < 1e-15 && (b[(1, 0)] - h).abs() < 1e-15 && b[(2, 0)] == 0.0);
        assert_eq!(b.column(1).as_slice(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn delta_dimensions_and_collision_property() {
        let s = sys(3, 2, &[1.0, 1.0, 1.0]);
        let d = build_delta(&s, pair("12")).unwrap();
        assert_eq!((d.dim(), d.ambient_dim()), (4, 6));
        for v in d.basis_vectors() {
            assert_eq!(v[0], v[2]);
            assert_eq!(v[1], v[3]);
        }
    }

    #[test]
    fn delta_is_metric_orthonormal_for_unequal_masses() {
        let s = sys(3, 1, &[1.0, 3.0, 5.0]);
        let d = build_delta(&s, pair("12")).unwrap();
        let merged = d.basis().column(0).into_owned();
        assert!((merged[0] - 0.5).abs() < 1e-15);
        let g = d.gram();
        assert!((g - DMatrix::identity(2, 2)).abs().max() < 1e-12);
        assert!(build_delta(&s, pair("14")).is_err());
    }

    #[test]
    fn closed_form_values() {
        assert!((closed_form_angle(1.0, 1.0, 1.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert!((closed_form_angle(2.0, 1.0, 3.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((closed_form_angle(1.0, 4.0, 1.0).unwrap() - 0.2f64.acos()).abs() < 1e-15);
        assert!(closed_form_angle(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn naive_formula_values() {
        assert!((naive_complement_angle(1.0, 1.0, 1.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert_eq!(naive_complement_angle(1.0, 4.0, 1.0).unwrap(), FRAC_PI_2);
        let expected = (9.0 / (15.0f64 * 12.0).sqrt()).acos();
        assert!((naive_complement_angle(2.0, 1.0, 3.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn theorem_examples() {
        let r = verify_angle_theorem(&sys(4, 1, &[1.0; 4]), pair("12"), pair("34")).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.zero_count, 2);

        let r = verify_angle_theorem(&sys(3, 2, &[1.0; 3]), pair("12"), pair("23")).unwrap();
        assert!(r.max_abs_ok(&[0.0, 0.0, FRAC_PI_3, FRAC_PI_3]));

        let s = sys(3, 1, &[2.0, 1.0, 3.0]);
        let r = verify_angle_theorem(&s, pair("12"), pair("23")).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.computed[1] - closed_form_angle(2.0, 1.0, 3.0).unwrap()).abs() < 1e-9);
        assert!(verify_angle_theorem(&s, pair("12"), pair("21")).is_err());
    }

    impl AngleTheoremReport {
        fn max_abs_ok(&self, want: &[f64]) -> bool {
            self.pass && crate::linalg::AngleVector::from_angles(self.computed.clone()).max_abs_diff(want) < 1e-9
        }
    }

    #[test]
    fn decomposition_cases() {
        let r = appendix_decomposition(&sys(4, 1, &[1.0; 4]), pair("12"), pair("34")).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.angles_xy[0] - FRAC_PI_2).abs() < 1e-12);

        let r = appendix_decomposition(&sys(3, 2, &[1.0; 3]), pair("12"), pair("23")).unwrap();
        assert!(r.pass, "{r:?}");

        let r = appendix_decomposition(&sys(3, 1, &[1.0, 4.0, 1.0]), pair("12"), pair("23")).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.angles_xy[0] - 0.2f64.acos()).abs() < 1e-9);
    }
}
