use nalgebra::DVector;
use serde::Serialize;

use super::arrangement::SubspaceArrangement;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::policy::NumericPolicy;

const TANGENT_TOL: f64 = 1e-10;

/// Specular reflection: keep the wall component of `v_minus` and flip the
/// component orthogonal to the wall, `v_plus = 2 P(v_minus) - v_minus`.
///
/// This preserves the metric norm and the wall projection, differs from
/// `v_minus` whenever the velocity is transversal, and is continuous in
/// `v_minus`.
pub fn reflect(v_minus: &DVector<f64>, wall: &Subspace) -> Result<DVector<f64>> {
    if v_minus.len() != wall.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: wall.ambient_dim(),
            got: v_minus.len(),
        });
    }
    let p = wall.project(v_minus);
    let normal = v_minus - &p;
    let metric = wall.metric();
    if metric.norm(&normal) <= TANGENT_TOL * metric.norm(v_minus).max(f64::MIN_POSITIVE) {
        return Err(Error::TangentialVelocity);
    }
    Ok(&p * 2.0 - v_minus)
}

#[derive(Debug, Clone, PartialEq)]
pub enum NextCollision {
    Escape,
    Hit {
        time: f64,
        wall: usize,
        point: DVector<f64>,
    },
    /// The first hit point lies on two or more walls at once.
    Degenerate {
        time: f64,
        walls: Vec<usize>,
        point: DVector<f64>,
    },
}

/// Earliest hit in Euclidean coordinates, ignoring hits closer than the
/// minimum advance time. A ray leaving a linear wall never returns to it, so
/// the wall just left is skipped.
fn next_hit_euclidean(
    x: &DVector<f64>,
    v: &DVector<f64>,
    arr: &SubspaceArrangement,
    leaving: Option<usize>,
) -> Option<(f64, usize)> {
    let policy = NumericPolicy::DEFAULT;
    let scale = x.norm().max(1.0);
    let mut best: Option<(f64, usize)> = None;
    for (k, wall) in arr.walls().iter().enumerate() {
        if leaving == Some(k) {
            continue;
        }
        let a = wall.perp(x);
        let b = wall.perp(v);
        let bb = b.norm_squared();
        if bb <= f64::EPSILON * f64::EPSILON {
            // Ray parallel to the wall.
            continue;
        }
        let t = -a.dot(&b) / bb;
        if t <= policy.min_advance {
            continue;
        }
        let miss = (a + b * t).norm();
        if miss <= policy.on_wall * scale && best.is_none_or(|(bt, _)| t < bt) {
            best = Some((t, k));
        }
    }
    best
}

fn walls_through(point: &DVector<f64>, arr: &SubspaceArrangement) -> Vec<usize> {
    let tol = NumericPolicy::DEFAULT.on_wall * point.norm().max(1.0);
    arr.walls()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.perp(point).norm() <= tol)
        .map(|(k, _)| k)
        .collect()
}

fn classify(x: &DVector<f64>, v: &DVector<f64>, arr: &SubspaceArrangement, leaving: Option<usize>) -> NextCollision {
    match next_hit_euclidean(x, v, arr, leaving) {
        None => NextCollision::Escape,
        Some((time, wall)) => {
            let point = x + v * time;
            let on = walls_through(&point, arr);
            if on.len() > 1 {
                NextCollision::Degenerate {
                    time,
                    walls: on,
                    point,
                }
            } else {
                NextCollision::Hit { time, wall, point }
            }
        }
    }
}

/// First collision of the ray `point + t * velocity`, `t > 0`, with any wall
/// of the arrangement. Points are returned in the caller's coordinates.
pub fn next_collision(point: &DVector<f64>, velocity: &DVector<f64>, arr: &SubspaceArrangement) -> NextCollision {
    let m = arr.metric();
    match classify(&m.to_euclidean(point), &m.to_euclidean(velocity), arr, None) {
        NextCollision::Escape => NextCollision::Escape,
        NextCollision::Hit { time, wall, point } => NextCollision::Hit {
            time,
            wall,
            point: m.from_euclidean(&point),
        },
        NextCollision::Degenerate { time, walls, point } => NextCollision::Degenerate {
            time,
            walls,
            point: m.from_euclidean(&point),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CollisionEvent {
    pub time: f64,
    pub label: String,
    #[serde(skip)]
    pub wall: usize,
    #[serde(skip)]
    pub point: DVector<f64>,
    #[serde(skip)]
    pub v_minus: DVector<f64>,
    #[serde(skip)]
    pub v_plus: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Escaped,
    MaxEvents,
    Degenerate { walls: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub start: DVector<f64>,
    pub velocity: DVector<f64>,
    pub events: Vec<CollisionEvent>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn labels(&self) -> Vec<&str> {
        self.events.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.termination, Termination::Degenerate { .. })
    }

    /// Velocity after the last event (or the initial one).
    pub fn final_velocity(&self) -> &DVector<f64> {
        self.events.last().map_or(&self.velocity, |e| &e.v_plus)
    }

    /// Whether two consecutive events hit the same wall.
    pub fn has_repeated_wall(&self) -> bool {
        self.events.windows(2).any(|w| w[0].wall == w[1].wall)
    }
}

/// Follow the billiard flow from `start` until it escapes, hits a
/// multi-wall point, or records `max_events` collisions.
pub fn run_trajectory(
    start: &DVector<f64>,
    velocity: &DVector<f64>,
    arr: &SubspaceArrangement,
    max_events: usize,
) -> Result<Trajectory> {
    let m = arr.metric();
    if start.len() != arr.ambient_dim() || velocity.len() != arr.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: arr.ambient_dim(),
            got: start.len().max(velocity.len()),
        });
    }
    let mut x = m.to_euclidean(start);
    if let Some(&k) = walls_through(&x, arr).first() {
        return Err(Error::DegenerateStart(arr.walls()[k].label.clone()));
    }
    let mut v = m.to_euclidean(velocity);
    let speed = v.norm();
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(Error::InvalidArgument("velocity must be nonzero".into()));
    }
    v /= speed;

    let mut events = Vec::new();
    let mut clock = 0.0;
    let termination = loop {
        if events.len() >= max_events {
            break Termination::MaxEvents;
        }
        match classify(&x, &v, arr, events.last().map(|e: &CollisionEvent| e.wall)) {
            NextCollision::Escape => break Termination::Escaped,
            NextCollision::Degenerate { walls, .. } => {
                break Termination::Degenerate {
                    walls: walls.iter().map(|&k| arr.walls()[k].label.clone()).collect(),
                }
            }
            NextCollision::Hit { time, wall, point } => {
                let w = &arr.walls()[wall];
                let v_plus = &w.proj * &v * 2.0 - &v;
                clock += time;
                events.push(CollisionEvent {
                    time: clock,
                    label: w.label.clone(),
                    wall,
                    point: m.from_euclidean(&point),
                    v_minus: m.from_euclidean(&v),
                    v_plus: m.from_euclidean(&v_plus),
                });
                x = point;
                v = v_plus;
            }
        }
    };
    Ok(Trajectory {
        start: start.clone(),
        velocity: m.from_euclidean(&m.to_euclidean(velocity).normalize()),
        events,
        termination,
    })
}

/// Rerun a trajectory backwards from beyond its last event and return the
/// largest distance between matching event points, or infinity when the
/// reversed run records fewer events. The reversed run may continue into
/// the past of the start point, so only the first `events.len()` are compared.
pub fn time_reversal_error(traj: &Trajectory, arr: &SubspaceArrangement) -> Result<f64> {
    let Some(last) = traj.events.last() else {
        return Ok(0.0);
    };
    let v = traj.final_velocity();
    let restart = &last.point + v;
    let back = run_trajectory(&restart, &(-v), arr, traj.events.len())?;
    if back.events.len() != traj.events.len() {
        return Ok(f64::INFINITY);
    }
    let m = arr.metric();
    Ok(traj
        .events
        .iter()
        .rev()
        .zip(&back.events)
        .map(|(a, b)| m.norm(&(&a.point - &b.point)))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{build_delta, BilliardSystem, PairIndex};
    use crate::jacobi::JacobiMasses;
    use crate::linalg::{orthonormalize, MassVector, Metric};
    use crate::sim::reduced_arrangement;
    use nalgebra::dvector;

    fn line(v: DVector<f64>) -> Subspace {
        Subspace::span(&[v]).unwrap()
    }

    #[test]
    fn reflect_normal_incidence() {
        let h = 0.5f64.sqrt();
        let wall = line(dvector![h, h]);
        let out = reflect(&dvector![h, -h], &wall).unwrap();
        assert!((out - dvector![-h, h]).norm() < 1e-15);
    }

    #[test]
    fn reflect_equal_mass_exchange() {
        let sys = BilliardSystem::equal_masses(3, 1).unwrap();
        let d12 = build_delta(&sys, PairIndex::new(1, 2).unwrap()).unwrap();
        let out = reflect(&dvector![1.0, 0.0, 0.0], &d12).unwrap();
        assert!((out - dvector![0.0, 1.0, 0.0]).norm() < 1e-15);
    }

    #[test]
    fn reflect_rejects_tangential() {
        let wall = line(dvector![1.0, 1.0]);
        assert_eq!(reflect(&dvector![2.0, 2.0], &wall), Err(Error::TangentialVelocity));
    }

    #[test]
    fn reflect_conserves_mass_energy_and_momentum() {
        let metric = Metric::mass(MassVector::new(vec![1.0, 3.0]).unwrap(), 1);
        let wall = orthonormalize(&[dvector![1.0, 1.0]], &metric).unwrap();
        let v = dvector![0.7, -0.2];
        let out = reflect(&v, &wall).unwrap();
        assert!((metric.norm(&out) - metric.norm(&v)).abs() < 1e-12);
        assert!((wall.project(&out) - wall.project(&v)).norm() < 1e-12);
        // Elastic collision of masses 1 and 3 on a line conserves momentum.
        assert!((out[0] + 3.0 * out[1] - (v[0] + 3.0 * v[1])).abs() < 1e-12);
        let back = reflect(&out, &wall).unwrap();
        assert!((back - v).norm() < 1e-12);
    }

    #[test]
    fn next_collision_simple_hit() {
        let arr = SubspaceArrangement::new(vec![("y".into(), line(dvector![0.0, 1.0]))]).unwrap();
        match next_collision(&dvector![1.0, 1.0], &dvector![-1.0, 0.0], &arr) {
            NextCollision::Hit { time, point, .. } => {
                assert!((time - 1.0).abs() < 1e-12);
                assert!((point - dvector![0.0, 1.0]).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_ray_misses() {
        let plane = Subspace::span(&[dvector![1.0, 0.0, 0.0], dvector![0.0, 1.0, 0.0]]).unwrap();
        let arr = SubspaceArrangement::new(vec![("xy".into(), plane)]).unwrap();
        let nc = next_collision(&dvector![0.0, 0.0, 1.0], &dvector![1.0, 0.0, 0.0], &arr);
        assert_eq!(nc, NextCollision::Escape);
    }

    #[test]
    fn ray_through_triple_point_is_degenerate() {
        let arr = reduced_arrangement(&JacobiMasses::equal());
        let x = dvector![0.3, -0.1, 0.5, 0.2];
        match next_collision(&x, &(-&x), &arr) {
            NextCollision::Degenerate { walls, .. } => assert_eq!(walls.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_wall_one_bounce() {
        let arr = SubspaceArrangement::new(vec![("y".into(), line(dvector![0.0, 1.0]))]).unwrap();
        let t = run_trajectory(&dvector![1.0, 0.5], &dvector![-1.0, 0.3], &arr, 10).unwrap();
        assert_eq!(t.events.len(), 1);
        assert_eq!(t.termination, Termination::Escaped);
        assert!(time_reversal_error(&t, &arr).unwrap() < 1e-9);
    }

    #[test]
    fn start_on_wall_is_rejected() {
        let arr = SubspaceArrangement::new(vec![("y".into(), line(dvector![0.0, 1.0]))]).unwrap();
        assert!(matches!(
            run_trajectory(&dvector![0.0, 0.5], &dvector![1.0, 0.0], &arr, 4),
            Err(Error::DegenerateStart(_))
        ));
    }
}
