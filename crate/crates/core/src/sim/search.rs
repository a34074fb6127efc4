use std::collections::BTreeSet;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use super::arrangement::SubspaceArrangement;
use super::dynamics::run_trajectory;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::policy::NumericPolicy;
use crate::rng::{self, StreamRng};

const MAX_REJECTIONS: usize = 1000;
const MAX_REPORTED_SEQUENCES: usize = 32;

/// How initial conditions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Start uniform on the radius-`R` sphere, velocity uniform on the unit
    /// sphere, both in metric-orthonormal coordinates.
    Sphere,
    /// Reading `R^{2k}` as `C^k`: pick a phase `phi`, then draw start and
    /// velocity uniformly (on circles/spheres) inside the real slice
    /// `e^{i phi} R^k`. For the reduced three-body arrangement these are the
    /// collinear motions; the slice is invariant under the flow.
    #[default]
    PhaseSlice,
    /// Generic trajectories built to hit two distinct walls: a segment
    /// between random points of two walls is extended backwards and forwards
    /// by the flow.
    SegmentSeeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub trials: u64,
    pub seed: u64,
    pub max_events: usize,
    pub radius: f64,
    pub sampling: Sampling,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            max_events: 10,
            radius: 1.0,
            sampling: Sampling::default(),
            execution: Execution::default(),
        }
    }
}

/// Result of one sampled trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub labels: Vec<String>,
    pub degenerate: bool,
    pub repeated_wall: bool,
}

impl TrialOutcome {
    pub fn count(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    /// `histogram[k]` = number of non-degenerate trials with `k` events.
    pub histogram: Vec<u64>,
    pub non_degenerate: u64,
    pub degenerate: u64,
    pub max_count: usize,
    pub maximal_sequences: Vec<Vec<String>>,
    pub foch_sequences: u64,
    pub repeated_wall: u64,
}

impl SearchResult {
    pub fn from_outcomes(config: SearchConfig, outcomes: &[TrialOutcome]) -> Self {
        let mut histogram = vec![0u64; config.max_events + 1];
        let mut degenerate = 0;
        let mut foch_sequences = 0;
        let mut repeated_wall = 0;
        for o in outcomes {
            if o.degenerate {
                degenerate += 1;
                continue;
            }
            histogram[o.count().min(config.max_events)] += 1;
            if o.labels.windows(4).any(is_foch_pattern) {
                foch_sequences += 1;
            }
            if o.repeated_wall {
                repeated_wall += 1;
            }
        }
        let max_count = histogram.iter().rposition(|&c| c > 0).unwrap_or(0);
        let maximal: BTreeSet<Vec<String>> = outcomes
            .iter()
            .filter(|o| !o.degenerate && max_count > 0 && o.count() == max_count)
            .map(|o| o.labels.clone())
            .collect();
        Self {
            config,
            non_degenerate: histogram.iter().sum(),
            histogram,
            degenerate,
            max_count,
            maximal_sequences: maximal.into_iter().take(MAX_REPORTED_SEQUENCES).collect(),
            foch_sequences,
            repeated_wall,
        }
    }

    /// Event counts that occurred at least once.
    pub fn support(&self) -> Vec<usize> {
        (0..self.histogram.len()).filter(|&k| self.histogram[k] > 0).collect()
    }
}

/// `X Y X Z` with `X`, `Y`, `Z` distinct: the four-collision pattern
/// `(12)(23)(12)(13)` up to relabeling.
pub fn is_foch_pattern<S: AsRef<str>>(w: &[S]) -> bool {
    if w.len() != 4 {
        return false;
    }
    let [a, b, c, d] = [w[0].as_ref(), w[1].as_ref(), w[2].as_ref(), w[3].as_ref()];
    a == c && a != b && a != d && b != d
}

fn off_walls(x: &DVector<f64>, arr: &SubspaceArrangement) -> bool {
    let tol = NumericPolicy::DEFAULT.on_wall * x.norm().max(1.0);
    arr.walls().iter().all(|w| w.perp(x).norm() > tol)
}

/// Initial condition in Euclidean coordinates.
fn draw(
    arr: &SubspaceArrangement,
    cfg: &SearchConfig,
    r: &mut StreamRng,
) -> Option<(DVector<f64>, DVector<f64>)> {
    let n = arr.ambient_dim();
    for _ in 0..MAX_REJECTIONS {
        let (x, v) = match cfg.sampling {
            Sampling::Sphere => (rng::unit_vector(r, n) * cfg.radius, rng::unit_vector(r, n)),
            Sampling::PhaseSlice => {
                let k = n / 2;
                let phi = r.random_range(0.0..std::f64::consts::TAU);
                let (c, s) = (phi.cos(), phi.sin());
                let lift = |coeffs: DVector<f64>| {
                    DVector::from_fn(n, |i, _| coeffs[i / 2] * if i % 2 == 0 { c } else { s })
                };
                (lift(rng::unit_vector(r, k)) * cfg.radius, lift(rng::unit_vector(r, k)))
            }
            Sampling::SegmentSeeded => {
                let walls = arr.walls();
                let a = r.random_range(0..walls.len());
                let mut b = r.random_range(0..walls.len() - 1);
                if b >= a {
                    b += 1;
                }
                let point_on = |k: usize, r: &mut StreamRng| {
                    let q = walls[k].subspace.euclidean_basis();
                    &q * rng::unit_vector(r, q.ncols()) * cfg.radius
                };
                let p = point_on(a, r);
                let q = point_on(b, r);
                let d = &q - &p;
                let len = d.norm();
                if len < 1e-6 {
                    continue;
                }
                ((p + q) * 0.5, d / len)
            }
        };
        if off_walls(&x, arr) {
            return Some((x, v));
        }
    }
    None
}

fn run_one(arr: &SubspaceArrangement, cfg: &SearchConfig, trial: u64) -> TrialOutcome {
    let degenerate = TrialOutcome {
        labels: Vec::new(),
        degenerate: true,
        repeated_wall: false,
    };
    let mut r = rng::stream(cfg.seed, trial);
    let Some((x, v)) = draw(arr, cfg, &mut r) else {
        return degenerate;
    };
    let m = arr.metric();
    let (mut start, mut velocity) = (m.from_euclidean(&x), m.from_euclidean(&v));
    if cfg.sampling == Sampling::SegmentSeeded {
        // Follow the seed segment backwards to recover the full past.
        let Ok(back) = run_trajectory(&start, &(-&velocity), arr, cfg.max_events) else {
            return degenerate;
        };
        if back.is_degenerate() {
            return degenerate;
        }
        let w = back.final_velocity().clone();
        let from = back.events.last().map_or(start.clone(), |e| e.point.clone());
        start = from + &w;
        velocity = -w;
    }
    match run_trajectory(&start, &velocity, arr, cfg.max_events) {
        Ok(t) if !t.is_degenerate() => TrialOutcome {
            repeated_wall: t.has_repeated_wall(),
            labels: t.events.into_iter().map(|e| e.label).collect(),
            degenerate: false,
        },
        _ => degenerate,
    }
}

/// Per-trial outcomes in trial order. Trial `t` uses stream `t` of `seed`,
/// so the output does not depend on the execution mode or thread count.
pub fn collect_outcomes(arr: &SubspaceArrangement, cfg: &SearchConfig) -> Result<Vec<TrialOutcome>> {
    if cfg.trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    match cfg.sampling {
        Sampling::PhaseSlice if !arr.ambient_dim().is_multiple_of(2) => {
            return Err(Error::InvalidArgument("phase slices need an even ambient dimension".into()))
        }
        Sampling::SegmentSeeded if arr.walls().len() < 2 => {
            return Err(Error::InvalidArgument("segment seeding needs two walls".into()))
        }
        _ => {}
    }
    Ok(cfg.execution.map_range(cfg.trials, |t| run_one(arr, cfg, t)))
}

/// Histogram of collision counts over `cfg.trials` sampled trajectories.
pub fn max_collision_search(arr: &SubspaceArrangement, cfg: &SearchConfig) -> Result<SearchResult> {
    let outcomes = collect_outcomes(arr, cfg)?;
    Ok(SearchResult::from_outcomes(*cfg, &outcomes))
}
