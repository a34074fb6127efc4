//! Named verification suites, one per module, run by `verify-all`.
//!
//! Every check is seeded and deterministic. `trials` overrides the default
//! sample count of each Monte-Carlo check; the claims being checked do not
//! depend on it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    codim_line_bound, hard_rod_bounds, hyperplane_line_bound, mass_ratio_grid, trajectory_bound, wedge_bound,
    MassRatioGrid,
};
use crate::collision::{appendix_decomposition, closed_form_angle, verify_angle_theorem, BilliardSystem, PairIndex};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::jacobi::{jacobi_project, reduced_delta, verify_principal_vector_image, JacobiMasses};
use crate::linalg::{
    check_angle_duality, orthogonal_complement, orthonormalize, principal_angles, principal_angles_oracle, MassVector,
    Metric, Subspace,
};
use crate::rng::{self, StreamRng};
use crate::sim::{collect_outcomes, reduced_arrangement, run_trajectory, time_reversal_error, SearchConfig, SearchResult};
use crate::spherical::{
    cone_feasibility, dihedral_angle_via_tangents, line_intersection_count, random_rotation,
    three_planes_common_line_count, tiling_322, tiling_332, DEFAULT_FACE_SAMPLES,
};

pub const SUITES: [&str; 6] = ["linalg", "collision", "jacobi", "sim", "bounds", "spherical"];

/// Angular resolution used when comparing against the brute-force oracle.
pub const ORACLE_RESOLUTION: usize = 96;

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: Option<u64>,
    #[serde(skip)]
    pub execution: Execution,
}

impl SuiteConfig {
    fn trials(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default).max(1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

type Outcome = Result<(bool, String)>;
type CheckFn = fn(&SuiteConfig) -> Outcome;

fn checks_for(suite: &str) -> &'static [(&'static str, CheckFn)] {
    match suite {
        "linalg" => &[
            ("duality_worked_example", duality_worked_example),
            ("duality_random_pairs", duality_random_pairs),
            ("angles_symmetric_sorted", angles_symmetric_sorted),
            ("oracle_agreement", oracle_agreement),
        ],
        "collision" => &[
            ("angle_theorem_equal_masses", angle_theorem_equal_masses),
            ("angle_theorem_random_masses", angle_theorem_random_masses),
            ("appendix_decomposition", appendix_spans),
        ],
        "jacobi" => &[
            ("projection_isometry", projection_isometry),
            ("reduced_angles", reduced_angles),
            ("principal_vector_images", principal_vector_images),
        ],
        "sim" => &[
            ("equal_mass_collisions", equal_mass_collisions),
            ("random_mass_collisions", random_mass_collisions),
            ("time_reversal", time_reversal),
        ],
        "bounds" => &[
            ("wedge_examples", wedge_examples),
            ("mass_ratio_grid", grid_check),
            ("line_bounds", line_bounds),
            ("hard_rods", hard_rods),
        ],
        "spherical" => &[
            ("dihedral_angles", dihedral_angles),
            ("cone_feasibility", cone_check),
            ("tilings", tilings),
            ("line_crossings", line_crossings),
        ],
        _ => &[],
    }
}

/// Run the named suites (all when `only` is empty) in a fixed order.
pub fn run_suites(only: &[String], cfg: &SuiteConfig) -> Result<Vec<Check>> {
    if let Some(bad) = only.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "unknown suite '{bad}', expected one of {}",
            SUITES.join(", ")
        )));
    }
    let mut out = Vec::new();
    for suite in SUITES {
        if !only.is_empty() && !only.iter().any(|s| s == suite) {
            continue;
        }
        for &(name, f) in checks_for(suite) {
            let start = Instant::now();
            let (pass, detail) = f(cfg).unwrap_or_else(|e| (false, format!("error: {e}")));
            out.push(Check {
                suite,
                name,
                pass,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(out)
}

/// A random subspace pair sharing a metric, with a random common part so
/// that zero angles occur. Ambient dimension in `2..=max_ambient`; both
/// dimensions at most `max_dim`.
pub fn random_subspace_pair(r: &mut StreamRng, max_ambient: usize, max_dim: usize) -> Result<(Subspace, Subspace)> {
    let n = r.random_range(2..=max_ambient);
    let metric = if r.random_bool(0.5) {
        Metric::Euclidean
    } else {
        let masses = (0..n).map(|_| rng::log_uniform(r, 0.1, 10.0)).collect();
        Metric::mass(MassVector::new(masses)?, 1)
    };
    let cap = max_dim.min(n);
    let p = r.random_range(1..=cap);
    let q = r.random_range(1..=cap);
    let shared = r.random_range(0..=p.min(q));
    let common: Vec<DVector<f64>> = (0..shared).map(|_| rng::gaussian_vector(r, n)).collect();
    let mut build = |dim: usize| {
        let mut v = common.clone();
        v.extend((shared..dim).map(|_| rng::gaussian_vector(r, n)));
        orthonormalize(&v, &metric)
    };
    Ok((build(p)?, build(q)?))
}

fn axis(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 })
}

/// The pair `L, M` in `R^6` with angles `[pi/3, pi/2]`.
pub fn worked_example_pair() -> Result<(Subspace, Subspace)> {
    let l = Subspace::span(&[axis(6, 0), axis(6, 1)])?;
    let m = Subspace::span(&[axis(6, 0) * 0.5 + axis(6, 2) * FRAC_PI_3.sin(), axis(6, 3)])?;
    Ok((l, m))
}

fn duality_worked_example(_: &SuiteConfig) -> Outcome {
    let (l, m) = worked_example_pair()?;
    let (lc, mc) = (orthogonal_complement(&l), orthogonal_complement(&m));
    let e1 = principal_angles(&lc, &mc)?.max_abs_diff(&[0.0, 0.0, FRAC_PI_3, FRAC_PI_2]);
    let e2 = principal_angles(&l, &mc)?.max_abs_diff(&[0.0, FRAC_PI_6]);
    let e3 = principal_angles(&lc, &m)?.max_abs_diff(&[0.0, FRAC_PI_6]);
    let err = e1.max(e2).max(e3);
    Ok((err < 1e-10 && check_angle_duality(&l, &m)?.pass, format!("max error {err:.2e}")))
}

fn duality_random_pairs(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(500);
    let worst = cfg.execution.map_reduce(
        trials,
        Ok(0.0),
        |t| {
            let mut r = rng::stream(cfg.seed, t);
            let (f, g) = random_subspace_pair(&mut r, 12, 12)?;
            Ok(check_angle_duality(&f, &g)?.max_discrepancy)
        },
        |a: Result<f64>, b| Ok(a?.max(b?)),
    )?;
    Ok((worst < 1e-8, format!("{trials} pairs, max discrepancy {worst:.2e}")))
}

fn angles_symmetric_sorted(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(500);
    let bad = cfg.execution.map_reduce(
        trials,
        Ok(0u64),
        |t| {
            let mut r = rng::stream(cfg.seed ^ 0x5eed, t);
            let (f, g) = random_subspace_pair(&mut r, 12, 6)?;
            let a = principal_angles(&f, &g)?;
            let b = principal_angles(&g, &f)?;
            let ok = a.len() == f.dim().min(g.dim())
                && a.angles.windows(2).all(|w| w[0] <= w[1])
                && a.angles.iter().all(|x| (0.0..=FRAC_PI_2).contains(x))
                && a.max_abs_diff(&b.angles) < 1e-10;
            Ok(u64::from(!ok))
        },
        |a: Result<u64>, b| Ok(a? + b?),
    )?;
    Ok((bad == 0, format!("{trials} pairs, {bad} violations")))
}

fn oracle_agreement(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(100).min(100);
    let bound = 2.0 * std::f64::consts::PI / ORACLE_RESOLUTION as f64;
    let worst = cfg.execution.map_reduce(
        trials,
        Ok(0.0),
        |t| {
            let mut r = rng::stream(cfg.seed ^ 0x0a11, t);
            let (f, g) = random_subspace_pair(&mut r, 5, 3)?;
            let svd = principal_angles(&f, &g)?;
            let brute = principal_angles_oracle(&f, &g, ORACLE_RESOLUTION)?;
            Ok(svd.max_abs_diff(&brute.angles))
        },
        |a: Result<f64>, b| Ok(a?.max(b?)),
    )?;
    Ok((worst <= bound, format!("{trials} pairs, max difference {worst:.2e}, bound {bound:.2e}")))
}

/// Pairs of distinct collision pairs for `n` particles.
pub fn pair_combinations(n: usize) -> Vec<(PairIndex, PairIndex)> {
    let pairs: Vec<PairIndex> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| PairIndex::new(i, j).expect("i < j")))
        .collect();
    let mut out = Vec::new();
    for (a, pa) in pairs.iter().enumerate() {
        for pb in &pairs[a + 1..] {
            out.push((*pa, *pb));
        }
    }
    out
}

fn angle_theorem_equal_masses(_: &SuiteConfig) -> Outcome {
    let (mut total, mut failed, mut worst) = (0, 0, 0.0f64);
    for n in 3..=5 {
        for d in 1..=3 {
            let sys = BilliardSystem::equal_masses(n, d)?;
            for (a, b) in pair_combinations(n) {
                let r = verify_angle_theorem(&sys, a, b)?;
                let want = if r.pair_a.shared_with(&r.pair_b).is_some() { FRAC_PI_3 } else { FRAC_PI_2 };
                let ok = r.pass && r.expected.last().is_some_and(|x| (x - want).abs() < 1e-15);
                total += 1;
                failed += usize::from(!ok);
                worst = worst.max(r.max_discrepancy);
            }
        }
    }
    Ok((failed == 0, format!("{total} cases, {failed} failed, max discrepancy {worst:.2e}")))
}

fn random_masses(r: &mut StreamRng, n: usize) -> Result<MassVector> {
    MassVector::new((0..n).map(|_| rng::log_uniform(r, 0.1, 10.0)).collect())
}

fn angle_theorem_random_masses(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(200);
    let (failed, worst) = cfg.execution.map_reduce(
        trials,
        Ok((0u64, 0.0f64)),
        |t| {
            let mut r = rng::stream(cfg.seed ^ 0xa7, t);
            let n = r.random_range(3..=5);
            let d = r.random_range(1..=3);
            let sys = BilliardSystem::new(n, d, random_masses(&mut r, n)?)?;
            let (mut bad, mut worst) = (0, 0.0f64);
            for (a, b) in pair_combinations(n) {
                let rep = verify_angle_theorem(&sys, a, b)?;
                bad += u64::from(!rep.pass);
                worst = worst.max(rep.max_discrepancy);
            }
            Ok((bad, worst))
        },
        |a: Result<(u64, f64)>, b| {
            let (a, b) = (a?, b?);
            Ok((a.0 + b.0, a.1.max(b.1)))
        },
    )?;
    Ok((failed == 0, format!("{trials} mass vectors, {failed} failed pairs, max discrepancy {worst:.2e}")))
}

fn appendix_spans(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(20).min(200);
    let (mut total, mut failed) = (0, 0);
    for t in 0..=trials {
        let mut r = rng::stream(cfg.seed ^ 0xa99, t);
        let n = r.random_range(3..=5);
        let d = r.random_range(1..=2);
        let masses = if t == 0 { MassVector::unit(n) } else { random_masses(&mut r, n)? };
        let sys = BilliardSystem::new(n, d, masses)?;
        for (a, b) in pair_combinations(n) {
            total += 1;
            failed += usize::from(!appendix_decomposition(&sys, a, b)?.pass);
        }
    }
    Ok((failed == 0, format!("{total} pairs, {failed} failed")))
}

fn projection_isometry(cfg: &SuiteConfig) -> Outcome {
    let mut worst = 0.0f64;
    for t in 0..cfg.trials(200).min(10_000) {
        let mut r = rng::stream(cfg.seed ^ 0x1ac0, t);
        let m: Vec<f64> = (0..3).map(|_| rng::log_uniform(&mut r, 0.1, 10.0)).collect();
        let jm = JacobiMasses::new(m[0], m[1], m[2])?;
        let metric = jm.system().metric();
        let p = rng::gaussian_vector(&mut r, 6);
        let q = rng::gaussian_vector(&mut r, 6);
        let (a, b) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let lin = jm.project_vector(&(&p * a + &q * b)) - (jm.project_vector(&p) * a + jm.project_vector(&q) * b);
        // Remove the centre of mass before comparing kinetic energies.
        let total: f64 = m.iter().sum();
        let mut centred = p.clone();
        for axis in 0..2 {
            let cm: f64 = (0..3).map(|k| m[k] * p[2 * k + axis]).sum::<f64>() / total;
            for k in 0..3 {
                centred[2 * k + axis] -= cm;
            }
        }
        let iso = (metric.norm(&centred).powi(2) - jm.project_vector(&centred).norm_squared()).abs();
        worst = worst.max(lin.norm()).max(iso);
    }
    Ok((worst < 1e-10, format!("max error {worst:.2e}")))
}

fn reduced_angles(cfg: &SuiteConfig) -> Outcome {
    let jm = JacobiMasses::equal();
    let pairs: Vec<PairIndex> = ["12", "23", "13"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            let angles = principal_angles(&reduced_delta(pairs[a], &jm)?, &reduced_delta(pairs[b], &jm)?)?;
            worst = worst.max(angles.max_abs_diff(&[FRAC_PI_3, FRAC_PI_3]));
        }
    }
    let mut random = 0.0f64;
    for t in 0..cfg.trials(50).min(1000) {
        let mut r = rng::stream(cfg.seed ^ 0x3ed, t);
        let m: Vec<f64> = (0..3).map(|_| rng::log_uniform(&mut r, 0.1, 10.0)).collect();
        let jm = JacobiMasses::new(m[0], m[1], m[2])?;
        // Δ⁰_12 and Δ⁰_23 share particle 2.
        let angles = principal_angles(&reduced_delta(pairs[0], &jm)?, &reduced_delta(pairs[1], &jm)?)?;
        let theta = closed_form_angle(m[0], m[1], m[2])?;
        random = random.max(angles.max_abs_diff(&[theta, theta]));
    }
    Ok((
        worst < 1e-10 && random < 1e-9,
        format!("equal masses {worst:.2e}, random masses {random:.2e}"),
    ))
}

fn principal_vector_images(_: &SuiteConfig) -> Outcome {
    let jm = JacobiMasses::equal();
    let s6 = 6f64.sqrt();
    let first = jacobi_project(&[[-1.0 / s6, 0.0], [-1.0 / s6, 0.0], [2.0 / s6, 0.0]], &jm).to_vector();
    let second = jacobi_project(&[[-2.0 / s6, 0.0], [1.0 / s6, 0.0], [1.0 / s6, 0.0]], &jm).to_vector();
    let e1 = (first - DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0])).norm();
    let e2 = (second - DVector::from_vec(vec![-3f64.sqrt() / 2.0, 0.0, 0.5, 0.0])).norm();
    let report = verify_principal_vector_image("12".parse()?, "23".parse()?, &jm)?;
    Ok((
        e1 < 1e-9 && e2 < 1e-9 && report.pass,
        format!("image errors {e1:.2e}, {e2:.2e}"),
    ))
}

fn search(masses: [f64; 3], trials: u64, seed: u64, exec: Execution) -> Result<(SearchResult, u64)> {
    let jm = JacobiMasses::new(masses[0], masses[1], masses[2])?;
    let arr = reduced_arrangement(&jm);
    let cfg = SearchConfig {
        trials,
        seed,
        max_events: 64,
        execution: exec,
        ..SearchConfig::default()
    };
    let outcomes = collect_outcomes(&arr, &cfg)?;
    let mut over = 0;
    for o in &outcomes {
        if o.count() as u64 > trajectory_bound(&o.labels, masses)? {
            over += 1;
        }
    }
    Ok((SearchResult::from_outcomes(cfg, &outcomes), over))
}

fn equal_mass_collisions(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(100_000);
    let (r, over) = search([1.0; 3], trials, cfg.seed, cfg.execution)?;
    let four = r.histogram.iter().skip(4).sum::<u64>();
    Ok((
        r.max_count == 3 && four == 0 && r.foch_sequences == 0 && over == 0,
        format!("{trials} trajectories, max {}, histogram {:?}", r.max_count, r.histogram.iter().take(5).collect::<Vec<_>>()),
    ))
}

fn random_mass_collisions(cfg: &SuiteConfig) -> Outcome {
    let triples = 50;
    let per = cfg.trials(200_000) / triples;
    let mut over = 0;
    for t in 0..triples {
        let mut r = rng::stream(cfg.seed ^ 0x3a55, t);
        let m = [0; 3].map(|_| rng::log_uniform(&mut r, 0.1, 10.0));
        over += search(m, per.max(1), cfg.seed.wrapping_add(t), cfg.execution)?.1;
    }
    Ok((over == 0, format!("{triples} mass triples, {over} trajectories above their bound")))
}

fn time_reversal(cfg: &SuiteConfig) -> Outcome {
    let arr = reduced_arrangement(&JacobiMasses::new(2.0, 1.0, 3.0)?);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for t in 0..cfg.trials(2000).min(20_000) {
        let mut r = rng::stream(cfg.seed ^ 0x7e7, t);
        let phi = r.random_range(0.0..std::f64::consts::TAU);
        let lift = |c: DVector<f64>| DVector::from_fn(4, |i, _| c[i / 2] * if i % 2 == 0 { phi.cos() } else { phi.sin() });
        let x = lift(rng::unit_vector(&mut r, 2));
        let v = lift(rng::unit_vector(&mut r, 2));
        let Ok(traj) = run_trajectory(&x, &v, &arr, 64) else { continue };
        if traj.is_degenerate() || traj.events.is_empty() {
            continue;
        }
        checked += 1;
        worst = worst.max(time_reversal_error(&traj, &arr)?);
    }
    Ok((worst <= 1e-7, format!("{checked} trajectories, max error {worst:.2e}")))
}

fn wedge_examples(_: &SuiteConfig) -> Outcome {
    let got = [wedge_bound(0.54)?, wedge_bound(FRAC_PI_2)?, wedge_bound(FRAC_PI_3)?];
    Ok((got == [6, 2, 3], format!("{got:?}")))
}

fn grid_check(cfg: &SuiteConfig) -> Outcome {
    let g = mass_ratio_grid(10.0, 10.0, 0.05, cfg.execution)?;
    let one = MassRatioGrid::index_of(&g.alphas, 1.0).ok_or(Error::InvalidArgument("grid misses 1".into()))?;
    let mut symmetric = true;
    for a in 0..g.alphas.len() {
        for b in 0..a {
            symmetric &= g.cell(a, b) == g.cell(b, a);
        }
    }
    let centre = g.cell(one, one).bound;
    Ok((centre == 3 && symmetric, format!("cell (1,1) = {centre}, symmetric {symmetric}")))
}

fn line_bounds(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(10_000);
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=8 {
        let h = hyperplane_line_bound(n, trials, cfg.seed, cfg.execution)?;
        ok &= h.consistent && h.witness == Some(n as u64);
        for d in 1..n {
            let c = codim_line_bound(n, d, trials, cfg.seed, cfg.execution)?;
            ok &= c.consistent && c.witness == Some((n - d + 1) as u64);
            if !c.consistent {
                notes.push(format!("N={n} d={d} saw {:?}", c.empirical_max));
            }
        }
    }
    Ok((ok, if notes.is_empty() { format!("N <= 8, {trials} lines each") } else { notes.join("; ") }))
}

fn hard_rods(_: &SuiteConfig) -> Outcome {
    let four = hard_rod_bounds(4, &MassVector::unit(4))?;
    let three = hard_rod_bounds(3, &MassVector::unit(3))?;
    let mixed = hard_rod_bounds(3, &MassVector::new(vec![1.0, 5.0, 2.0])?)?;
    let ok = four[0].predicted == Some(6.0)
        && four[0].applicable == Some(true)
        && three[3].predicted == Some(144.0)
        && mixed[1].applicable == Some(true);
    Ok((ok, "C(4,2) = 6, mass-ratio bound 144 for N = 3".into()))
}

fn dihedral_angles(cfg: &SuiteConfig) -> Outcome {
    let mut worst = 0.0f64;
    for t in 0..cfg.trials(1000).min(100_000) {
        let mut r = rng::stream(cfg.seed ^ 0xd1, t);
        let a = rng::unit_vector(&mut r, 3);
        let b = rng::unit_vector(&mut r, 3);
        let (a, b) = (a.fixed_rows::<3>(0).into_owned(), b.fixed_rows::<3>(0).into_owned());
        let via = dihedral_angle_via_tangents(&a, &b)?;
        worst = worst.max((via - a.dot(&b).abs().min(1.0).acos()).abs());
    }
    Ok((worst < 1e-10, format!("max error {worst:.2e}")))
}

fn cone_check(_: &SuiteConfig) -> Outcome {
    let ok = !cone_feasibility([FRAC_PI_3; 3]).feasible
        && cone_feasibility([FRAC_PI_3, FRAC_PI_2, FRAC_PI_2]).feasible
        && cone_feasibility([FRAC_PI_3, FRAC_PI_3, FRAC_PI_2]).feasible;
    Ok((ok, "(pi/3, pi/3, pi/3) infeasible".into()))
}

fn tilings(cfg: &SuiteConfig) -> Outcome {
    let samples = cfg.trials.map_or(DEFAULT_FACE_SAMPLES, |t| (t * 100).clamp(100_000, DEFAULT_FACE_SAMPLES));
    let mut faces = Vec::new();
    for t in [tiling_322(), tiling_332()] {
        let rot = t.rotated(&random_rotation(cfg.seed, 0));
        let f = t.face_count(samples, cfg.seed, cfg.execution);
        let fr = rot.face_count(samples, cfg.seed, cfg.execution);
        faces.push((f.sampled, f.euler, fr.sampled));
    }
    let ok = faces[0] == (12, 12, 12) && faces[1] == (24, 24, 24);
    Ok((ok, format!("faces (sampled, euler, rotated) {faces:?}")))
}

fn line_crossings(cfg: &SuiteConfig) -> Outcome {
    let trials = cfg.trials(100_000);
    let a = line_intersection_count(&tiling_322(), trials, cfg.seed, cfg.execution)?;
    let b = line_intersection_count(&tiling_332(), trials, cfg.seed, cfg.execution)?;
    let c = three_planes_common_line_count(trials, cfg.seed, cfg.execution)?;
    let got = [a.empirical_max, b.empirical_max, c.empirical_max];
    Ok((got == [Some(4), Some(6), Some(3)], format!("max crossings {got:?}")))
}
