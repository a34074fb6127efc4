//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p billiard-core --test acceptance`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use billiard_core::bounds::{
    codim_line_bound, hyperplane_line_bound, mass_ratio_grid, trajectory_bound, MassRatioGrid,
};
use billiard_core::collision::{
    appendix_decomposition, build_delta, closed_form_angle, BilliardSystem, PairIndex, PairRelation,
};
use billiard_core::jacobi::{jacobi_project, reduced_delta, JacobiMasses};
use billiard_core::linalg::{
    check_angle_duality, orthogonal_complement, principal_angles, principal_angles_oracle, MassVector,
};
use billiard_core::rng;
use billiard_core::sim::{collect_outcomes, is_foch_pattern, reduced_arrangement, SearchConfig};
use billiard_core::spherical::{
    cone_feasibility, dihedral_angle_via_tangents, line_intersection_count, tiling_322, tiling_332,
};
use billiard_core::suite::{pair_combinations, random_subspace_pair, worked_example_pair, ORACLE_RESOLUTION};
use billiard_core::{Execution, Result};
use nalgebra::DVector;
use rand::Rng;

const SEED: u64 = 20240611;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        pass,
        detail: detail.into(),
    })
}

fn expected_tail(sys: &BilliardSystem, a: PairIndex, b: PairIndex) -> Result<f64> {
    match a.shared_with(&b) {
        Some(j) => {
            let m = |k| sys.masses().mass(k);
            closed_form_angle(m(a.other(j)), m(j), m(b.other(j)))
        }
        None => Ok(FRAC_PI_2),
    }
}

/// Max deviation from `d(N-2)` zeros followed by `d` copies of `tail`, and
/// the number of angles below 1e-8.
fn theorem_error(sys: &BilliardSystem, a: PairIndex, b: PairIndex, tail: f64) -> Result<(f64, usize)> {
    let angles = principal_angles(&build_delta(sys, a)?, &build_delta(sys, b)?)?.angles;
    let d = sys.spatial_dim();
    let zeros = d * (sys.n() - 2);
    if angles.len() != zeros + d {
        return Ok((f64::INFINITY, 0));
    }
    let err = angles
        .iter()
        .enumerate()
        .map(|(k, x)| (x - if k < zeros { 0.0 } else { tail }).abs())
        .fold(0.0, f64::max);
    Ok((err, angles.iter().filter(|x| **x < 1e-8).count()))
}

fn criterion_1() -> Result<Verdict> {
    let (mut cases, mut worst) = (0, 0.0f64);
    let mut zero_ok = true;
    for n in 3..=5 {
        for d in 1..=3 {
            let sys = BilliardSystem::equal_masses(n, d)?;
            for (a, b) in pair_combinations(n) {
                let tail = if a.shared_with(&b).is_some() { FRAC_PI_3 } else { FRAC_PI_2 };
                let (err, zeros) = theorem_error(&sys, a, b, tail)?;
                worst = worst.max(err);
                zero_ok &= zeros == d * (n - 2);
                cases += 1;
            }
        }
    }
    verdict(worst < 1e-9 && zero_ok, format!("{cases} pair combinations, max error {worst:.2e}"))
}

fn criterion_2() -> Result<Verdict> {
    let (mut worst, mut zero_ok, mut pairs) = (0.0f64, true, 0);
    for t in 0..200 {
        let mut r = rng::stream(SEED, t);
        let n = r.random_range(3..=5);
        let d = r.random_range(1..=3);
        let masses = MassVector::new((0..n).map(|_| rng::log_uniform(&mut r, 0.1, 10.0)).collect())?;
        let sys = BilliardSystem::new(n, d, masses)?;
        for (a, b) in pair_combinations(n) {
            let (err, zeros) = theorem_error(&sys, a, b, expected_tail(&sys, a, b)?)?;
            worst = worst.max(err);
            zero_ok &= zeros == d * (n - 2);
            pairs += 1;
        }
    }
    verdict(
        worst < 1e-9 && zero_ok,
        format!("200 mass vectors, {pairs} pairs, max error {worst:.2e}, zero counts ok {zero_ok}"),
    )
}

fn criterion_3() -> Result<Verdict> {
    let (mut disjoint, mut shared, mut failed, mut worst) = (0, 0, 0, 0.0f64);
    for t in 0..40 {
        let mut r = rng::stream(SEED ^ 3, t);
        let n = r.random_range(3..=5);
        let d = r.random_range(1..=3);
        let masses = if t < 6 {
            MassVector::unit(n)
        } else {
            MassVector::new((0..n).map(|_| rng::log_uniform(&mut r, 0.1, 10.0)).collect())?
        };
        let sys = BilliardSystem::new(n, d, masses)?;
        for (a, b) in pair_combinations(n) {
            let rep = appendix_decomposition(&sys, a, b)?;
            match rep.relation {
                PairRelation::Disjoint => disjoint += 1,
                PairRelation::Shared { .. } => shared += 1,
            }
            worst = worst.max(rep.x_span_error).max(rep.y_span_error);
            failed += usize::from(!(rep.pass && rep.x_span_error < 1e-8 && rep.y_span_error < 1e-8));
        }
    }
    verdict(
        failed == 0 && disjoint > 0 && shared > 0,
        format!("{disjoint} disjoint, {shared} shared, {failed} failed, max span angle {worst:.2e}"),
    )
}

fn criterion_4() -> Result<Verdict> {
    let mut lin = 0.0f64;
    let mut iso = 0.0f64;
    for t in 0..500 {
        let mut r = rng::stream(SEED ^ 4, t);
        let m: Vec<f64> = (0..3).map(|_| rng::log_uniform(&mut r, 0.1, 10.0)).collect();
        let jm = JacobiMasses::new(m[0], m[1], m[2])?;
        let q1 = rng::gaussian_vector(&mut r, 6);
        let q2 = rng::gaussian_vector(&mut r, 6);
        let (a, b) = (r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let lhs = jm.project_vector(&(&q1 * a + &q2 * b));
        let rhs = jm.project_vector(&q1) * a + jm.project_vector(&q2) * b;
        lin = lin.max((lhs - rhs).norm());

        let total: f64 = m.iter().sum();
        let mut centred = q1.clone();
        for axis in 0..2 {
            let cm = (0..3).map(|k| m[k] * q1[2 * k + axis]).sum::<f64>() / total;
            for k in 0..3 {
                centred[2 * k + axis] -= cm;
            }
        }
        let kinetic: f64 = (0..6).map(|i| m[i / 2] * centred[i] * centred[i]).sum();
        iso = iso.max((kinetic - jm.project_vector(&centred).norm_squared()).abs());
    }

    let jm = JacobiMasses::equal();
    let labels: Vec<PairIndex> = ["12", "23", "13"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let mut reduced = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            let angles = principal_angles(&reduced_delta(labels[a], &jm)?, &reduced_delta(labels[b], &jm)?)?;
            reduced = reduced.max(angles.max_abs_diff(&[FRAC_PI_3, FRAC_PI_3]));
        }
    }

    let s6 = 6f64.sqrt();
    let img1 = jacobi_project(&[[-1.0 / s6, 0.0], [-1.0 / s6, 0.0], [2.0 / s6, 0.0]], &jm).to_vector();
    let img2 = jacobi_project(&[[-2.0 / s6, 0.0], [1.0 / s6, 0.0], [1.0 / s6, 0.0]], &jm).to_vector();
    let e1 = (img1 - DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0])).norm();
    let e2 = (img2 - DVector::from_vec(vec![-3f64.sqrt() / 2.0, 0.0, 0.5, 0.0])).norm();
    let images = e1.max(e2);

    verdict(
        lin < 1e-10 && iso < 1e-10 && reduced < 1e-10 && images < 1e-9,
        format!("linearity {lin:.1e}, isometry {iso:.1e}, reduced angles {reduced:.1e}, images {images:.1e}"),
    )
}

fn criterion_5() -> Result<Verdict> {
    let arr = reduced_arrangement(&JacobiMasses::equal());
    let cfg = SearchConfig {
        trials: 100_000,
        seed: SEED,
        ..SearchConfig::default()
    };
    let outcomes = collect_outcomes(&arr, &cfg)?;
    let max = outcomes.iter().map(|o| o.count()).max().unwrap_or(0);
    let four = outcomes.iter().filter(|o| o.count() == 4).count();
    let foch = outcomes.iter().filter(|o| is_foch_pattern(&o.labels)).count();
    let degenerate = outcomes.iter().filter(|o| o.degenerate).count();
    verdict(
        max == 3 && four == 0 && foch == 0,
        format!("100000 trajectories, max {max}, {four} with 4 events, {foch} Foch, {degenerate} degenerate"),
    )
}

fn criterion_6() -> Result<Verdict> {
    let (mut over, mut largest) = (0, 0);
    for t in 0..50 {
        let mut r = rng::stream(SEED ^ 6, t);
        let m = [0; 3].map(|_| rng::log_uniform(&mut r, 0.1, 10.0));
        let arr = reduced_arrangement(&JacobiMasses::new(m[0], m[1], m[2])?);
        let cfg = SearchConfig {
            trials: 4000,
            seed: SEED.wrapping_add(t),
            max_events: 200,
            ..SearchConfig::default()
        };
        for o in collect_outcomes(&arr, &cfg)? {
            largest = largest.max(o.count());
            if o.count() as u64 > trajectory_bound(&o.labels, m)? {
                over += 1;
            }
        }
    }
    let g = mass_ratio_grid(10.0, 10.0, 0.05, Execution::default())?;
    let one = MassRatioGrid::index_of(&g.alphas, 1.0).expect("1.0 on the grid");
    let centre = g.cell(one, one).bound;
    let symmetric = (0..g.alphas.len()).all(|a| (0..g.betas.len()).all(|b| g.cell(a, b) == g.cell(b, a)));
    verdict(
        over == 0 && centre == 3 && symmetric,
        format!("50 triples, {over} above bound (largest count {largest}), cell (1,1) = {centre}, symmetric {symmetric}"),
    )
}

fn criterion_7() -> Result<Verdict> {
    let mut failures = Vec::new();
    for n in 1..=8 {
        let h = hyperplane_line_bound(n, 10_000, SEED, Execution::default())?;
        if h.witness != Some(n as u64) || !h.consistent {
            failures.push(format!("hyperplanes N={n}"));
        }
        for d in 1..n {
            let c = codim_line_bound(n, d, 10_000, SEED, Execution::default())?;
            if c.witness != Some((n - d + 1) as u64) || !c.consistent {
                failures.push(format!("codim N={n} d={d}"));
            }
        }
    }
    let detail = if failures.is_empty() {
        "witnesses exact, 10000 random lines per case within bound".to_string()
    } else {
        failures.join(", ")
    };
    verdict(failures.is_empty(), detail)
}

fn criterion_8() -> Result<Verdict> {
    let (t3, t6) = (tiling_322(), tiling_332());
    let f3 = t3.face_count(1_000_000, SEED, Execution::default());
    let f6 = t6.face_count(1_000_000, SEED, Execution::default());
    let c3 = line_intersection_count(&t3, 100_000, SEED, Execution::default())?;
    let c6 = line_intersection_count(&t6, 100_000, SEED, Execution::default())?;
    let cone = cone_feasibility([FRAC_PI_3; 3]).feasible;
    let mut dihedral = 0.0f64;
    for t in [&t3, &t6] {
        let n = t.normals();
        for a in 0..n.len() {
            for b in a + 1..n.len() {
                let want = n[a].dot(&n[b]).abs().min(1.0).acos();
                dihedral = dihedral.max((dihedral_angle_via_tangents(&n[a], &n[b])? - want).abs());
            }
        }
    }
    let pass = f3.sampled == 12
        && f3.euler == 12
        && f6.sampled == 24
        && f6.euler == 24
        && c3.empirical_max == Some(4)
        && c6.empirical_max == Some(6)
        && !cone
        && dihedral < 1e-10;
    verdict(
        pass,
        format!(
            "faces {}/{}, max crossings {:?}/{:?}, (pi/3)x3 feasible {cone}, dihedral error {dihedral:.1e}",
            f3.sampled, f6.sampled, c3.empirical_max, c6.empirical_max
        ),
    )
}

fn criterion_9() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for t in 0..500 {
        let mut r = rng::stream(SEED ^ 9, t);
        let (f, g) = random_subspace_pair(&mut r, 12, 12)?;
        worst = worst.max(check_angle_duality(&f, &g)?.max_discrepancy);
    }
    let (l, m) = worked_example_pair()?;
    let (lc, mc) = (orthogonal_complement(&l), orthogonal_complement(&m));
    let first = principal_angles(&lc, &mc)?.max_abs_diff(&[0.0, 0.0, FRAC_PI_3, FRAC_PI_2]);
    let second = principal_angles(&l, &mc)?
        .max_abs_diff(&[0.0, FRAC_PI_6])
        .max(principal_angles(&lc, &m)?.max_abs_diff(&[0.0, FRAC_PI_6]));
    verdict(
        worst < 1e-8 && first < 1e-10 && second < 1e-10,
        format!("500 random pairs, max discrepancy {worst:.1e}; worked examples {first:.1e}, {second:.1e}"),
    )
}

fn criterion_10() -> Result<Verdict> {
    let bound = 2.0 * PI / ORACLE_RESOLUTION as f64;
    let mut worst = 0.0f64;
    for t in 0..100 {
        let mut r = rng::stream(SEED ^ 10, t);
        let (f, g) = random_subspace_pair(&mut r, 5, 3)?;
        let svd = principal_angles(&f, &g)?;
        let brute = principal_angles_oracle(&f, &g, ORACLE_RESOLUTION)?;
        worst = worst.max(svd.max_abs_diff(&brute.angles));
    }
    verdict(worst <= bound, format!("100 pairs, max difference {worst:.2e}, bound {bound:.2e}"))
}

fn main() -> ExitCode {
    type Criterion = (u8, &'static str, fn() -> Result<Verdict>, Option<Duration>);
    let criteria: [Criterion; 10] = [
        (1, "angle theorem, equal masses", criterion_1, Some(Duration::from_secs(10))),
        (2, "angle theorem, arbitrary masses", criterion_2, Some(Duration::from_secs(30))),
        (3, "complement decomposition", criterion_3, None),
        (4, "reduction consistency", criterion_4, None),
        (5, "collision bound, equal masses", criterion_5, Some(Duration::from_secs(60))),
        (6, "collision bound, arbitrary masses", criterion_6, None),
        (7, "line-intersection bounds", criterion_7, None),
        (8, "spherical tilings", criterion_8, None),
        (9, "angle duality", criterion_9, None),
        (10, "oracle equivalence", criterion_10, None),
    ];
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let v = run().unwrap_or_else(|e| Verdict {
            pass: false,
            detail: format!("error: {e}"),
        });
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed < b);
        let pass = v.pass && in_time;
        failed += usize::from(!pass);
        let budget_note = budget.map_or(String::new(), |b| format!(" (budget {}s)", b.as_secs()));
        println!(
            "criterion {id:>2} {} {name}: {} [{:.2}s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
