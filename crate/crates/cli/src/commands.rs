use std::fmt;

use billiard_core::bounds::{arrangement_bound, mass_ratio_grid, three_mass_bound, trajectory_bound};
use billiard_core::collision::{appendix_decomposition, verify_angle_theorem, BilliardSystem, PairIndex, PairRelation};
use billiard_core::jacobi::JacobiMasses;
use billiard_core::sim::{collect_outcomes, reduced_arrangement, Sampling, SearchConfig, SearchResult};
use billiard_core::suite::{run_suites, SuiteConfig};
use billiard_core::{Error, Execution, MassVector};
use serde::Serialize;
use serde_json::json;

use crate::args::{AnglesArgs, Cli, GridArgs, GridFormat, SamplingArg, SimulateArgs, VerifyArgs};
use crate::output::{angle, angles as angle_list, emit_json, emit_text, round12, Angle};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Degenerate(String),
    Io(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Degenerate(m) => write!(f, "degenerate: {m}"),
            Failure::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TangentialVelocity | Error::DegenerateStart(_) => Failure::Degenerate(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn execution(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

#[derive(Serialize)]
struct DecompositionOut {
    intersection_dim: usize,
    x_span_error: f64,
    y_span_error: f64,
    angles_xy: Vec<Angle>,
    pass: bool,
}

pub fn angles(cli: &Cli, a: &AnglesArgs) -> Result<bool, Failure> {
    let masses = a.masses.clone().unwrap_or_else(|| vec![1.0; a.n]);
    if masses.len() != a.n {
        return Err(Failure::Usage(format!("--masses has {} entries for --n {}", masses.len(), a.n)));
    }
    let [pa, pb] = a.pairs.as_slice() else {
        return Err(Failure::Usage(format!("--pairs needs exactly two labels, got {}", a.pairs.len())));
    };
    let (pa, pb): (PairIndex, PairIndex) = (pa.parse()?, pb.parse()?);
    let sys = BilliardSystem::new(a.n, a.m, MassVector::new(masses.clone())?)?;
    let t = verify_angle_theorem(&sys, pa, pb)?;
    let d = appendix_decomposition(&sys, pa, pb)?;
    let relation = match t.relation {
        PairRelation::Disjoint => json!({ "kind": "disjoint" }),
        PairRelation::Shared { particle, .. } => json!({ "kind": "shared", "particle": particle }),
    };
    let pass = t.pass && d.pass;
    let out = json!({
        "command": "angles",
        "config": { "n": a.n, "m": a.m, "masses": masses, "pairs": [pa.to_string(), pb.to_string()], "seed": null },
        "relation": relation,
        "expected": angle_list(&t.expected),
        "computed": angle_list(&t.computed),
        "zero_count": t.zero_count,
        "expected_zero_count": t.expected_zero_count,
        "printed_formula_angle": t.naive_angle.map(angle),
        "max_discrepancy": t.max_discrepancy,
        "decomposition": DecompositionOut {
            intersection_dim: d.intersection_dim,
            x_span_error: d.x_span_error,
            y_span_error: d.y_span_error,
            angles_xy: angle_list(&d.angles_xy),
            pass: d.pass,
        },
        "pass": pass,
    });
    emit_json(cli, "angles.json", &out)?;
    Ok(pass)
}

pub fn simulate(cli: &Cli, a: &SimulateArgs) -> Result<bool, Failure> {
    let [m1, m2, m3] = a.masses.as_slice() else {
        return Err(Failure::Usage(format!("--masses needs three values, got {}", a.masses.len())));
    };
    let masses = [*m1, *m2, *m3];
    let jm = JacobiMasses::new(*m1, *m2, *m3)?;
    let arr = reduced_arrangement(&jm);
    let cfg = SearchConfig {
        trials: a.trials,
        seed: a.seed,
        max_events: a.max_events,
        sampling: match a.sampling {
            SamplingArg::PhaseSlice => Sampling::PhaseSlice,
            SamplingArg::Sphere => Sampling::Sphere,
            SamplingArg::SegmentSeeded => Sampling::SegmentSeeded,
        },
        execution: execution(cli),
        ..SearchConfig::default()
    };
    let outcomes = collect_outcomes(&arr, &cfg)?;
    let mut above = 0u64;
    for o in &outcomes {
        if o.count() as u64 > trajectory_bound(&o.labels, masses)? {
            above += 1;
        }
    }
    let r = SearchResult::from_outcomes(cfg, &outcomes);
    let bound = arrangement_bound(*m1, *m2, *m3)?;
    let per_shared = [
        three_mass_bound(*m2, *m1, *m3)?,
        three_mass_bound(*m1, *m2, *m3)?,
        three_mass_bound(*m1, *m3, *m2)?,
    ];
    let pass = r.max_count as u64 <= bound && above == 0;
    let out = json!({
        "command": "simulate",
        "config": {
            "masses": masses, "trials": a.trials, "seed": a.seed,
            "sampling": a.sampling, "max_events": a.max_events, "radius": cfg.radius,
        },
        "histogram": &r.histogram[..=r.max_count],
        "max_count": r.max_count,
        "maximal_sequences": r.maximal_sequences,
        "non_degenerate": r.non_degenerate,
        "degenerate": r.degenerate,
        "foch_sequences": r.foch_sequences,
        "repeated_wall": r.repeated_wall,
        "bound": bound,
        "bound_by_shared_particle": per_shared,
        "above_bound": above,
        "pass": pass,
    });
    emit_json(cli, "simulate.json", &out)?;
    if r.non_degenerate == 0 {
        return Err(Failure::Degenerate(format!("all {} trajectories were degenerate", r.degenerate)));
    }
    Ok(pass)
}

pub fn grid(cli: &Cli, a: &GridArgs) -> Result<bool, Failure> {
    let g = mass_ratio_grid(a.alpha_hi, a.beta_hi, a.step, execution(cli))?;
    let config = json!({
        "step": a.step, "alpha_hi": a.alpha_hi, "beta_hi": a.beta_hi, "format": a.format, "seed": null,
    });
    match a.format {
        GridFormat::Csv => {
            let rows = g.alphas.len() * g.betas.len();
            let written = emit_text(cli, "grid.csv", &g.to_csv())?;
            let summary = json!({ "command": "grid", "config": config, "rows": rows, "output": written });
            let text = serde_json::to_string_pretty(&summary).map_err(|e| Failure::Io(e.to_string()))?;
            if written.is_some() {
                println!("{text}");
            } else {
                eprintln!("{text}");
            }
        }
        GridFormat::Json => {
            let cells = &g.cells;
            let rows: Vec<_> = g
                .alphas
                .iter()
                .enumerate()
                .flat_map(|(i, alpha)| {
                    g.betas.iter().enumerate().map(move |(j, beta)| {
                        let c = cells[i][j];
                        json!({ "alpha": round12(*alpha), "beta": round12(*beta), "bound": c.bound, "flag": c.flag })
                    })
                })
                .collect();
            emit_json(cli, "grid.json", &json!({ "command": "grid", "config": config, "cells": rows }))?;
        }
    }
    Ok(true)
}

pub fn verify_all(cli: &Cli, a: &VerifyArgs) -> Result<bool, Failure> {
    let cfg = SuiteConfig {
        seed: a.seed,
        trials: a.trials,
        execution: execution(cli),
    };
    let checks = run_suites(&a.only, &cfg)?;
    for c in &checks {
        eprintln!(
            "{} {}::{} ({:.2}s) {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.seconds,
            c.detail
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let pass = failed == 0;
    let out = json!({
        "command": "verify-all",
        "config": { "only": a.only, "seed": a.seed, "trials": a.trials },
        "checks": checks,
        "passed": checks.len() - failed,
        "failed": failed,
        "pass": pass,
    });
    emit_json(cli, "verify-all.json", &out)?;
    Ok(pass)
}
