use std::f64::consts::PI;

use antisurgery_core::atlas::*;
use antisurgery_core::symplectic::{verify_lagrangian, PlanarCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{lagrangian_check, Outcome};
use crate::config::{RunConfig, ToriSection};
use crate::error::CliError;
use crate::figure::Figure;
use crate::report::{Check, Report, Source};

#[derive(Debug, Serialize)]
struct Resolved {
    a: f64,
    spread: f64,
    samples: usize,
    random_profiles: usize,
    grid: usize,
    tol: f64,
}

/// A star-shaped curve with a few random Fourier modes around a random centre.
fn random_profile(rng: &mut ChaCha8Rng) -> Result<PlanarCurve, CliError> {
    let centre = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let modes: Vec<(f64, f64)> = (0..rng.gen_range(1..5))
        .map(|_| (rng.gen_range(-0.12..0.12), rng.gen_range(-0.12..0.12)))
        .collect();
    let knots = rng.gen_range(16..80);
    Ok(PlanarCurve::sample_closed(knots, 2.0 * PI, |t| {
        let r = 1.0
            + modes
                .iter()
                .enumerate()
                .map(|(j, (a, b))| a * ((j + 2) as f64 * t).cos() + b * ((j + 2) as f64 * t).sin())
                .sum::<f64>();
        [centre[0] + r * t.cos(), centre[1] + r * t.sin()]
    })?)
}

pub fn run(args: &ToriSection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let resolved = Resolved {
        a: args.a.unwrap_or(1.0),
        spread: args.spread.unwrap_or(0.15),
        samples: args.samples.unwrap_or(1024),
        random_profiles: args.random_profiles.unwrap_or(8),
        grid: cfg.grid.unwrap_or(16),
        tol: cfg.tol(),
    };
    let a = resolved.a;
    let [wh, cl, ch] = figure_eight_family(a, resolved.spread, resolved.samples)?;
    let mut report = Report::new("tori", &resolved, cfg.seed());

    report.push(Check::exact("Clifford winding pattern", cl.winding_pattern()?, vec![1], Source::ClosedForm));
    report.push(Check::exact("Chekanov winding pattern", ch.winding_pattern()?, vec![0, 0], Source::ClosedForm));
    report.push(Check::relative("Whitney area parameter", wh.area_param, a * a, 1e-4, Source::ClosedForm));
    report.push(Check::new(
        "A'' < A < A'",
        ch.area_param < wh.area_param && wh.area_param < cl.area_param,
        [ch.area_param, wh.area_param, cl.area_param],
        "increasing",
        Source::ClosedForm,
    ));
    let origin = rotation_double_points(&wh.curves);
    report.push(Check::exact("Whitney sphere has one double point, at the origin", origin, vec![[0.0; 4]], Source::ClosedForm));
    for p in [&cl, &ch] {
        report.push(Check::exact(
            format!("{:?} torus is embedded", p.kind),
            rotation_double_points(&p.curves).len(),
            0,
            Source::Oracle,
        ));
    }
    for (target, set) in [(ProfileKind::Clifford, &cl), (ProfileKind::Chekanov, &ch)] {
        let plan = torus_area_plan(wh.area_param, target, set.area_param)?;
        report.push(Check::exact(format!("{target:?} target is reachable"), plan.feasible, true, Source::ClosedForm));
    }
    let cob = torus_cobordism((ProfileKind::Chekanov, ch.area_param), (ProfileKind::Clifford, cl.area_param));
    report.push(Check::exact(
        "cobordism by a 2-handle and a 1-handle",
        cob.as_ref().map(|c| c.handles.clone()),
        Some(vec![(2, 1), (1, 1)]),
        Source::ClosedForm,
    ));

    for set in [&wh, &cl, &ch] {
        let mut l = build_rotation_lagrangian(&set.curves[0])?;
        l.patch.set_label(format!("L({:?})", set.kind));
        report.push(lagrangian_check(&verify_lagrangian(&l.patch, resolved.grid, resolved.tol)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut worst = (0.0f64, true);
    for _ in 0..resolved.random_profiles {
        let l = build_rotation_lagrangian(&random_profile(&mut rng)?)?;
        let r = verify_lagrangian(&l.patch, resolved.grid, resolved.tol);
        worst = (worst.0.max(r.max_residual), worst.1 && r.passed);
    }
    report.push(
        Check::new(
            format!("{} random rotation profiles are Lagrangian", resolved.random_profiles),
            worst.1,
            worst.0,
            0.0,
            Source::Identity,
        )
        .with_tolerance(resolved.tol),
    );

    report.insert("areas", serde_json::json!({ "chekanov": ch.area_param, "whitney": wh.area_param, "clifford": cl.area_param }));
    report.insert("cobordism", &cob);

    let mut f = Figure::new(format!("rotation profiles, a = {a}"));
    f.add("Whitney", wh.curves[0].clone());
    f.add("Clifford", cl.curves[0].clone());
    for (i, c) in ch.curves.iter().enumerate() {
        f.add(format!("Chekanov {i}"), c.clone());
    }
    Ok(Outcome { report, figure: Some(f) })
}
