use antisurgery_core::handle::*;
use antisurgery_core::symplectic::{verify_lagrangian, DoublePointSearch};
use antisurgery_core::Error;
use serde::Serialize;

use super::{lagrangian_check, Outcome};
use crate::config::{HandleSection, RunConfig};
use crate::error::CliError;
use crate::figure::Figure;
use crate::report::{Check, Report, Source};

#[derive(Debug, Serialize)]
struct Resolved {
    params: HandleParams,
    grid: usize,
    locus_grid: usize,
    tol: f64,
    cylindricity_tol: f64,
}

const CYLINDRICITY_TOL: f64 = 1e-9;
const TEARDROP_POINTS: usize = 20_000;

fn default_locus_grid(n: usize) -> usize {
    match n {
        1 => 40,
        2 => 24,
        3 => 14,
        4 => 10,
        _ => 8,
    }
}

pub fn run(args: &HandleSection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = args.n.unwrap_or(2);
    let k = args.k.unwrap_or(0);
    let params = HandleParams::new(n, k, args.epsilon.unwrap_or(0.1), args.delta.unwrap_or(0.1))?;
    let geom = build_handle(params)?;
    let eps = params.epsilon;
    let resolved = Resolved {
        params,
        grid: cfg.grid.unwrap_or(if n <= 2 { 12 } else { 6 }),
        locus_grid: args.locus_grid.unwrap_or_else(|| default_locus_grid(n)),
        tol: cfg.tol(),
        cylindricity_tol: CYLINDRICITY_TOL,
    };
    let mut report = Report::new("handle", &resolved, cfg.seed());

    for s in [Sheet::Plus, Sheet::Minus] {
        report.push(lagrangian_check(&verify_lagrangian(&geom.sheet(s), resolved.grid, resolved.tol)));
    }
    for end in [End::Lambda, End::LambdaPrime] {
        let m = end_model(&geom, end);
        for p in [&m.plus, &m.minus] {
            report.push(lagrangian_check(&verify_lagrangian(p, resolved.grid.max(8), resolved.tol)));
        }
    }

    let cyl = check_cylindricity(&geom, resolved.grid.max(8), CYLINDRICITY_TOL);
    report.push(
        Check::new("ends are cylindrical", cyl.passed, cyl.max_identity_residual, 0.0, Source::Identity)
            .with_tolerance(CYLINDRICITY_TOL)
            .with_witness(cyl.witness.clone()),
    );
    report.insert("cylindricity", &cyl);

    let search = DoublePointSearch {
        grid: resolved.locus_grid,
        ..Default::default()
    };
    let locus_tol = 1e-4;
    let on_locus = "x0 >= 1 - delta, x = y = 0, y0 = 0";
    match singular_locus(&geom, &LocusRegion::default(), &search, locus_tol) {
        Ok(l) => {
            report.push(
                Check::new("double points lie on the singular locus", !l.points.is_empty(), l.points.len(), on_locus, Source::ClosedForm)
                    .with_tolerance(locus_tol),
            );
            report.push(Check::exact("every double point refines", l.unrefined.len(), 0, Source::Oracle));
            report.insert("locus_x0_extent", l.x0_extent);
        }
        Err(Error::ModelViolation(why)) => {
            report.push(Check::new("double points lie on the singular locus", false, why, on_locus, Source::ClosedForm).with_tolerance(locus_tol));
        }
        Err(e) => return Err(e.into()),
    }
    let early = LocusRegion {
        x0_max: 1.0 - params.delta - 0.01,
        ..Default::default()
    };
    let before = singular_locus(&geom, &early, &search, locus_tol).map(|l| l.points.len() + l.unrefined.len());
    report.push(Check::exact("no double points before x0 = 1 - delta - 0.01", before.unwrap_or(usize::MAX), 0, Source::ClosedForm));

    let mut figure = None;
    if k + 2 <= n {
        let lobe = teardrop_curve(&geom, TEARDROP_POINTS)?;
        let area = lobe.enclosed_area()?;
        report.push(Check::relative("teardrop area", area, 2.0 * eps.powf(1.5), 1e-6, Source::ClosedForm));
        let lobe = teardrop_curve(&geom, 400)?;
        let mut f = Figure::new(format!("Lambda' slice, n = {n}, k = {k}, epsilon = {eps}"));
        f.add("teardrop x_n >= 0", lobe.clone());
        f.add("teardrop x_n <= 0", lobe.map(|p| [-p[0], p[1]]));
        figure = Some(f);
    }
    Ok(Outcome { report, figure })
}
