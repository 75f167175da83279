use antisurgery_core::handle::{build_handle, HandleParams};
use antisurgery_core::symplectic::DoublePointSearch;
use antisurgery_core::zero_surgery::{desingularization_model, EtaPair, SurgeryCurve};
use serde::Serialize;

use super::Outcome;
use crate::config::{DesingSection, RunConfig};
use crate::error::CliError;
use crate::figure::Figure;
use crate::report::{Check, Report, Source};

#[derive(Debug, Serialize)]
struct Resolved {
    n: usize,
    k: usize,
    epsilon: f64,
    kappa: f64,
    grid: usize,
}

const LOCUS_TOL: f64 = 1e-9;

pub fn run(args: &DesingSection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = args.n.unwrap_or(2);
    let k = args.k.unwrap_or(0);
    let params = HandleParams::new(n, k, args.epsilon.unwrap_or(0.1), 0.1)?;
    let resolved = Resolved {
        n,
        k,
        epsilon: params.epsilon,
        kappa: args.kappa.unwrap_or(params.epsilon / 4.0),
        grid: cfg.grid.unwrap_or(12),
    };
    let (plus, minus) = build_handle(params)?.double_point_frames();
    let curve = SurgeryCurve::new(resolved.kappa)?;
    let search = DoublePointSearch {
        grid: resolved.grid,
        ..Default::default()
    };
    let r = desingularization_model(&EtaPair, &plus, &minus, &curve, &search)?;
    let mut report = Report::new("desing", &resolved, cfg.seed());
    report.push(Check::new("W has double points", r.double_points > 0, r.double_points, "> 0", Source::Oracle));
    report.push(Check::exact("every double point of W refines", r.unrefined, 0, Source::Oracle));
    report.push(Check::close("double points of W lie on {x >= 0, y = 0}", r.locus_offset, 0.0, LOCUS_TOL, Source::ClosedForm));
    report.push(Check::new("W double points start at x = 0", r.x_extent.0 >= -LOCUS_TOL, r.x_extent.0, ">= 0", Source::ClosedForm));
    report.push(Check::exact("crossings in the spliced slice", r.sharp_crossings, 0, Source::ClosedForm));
    report.push(Check::close("spliced slice agrees with eta outside the window", r.splice_hausdorff, 0.0, LOCUS_TOL, Source::Oracle));
    report.insert("w_crossings", r.w_crossings);
    report.insert("x_extent", r.x_extent);

    let mut f = Figure::new(format!("W and its desingularization, n = {n}, k = {k}"));
    f.add("eta+", r.eta.0.clone());
    f.add("eta-", r.eta.1.clone());
    for (i, c) in r.w_slice.iter().enumerate() {
        f.add(format!("W {i}"), c.clone());
    }
    for (i, c) in r.sharp_slice.iter().enumerate() {
        f.add(format!("W# {i}"), c.clone());
    }
    Ok(Outcome { report, figure: Some(f) })
}
