use std::f64::consts::{FRAC_PI_2, PI};

use antisurgery_core::atlas::{build_cpn_model, chart_inverse, chart_map, monotonicity_budget};
use antisurgery_core::rational::Ratio;
use antisurgery_core::symplectic::{verify_lagrangian, PlanarCurve};
use serde::Serialize;

use super::{lagrangian_check, Outcome};
use crate::config::{CpnSection, RunConfig};
use crate::error::CliError;
use crate::figure::Figure;
use crate::report::{Check, Report, Source};

#[derive(Debug, Serialize)]
struct Resolved {
    n: usize,
    k: usize,
    r: f64,
    grid: usize,
    tol: f64,
}

/// A value `q π` written both exactly and numerically.
#[derive(Debug, Serialize)]
struct Area {
    pi_times: String,
    value: f64,
}

fn area(q: Ratio) -> Area {
    Area {
        pi_times: q.to_string(),
        value: q.to_f64() * PI,
    }
}

pub fn run(args: &CpnSection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = args.n.unwrap_or(5);
    let k = args.k.unwrap_or(2);
    let b = monotonicity_budget(n, k)?;
    let r = args.r.unwrap_or(b.r_monotone.to_f64());
    let resolved = Resolved {
        n,
        k,
        r,
        grid: cfg.grid.unwrap_or(8),
        tol: cfg.tol(),
    };
    let model = build_cpn_model(n, r)?;
    let mut report = Report::new("cpn", &resolved, cfg.seed());

    let m = (n + 1) as i64;
    let q = |x: Ratio| x.to_string();
    report.push(Check::exact("r monotone", q(b.r_monotone), q(Ratio::new(n as i64 - 1, m)), Source::ClosedForm));
    report.push(Check::exact("eta_L / pi", q(b.eta_l), q(Ratio::new(1, m)), Source::ClosedForm));
    report.push(Check::exact("eta_L = eta_ambient / 2", q(b.eta_l * Ratio::integer(2)), q(b.eta_ambient), Source::Identity));
    report.push(Check::exact(
        "omega(sigma) / pi",
        q(b.required_area),
        q(Ratio::new((n - k - 1) as i64, m)),
        Source::ClosedForm,
    ));
    report.push(Check::exact(
        "omega(sigma) = (n - k - 1) eta_L",
        q(b.required_area),
        q(b.eta_l * Ratio::integer((n - k - 1) as i64)),
        Source::Identity,
    ));
    report.push(Check::exact("Maslov-2 disc area = 2 eta_L", q(b.maslov2_area), q(b.eta_l * Ratio::integer(2)), Source::Identity));
    report.push(Check::new(
        "omega(sigma) < r pi",
        b.feasible,
        format!("{} pi", b.required_area),
        format!("< {} pi", b.r_monotone),
        Source::ClosedForm,
    ));

    report.push(lagrangian_check(&verify_lagrangian(&model.conormal, resolved.grid, resolved.tol)));

    // chart(chart^{-1}(w)) = w on a grid of the open disc
    let g = resolved.grid.max(4);
    let mut worst = (0.0f64, None);
    for i in 0..g {
        let rad = FRAC_PI_2 * (i as f64 + 0.5) / g as f64;
        for j in 0..g {
            let th = 2.0 * PI * j as f64 / g as f64;
            let mut w = vec![0.0; n];
            w[0] = rad * th.cos();
            w[n - 1] += rad * th.sin();
            let back = chart_map(n, &chart_inverse(n, &w)?)?;
            let e = back.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if e > worst.0 {
                worst = (e, Some(w));
            }
        }
    }
    report.push(Check::close("chart inverts the normalized representative", worst.0, 0.0, 1e-12, Source::Oracle).with_witness(worst.1));
    let mut edge = vec![0.0; n + 1];
    edge[0] = 1.0;
    edge[n] = 1e-6;
    let radius = chart_map(n, &edge)?.iter().map(|v| v * v).sum::<f64>().sqrt();
    report.push(Check::new("chart image lies in the open disc of radius pi/2", radius < FRAC_PI_2, radius, FRAC_PI_2, Source::ClosedForm));

    report.insert("eta_ambient", area(b.eta_ambient));
    report.insert("eta_l", area(b.eta_l));
    report.insert("r_monotone", q(b.r_monotone));
    report.insert("required_area", area(b.required_area));
    report.insert("maslov2_area", area(b.maslov2_area));
    report.insert("feasible_range", ("0".to_string(), area(b.r_monotone)));

    // the (x_1, y_1) slice of D^n(1) x D^n(pi/2) and of L_r
    let mut f = Figure::new(format!("L_r in the chart, n = {n}, r = {r}"));
    let h = FRAC_PI_2;
    f.add(
        "chart boundary",
        PlanarCurve::closed(vec![[-1.0, -h], [1.0, -h], [1.0, h], [-1.0, h]])?,
    );
    for s in [-1.0, 1.0] {
        f.add(format!("L_r at x_1 = {}", s * r), PlanarCurve::open(vec![[s * r, -h], [s * r, h]]));
    }
    Ok(Outcome { report, figure: Some(f) })
}
