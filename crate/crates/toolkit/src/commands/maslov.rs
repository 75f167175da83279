use antisurgery_core::handle::{build_handle, end_model, lambda_prime_slice, End, HandleParams};
use antisurgery_core::zero_surgery::{maslov_of_resolution, resolve_double_point, Resolution, ResolutionChoice};
use serde::Serialize;

use super::Outcome;
use crate::config::{MaslovSection, ResolutionArg, RunConfig};
use crate::error::CliError;
use crate::figure::Figure;
use crate::report::{Check, Report, Source};

#[derive(Debug, Serialize)]
struct Resolved {
    cases: Vec<(usize, usize)>,
    resolution: ResolutionArg,
    epsilon: f64,
    kappa: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Row {
    n: usize,
    k: usize,
    resolution: &'static str,
    mu: i64,
    expected: i64,
    raw_winding: i64,
    per_factor: Vec<i64>,
    frames: usize,
}

fn expected(n: usize, k: usize, r: Resolution) -> i64 {
    match r {
        Resolution::Minus => 1 - k as i64,
        Resolution::Plus => (n - k - 1) as i64,
    }
}

pub fn run(args: &MaslovSection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cases: Vec<(usize, usize)> = match (args.n_max, args.n, args.k) {
        (Some(m), None, None) => (2..=m).flat_map(|n| (0..=n - 2).map(move |k| (n, k))).collect(),
        (None, Some(n), Some(k)) => vec![(n, k)],
        (None, Some(n), None) => (0..=n.saturating_sub(2)).map(|k| (n, k)).collect(),
        _ => return Err(CliError::Usage("give either --n-max, or --n with an optional --k".into())),
    };
    if cases.is_empty() {
        return Err(CliError::Usage("no (n, k) pairs requested; n must be at least 2".into()));
    }
    let which = args.resolution.unwrap_or(ResolutionArg::Both);
    let signs: Vec<Resolution> = match which {
        ResolutionArg::Plus => vec![Resolution::Plus],
        ResolutionArg::Minus => vec![Resolution::Minus],
        ResolutionArg::Both => vec![Resolution::Minus, Resolution::Plus],
    };
    let epsilon = args.epsilon.unwrap_or(0.1);
    let resolved = Resolved {
        cases: cases.clone(),
        resolution: which,
        epsilon,
        kappa: args.kappa,
    };
    let mut report = Report::new("maslov", &resolved, cfg.seed());
    let mut rows = Vec::new();
    for &(n, k) in &cases {
        let params = HandleParams::new(n, k, epsilon, 0.1)?;
        for &sign in &signs {
            let mut choice = ResolutionChoice::default_for(&params, sign);
            if let Some(kappa) = args.kappa {
                choice.kappa = kappa;
            }
            let m = maslov_of_resolution(&params, &choice)?;
            let e = expected(n, k, sign);
            report.push(Check::exact(format!("mu(n={n}, k={k}, {})", sign.name()), m.mu, e, Source::ClosedForm));
            rows.push(Row {
                n,
                k,
                resolution: sign.name(),
                mu: m.mu,
                expected: e,
                raw_winding: m.raw_winding,
                per_factor: m.per_factor,
                frames: m.frames,
            });
        }
    }
    report.insert("table", &rows);

    let mut figure = None;
    if let [(n, k)] = cases[..] {
        let params = HandleParams::new(n, k, epsilon, 0.1)?;
        let geom = build_handle(params)?;
        let end = end_model(&geom, End::LambdaPrime);
        let mut f = Figure::new(format!("Lambda' and its resolutions, n = {n}, k = {k}"));
        f.add("Lambda'", lambda_prime_slice(&geom, 400)?);
        let mut areas = Vec::new();
        for &sign in &signs {
            let mut choice = ResolutionChoice::default_for(&params, sign);
            if let Some(kappa) = args.kappa {
                choice.kappa = kappa;
            }
            let r = resolve_double_point(&end, &choice)?;
            for (i, c) in r.slices.iter().enumerate() {
                f.add(format!("{} slice {i}", sign.name()), c.clone());
            }
            if let Some(a) = &r.area {
                report.push(Check::new(
                    format!("area adjustment of {} is below the teardrop area", sign.name()),
                    a.alpha.abs() < a.teardrop,
                    a.alpha,
                    a.teardrop,
                    Source::ClosedForm,
                ));
                areas.push((sign.name(), a.clone()));
            }
        }
        report.insert("areas", &areas);
        figure = Some(f);
    }
    Ok(Outcome { report, figure })
}
