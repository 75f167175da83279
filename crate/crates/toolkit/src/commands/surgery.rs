use antisurgery_core::calculus::*;
use serde::Serialize;

use super::Outcome;
use crate::config::{FactorArg, RunConfig, SurgerySection};
use crate::error::CliError;
use crate::report::{Check, Report, Source};

/// Canonical form of a descriptor with its invariants.
#[derive(Debug, Serialize)]
pub struct DescriptorRecord {
    pub expression: String,
    pub dim: usize,
    pub atoms: Vec<(Atom, usize)>,
    pub euler: i64,
    pub orientable: bool,
    pub b1: usize,
    pub has_boundary: bool,
}

impl From<&ManifoldDescriptor> for DescriptorRecord {
    fn from(d: &ManifoldDescriptor) -> Self {
        Self {
            expression: d.to_string(),
            dim: d.dim(),
            atoms: d.atoms().to_vec(),
            euler: d.euler(),
            orientable: d.orientable(),
            b1: d.b1(),
            has_boundary: d.has_boundary(),
        }
    }
}

/// Accepts the shorthand `S1xS4`, `(S3xS2) # 2P5`, `T2` besides the
/// canonical `S^1xS^4` form.
pub fn parse_manifold(s: &str) -> Result<ManifoldDescriptor, CliError> {
    let mut out = String::new();
    let mut prev: Option<char> = None;
    for c in s.chars().filter(|c| !matches!(c, '(' | ')')) {
        if c.is_ascii_digit() && matches!(prev, Some('S' | 'D' | 'P' | 'Q' | 'T')) {
            out.push('^');
        }
        out.push(c);
        prev = Some(c);
    }
    let out = out
        .split('#')
        .map(|t| match t.trim() {
            "T^2" => Ok("S^1xS^1".to_string()),
            t if t.contains('T') => Err(CliError::Usage(format!("only the 2-torus T2 is representable, got `{t}`"))),
            t => Ok(t.to_string()),
        })
        .collect::<Result<Vec<_>, _>>()?
        .join(" # ");
    Ok(out.parse()?)
}

#[derive(Debug, Serialize)]
struct Resolved {
    start: String,
    k: usize,
    resolve: Option<FactorArg>,
}

pub fn run(args: &SurgerySection, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let start = args.start.as_deref().ok_or_else(|| CliError::Usage("--start is required".into()))?;
    let k = args.k.ok_or_else(|| CliError::Usage("--k is required".into()))?;
    let l = parse_manifold(start)?;
    let n = l.dim();
    let forced = forced_resolution(n, k)?;
    let resolution = match (args.resolve, forced) {
        (Some(FactorArg::P), _) => SumFactor::P,
        (Some(FactorArg::Q), _) => SumFactor::Q,
        (None, Some(f)) => f,
        (None, None) => {
            return Err(CliError::Usage(format!(
                "in odd dimension n = {n} both resolutions exist; choose one with --resolve P|Q"
            )))
        }
    };
    let resolved = Resolved {
        start: l.to_string(),
        k,
        resolve: args.resolve,
    };
    let mut report = Report::new("surgery", &resolved, cfg.seed());
    let out = antisurgery(&l, k, Some(resolution))?;
    let trace = trace_descriptor(&l, k, Some(resolution))?;
    let orientation = orientation_sign(n, k)?;

    let chi_mid = euler_after_surgery(l.euler(), n, k)?;
    let chi_end = if k == n - 1 { l.euler() } else { euler_after_surgery(chi_mid, n, 0)? };
    report.push(Check::exact("euler characteristic", out.euler(), chi_end, Source::Identity));
    report.push(Check::exact(
        "orientable",
        out.orientable(),
        l.orientable() && (resolution == SumFactor::P || k == n - 1),
        Source::Identity,
    ));
    let verdict_ok = match (orientation.verdict, resolution) {
        (OrientabilityVerdict::Choice, _) => true,
        (OrientabilityVerdict::Orientable, r) => r == SumFactor::P,
        (OrientabilityVerdict::NonOrientable, r) => r == SumFactor::Q,
    };
    report.push(Check::new(
        "resolution agrees with the determinant sign",
        verdict_ok,
        resolution.to_string(),
        match orientation.verdict {
            OrientabilityVerdict::Choice => "P or Q",
            OrientabilityVerdict::Orientable => "P",
            OrientabilityVerdict::NonOrientable => "Q",
        },
        Source::ClosedForm,
    ));
    report.push(Check::new(
        "trace handles account for the euler change",
        trace.is_consistent(),
        trace.predicted_euler_change(),
        trace.to_end.euler() - trace.from_end.euler(),
        Source::Identity,
    ));
    if (2..=n.saturating_sub(3)).contains(&k) {
        let (h1, _) = homology_transition(n, k, l.b1(), 1)?;
        report.push(Check::exact("b1 grows by one", out.b1(), h1, Source::ClosedForm));
    }

    report.insert("start", DescriptorRecord::from(&l));
    report.insert("result", DescriptorRecord::from(&out));
    report.insert("resolution", resolution.to_string());
    report.insert("euler_table", [("start", l.euler()), ("after k-surgery", chi_mid), ("result", chi_end)]);
    report.insert("orientation", &orientation);
    report.insert(
        "trace",
        serde_json::json!({
            "handles": trace.handles,
            "description": trace
                .handles
                .iter()
                .map(|(i, c)| if *c == 1 { format!("{i}-handle") } else { format!("{c} {i}-handles") })
                .collect::<Vec<_>>()
                .join(" + "),
        }),
    );
    Ok(Outcome { report, figure: None })
}
