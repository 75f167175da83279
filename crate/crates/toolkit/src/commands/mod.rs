//! One module per subcommand. Each turns a resolved configuration into a
//! report and, where the construction has one, a slice figure.

pub mod cpn;
pub mod desing;
pub mod handle;
pub mod maslov;
pub mod surgery;
pub mod tori;

use antisurgery_core::symplectic::VerificationReport;

use crate::figure::Figure;
use crate::report::{Check, Report, Source};

pub struct Outcome {
    pub report: Report,
    pub figure: Option<Figure>,
}

pub(crate) fn lagrangian_check(r: &VerificationReport) -> Check {
    let name = format!("{} is Lagrangian", r.label);
    let mut c = Check::new(name, r.passed && r.samples > 0, r.max_residual, 0.0, Source::Identity)
        .with_tolerance(r.tolerance)
        .with_witness(r.worst_sample.clone());
    if let Some(w) = &r.immersion_failure {
        c.name = format!("{} is an immersion", r.label);
        c.witness = Some(w.clone());
    }
    c
}
