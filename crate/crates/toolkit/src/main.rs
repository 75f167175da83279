use std::path::Path;
use std::process::ExitCode;

use antisurgery::commands::{self, Outcome};
use antisurgery::config::*;
use antisurgery::error::CliError;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "antisurgery", version, about = "Verification runs for Lagrangian antisurgery and 0-surgery models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The handle Γ: Lagrangian, cylindricity, singular-locus and teardrop checks.
    Handle(HandleSection),
    /// Maslov indices of the two resolutions of the double point.
    Maslov(MaslovSection),
    /// Monotonicity budget and chart model of the CP^n family.
    Cpn(CpnSection),
    /// Topological bookkeeping of antisurgery followed by 0-surgery.
    Surgery(SurgerySection),
    /// Whitney sphere, Clifford and Chekanov tori in C^2.
    Tori(ToriSection),
    /// Desingularization of the curve-level model W.
    Desing(DesingSection),
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let file = match &cli.common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = file.with_flags(&cli.common)?;
    match &cli.command {
        Command::Handle(a) => commands::handle::run(&a.clone().overlay(&cfg.handle), &cfg),
        Command::Maslov(a) => commands::maslov::run(&a.clone().overlay(&cfg.maslov), &cfg),
        Command::Cpn(a) => commands::cpn::run(&a.clone().overlay(&cfg.cpn), &cfg),
        Command::Surgery(a) => commands::surgery::run(&a.clone().overlay(&cfg.surgery), &cfg),
        Command::Tori(a) => commands::tori::run(&a.clone().overlay(&cfg.tori), &cfg),
        Command::Desing(a) => commands::desing::run(&a.clone().overlay(&cfg.desing), &cfg),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), CliError> {
    if let Some(path) = &cli.common.emit_slice {
        let fig = outcome
            .figure
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("`{}` has no slice figure", outcome.report.command)))?;
        fig.write(path)?;
    }
    let json = outcome.report.to_json();
    match &cli.common.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let path = Path::new(dir).join("report.json");
            std::fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))
        }
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn fail(e: &CliError) -> ExitCode {
    println!("{}", e.to_json());
    eprintln!("antisurgery: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    if let Err(e) = emit(&cli, &outcome) {
        return fail(&e);
    }
    for c in outcome.report.failed() {
        eprintln!("check failed: {} (measured {}, expected {})", c.name, c.measured, c.expected.value);
    }
    if outcome.report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
