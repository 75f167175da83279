//! Run configuration: a JSON file, overlaid by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ResolutionArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum FactorArg {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct HandleSection {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Samples per axis for the double-point scan (default depends on n).
    #[arg(long)]
    pub locus_grid: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct MaslovSection {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Tabulate every `2 <= n <= n_max`, `0 <= k <= n - 2`.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub resolution: Option<ResolutionArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct CpnSection {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Fibre sphere radius; defaults to the monotone value `(n-1)/(n+1)`.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct SurgerySection {
    /// Starting manifold, e.g. `S1xS4`, `T2`, `S^2xS^3 # P^5`.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub resolve: Option<FactorArg>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ToriSection {
    /// Lobe parameter of the figure eight `|z^2 - a^2| = a^2`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Relative change of the Cassini parameter for the two resolutions.
    #[arg(long, allow_hyphen_values = true)]
    pub spread: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Extra random profiles checked for the Lagrangian condition.
    #[arg(long)]
    pub random_profiles: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct DesingSection {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for `report.json`; the report goes to stdout otherwise.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the slice figure to this `.svg` or `.csv` file.
    #[arg(long, global = true)]
    pub emit_slice: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub handle: HandleSection,
    #[serde(default)]
    pub maslov: MaslovSection,
    #[serde(default)]
    pub cpn: CpnSection,
    #[serde(default)]
    pub surgery: SurgerySection,
    #[serde(default)]
    pub tori: ToriSection,
    #[serde(default)]
    pub desing: DesingSection,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tol: None,
            grid: None,
            seed: None,
            handle: Default::default(),
            maslov: Default::default(),
            cpn: Default::default(),
            surgery: Default::default(),
            tori: Default::default(),
            desing: Default::default(),
        }
    }
}

macro_rules! overlay {
    ($flags:expr, $file:expr; $($f:ident),+) => {
        $( if $flags.$f.is_none() { $flags.$f = $file.$f.clone(); } )+
    };
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tol must be positive, got {t}")));
            }
        }
        if let Some(g) = self.grid {
            if g < 4 {
                return Err(CliError::Config(format!("grid must be at least 4, got {g}")));
            }
        }
        if let Some(g) = self.handle.locus_grid {
            if g < 4 {
                return Err(CliError::Config(format!("locus_grid must be at least 4, got {g}")));
            }
        }
        Ok(())
    }

    /// Flags override the file; the result is validated.
    pub fn with_flags(mut self, common: &CommonArgs) -> Result<Self, CliError> {
        self.tol = common.tol.or(self.tol);
        self.grid = common.grid.or(self.grid);
        self.seed = common.seed.or(self.seed);
        self.validate()?;
        Ok(self)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-8)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

impl HandleSection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; n, k, epsilon, delta, locus_grid);
        self
    }
}

impl MaslovSection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; n, k, n_max, resolution, epsilon, kappa);
        self
    }
}

impl CpnSection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; n, k, r);
        self
    }
}

impl SurgerySection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; start, k, resolve);
        self
    }
}

impl ToriSection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; a, spread, samples, random_profiles);
        self
    }
}

impl DesingSection {
    pub fn overlay(mut self, file: &Self) -> Self {
        overlay!(self, file; n, k, epsilon, kappa);
        self
    }
}
