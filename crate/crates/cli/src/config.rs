use std::path::PathBuf;

use capbound::capacity::uniform_grid;
use capbound::sdp::SolverOptions;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    BoundShannon,
    Norms,
    DepolSweep,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.n_points < 2 {
            return Err(CliError::BadInput(format!("need at least 2 grid points, got {}", self.n_points)));
        }
        if !(self.p_min.is_finite() && self.p_max.is_finite() && self.p_min < self.p_max) {
            return Err(CliError::BadInput(format!("need p-min < p-max, got [{}, {}]", self.p_min, self.p_max)));
        }
        Ok(())
    }

    pub fn points(&self) -> CliResult<Vec<f64>> {
        self.validate()?;
        Ok(uniform_grid(self.p_min, self.p_max, self.n_points)?)
    }
}

/// Solver tolerance overrides; unset fields keep the standard values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize, clap::Args)]
pub struct Tolerances {
    /// Relative duality-gap tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gap_tol: Option<f64>,
    /// Primal/dual feasibility tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub feas_tol: Option<f64>,
    /// Interior-point iteration cap.
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
}

impl Tolerances {
    pub fn solver_options(&self) -> CliResult<SolverOptions> {
        let mut o = SolverOptions::STANDARD;
        if let Some(v) = self.gap_tol {
            o.gap_tol = v;
        }
        if let Some(v) = self.feas_tol {
            o.feas_tol = v;
        }
        if let Some(v) = self.max_iterations {
            o.max_iterations = v;
        }
        o.validate().map_err(|e| CliError::BadInput(format!("invalid tolerance override: {e}")))?;
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridSpec,
    pub seed: u64,
    pub tolerances: SolverOptions,
    pub output_dir: PathBuf,
    pub formats: Vec<Format>,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.grid.validate()?;
        self.tolerances.validate().map_err(|e| CliError::BadInput(e.to_string()))?;
        if self.formats.is_empty() {
            return Err(CliError::BadInput("no output format selected".into()));
        }
        Ok(())
    }
}
