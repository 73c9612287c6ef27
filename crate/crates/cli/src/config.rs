use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hardy_gkz::function::{DEFAULT_DEGREE, DEFAULT_GRID, DEFAULT_TOL};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Boundary grid size (power of two).
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Taylor truncation degree.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Input JSON file; stdin when omitted.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid < 2 || !self.grid.is_power_of_two() {
            return Err(CliError::usage(format!("--grid {} is not a power of two", self.grid)));
        }
        if self.degree >= self.grid / 2 {
            return Err(CliError::usage(format!(
                "--degree {} must be below grid/2 = {}",
                self.degree,
                self.grid / 2
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::usage(format!("--tol {} must be positive", self.tol)));
        }
        Ok(())
    }
}
