use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hardy_gkz::Space;
use num_complex::Complex64;

mod commands;
mod config;
mod input;

use commands::{Report, Status};
use config::RunConfig;

const EXIT_WITNESS: u8 = 3;
const EXIT_REJECTED: u8 = 2;
const THREADS_VAR: &str = "HARDY_GKZ_THREADS";

/// Numerical checks for Hardy-space functionals, operators and module characters.
#[derive(Debug, Parser)]
#[command(name = "hardy-gkz", version)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inner-outer factorization and outerness report of a Taylor series.
    Factor,
    /// Recover `Lambda(f) = c f(w)` from functional values on monomials.
    RecoverFunctional,
    /// Recover `T f = psi (f ∘ phi)` from an operator matrix.
    RecoverOperator,
    /// Certify an isometry as a Forelli isometry or report a counterexample.
    ClassifyIsometry {
        #[arg(long, default_value_t = 24)]
        family_size: usize,
        /// Leading block for the isometry check (default (d+1)/4).
        #[arg(long)]
        isometry_block: Option<usize>,
    },
    /// Extract the character of a module functional and check its defects.
    ModuleGkz,
    /// Sample a normalized functional on a finite algebra.
    ScalarGkz {
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Norm of multiplication by z^n and its n-th-root trend.
    ShiftNorms {
        #[arg(long, value_enum)]
        space: SpaceArg,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        max_n: usize,
    },
    /// Emit operator or functional inputs for the other commands.
    #[command(subcommand)]
    Build(Builder),
    /// Emit the seeded outer test family.
    Family {
        #[arg(long, default_value_t = 24)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
enum Builder {
    /// Unitary exchanging 1 and z.
    Swap,
    /// `c (phi')^{1/p} (f ∘ phi)` for `phi(z) = c_phi (z - w) / (1 - conj(w) z)`.
    Forelli {
        #[arg(long, value_parser = input::complex_arg, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_parser = input::complex_arg, allow_hyphen_values = true, default_value = "1")]
        c_phi: Complex64,
        #[arg(long, value_parser = input::complex_arg, allow_hyphen_values = true, default_value = "1")]
        c: Complex64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Weighted composition matrix from `{"psi": ..., "phi": ...}`.
    Wco,
    /// Point evaluation `f -> c f(w)`.
    Functional {
        #[arg(long, value_parser = input::complex_arg, allow_hyphen_values = true)]
        c: Complex64,
        #[arg(long, value_parser = input::complex_arg, allow_hyphen_values = true)]
        w: Complex64,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum SpaceArg {
    Hardy,
    Bergman,
    Dirichlet,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Hardy => Space::Hardy,
            SpaceArg::Bergman => Space::Bergman,
            SpaceArg::Dirichlet => Space::Dirichlet,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self {
            code: EXIT_REJECTED,
            message,
        }
    }

    pub fn hypothesis(message: String) -> Self {
        Self {
            code: EXIT_REJECTED,
            message,
        }
    }

    pub fn internal(message: String) -> Self {
        Self { code: 1, message }
    }
}

impl From<hardy_gkz::Error> for CliError {
    fn from(e: hardy_gkz::Error) -> Self {
        Self::hypothesis(e.to_string())
    }
}

fn read_input(config: &RunConfig) -> Result<String, CliError> {
    match &config.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_VAR}={value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::internal(e.to_string()))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let config = &cli.config;
    config.validate()?;
    configure_threads()?;
    match &cli.command {
        Command::Factor => commands::factor(&read_input(config)?, config),
        Command::RecoverFunctional => commands::recover_functional_cmd(&read_input(config)?, config),
        Command::RecoverOperator => commands::recover_operator_cmd(&read_input(config)?, config),
        Command::ClassifyIsometry {
            family_size,
            isometry_block,
        } => commands::classify_isometry_cmd(&read_input(config)?, config, *family_size, *isometry_block),
        Command::ModuleGkz => commands::module_gkz(&read_input(config)?, config),
        Command::ScalarGkz { trials } => commands::scalar_gkz(&read_input(config)?, config, *trials),
        Command::ShiftNorms { space, n, max_n } => commands::shift_norms(config, (*space).into(), *n, *max_n),
        Command::Build(builder) => match builder {
            Builder::Swap => commands::build_swap(config),
            Builder::Forelli { w, c_phi, c, p } => commands::build_forelli(config, *w, *c_phi, *c, *p),
            Builder::Wco => commands::build_wco(&read_input(config)?, config),
            Builder::Functional { c, w } => commands::build_functional(config, *c, *w),
        },
        Command::Family { count } => commands::family(config, *count),
    }
}

fn write_output(config: &RunConfig, body: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_REJECTED)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|report| {
        write_output(&cli.config, &report.body)?;
        Ok(report.status)
    });
    match result {
        Ok(Status::Verdict) => ExitCode::SUCCESS,
        Ok(Status::Witness) => ExitCode::from(EXIT_WITNESS),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
