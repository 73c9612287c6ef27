use hardy_gkz::engine::{
    classify_isometry, functional_witness, outer_test_family, recover_functional,
    recover_operator_on_grid, swap_unitary, ClassifyOptions, CoefficientFunctional, IsometryClass,
};
use hardy_gkz::factorization::{factorize, is_outer};
use hardy_gkz::function::boundary_samples;
use hardy_gkz::mobius::{forelli_isometry, shift_multiplier_norm, shift_norm_trend, wco_matrix};
use hardy_gkz::module_gkz::{
    extract_character, scalar_gkz_check, verify_algebra, verify_module, FiniteAlgebra,
    GeneratingSet, ModuleAction, ScalarGkzOutcome, StructureCheck,
};
use hardy_gkz::{Error, MobiusMap, Space};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{Format, RunConfig};
use crate::input;
use crate::CliError;

/// Whether a command's report is a positive verdict or a witness against one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verdict,
    Witness,
}

pub struct Report {
    pub body: String,
    pub status: Status,
}

fn json_report(value: &impl Serialize, config: &RunConfig, status: Status) -> Result<Report, CliError> {
    if config.format != Format::Json {
        return Err(CliError::usage("csv output is only available for shift-norms".into()));
    }
    let encoded = if config.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    let mut body = encoded.map_err(|e| CliError::internal(e.to_string()))?;
    body.push('\n');
    Ok(Report { body, status })
}

pub fn factor(text: &str, config: &RunConfig) -> Result<Report, CliError> {
    let f = input::disk_function(text)?;
    if f.is_zero() {
        return Err(Error::ZeroFunction.into());
    }
    let b = boundary_samples(&f, config.grid)?;
    let factorization = factorize(&b, config.degree)?;
    let outerness = is_outer(&f, config.grid, config.tol)?;
    let report = json!({
        "outer": factorization.outer,
        "inner_boundary": factorization.inner.boundary,
        "inner_taylor": factorization.inner.taylor,
        "inner_negative_energy_ratio": factorization.inner.negative_energy_ratio,
        "outerness_report": outerness,
    });
    json_report(&report, config, Status::Verdict)
}

pub fn recover_functional_cmd(text: &str, config: &RunConfig) -> Result<Report, CliError> {
    let functional = input::functional(text)?;
    let report = recover_functional(&functional, config.tol)?;
    if report.verdict {
        return json_report(&json!({ "report": report }), config, Status::Verdict);
    }
    let family = outer_test_family(24, config.seed, functional.degree());
    let witness = functional_witness(&functional, &family, config.tol);
    json_report(&json!({ "report": report, "witness": witness }), config, Status::Witness)
}

pub fn recover_operator_cmd(text: &str, config: &RunConfig) -> Result<Report, CliError> {
    let t = input::operator(text)?;
    let grid = config.grid.max((2 * t.dim()).next_power_of_two());
    let report = recover_operator_on_grid(&t, grid, config.tol)?;
    let status = if report.verdict { Status::Verdict } else { Status::Witness };
    json_report(&report, config, status)
}

pub fn classify_isometry_cmd(
    text: &str,
    config: &RunConfig,
    family_size: usize,
    isometry_block: Option<usize>,
) -> Result<Report, CliError> {
    let t = input::operator(text)?;
    let options = ClassifyOptions {
        tol: config.tol,
        family_size,
        seed: config.seed,
        isometry_block,
        ..ClassifyOptions::default()
    };
    let class = classify_isometry(&t, &options)?;
    let status = match class {
        IsometryClass::Forelli(_) => Status::Verdict,
        IsometryClass::Counterexample(_) => Status::Witness,
    };
    json_report(&class, config, status)
}

#[derive(Deserialize)]
struct ModuleInput {
    algebra: FiniteAlgebra,
    module: ModuleAction,
    #[serde(rename = "S")]
    set: GeneratingSet,
    functional: Vec<Complex64>,
}

fn require_ok(check: StructureCheck, what: &str) -> Result<(), CliError> {
    match check {
        StructureCheck::Ok => Ok(()),
        StructureCheck::Violation { location, magnitude } => Err(CliError::hypothesis(format!(
            "{what} axiom violated at {location:?} by {magnitude:.3e}"
        ))),
    }
}

pub fn module_gkz(text: &str, config: &RunConfig) -> Result<Report, CliError> {
    let input: ModuleInput = input::json(text, "module instance")?;
    require_ok(verify_algebra(&input.algebra), "algebra")?;
    require_ok(verify_module(&input.algebra, &input.module)?, "module")?;
    let report = extract_character(&input.algebra, &input.module, &input.set, &input.functional, config.tol)?;
    let status = if report.verdict { Status::Verdict } else { Status::Witness };
    json_report(&report, config, status)
}

#[derive(Deserialize)]
struct ScalarInput {
    algebra: FiniteAlgebra,
    functional: Vec<Complex64>,
}

pub fn scalar_gkz(text: &str, config: &RunConfig, trials: usize) -> Result<Report, CliError> {
    let input: ScalarInput = input::json(text, "algebra and functional")?;
    require_ok(verify_algebra(&input.algebra), "algebra")?;
    let outcome = scalar_gkz_check(&input.algebra, &input.functional, trials, config.seed, config.tol)?;
    let status = match outcome {
        ScalarGkzOutcome::ConsistentAtSampleSize { .. } => Status::Verdict,
        _ => Status::Witness,
    };
    json_report(&outcome, config, status)
}

pub fn shift_norms(config: &RunConfig, space: Space, n: usize, max_n: usize) -> Result<Report, CliError> {
    let norm = shift_multiplier_norm(space, n, config.degree)?;
    let trend = shift_norm_trend(space, max_n, config.degree)?;
    match config.format {
        Format::Json => json_report(
            &json!({ "space": space, "n": n, "norm": norm, "trend": trend }),
            config,
            Status::Verdict,
        ),
        Format::Csv => {
            let mut body = String::from("n,norm,root\n");
            for row in trend {
                body.push_str(&format!("{},{},{}\n", row.n, row.norm, row.root));
            }
            Ok(Report {
                body,
                status: Status::Verdict,
            })
        }
    }
}

pub fn build_swap(config: &RunConfig) -> Result<Report, CliError> {
    json_report(&json!({ "operator": swap_unitary(config.degree)? }), config, Status::Verdict)
}

pub fn build_forelli(
    config: &RunConfig,
    w: Complex64,
    c_phi: Complex64,
    c: Complex64,
    p: f64,
) -> Result<Report, CliError> {
    let m = MobiusMap::new(w, c_phi)?;
    let t = forelli_isometry(&m, c, p, config.degree)?;
    json_report(&json!({ "operator": t }), config, Status::Verdict)
}

pub fn build_wco(text: &str, config: &RunConfig) -> Result<Report, CliError> {
    let (psi, phi) = input::weighted_composition(text)?;
    let t = wco_matrix(&psi, &phi, config.degree)?;
    json_report(&json!({ "operator": t }), config, Status::Verdict)
}

pub fn build_functional(config: &RunConfig, c: Complex64, w: Complex64) -> Result<Report, CliError> {
    let functional = CoefficientFunctional::point_evaluation(c, w, config.degree);
    json_report(&json!({ "functional": functional }), config, Status::Verdict)
}

pub fn family(config: &RunConfig, count: usize) -> Result<Report, CliError> {
    let family = outer_test_family(count, config.seed, config.degree);
    json_report(&json!({ "family": family }), config, Status::Verdict)
}
