//! Lenient JSON readers: complex entries may be written as `x` or `[re, im]`.

use hardy_gkz::engine::CoefficientFunctional;
use hardy_gkz::{DiskFunction, OperatorMatrix};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn complexes(v: Vec<Scalar>) -> Vec<Complex64> {
    v.into_iter().map(Complex64::from).collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FunctionInput {
    Bare(Vec<Scalar>),
    Object { taylor: Vec<Scalar> },
}

impl From<FunctionInput> for DiskFunction {
    fn from(input: FunctionInput) -> Self {
        match input {
            FunctionInput::Bare(v) | FunctionInput::Object { taylor: v } => DiskFunction::new(complexes(v)),
        }
    }
}

#[derive(Deserialize)]
struct LambdaInput {
    lambda: Vec<Scalar>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FunctionalInput {
    Wrapped { functional: LambdaInput },
    Direct(LambdaInput),
    Bare(Vec<Scalar>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OperatorInput {
    Wrapped { operator: Vec<Vec<Scalar>> },
    Bare(Vec<Vec<Scalar>>),
}

#[derive(Deserialize)]
struct WeightedCompositionInput {
    psi: FunctionInput,
    phi: FunctionInput,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::usage(format!("cannot parse {what}: {e}")))
}

pub fn disk_function(text: &str) -> Result<DiskFunction, CliError> {
    Ok(parse::<FunctionInput>(text, "disk function")?.into())
}

pub fn functional(text: &str) -> Result<CoefficientFunctional, CliError> {
    let lambda = match parse::<FunctionalInput>(text, "functional")? {
        FunctionalInput::Wrapped { functional: l } | FunctionalInput::Direct(l) => l.lambda,
        FunctionalInput::Bare(v) => v,
    };
    Ok(CoefficientFunctional::new(complexes(lambda))?)
}

pub fn operator(text: &str) -> Result<OperatorMatrix, CliError> {
    let rows = match parse::<OperatorInput>(text, "operator")? {
        OperatorInput::Wrapped { operator } | OperatorInput::Bare(operator) => operator,
    };
    Ok(OperatorMatrix::from_rows(rows.into_iter().map(complexes).collect())?)
}

pub fn weighted_composition(text: &str) -> Result<(DiskFunction, DiskFunction), CliError> {
    let input: WeightedCompositionInput = parse(text, "weight and symbol")?;
    Ok((input.psi.into(), input.phi.into()))
}

pub fn json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    parse(text, what)
}

/// `re` or `re,im`.
pub fn complex_arg(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let number = |p: &str| p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(number(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(number(re)?, number(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}
