use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the disk-function toolkit.
///
/// Variants that correspond to a failed hypothesis (a functional or operator
/// vanishing on an outer function) are distinguished from plain input errors
/// so that front ends can map them to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("grid size {0} is not a power of two >= 2")]
    GridNotPowerOfTwo(usize),

    #[error("aliasing: grid size {n} is too small for degree {degree} (need n >= {required})")]
    Aliasing { n: usize, degree: usize, required: usize },

    #[error("not analytic: negative-frequency energy ratio {ratio:.3e}")]
    NotAnalytic { ratio: f64 },

    #[error("modulus too close to zero: sample {index} has value {value:.3e}")]
    ModulusTooSmall { index: usize, value: f64 },

    #[error(
        "boundary modulus {value:.3e} at theta = {theta:.6} is below the floor; \
         the function may have a boundary zero or singular mass there"
    )]
    BoundaryZero { theta: f64, value: f64 },

    #[error("zero function")]
    ZeroFunction,

    #[error("not a strict self-map: max |phi| on the grid is {max_modulus:.12}")]
    NotStrictSelfMap { max_modulus: f64 },

    #[error("functional vanishes on the outer function 1")]
    VanishesOnOne,

    #[error("functional vanishes on the outer function z - lambda with lambda = {lambda}")]
    VanishesOnOuterShift { lambda: Complex64 },

    #[error("weight vanishes at z = {at}")]
    WeightVanishes { at: Complex64 },

    #[error("phi is not a self-map of the disk (margin {margin:.3e})")]
    NotSelfMap { margin: f64 },

    #[error("operator is not isometric on the leading block (deviation {deviation:.3e})")]
    NotIsometric { deviation: f64 },

    #[error("not a bilateral contraction: sup|h| = {sup:.12}, sup|1/h| = {inv_sup:.12}")]
    NotBilateralContraction { sup: f64, inv_sup: f64 },

    #[error("constant is not unimodular: |h(0)| = {modulus:.12}")]
    NotUnimodular { modulus: f64 },

    #[error("hypothesis violated: functional vanishes on generating element #{index}")]
    VanishesOnGenerator { index: usize, element: Vec<Complex64> },

    #[error("functional is not normalized: value on the unit is {value}")]
    Normalization { value: Complex64 },
}

pub type Result<T> = std::result::Result<T, Error>;
