//! Classification of Hardy-space isometries into Forelli form or counterexample.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::outer_test_family;
use super::functional::{functional_witness, WitnessOutcome};
use super::operator::{
    circle_samples, outer_nonvanishing_witnesses, point_functional, recover_operator,
    NonvanishingWitness,
};
use super::zeros::WitnessSearch;
use crate::error::{Error, Result};
use crate::function::{check_grid, DiskFunction, Spectral, DEFAULT_GRID, DEFAULT_TOL};
use crate::mobius::{forelli_isometry, MobiusMap, OperatorMatrix};

/// Parameters of `f -> c (phi')^{1/2} (f ∘ phi)` with
/// `phi(z) = c_phi (z - w) / (1 - conj(w) z)`, plus the residuals that certify them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForelliCertificate {
    pub w: Complex64,
    pub c_phi: Complex64,
    pub c: Complex64,
    /// `||T*T - I||` on the leading block.
    pub isometry_deviation: f64,
    /// Max deviation between recovered `phi` and the fitted automorphism on the margin circle.
    pub fit_residual: f64,
    /// `| |c_phi raw| - 1 |` before normalization.
    pub rotation_defect: f64,
    /// `| |c| - 1 |`.
    pub weight_defect: f64,
    /// Max entry deviation from the rebuilt Forelli matrix on the leading block.
    pub operator_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// First witness in search order, if any.
    pub witness: Option<NonvanishingWitness>,
    /// Every witness found across the test family.
    pub witnesses: Vec<NonvanishingWitness>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum IsometryClass {
    Forelli(ForelliCertificate),
    Counterexample(CounterexampleReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub family_size: usize,
    pub seed: u64,
    pub search: WitnessSearch,
    /// Size of the leading block on which `T*T = I` is required; `None`
    /// means `(d + 1) / 4`. Column `k` of a Forelli matrix reaches degree
    /// about `k (1 + |w|) / (1 - |w|)`, so larger blocks see truncation loss.
    pub isometry_block: Option<usize>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            family_size: 24,
            seed: 42,
            search: WitnessSearch::default(),
            isometry_block: None,
        }
    }
}

fn leading_block(t: &OperatorMatrix) -> usize {
    (t.dim() / 2).max(1)
}

fn isometry_block(t: &OperatorMatrix, options: &ClassifyOptions) -> usize {
    options.isometry_block.unwrap_or(t.dim() / 4).clamp(1, t.dim())
}

/// Decides whether an (approximately) isometric matrix is a Forelli isometry.
///
/// Fails with [`Error::NotIsometric`] if `T*T` deviates from the identity by
/// more than `tol` on the leading block (see [`ClassifyOptions::isometry_block`]).
pub fn classify_isometry(t: &OperatorMatrix, options: &ClassifyOptions) -> Result<IsometryClass> {
    let tol = options.tol;
    let isometry_deviation = t.gram_deviation(isometry_block(t, options));
    if !(isometry_deviation <= tol) {
        return Err(Error::NotIsometric {
            deviation: isometry_deviation,
        });
    }
    let d = t.degree();
    let family = outer_test_family(options.family_size, options.seed, d);
    let witnesses = outer_nonvanishing_witnesses(t, &family, &options.search, tol);
    if let Some(first) = witnesses.first() {
        return Ok(IsometryClass::Counterexample(CounterexampleReport {
            witness: Some(first.clone()),
            reason: format!("T g vanishes inside the disk for {} outer test function(s)", witnesses.len()),
            witnesses,
        }));
    }

    let failure = match fit_forelli(t, tol, isometry_deviation) {
        Ok(certificate) => return Ok(IsometryClass::Forelli(certificate)),
        Err(reason) => reason,
    };
    let witness = point_functional_witness(t, &family, &options.search, tol);
    Ok(IsometryClass::Counterexample(CounterexampleReport {
        reason: match &witness {
            Some(_) => format!("{failure}; a point functional of T vanishes on an outer function"),
            None => format!("{failure}; no witness found at resolution"),
        },
        witnesses: witness.iter().cloned().collect(),
        witness,
    }))
}

fn fit_forelli(
    t: &OperatorMatrix,
    tol: f64,
    isometry_deviation: f64,
) -> std::result::Result<ForelliCertificate, String> {
    let d = t.degree();
    let report = recover_operator(t, tol).map_err(|e| e.to_string())?;
    let phi0 = report.phi.coeff(0);
    let phi1 = report.phi.coeff(1);
    let fit = MobiusMap::fit_at_origin(phi0, phi1).map_err(|e| format!("Möbius fit failed: {e}"))?;
    let spectral = Spectral::new(DEFAULT_GRID.max((2 * d + 2).next_power_of_two()));
    let radius = super::operator::MARGIN_RADIUS;
    let fit_residual = circle_samples(&spectral, &report.phi, radius)
        .iter()
        .zip(circle_samples(&spectral, &fit.map.taylor(d), radius))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let c = report.psi.coeff(0) / phi1.sqrt();
    let weight_defect = (c.norm() - 1.0).abs();
    let mut certificate = ForelliCertificate {
        w: fit.map.w(),
        c_phi: fit.map.c(),
        c,
        isometry_deviation,
        fit_residual,
        rotation_defect: fit.unimodularity_defect,
        weight_defect,
        operator_residual: f64::INFINITY,
    };
    if !(fit_residual <= tol && fit.unimodularity_defect <= tol && weight_defect <= tol) {
        return Err(format!(
            "Möbius fit residuals exceed tolerance (fit {:.3e}, rotation {:.3e}, weight {:.3e})",
            fit_residual, fit.unimodularity_defect, weight_defect
        ));
    }
    let rebuilt = forelli_isometry(&fit.map, c / c.norm(), 2.0, d).map_err(|e| e.to_string())?;
    certificate.operator_residual = t
        .block_deviation(&rebuilt, leading_block(t))
        .map_err(|e| e.to_string())?;
    if !(certificate.operator_residual <= tol) {
        return Err(format!(
            "operator differs from the fitted Forelli isometry by {:.3e}",
            certificate.operator_residual
        ));
    }
    Ok(certificate)
}

/// Scans `Lambda_{z0}(f) = (Tf)(z0)` over the search grid for an outer `g`
/// with `Lambda_{z0}(g) = 0`.
fn point_functional_witness(
    t: &OperatorMatrix,
    family: &[DiskFunction],
    search: &WitnessSearch,
    tol: f64,
) -> Option<NonvanishingWitness> {
    search.points().into_iter().find_map(|z0| {
        match functional_witness(&point_functional(t, z0), family, tol) {
            WitnessOutcome::Found(found) => Some(NonvanishingWitness {
                g: found.g,
                z0,
                value: found.value,
            }),
            WitnessOutcome::NotFoundAtResolution => None,
        }
    })
}

/// Returns `h(0)` if `h` and `1/h` are both bounded by `1 + tol` on the
/// `n`-point boundary grid, i.e. `h` is numerically a unimodular constant.
pub fn quotient_constancy_check(h: &DiskFunction, n: usize, tol: f64) -> Result<Complex64> {
    check_grid(n)?;
    let degree = h.effective_degree();
    if n < 2 * degree + 2 {
        return Err(Error::Aliasing {
            n,
            degree,
            required: 2 * degree + 2,
        });
    }
    let samples = Spectral::new(n).synthesize(&h.taylor[..=degree]);
    let sup = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let inv_sup = samples.iter().map(|v| 1.0 / v.norm()).fold(0.0, f64::max);
    if !(sup <= 1.0 + tol && inv_sup <= 1.0 + tol) {
        return Err(Error::NotBilateralContraction { sup, inv_sup });
    }
    let value = h.coeff(0);
    if !((value.norm() - 1.0).abs() <= tol) {
        return Err(Error::NotUnimodular {
            modulus: value.norm(),
        });
    }
    Ok(value)
}
