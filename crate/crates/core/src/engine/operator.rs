//! Weighted-composition structure of operator matrices.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::functional::CoefficientFunctional;
use super::zeros::{locate_small_value, WitnessSearch};
use crate::error::{Error, Result};
use crate::function::{check_grid, DiskFunction, Spectral, DEFAULT_GRID};
use crate::mobius::{weighted_composition_columns, OperatorMatrix};

/// Radius of the interior circle on which weight and symbol margins are measured.
pub const MARGIN_RADIUS: f64 = 0.99;

/// `T = psi (f ∘ phi)` recovered from the first two columns of `T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WcoReport {
    pub psi: DiskFunction,
    pub phi: DiskFunction,
    /// Max entry deviation over columns `k <= d/2`.
    pub residual: f64,
    /// `1 - max |phi|` on the circle of radius [`MARGIN_RADIUS`].
    pub selfmap_margin: f64,
    /// `min |psi|` on the circle of radius [`MARGIN_RADIUS`].
    pub min_weight_modulus: f64,
    pub verdict: bool,
}

/// Samples of `f(r zeta)` on the `n`-th roots of unity.
pub(crate) fn circle_samples(spectral: &Spectral, f: &DiskFunction, r: f64) -> Vec<Complex64> {
    let mut scale = 1.0;
    let scaled: Vec<Complex64> = f
        .taylor
        .iter()
        .map(|&c| {
            let v = c * scale;
            scale *= r;
            v
        })
        .collect();
    spectral.synthesize(&scaled)
}

/// [`recover_operator_on_grid`] on the default grid (enlarged if `d` requires it).
pub fn recover_operator(t: &OperatorMatrix, tol: f64) -> Result<WcoReport> {
    let n = DEFAULT_GRID.max((2 * t.dim()).next_power_of_two());
    recover_operator_on_grid(t, n, tol)
}

/// Recovers `psi = T1` and `phi = (Tz) / psi`, the quotient taken pointwise on
/// the `n`-point boundary grid and projected to degree `d`.
pub fn recover_operator_on_grid(t: &OperatorMatrix, n: usize, tol: f64) -> Result<WcoReport> {
    let d = t.degree();
    if d < 1 {
        return Err(Error::Domain("operator needs degree >= 1".into()));
    }
    check_grid(n)?;
    if n < 2 * d + 2 {
        return Err(Error::Aliasing {
            n,
            degree: d,
            required: 2 * d + 2,
        });
    }
    let psi = DiskFunction::new(t.column(0).to_vec());
    let weight_scale = psi.l2_coefficient_norm();
    if weight_scale == 0.0 {
        return Err(Error::WeightVanishes {
            at: Complex64::new(0.0, 0.0),
        });
    }
    if let Some((at, _)) = locate_small_value(&psi, &WitnessSearch::default(), tol * weight_scale) {
        return Err(Error::WeightVanishes { at });
    }

    let spectral = Spectral::new(n);
    let psi_boundary = spectral.synthesize(&psi.taylor);
    let image_boundary = spectral.synthesize(t.column(1));
    let quotient: Vec<Complex64> = image_boundary
        .iter()
        .zip(&psi_boundary)
        .map(|(a, b)| a / b)
        .collect();
    let phi = DiskFunction::new(spectral.analyze(&quotient)[..=d].to_vec());

    let max_phi = circle_samples(&spectral, &phi, MARGIN_RADIUS)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let selfmap_margin = 1.0 - max_phi;
    if !(selfmap_margin > 0.0) {
        return Err(Error::NotSelfMap {
            margin: selfmap_margin,
        });
    }
    let min_weight_modulus = circle_samples(&spectral, &psi, MARGIN_RADIUS)
        .iter()
        .map(|v| v.norm())
        .fold(f64::INFINITY, f64::min);

    let columns = weighted_composition_columns(&psi, &phi, d);
    let residual = (0..=d / 2)
        .map(|k| {
            t.column(k)
                .iter()
                .zip(&columns[k])
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);

    Ok(WcoReport {
        psi,
        phi,
        residual,
        selfmap_margin,
        min_weight_modulus,
        verdict: residual <= tol && selfmap_margin > 0.0 && min_weight_modulus > 0.0,
    })
}

/// An outer `g` and a point `z0` of the disk where `Tg` (nearly) vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonvanishingWitness {
    pub g: DiskFunction,
    pub z0: Complex64,
    pub value: Complex64,
}

fn witness_for(
    t: &OperatorMatrix,
    g: &DiskFunction,
    search: &WitnessSearch,
    tol: f64,
) -> Option<NonvanishingWitness> {
    let image = t.apply(g).ok()?;
    let scale = image.l2_coefficient_norm();
    if scale == 0.0 {
        return Some(NonvanishingWitness {
            g: g.clone(),
            z0: Complex64::new(0.0, 0.0),
            value: Complex64::new(0.0, 0.0),
        });
    }
    locate_small_value(&image, search, tol * scale).map(|(z0, value)| NonvanishingWitness {
        g: g.clone(),
        z0,
        value,
    })
}

/// One witness per family member whose image has a zero in the disk, in family order.
///
/// Members of degree above the operator's are skipped.
pub fn outer_nonvanishing_witnesses(
    t: &OperatorMatrix,
    family: &[DiskFunction],
    search: &WitnessSearch,
    tol: f64,
) -> Vec<NonvanishingWitness> {
    family
        .par_iter()
        .map(|g| witness_for(t, g, search, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// First witness in (family, radius, angle) order, or `None` if every `Tg`
/// is zero-free at the search resolution.
pub fn check_outer_nonvanishing(
    t: &OperatorMatrix,
    family: &[DiskFunction],
    search: &WitnessSearch,
    tol: f64,
) -> Option<NonvanishingWitness> {
    outer_nonvanishing_witnesses(t, family, search, tol).into_iter().next()
}

/// The unitary exchanging `1` and `z` and fixing `z^k` for `k >= 2`.
pub fn swap_unitary(d: usize) -> Result<OperatorMatrix> {
    if d < 1 {
        return Err(Error::Domain("swap needs degree >= 1".into()));
    }
    let mut t = OperatorMatrix::identity(d + 1);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    t.set(0, 0, zero);
    t.set(1, 1, zero);
    t.set(0, 1, one);
    t.set(1, 0, one);
    Ok(t)
}

/// `f -> (Tf)(z0)` as a coefficient functional.
pub fn point_functional(t: &OperatorMatrix, z0: Complex64) -> CoefficientFunctional {
    CoefficientFunctional {
        lambda: (0..t.dim())
            .map(|k| DiskFunction::new(t.column(k).to_vec()).value_at(z0))
            .collect(),
    }
}
