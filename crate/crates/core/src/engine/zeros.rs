//! Coarse-to-fine search for small values of a polynomial inside the disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::function::{grid_angle, DiskFunction};

/// Polar sampling grid for witness searches.
///
/// Points are visited ring by ring (radius order) and by increasing angle
/// within a ring; the first qualifying point in that order wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Alternating golden-section sweeps (x then y) per refinement.
    pub sweeps: usize,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        let mut radii: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
        radii.push(0.99);
        Self {
            radii,
            angles: 64,
            sweeps: 4,
        }
    }
}

impl WitnessSearch {
    /// All grid points in visiting order.
    pub fn points(&self) -> Vec<Complex64> {
        self.rings().into_iter().flatten().collect()
    }

    fn rings(&self) -> Vec<Vec<Complex64>> {
        self.radii
            .iter()
            .map(|&r| {
                if r == 0.0 {
                    vec![Complex64::new(0.0, 0.0)]
                } else {
                    (0..self.angles)
                        .map(|j| Complex64::from_polar(r, grid_angle(j, self.angles)))
                        .collect()
                }
            })
            .collect()
    }
}

const GOLDEN_STEPS: usize = 50;

/// First point `z0` with `|z0|` at most the outer search radius and
/// `|f(z0)| < threshold`, found by refining the local minima of `|f|` on the
/// polar grid.
///
/// Zeros closer to the circle than the outer radius are not reported: for
/// truncated series they are indistinguishable from boundary zeros.
pub(crate) fn locate_small_value(
    f: &DiskFunction,
    search: &WitnessSearch,
    threshold: f64,
) -> Option<(Complex64, Complex64)> {
    let outer_radius = search.radii.iter().copied().fold(0.0, f64::max).min(1.0 - f64::EPSILON);
    let rings = search.rings();
    let values: Vec<Vec<f64>> = rings
        .iter()
        .map(|ring| ring.iter().map(|&z| f.value_at(z).norm()).collect())
        .collect();
    // |f(z) - f(z0)| <= |z - z0| sup|f'|, so a cell of half-width h around z
    // can only hold a zero if |f(z)| <= sqrt(2) h sup|f'|.
    let slope_bound: f64 = f
        .taylor
        .iter()
        .enumerate()
        .map(|(k, c)| k as f64 * c.norm())
        .sum();

    for (ri, ring) in rings.iter().enumerate() {
        for (j, &z) in ring.iter().enumerate() {
            let value = values[ri][j];
            if !is_local_min(&values, ri, j, value) {
                continue;
            }
            let half_width = cell_half_width(search, ri);
            if value > 1.5 * half_width * slope_bound && value >= threshold {
                continue;
            }
            let (best, best_value) = refine(f, z, value, half_width, search.sweeps);
            if best_value < threshold && best.norm() <= outer_radius + 1e-12 {
                return Some((best, f.value_at(best)));
            }
        }
    }
    None
}

fn cell_half_width(search: &WitnessSearch, ri: usize) -> f64 {
    let r = search.radii[ri];
    let radial = [ri.checked_sub(1), Some(ri + 1)]
        .into_iter()
        .flatten()
        .filter_map(|k| search.radii.get(k))
        .map(|&s| (s - r).abs())
        .fold(0.0, f64::max);
    let angular = 2.0 * std::f64::consts::PI * r / search.angles as f64;
    radial.max(angular).max(1e-3)
}

fn is_local_min(values: &[Vec<f64>], ri: usize, j: usize, value: f64) -> bool {
    let ring = &values[ri];
    let m = ring.len();
    if m > 1 && (value > ring[(j + 1) % m] || value > ring[(j + m - 1) % m]) {
        return false;
    }
    for neighbour in [ri.checked_sub(1), Some(ri + 1)].into_iter().flatten() {
        let Some(other) = values.get(neighbour) else {
            continue;
        };
        if m == 1 {
            if other.iter().any(|&v| value > v) {
                return false;
            }
        } else {
            let k = if other.len() == 1 { 0 } else { j * other.len() / m };
            if value > other[k] {
                return false;
            }
        }
    }
    true
}

/// Coordinate descent with golden-section line searches on `|f|`.
fn refine(
    f: &DiskFunction,
    start: Complex64,
    start_value: f64,
    half_width: f64,
    sweeps: usize,
) -> (Complex64, f64) {
    let mut best = start;
    let mut best_value = start_value;
    for _ in 0..sweeps {
        for axis in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
            let origin = best;
            let line = |t: f64| f.value_at(origin + axis * t).norm();
            let t = golden_section(line, -half_width, half_width);
            let candidate = origin + axis * t;
            let value = f.value_at(candidate).norm();
            if value < best_value {
                best = candidate;
                best_value = value;
            }
        }
    }
    (best, best_value)
}

fn golden_section(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_STEPS {
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - ratio * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + ratio * (b - a);
            g2 = g(x2);
        }
    }
    if g1 <= g2 {
        x1
    } else {
        x2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_zero() {
        let f = DiskFunction::new(vec![Complex64::new(-0.3, -0.41), Complex64::new(1.0, 0.0)]);
        let (z, v) = locate_small_value(&f, &WitnessSearch::default(), 1e-10).unwrap();
        assert!((z - Complex64::new(0.3, 0.41)).norm() < 1e-9);
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn ignores_zero_outside_disk() {
        let f = DiskFunction::from_real(&[-1.2, 1.0]);
        assert!(locate_small_value(&f, &WitnessSearch::default(), 1e-8).is_none());
    }

    #[test]
    fn earliest_ring_wins() {
        // zeros at 0.15 and -0.7
        let f = DiskFunction::from_real(&[-0.15, 1.0]).mul(&DiskFunction::from_real(&[0.7, 1.0]));
        let (z, _) = locate_small_value(&f, &WitnessSearch::default(), 1e-8).unwrap();
        assert!((z - Complex64::new(0.15, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn default_grid_has_expected_size() {
        assert_eq!(WitnessSearch::default().points().len(), 1 + 10 * 64);
    }
}
