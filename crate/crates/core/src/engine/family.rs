//! Seeded families of outer test functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factorization::outer_from_modulus;
use crate::function::{grid_angle, DiskFunction};

const CIRCLE_POINTS: usize = 8;
const TRIG_DEGREE: usize = 3;

fn circle_point(j: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CIRCLE_POINTS as f64)
}

fn shift(lambda: Complex64) -> DiskFunction {
    DiskFunction::new(vec![-lambda, Complex64::new(1.0, 0.0)])
}

fn outer_grid(d: usize) -> usize {
    (4 * (d + 1).next_power_of_two()).max(1024)
}

fn outer_of(modulus: impl Fn(f64) -> f64, d: usize) -> DiskFunction {
    let n = outer_grid(d);
    let samples: Vec<f64> = (0..n).map(|j| modulus(grid_angle(j, n))).collect();
    outer_from_modulus(&samples, d)
        .expect("strictly positive modulus on a valid grid")
        .trimmed(1e-16)
}

/// Random `G(theta) = a (1 + sum_k (x_k cos k theta + y_k sin k theta))` with
/// `sum |x_k| + |y_k| <= 0.9`, so `min G >= 0.1 a`.
fn random_trig_modulus(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 {
    let amplitude: f64 = rng.gen_range(0.5..2.0);
    let budget: f64 = rng.gen_range(0.2..0.9);
    let raw: Vec<(f64, f64)> = (0..TRIG_DEGREE)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|(x, y)| x.abs() + y.abs()).sum::<f64>().max(1e-12);
    let coeffs: Vec<(f64, f64)> = raw
        .into_iter()
        .map(|(x, y)| (x * budget / total, y * budget / total))
        .collect();
    move |theta| {
        let wave: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, (x, y))| {
                let angle = (k + 1) as f64 * theta;
                x * angle.cos() + y * angle.sin()
            })
            .sum();
        amplitude * (1.0 + wave)
    }
}

/// Deterministic family of outer functions of degree at most `d`.
///
/// Order: `1`, `1 + z/2`, `z - lambda` for the 8th roots of unity, the outer
/// function with modulus `2 + cos theta`, then alternately a random outer
/// function `O_i` and `(z - lambda_{i mod 8}) O_i`.
pub fn outer_test_family(count: usize, seed: u64, d: usize) -> Vec<DiskFunction> {
    let mut family = Vec::with_capacity(count);
    if count == 0 {
        return family;
    }
    family.push(DiskFunction::one());
    if d == 0 {
        return family;
    }
    family.push(DiskFunction::from_real(&[1.0, 0.5]));
    family.extend((0..CIRCLE_POINTS).map(|j| shift(circle_point(j))));
    family.push(outer_of(|theta| 2.0 + theta.cos(), d));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut i = 0;
    while family.len() < count {
        let outer = outer_of(random_trig_modulus(&mut rng), d - 1);
        family.push(outer.clone());
        family.push(outer.mul(&shift(circle_point(i % CIRCLE_POINTS))));
        i += 1;
    }
    family.truncate(count);
    family
}
