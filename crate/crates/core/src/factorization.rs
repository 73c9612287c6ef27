//! Outer functions, Blaschke products, atomic singular inner factors and
//! inner-outer factorization.
//!
//! An outer function is rebuilt from its boundary modulus `G` as
//! `exp(H[log G])`, where `H` is the Herglotz transform. Simple boundary zeros
//! of the form `|e^{i theta} - lambda|^m` are removed from `G` before taking
//! logarithms and restored as the polynomial factor `(1 - conj(lambda) z)^m`,
//! which is outer with value 1 at the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{
    analytic_projection, boundary_samples, check_grid, convolve_truncated, exp_series,
    grid_angle, herglotz_real, BoundaryFunction, DiskFunction, Spectral,
};

/// Smallest boundary modulus treated as non-zero.
pub const MODULUS_FLOOR: f64 = 1e-10;
/// Leading Taylor coefficients below this are exact zeros at the origin.
pub const ORIGIN_ZERO_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite Blaschke product `front * prod (z - a_j) / (1 - conj(a_j) z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    front: Complex64,
}

#[derive(Deserialize)]
struct BlaschkeRepr {
    zeros: Vec<Complex64>,
    front: Complex64,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;

    fn try_from(repr: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(repr.zeros, repr.front)
    }
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, front: Complex64) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "Blaschke zero {a} is not inside the disk"
            )));
        }
        if (front.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "front constant {front} is not unimodular"
            )));
        }
        Ok(Self { zeros, front })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn front(&self) -> Complex64 {
        self.front
    }

    /// Value on the closed disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
        }
        Ok(self.value_at(z))
    }

    fn value_at(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.front, |acc, a| acc * (z - a) / (ONE - a.conj() * z))
    }

    /// Taylor coefficients `0..=d`.
    pub fn taylor(&self, d: usize) -> DiskFunction {
        let mut acc = vec![ZERO; d + 1];
        acc[0] = self.front;
        for a in &self.zeros {
            // (z - a) / (1 - conj(a) z) = -a + sum_{n>=1} (1 - |a|^2) conj(a)^{n-1} z^n
            let mut factor = vec![ZERO; d + 1];
            factor[0] = -a;
            let mut power = ONE;
            let gain = 1.0 - a.norm_sqr();
            for coeff in factor.iter_mut().skip(1) {
                *coeff = power * gain;
                power *= a.conj();
            }
            acc = convolve_truncated(&acc, &factor, d);
        }
        DiskFunction::new(acc)
    }

    pub fn boundary_samples(&self, n: usize) -> Result<BoundaryFunction> {
        check_grid(n)?;
        Ok(BoundaryFunction {
            n,
            samples: (0..n)
                .map(|j| self.value_at(Complex64::from_polar(1.0, grid_angle(j, n))))
                .collect(),
        })
    }
}

/// Atomic singular inner function `exp(-mass (lambda + z) / (lambda - z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomRepr")]
pub struct SingularAtom {
    #[serde(rename = "lambda")]
    atom: Complex64,
    mass: f64,
}

#[derive(Deserialize)]
struct AtomRepr {
    lambda: Complex64,
    mass: f64,
}

impl TryFrom<AtomRepr> for SingularAtom {
    type Error = Error;

    fn try_from(repr: AtomRepr) -> Result<Self> {
        SingularAtom::new(repr.lambda, repr.mass)
    }
}

impl SingularAtom {
    pub fn new(atom: Complex64, mass: f64) -> Result<Self> {
        if (atom.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("atom {atom} is not on the unit circle")));
        }
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter(format!("atom mass {mass} must be > 0")));
        }
        Ok(Self { atom, mass })
    }

    pub fn atom(&self) -> Complex64 {
        self.atom
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Value on the open disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not < 1", z.norm())));
        }
        Ok(self.value_at(z))
    }

    fn value_at(&self, z: Complex64) -> Complex64 {
        (-self.mass * (self.atom + z) / (self.atom - z)).exp()
    }

    /// Taylor coefficients `0..=d` of `exp(-mass (1 + 2 sum (conj(lambda) z)^k))`.
    pub fn taylor(&self, d: usize) -> DiskFunction {
        let mut exponent = vec![ZERO; d + 1];
        exponent[0] = Complex64::new(-self.mass, 0.0);
        let mut power = ONE;
        for coeff in exponent.iter_mut().skip(1) {
            power *= self.atom.conj();
            *coeff = power * (-2.0 * self.mass);
        }
        DiskFunction::new(exp_series(&exponent, d))
    }

    /// Unimodular boundary values; fails if the atom sits on a grid point.
    pub fn boundary_samples(&self, n: usize) -> Result<BoundaryFunction> {
        check_grid(n)?;
        let samples: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, grid_angle(j, n)))
            .map(|zeta| {
                if (zeta - self.atom).norm() < 1e-12 {
                    Err(Error::Domain(format!("atom {} lies on the sample grid", self.atom)))
                } else {
                    Ok(self.value_at(zeta))
                }
            })
            .collect::<Result<_>>()?;
        Ok(BoundaryFunction { n, samples })
    }
}

/// Result of the Jensen-defect outerness test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuternessReport {
    /// `mean log|f*| - log|f(0)|` after removing `z^m`, in nats.
    pub defect: f64,
    #[serde(rename = "order")]
    pub zero_order_at_origin: usize,
    pub verdict: bool,
}

/// Boundary modulus with `prod |zeta - lambda_i|^{m_i}` divided out.
struct ReducedModulus {
    reduced: Vec<f64>,
    zeros: Vec<(Complex64, u32)>,
}

/// Detects grid samples below [`MODULUS_FLOOR`] that behave like a zero of
/// integer order `m`, i.e. neighbouring samples scale as `2^m` when the
/// distance to the zero doubles, and divides them out.
fn split_boundary_zeros(g: &[f64], declared: &[Complex64]) -> Result<ReducedModulus> {
    let n = g.len();
    if let Some((index, &value)) = g.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::ModulusTooSmall { index, value });
    }
    let mut zeros: Vec<(Complex64, u32)> = Vec::new();
    for &lambda in declared {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "declared boundary zero {lambda} is not on the unit circle"
            )));
        }
        if let Some(entry) = zeros.iter_mut().find(|(l, _)| (*l - lambda).norm() < 1e-12) {
            entry.1 += 1;
        } else {
            zeros.push((lambda, 1));
        }
    }
    let declared_at = |j: usize, zeros: &[(Complex64, u32)]| {
        let zeta = Complex64::from_polar(1.0, grid_angle(j, n));
        zeros.iter().any(|(l, _)| (*l - zeta).norm() < 1e-12)
    };
    for j in 0..n {
        if g[j] > MODULUS_FLOOR || declared_at(j, &zeros) {
            continue;
        }
        let order = zero_order_at(g, j).ok_or(Error::ModulusTooSmall { index: j, value: g[j] })?;
        zeros.push((Complex64::from_polar(1.0, grid_angle(j, n)), order));
    }

    let mut reduced = g.to_vec();
    let mut holes = Vec::new();
    for (j, value) in reduced.iter_mut().enumerate() {
        let zeta = Complex64::from_polar(1.0, grid_angle(j, n));
        for &(lambda, m) in &zeros {
            let dist = chord(zeta, lambda);
            if dist < 1e-12 {
                holes.push(j);
            } else {
                *value /= dist.powi(m as i32);
            }
        }
    }
    holes.dedup();
    for &j in &holes {
        let prev = reduced[(j + n - 1) % n];
        let next = reduced[(j + 1) % n];
        reduced[j] = (prev * next).sqrt();
    }
    if let Some((index, &value)) = reduced
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > MODULUS_FLOOR && v.is_finite()))
    {
        return Err(Error::ModulusTooSmall { index, value });
    }
    Ok(ReducedModulus { reduced, zeros })
}

/// `|zeta - lambda|` for unimodular points via `2 |sin(delta / 2)|`.
fn chord(zeta: Complex64, lambda: Complex64) -> f64 {
    let delta = (zeta * lambda.conj()).arg();
    2.0 * (delta / 2.0).sin().abs()
}

fn zero_order_at(g: &[f64], j: usize) -> Option<u32> {
    let n = g.len();
    if n < 8 {
        return None;
    }
    let at = |offset: isize| g[((j as isize + offset).rem_euclid(n as isize)) as usize];
    let (p1, p2, m1, m2) = (at(1), at(2), at(-1), at(-2));
    if [p1, p2, m1, m2].iter().any(|v| !(*v > MODULUS_FLOOR)) {
        return None;
    }
    let forward = (p2 / p1).log2();
    let backward = (m2 / m1).log2();
    let order = ((forward + backward) / 2.0).round();
    if order < 1.0 || (forward - order).abs() > 0.25 || (backward - order).abs() > 0.25 {
        return None;
    }
    Some(order as u32)
}

/// Multiplies `taylor` by `(1 - conj(lambda) z)^m` for each boundary zero.
fn restore_boundary_zeros(mut taylor: Vec<Complex64>, zeros: &[(Complex64, u32)], d: usize) -> Vec<Complex64> {
    for &(lambda, m) in zeros {
        let factor = [ONE, -lambda.conj()];
        for _ in 0..m {
            taylor = convolve_truncated(&taylor, &factor, d);
        }
    }
    taylor
}

/// Outer function with boundary modulus `g` (samples on a power-of-two grid),
/// truncated to degree `d`.
///
/// Samples at or below [`MODULUS_FLOOR`] are accepted only where they look
/// like a boundary zero of integer order; the zero is then factored out
/// analytically.
pub fn outer_from_modulus(g: &[f64], d: usize) -> Result<DiskFunction> {
    outer_from_modulus_with_zeros(g, &[], d)
}

/// As [`outer_from_modulus`] with additional user-declared simple boundary zeros.
pub fn outer_from_modulus_with_zeros(g: &[f64], declared: &[Complex64], d: usize) -> Result<DiskFunction> {
    let n = g.len();
    check_grid(n)?;
    if d >= n / 2 {
        return Err(Error::Domain(format!("degree {d} must be < N/2 = {}", n / 2)));
    }
    let ReducedModulus { reduced, zeros } = split_boundary_zeros(g, declared)?;
    let log_modulus: Vec<f64> = reduced.iter().map(|v| v.ln()).collect();
    let herglotz = herglotz_real(&log_modulus, d)?;
    let outer = exp_series(&herglotz.taylor, d);
    Ok(DiskFunction::new(restore_boundary_zeros(outer, &zeros, d)))
}

/// Outer factor of boundary data, degree `d`.
pub fn outer_part_of(b: &BoundaryFunction, d: usize) -> Result<DiskFunction> {
    let moduli = b.moduli();
    let (j, &min) = moduli
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    if !(min > MODULUS_FLOOR) {
        return Err(Error::BoundaryZero {
            theta: b.angle(j),
            value: min,
        });
    }
    outer_from_modulus(&moduli, d)
}

/// Outer factor of `f`, computed on the `n`-grid and truncated to degree `d`.
pub fn outer_part(f: &DiskFunction, n: usize, d: usize) -> Result<DiskFunction> {
    outer_part_of(&boundary_samples(f, n)?, d)
}

/// Inner factor of a function, primarily as boundary samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InnerFactor {
    pub boundary: BoundaryFunction,
    /// Taylor projection to degree `d`; may alias for atoms close to the grid.
    pub taylor: DiskFunction,
    pub negative_energy_ratio: f64,
}

/// Inner-outer factorization of boundary data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub outer: DiskFunction,
    pub inner: InnerFactor,
}

impl Factorization {
    /// Boundary samples of `inner * outer`.
    pub fn reconstruct(&self) -> BoundaryFunction {
        let n = self.inner.boundary.n;
        let outer = Spectral::new(n).synthesize(&self.outer.taylor);
        BoundaryFunction {
            n,
            samples: self
                .inner
                .boundary
                .samples
                .iter()
                .zip(outer)
                .map(|(i, o)| i * o)
                .collect(),
        }
    }
}

/// Splits boundary data `f*` into `inner* = f* / outer*` and the outer factor.
pub fn factorize(b: &BoundaryFunction, d: usize) -> Result<Factorization> {
    if d >= b.n / 2 {
        return Err(Error::Domain(format!("degree {d} must be < N/2 = {}", b.n / 2)));
    }
    let outer = outer_part_of(b, d)?;
    let outer_samples = Spectral::new(b.n).synthesize(&outer.taylor);
    let boundary = BoundaryFunction {
        n: b.n,
        samples: b
            .samples
            .iter()
            .zip(&outer_samples)
            .map(|(f, o)| f / o)
            .collect(),
    };
    let projection = analytic_projection(&boundary, d)?;
    Ok(Factorization {
        outer,
        inner: InnerFactor {
            boundary,
            taylor: projection.function,
            negative_energy_ratio: projection.negative_energy_ratio,
        },
    })
}

/// Inner factor of `f` on the `n`-grid with Taylor projection to degree `d`.
pub fn inner_part(f: &DiskFunction, n: usize, d: usize) -> Result<InnerFactor> {
    Ok(factorize(&boundary_samples(f, n)?, d)?.inner)
}

/// Divides out `(z - zeta)` for every grid point `zeta` where `f` vanishes.
///
/// `log|zeta - lambda|` has zero mean over the circle and vanishes at the
/// origin, so the Jensen defect is unchanged.
fn deflate_grid_zeros(mut f: DiskFunction, n: usize) -> Result<DiskFunction> {
    for _ in 0..f.degree() {
        let samples = boundary_samples(&f, n)?;
        let Some(j) = samples.samples.iter().position(|s| s.norm() <= MODULUS_FLOOR) else {
            break;
        };
        f = f.divide_linear(Complex64::from_polar(1.0, grid_angle(j, n))).0;
    }
    Ok(f)
}

/// Jensen-defect test: `f` is outer iff it has no zero at the origin and
/// `mean log|f*| = log|f(0)|`.
///
/// Grid zeros of integer order are removed before averaging; the removed
/// factors `|zeta - lambda|^m` have zero log-mean.
pub fn is_outer(f: &DiskFunction, n: usize, tol: f64) -> Result<OuternessReport> {
    let order = f
        .taylor
        .iter()
        .position(|c| c.norm() >= ORIGIN_ZERO_TOL)
        .ok_or(Error::ZeroFunction)?;
    let reduced = deflate_grid_zeros(DiskFunction::new(f.taylor[order..].to_vec()), n)?;
    let samples = boundary_samples(&reduced, n)?;
    let ReducedModulus { reduced: modulus, .. } = split_boundary_zeros(&samples.moduli(), &[])?;
    let mean_log = modulus.iter().map(|v| v.ln()).sum::<f64>() / n as f64;
    let defect = mean_log - reduced.taylor[0].norm().ln();
    Ok(OuternessReport {
        defect,
        zero_order_at_origin: order,
        verdict: order == 0 && defect <= tol,
    })
}
