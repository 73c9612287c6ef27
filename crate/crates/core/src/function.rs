//! Representations of analytic functions on the unit disk.
//!
//! A [`DiskFunction`] is a finite Taylor series and a [`BoundaryFunction`] is a
//! set of samples on the `N`-th roots of unity. The two are connected by the
//! FFT: synthesis evaluates a polynomial on the circle and analysis recovers
//! Fourier coefficients from samples.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default boundary grid size.
pub const DEFAULT_GRID: usize = 4096;
/// Default Taylor truncation degree.
pub const DEFAULT_DEGREE: usize = 256;
/// Default tolerance for coefficient comparisons.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest negative-frequency energy ratio accepted by [`taylor_from_boundary`].
pub const ANALYTIC_TOL: f64 = 1e-8;

/// Finite Taylor series `c_0 + c_1 z + ... + c_d z^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "DiskFunctionRepr")]
pub struct DiskFunction {
    pub taylor: Vec<Complex64>,
}

#[derive(Deserialize)]
struct DiskFunctionRepr {
    taylor: Vec<Complex64>,
}

impl From<DiskFunctionRepr> for DiskFunction {
    fn from(repr: DiskFunctionRepr) -> Self {
        DiskFunction::new(repr.taylor)
    }
}

impl DiskFunction {
    /// An empty coefficient list is read as the zero function.
    pub fn new(mut taylor: Vec<Complex64>) -> Self {
        if taylor.is_empty() {
            taylor.push(Complex64::new(0.0, 0.0));
        }
        Self { taylor }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self { taylor: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `u(z) = z`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn monomial(k: usize) -> Self {
        let mut taylor = vec![Complex64::new(0.0, 0.0); k + 1];
        taylor[k] = Complex64::new(1.0, 0.0);
        Self { taylor }
    }

    /// Length of the coefficient vector minus one.
    pub fn degree(&self) -> usize {
        self.taylor.len() - 1
    }

    /// Index of the last exactly non-zero coefficient (0 for the zero function).
    pub fn effective_degree(&self) -> usize {
        self.taylor
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.taylor.get(k).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.taylor.iter().all(|c| c.norm() == 0.0)
    }

    /// Value at a point of the open disk.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not < 1", z.norm())));
        }
        Ok(self.value_at(z))
    }

    /// Horner evaluation at any point of the plane (the series is a polynomial).
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        horner(&self.taylor, z)
    }

    /// Taylor coefficients of `f'`.
    pub fn derivative(&self) -> DiskFunction {
        if self.taylor.len() == 1 {
            return DiskFunction::constant(Complex64::new(0.0, 0.0));
        }
        DiskFunction::new(
            self.taylor
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Coefficients `0..=d`, zero-padded if the series is shorter.
    pub fn truncated(&self, d: usize) -> DiskFunction {
        let mut taylor = self.taylor.clone();
        taylor.resize(d + 1, Complex64::new(0.0, 0.0));
        DiskFunction { taylor }
    }

    /// Drops trailing coefficients whose modulus is below `rel_tol * max|c_k|`.
    pub fn trimmed(&self, rel_tol: f64) -> DiskFunction {
        let max = self.taylor.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel_tol * max;
        let keep = self
            .taylor
            .iter()
            .rposition(|c| c.norm() > cut)
            .map_or(1, |i| i + 1);
        DiskFunction::new(self.taylor[..keep].to_vec())
    }

    pub fn scaled(&self, s: Complex64) -> DiskFunction {
        DiskFunction::new(self.taylor.iter().map(|c| c * s).collect())
    }

    /// Coefficientwise sum.
    pub fn add(&self, other: &DiskFunction) -> DiskFunction {
        let n = self.taylor.len().max(other.taylor.len());
        DiskFunction::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// Cauchy product truncated to degree `d`.
    pub fn mul_truncated(&self, other: &DiskFunction, d: usize) -> DiskFunction {
        DiskFunction::new(convolve_truncated(&self.taylor, &other.taylor, d))
    }

    /// Full Cauchy product.
    pub fn mul(&self, other: &DiskFunction) -> DiskFunction {
        self.mul_truncated(other, self.degree() + other.degree())
    }

    /// Largest coefficient deviation after zero-padding both series.
    pub fn max_deviation(&self, other: &DiskFunction) -> f64 {
        let n = self.taylor.len().max(other.taylor.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DiskFunction, tol: f64) -> bool {
        self.max_deviation(other) <= tol
    }

    /// Splits `f = f(w) + (z - w) k(z)` by synthetic division.
    ///
    /// Returns the quotient `k` and the remainder `f(w)`.
    pub fn divide_linear(&self, w: Complex64) -> (DiskFunction, Complex64) {
        let d = self.degree();
        if d == 0 {
            return (DiskFunction::constant(Complex64::new(0.0, 0.0)), self.taylor[0]);
        }
        let mut quotient = vec![Complex64::new(0.0, 0.0); d];
        let mut acc = self.taylor[d];
        for k in (0..d).rev() {
            quotient[k] = acc;
            acc = self.taylor[k] + w * acc;
        }
        (DiskFunction::new(quotient), acc)
    }

    /// Quadratic-norm helper: `(sum |c_k|^2)^(1/2)`.
    pub fn l2_coefficient_norm(&self) -> f64 {
        self.taylor.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub(crate) fn convolve_truncated(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
    for (i, &ai) in a.iter().enumerate().take(d + 1) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(d + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Power-series exponential truncated to degree `d`, from `g' = h' g`.
pub(crate) fn exp_series(h: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); d + 1];
    g[0] = h.first().copied().unwrap_or_default().exp();
    for n in 1..=d {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=n.min(h.len().saturating_sub(1)) {
            acc += h[k] * (k as f64) * g[n - k];
        }
        g[n] = acc / n as f64;
    }
    g
}

/// Samples on the `N`-th roots of unity, `samples[j] = f(exp(2 pi i j / N))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundaryRepr")]
pub struct BoundaryFunction {
    pub n: usize,
    pub samples: Vec<Complex64>,
}

#[derive(Deserialize)]
struct BoundaryRepr {
    n: usize,
    samples: Vec<Complex64>,
}

impl TryFrom<BoundaryRepr> for BoundaryFunction {
    type Error = Error;

    fn try_from(repr: BoundaryRepr) -> Result<Self> {
        if repr.n != repr.samples.len() {
            return Err(Error::Shape {
                expected: repr.n,
                actual: repr.samples.len(),
            });
        }
        BoundaryFunction::new(repr.samples)
    }
}

impl BoundaryFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        check_grid(samples.len())?;
        Ok(Self {
            n: samples.len(),
            samples,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Samples `f(theta_j)` for `theta_j = 2 pi j / n`.
    pub fn from_angle_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        check_grid(n)?;
        Ok(Self {
            n,
            samples: (0..n).map(|j| f(grid_angle(j, n))).collect(),
        })
    }

    pub fn angle(&self, j: usize) -> f64 {
        grid_angle(j, self.n)
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm()).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Largest pointwise deviation from another sample set on the same grid.
    pub fn max_deviation(&self, other: &BoundaryFunction) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::Shape {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn pointwise_mul(&self, other: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn pointwise_div(&self, other: &BoundaryFunction) -> Result<BoundaryFunction> {
        self.zip_with(other, |a, b| a / b)
    }

    fn zip_with(
        &self,
        other: &BoundaryFunction,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<BoundaryFunction> {
        if self.n != other.n {
            return Err(Error::Shape {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(BoundaryFunction {
            n: self.n,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }
}

pub(crate) fn grid_angle(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

pub(crate) fn check_grid(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo(n));
    }
    Ok(())
}

/// Cached forward/inverse plans for one grid size.
#[derive(Clone)]
pub(crate) struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// `s_j = sum_k c_k exp(2 pi i j k / n)` for `c` zero-padded to length `n`.
    pub(crate) fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        debug_assert!(coeffs.len() <= self.n);
        let mut buf = coeffs.to_vec();
        buf.resize(self.n, Complex64::new(0.0, 0.0));
        self.inverse.process(&mut buf);
        buf
    }

    /// `c_k = (1/n) sum_j s_j exp(-2 pi i j k / n)` for all `k < n`.
    pub(crate) fn analyze(&self, samples: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(samples.len(), self.n);
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }
}

/// Evaluates `f` on the `n`-th roots of unity.
///
/// Requires `n >= 2 deg(f) + 2` so that products of two functions of this
/// degree remain alias-free on the same grid.
pub fn boundary_samples(f: &DiskFunction, n: usize) -> Result<BoundaryFunction> {
    check_grid(n)?;
    let degree = f.effective_degree();
    let required = 2 * degree + 2;
    if n < required {
        return Err(Error::Aliasing {
            n,
            degree,
            required,
        });
    }
    let spectral = Spectral::new(n);
    Ok(BoundaryFunction {
        n,
        samples: spectral.synthesize(&f.taylor[..=degree]),
    })
}

/// Taylor projection of boundary data together with its analyticity defect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticProjection {
    pub function: DiskFunction,
    /// Share of spectral energy at frequencies `k >= N/2` (negative frequencies).
    pub negative_energy_ratio: f64,
}

/// Projects boundary samples onto `span{1, z, ..., z^d}` without judging analyticity.
pub fn analytic_projection(b: &BoundaryFunction, d: usize) -> Result<AnalyticProjection> {
    if d >= b.n / 2 {
        return Err(Error::Domain(format!(
            "degree {d} must be < N/2 = {}",
            b.n / 2
        )));
    }
    let coeffs = Spectral::new(b.n).analyze(&b.samples);
    Ok(project_coefficients(&coeffs, d))
}

pub(crate) fn project_coefficients(coeffs: &[Complex64], d: usize) -> AnalyticProjection {
    let n = coeffs.len();
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let negative: f64 = coeffs[n / 2..].iter().map(|c| c.norm_sqr()).sum();
    let negative_energy_ratio = if total > 0.0 { negative / total } else { 0.0 };
    AnalyticProjection {
        function: DiskFunction::new(coeffs[..=d].to_vec()),
        negative_energy_ratio,
    }
}

/// Recovers Taylor coefficients `0..=d` from boundary samples.
///
/// Fails with [`Error::NotAnalytic`] when the negative-frequency energy ratio
/// exceeds [`ANALYTIC_TOL`].
pub fn taylor_from_boundary(b: &BoundaryFunction, d: usize) -> Result<DiskFunction> {
    let projection = analytic_projection(b, d)?;
    if projection.negative_energy_ratio > ANALYTIC_TOL {
        return Err(Error::NotAnalytic {
            ratio: projection.negative_energy_ratio,
        });
    }
    Ok(projection.function)
}

/// Function space whose norm [`hp_norm`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Hardy,
    Bergman,
    Dirichlet,
}

impl Space {
    /// Diagonal weight of `|c_k|^2` in the quadratic norm of the space.
    pub fn coefficient_weight(self, k: usize) -> f64 {
        match self {
            Space::Hardy => 1.0,
            Space::Bergman => 1.0 / (k as f64 + 1.0),
            Space::Dirichlet => k as f64 + 1.0,
        }
    }
}

/// Exponent and space of a norm. `p = f64::INFINITY` selects the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpNormSpec {
    p: f64,
    space: Space,
}

impl HpNormSpec {
    pub fn new(p: f64, space: Space) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("exponent p = {p} must be > 0")));
        }
        Ok(Self { p, space })
    }

    pub fn hardy(p: f64) -> Result<Self> {
        Self::new(p, Space::Hardy)
    }

    pub fn bergman() -> Self {
        Self {
            p: 2.0,
            space: Space::Bergman,
        }
    }

    pub fn dirichlet() -> Self {
        Self {
            p: 2.0,
            space: Space::Dirichlet,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn space(&self) -> Space {
        self.space
    }
}

/// Norm of a polynomial.
///
/// Hardy norms integrate `|f|^p` over the boundary by the trapezoid rule on
/// the `n`-grid; polynomials are their own radial limits so no supremum over
/// `r < 1` is needed. Bergman and Dirichlet norms use the weighted coefficient
/// formulas and ignore `p`.
pub fn hp_norm(f: &DiskFunction, spec: HpNormSpec, n: usize) -> Result<f64> {
    match spec.space {
        Space::Hardy => {
            let b = boundary_samples(f, n)?;
            if spec.p.is_infinite() {
                Ok(b.max_modulus())
            } else {
                let mean = b.samples.iter().map(|s| s.norm().powf(spec.p)).sum::<f64>()
                    / n as f64;
                Ok(mean.powf(1.0 / spec.p))
            }
        }
        space => Ok(f
            .taylor
            .iter()
            .enumerate()
            .map(|(k, c)| space.coefficient_weight(k) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()),
    }
}

/// Herglotz transform of real boundary data.
///
/// Returns `h(z) = u_0 + 2 sum_{k=1..d} u_k z^k` where `u_k` are the discrete
/// Fourier coefficients of `u`, so that `Re h` is the Poisson extension of `u`.
pub fn herglotz_transform(u: &BoundaryFunction, d: usize) -> Result<DiskFunction> {
    let scale = u
        .samples
        .iter()
        .map(|s| s.re.abs())
        .fold(1.0, f64::max);
    let max_imag = u.samples.iter().map(|s| s.im.abs()).fold(0.0, f64::max);
    if max_imag > 1e-10 * scale {
        return Err(Error::Domain(format!(
            "Herglotz input must be real; max imaginary part {max_imag:.3e}"
        )));
    }
    let real: Vec<f64> = u.samples.iter().map(|s| s.re).collect();
    herglotz_real(&real, d)
}

pub(crate) fn herglotz_real(u: &[f64], d: usize) -> Result<DiskFunction> {
    let n = u.len();
    check_grid(n)?;
    if d >= n / 2 {
        return Err(Error::Domain(format!("degree {d} must be < N/2 = {}", n / 2)));
    }
    let samples: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let coeffs = Spectral::new(n).analyze(&samples);
    let mut taylor = Vec::with_capacity(d + 1);
    taylor.push(Complex64::new(coeffs[0].re, 0.0));
    taylor.extend(coeffs[1..=d].iter().map(|c| c * 2.0));
    Ok(DiskFunction::new(taylor))
}
