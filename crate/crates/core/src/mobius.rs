//! Disk automorphisms, truncated weighted composition operators, the Forelli
//! isometry builder and multiplier norms of the shift.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{
    DiskFunction, Space, Spectral, DEFAULT_GRID,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Required gap between `max |phi|` on the boundary grid and 1.
pub const SELF_MAP_MARGIN: f64 = 1e-6;

/// `phi(z) = c (z - w) / (1 - conj(w) z)` with `|w| < 1`, `|c| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MobiusRepr")]
pub struct MobiusMap {
    w: Complex64,
    c: Complex64,
}

#[derive(Deserialize)]
struct MobiusRepr {
    w: Complex64,
    c: Complex64,
}

impl TryFrom<MobiusRepr> for MobiusMap {
    type Error = Error;

    fn try_from(repr: MobiusRepr) -> Result<Self> {
        MobiusMap::new(repr.w, repr.c)
    }
}

/// Möbius parameters fitted from `phi(0)` and `phi'(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusFit {
    pub map: MobiusMap,
    /// `| |c_raw| - 1 |` before the rotation was normalized.
    pub unimodularity_defect: f64,
}

impl MobiusMap {
    pub fn new(w: Complex64, c: Complex64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|w| = {} must be < 1", w.norm())));
        }
        if !((c.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidParameter(format!("c = {c} is not unimodular")));
        }
        Ok(Self { w, c })
    }

    pub fn identity() -> Self {
        Self { w: ZERO, c: ONE }
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Value on the closed disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
        }
        Ok(self.value_at(z))
    }

    pub(crate) fn value_at(&self, z: Complex64) -> Complex64 {
        self.c * (z - self.w) / (ONE - self.w.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = ONE - self.w.conj() * z;
        self.c * (1.0 - self.w.norm_sqr()) / (den * den)
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            w: -self.c * self.w,
            c: self.c.conj(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusMap) -> MobiusMap {
        let w = inner.inverse().value_at(self.w);
        let slope = self.derivative(self.w) * inner.derivative(w);
        let c = slope * (1.0 - w.norm_sqr());
        MobiusMap { w, c: c / c.norm() }
    }

    /// Recovers `(w, c)` from `v = phi(0) = -c w` and `s = phi'(0) = c (1 - |w|^2)`.
    pub fn fit_at_origin(value: Complex64, slope: Complex64) -> Result<MobiusFit> {
        if !(value.norm() < 1.0) {
            return Err(Error::Domain(format!("|phi(0)| = {} is not < 1", value.norm())));
        }
        let raw = slope / (1.0 - value.norm_sqr());
        if raw.norm() == 0.0 {
            return Err(Error::Domain("phi'(0) vanishes".into()));
        }
        let c = raw / raw.norm();
        Ok(MobiusFit {
            map: MobiusMap { w: -c.conj() * value, c },
            unimodularity_defect: (raw.norm() - 1.0).abs(),
        })
    }

    /// Taylor coefficients `0..=d` of `c (z - w) sum (conj(w) z)^n`.
    pub fn taylor(&self, d: usize) -> DiskFunction {
        let mut taylor = vec![ZERO; d + 1];
        taylor[0] = -self.c * self.w;
        let gain = self.c * (1.0 - self.w.norm_sqr());
        let mut power = ONE;
        for coeff in taylor.iter_mut().skip(1) {
            *coeff = gain * power;
            power *= self.w.conj();
        }
        DiskFunction::new(taylor)
    }

    /// Taylor coefficients of the branch of `(phi')^{1/p}` that is continuous
    /// on the disk and equals the principal root at the origin.
    ///
    /// `phi'(z) = phi'(0) (1 - conj(w) z)^{-2}`, so the branch is
    /// `phi'(0)^{1/p} (1 - conj(w) z)^{-2/p}` expanded by the binomial series.
    /// `p = inf` gives the constant 1.
    pub fn derivative_root_taylor(&self, p: f64, d: usize) -> Result<DiskFunction> {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("exponent p = {p} must be > 0")));
        }
        if p.is_infinite() {
            return Ok(DiskFunction::one().truncated(d));
        }
        let root = self.derivative(ZERO).powf(1.0 / p);
        let a = 2.0 / p;
        let mut taylor = vec![ZERO; d + 1];
        let mut term = root;
        taylor[0] = term;
        for (n, coeff) in taylor.iter_mut().enumerate().skip(1) {
            term *= self.w.conj() * ((a + n as f64 - 1.0) / n as f64);
            *coeff = term;
        }
        Ok(DiskFunction::new(taylor))
    }
}

/// Truncated matrix of a linear map on Taylor coefficients; column `k` holds
/// the coefficients of `T(z^k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<Complex64>>", try_from = "Vec<Vec<Complex64>>")]
pub struct OperatorMatrix {
    dim: usize,
    /// Column-major entries.
    data: Vec<Complex64>,
}

impl From<OperatorMatrix> for Vec<Vec<Complex64>> {
    fn from(m: OperatorMatrix) -> Self {
        m.rows()
    }
}

impl TryFrom<Vec<Vec<Complex64>>> for OperatorMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        OperatorMatrix::from_rows(rows)
    }
}

impl OperatorMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = ONE;
        }
        Self { dim, data }
    }

    pub fn from_columns(columns: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::Shape { expected: 1, actual: 0 });
        }
        if let Some(col) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::Shape {
                expected: dim,
                actual: col.len(),
            });
        }
        Ok(Self {
            dim,
            data: columns.into_iter().flatten().collect(),
        })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Shape { expected: 1, actual: 0 });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Shape {
                expected: dim,
                actual: row.len(),
            });
        }
        let mut data = vec![ZERO; dim * dim];
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                data[c * dim + r] = v;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation degree `d = dim - 1`.
    pub fn degree(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[col * self.dim + row] = value;
    }

    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// `T f` for `deg f <= d`.
    pub fn apply(&self, f: &DiskFunction) -> Result<DiskFunction> {
        let degree = f.effective_degree();
        if degree > self.degree() {
            return Err(Error::Shape {
                expected: self.dim,
                actual: degree + 1,
            });
        }
        let mut out = vec![ZERO; self.dim];
        for (k, &fk) in f.taylor.iter().enumerate().take(degree + 1) {
            if fk == ZERO {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(self.column(k)) {
                *o += t * fk;
            }
        }
        Ok(DiskFunction::new(out))
    }

    /// `max |(T* T - I)_{ij}|` over the leading `block x block` corner.
    pub fn gram_deviation(&self, block: usize) -> f64 {
        let block = block.min(self.dim);
        (0..block)
            .into_par_iter()
            .map(|i| {
                let ci = self.column(i);
                (0..block)
                    .map(|j| {
                        let g: Complex64 = ci
                            .iter()
                            .zip(self.column(j))
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        let target = if i == j { ONE } else { ZERO };
                        (g - target).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation over the leading `block` columns and rows.
    pub fn block_deviation(&self, other: &OperatorMatrix, block: usize) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let block = block.min(self.dim);
        let mut worst = 0.0f64;
        for c in 0..block {
            for r in 0..block {
                worst = worst.max((self.get(r, c) - other.get(r, c)).norm());
            }
        }
        Ok(worst)
    }
}

fn fft_size_for(d: usize) -> usize {
    (2 * d + 2).next_power_of_two().max(8)
}

/// Columns `trunc_d(psi * phi^k)` built from exact truncated products.
///
/// `trunc_d(phi^k) = trunc_d(trunc_d(phi^{k-1}) * trunc_d(phi))`, and each
/// product of two degree-`d` polynomials is formed on a grid of size
/// `>= 2d + 2`, so no aliasing enters the retained coefficients.
pub(crate) fn weighted_composition_columns(
    psi: &DiskFunction,
    phi: &DiskFunction,
    d: usize,
) -> Vec<Vec<Complex64>> {
    let n = fft_size_for(d);
    let spectral = Spectral::new(n);
    let phi_samples = spectral.synthesize(&phi.truncated(d).taylor);
    let psi_samples = spectral.synthesize(&psi.truncated(d).taylor);

    let mut powers = Vec::with_capacity(d + 1);
    let mut current = vec![ZERO; d + 1];
    current[0] = ONE;
    powers.push(current.clone());
    for _ in 1..=d {
        let samples: Vec<Complex64> = spectral
            .synthesize(&current)
            .into_iter()
            .zip(&phi_samples)
            .map(|(a, b)| a * b)
            .collect();
        current = spectral.analyze(&samples)[..=d].to_vec();
        powers.push(current.clone());
    }

    powers
        .par_iter()
        .map(|power| {
            let samples: Vec<Complex64> = spectral
                .synthesize(power)
                .into_iter()
                .zip(&psi_samples)
                .map(|(a, b)| a * b)
                .collect();
            spectral.analyze(&samples)[..=d].to_vec()
        })
        .collect()
}

/// Largest modulus of `phi` on a boundary grid fine enough for its degree.
pub(crate) fn boundary_max_modulus(phi: &DiskFunction) -> f64 {
    let n = DEFAULT_GRID.max(fft_size_for(phi.effective_degree()));
    Spectral::new(n)
        .synthesize(&phi.taylor[..=phi.effective_degree()])
        .iter()
        .map(|s| s.norm())
        .fold(0.0, f64::max)
}

/// Matrix of `f -> psi (f ∘ phi)` truncated to degree `d`.
///
/// `phi` must satisfy `max |phi| < 1 - SELF_MAP_MARGIN` on the boundary grid.
pub fn wco_matrix(psi: &DiskFunction, phi: &DiskFunction, d: usize) -> Result<OperatorMatrix> {
    let max_modulus = boundary_max_modulus(phi);
    if !(max_modulus < 1.0 - SELF_MAP_MARGIN) {
        return Err(Error::NotStrictSelfMap { max_modulus });
    }
    OperatorMatrix::from_columns(weighted_composition_columns(psi, phi, d))
}

/// Matrix of `f -> c (phi')^{1/p} (f ∘ phi)` for the automorphism `phi = m`.
///
/// Automorphisms are unimodular on the circle, so the strict self-map margin
/// of [`wco_matrix`] does not apply here.
pub fn forelli_isometry(m: &MobiusMap, c: Complex64, p: f64, d: usize) -> Result<OperatorMatrix> {
    if !((c.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidParameter(format!("c = {c} is not unimodular")));
    }
    let weight = m.derivative_root_taylor(p, d)?.scaled(c);
    OperatorMatrix::from_columns(weighted_composition_columns(&weight, &m.taylor(d), d))
}

/// `weight(k + n) / weight(k)` evaluated without intermediate rounding of the weights.
fn weight_ratio(space: Space, k: usize, n: usize) -> f64 {
    let (k, n) = (k as f64, n as f64);
    match space {
        Space::Hardy => 1.0,
        Space::Bergman => (k + 1.0) / (k + n + 1.0),
        Space::Dirichlet => (k + n + 1.0) / (k + 1.0),
    }
}

/// Operator norm of multiplication by `z^n` on the degree-`d` truncation of a
/// diagonally weighted space: `sup_{k <= d - n} sqrt(weight(k+n) / weight(k))`.
pub fn shift_multiplier_norm(space: Space, n: usize, d: usize) -> Result<f64> {
    if n > d {
        return Err(Error::Domain(format!("shift power {n} exceeds degree {d}")));
    }
    Ok((0..=d - n)
        .map(|k| weight_ratio(space, k, n).sqrt())
        .fold(0.0, f64::max))
}

/// One row of the spectral-radius trend table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftNormRow {
    pub n: usize,
    pub norm: f64,
    /// `norm^{1/n}`.
    pub root: f64,
}

/// `||z^n||` and `||z^n||^{1/n}` for `n = 1..=max_n`.
pub fn shift_norm_trend(space: Space, max_n: usize, d: usize) -> Result<Vec<ShiftNormRow>> {
    (1..=max_n)
        .map(|n| {
            let norm = shift_multiplier_norm(space, n, d)?;
            Ok(ShiftNormRow {
                n,
                norm,
                root: norm.powf(1.0 / n as f64),
            })
        })
        .collect()
}
