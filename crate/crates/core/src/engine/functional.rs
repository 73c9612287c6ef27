//! Linear functionals given by their values on monomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::DiskFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Lambda` on polynomials of degree `<= d`, stored as `lambda[k] = Lambda(z^k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunctional {
    pub lambda: Vec<Complex64>,
}

impl CoefficientFunctional {
    pub fn new(lambda: Vec<Complex64>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Domain("functional needs at least one value".into()));
        }
        if lambda.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
            return Err(Error::InvalidParameter("functional values must be finite".into()));
        }
        Ok(Self { lambda })
    }

    /// `f -> c f(w)` on degree `d`.
    pub fn point_evaluation(c: Complex64, w: Complex64, d: usize) -> Self {
        let mut lambda = Vec::with_capacity(d + 1);
        let mut power = c;
        for _ in 0..=d {
            lambda.push(power);
            power *= w;
        }
        Self { lambda }
    }

    pub fn degree(&self) -> usize {
        self.lambda.len() - 1
    }

    /// `sum_k lambda_k f_k`; coefficients of `f` beyond the degree must vanish.
    pub fn apply(&self, f: &DiskFunction) -> Result<Complex64> {
        if f.effective_degree() > self.degree() {
            return Err(Error::Domain(format!(
                "function of degree {} exceeds functional degree {}",
                f.effective_degree(),
                self.degree()
            )));
        }
        Ok(self.lambda.iter().zip(&f.taylor).map(|(l, a)| l * a).sum())
    }

    /// `sum_k |lambda_k| |f_k|`, the scale against which `|Lambda(f)|` is judged.
    pub(crate) fn apply_scale(&self, f: &DiskFunction) -> f64 {
        self.lambda
            .iter()
            .zip(&f.taylor)
            .map(|(l, a)| l.norm() * a.norm())
            .sum()
    }

    fn max_abs(&self) -> f64 {
        self.lambda.iter().map(|l| l.norm()).fold(0.0, f64::max)
    }
}

/// Point-evaluation parameters recovered from a functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub c: Complex64,
    pub w: Complex64,
    pub residual: f64,
    pub verdict: bool,
}

/// Reads off `c = Lambda(1)`, `w = Lambda(z) / Lambda(1)` and measures
/// `max_k |lambda_k - c w^k| / max(1, |c|)`.
pub fn recover_functional(functional: &CoefficientFunctional, tol: f64) -> Result<RecoveryReport> {
    if functional.degree() < 1 {
        return Err(Error::Domain("functional needs degree >= 1".into()));
    }
    let lambda = &functional.lambda;
    let c = lambda[0];
    if c.norm() <= tol * functional.max_abs() || c == ZERO {
        return Err(Error::VanishesOnOne);
    }
    let w = lambda[1] / c;
    if !(w.norm() < 1.0) {
        return Err(Error::VanishesOnOuterShift { lambda: w });
    }
    let mut power = c;
    let mut worst: f64 = 0.0;
    for &l in lambda {
        worst = worst.max((l - power).norm());
        power *= w;
    }
    let residual = worst / c.norm().max(1.0);
    Ok(RecoveryReport {
        c,
        w,
        residual,
        verdict: residual <= tol,
    })
}

/// `|Lambda(f) - c f(w)|` after splitting `f = f(w) + (z - w) k` exactly.
///
/// The functional kills `(z - w) k` precisely when it is point evaluation at `w`.
pub fn difference_quotient_check(
    functional: &CoefficientFunctional,
    f: &DiskFunction,
    tol: f64,
) -> Result<f64> {
    let report = recover_functional(functional, tol)?;
    let (quotient, remainder) = f.divide_linear(report.w);
    let shifted = DiskFunction::new(vec![-report.w, ONE]).mul(&quotient);
    let annihilated = functional.apply(&shifted.truncated(functional.degree()))?;
    let direct = functional.apply(f)? - report.c * remainder;
    Ok(direct.norm().max(annihilated.norm()))
}

/// An outer function on which a functional (nearly) vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalWitness {
    pub g: DiskFunction,
    pub value: Complex64,
}

/// Outcome of a witness search for a functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found(FunctionalWitness),
    NotFoundAtResolution,
}

const PROBE_ANGLES: usize = 16;
const PROBE_POWERS: usize = 16;

/// Searches for an outer `g` with `|Lambda(g)| <= tol * sum |lambda_k||g_k|`.
///
/// The given family is scanned first. Structured probes follow: `1`, `z - w`
/// for `|w| >= 1`, `z^k - lambda_k / lambda_0`, and polynomials `q (1 - z/a)`
/// whose single free root `a = Lambda(zq)/Lambda(q)` lies outside the disk.
pub fn functional_witness(
    functional: &CoefficientFunctional,
    family: &[DiskFunction],
    tol: f64,
) -> WitnessOutcome {
    let d = functional.degree();
    let accept = |g: &DiskFunction| -> Option<FunctionalWitness> {
        let value = functional.apply(g).ok()?;
        let scale = functional.apply_scale(g);
        (value.norm() <= tol * scale || value == ZERO).then(|| FunctionalWitness {
            g: g.clone(),
            value,
        })
    };

    if let Some(w) = family.iter().filter(|g| g.effective_degree() <= d).find_map(accept) {
        return WitnessOutcome::Found(w);
    }

    let lambda = &functional.lambda;
    let lambda0 = lambda[0];
    if let Some(w) = accept(&DiskFunction::one()) {
        return WitnessOutcome::Found(w);
    }
    if d >= 1 {
        let w = lambda[1] / lambda0;
        if w.norm() >= 1.0 {
            if let Some(found) = accept(&DiskFunction::new(vec![-w, ONE])) {
                return WitnessOutcome::Found(found);
            }
        }
    }
    // z^k - t with t^{1/k} outside the open disk is outer (roots on or beyond the circle).
    for k in 1..=d {
        let t = lambda[k] / lambda0;
        if t.norm() >= 1.0 {
            let mut taylor = vec![ZERO; k + 1];
            taylor[0] = -t;
            taylor[k] = ONE;
            if let Some(found) = accept(&DiskFunction::new(taylor)) {
                return WitnessOutcome::Found(found);
            }
        }
    }

    let mut bases: Vec<DiskFunction> = family
        .iter()
        .filter(|g| g.effective_degree() < d)
        .cloned()
        .collect();
    for j in 1..=PROBE_POWERS.min(d.saturating_sub(1)) {
        for t_abs in [0.9, 0.5] {
            for a in 0..PROBE_ANGLES {
                let t = Complex64::from_polar(t_abs, 2.0 * std::f64::consts::PI * a as f64 / PROBE_ANGLES as f64);
                let mut taylor = vec![ZERO; j + 1];
                taylor[0] = ONE;
                taylor[j] = t;
                bases.push(DiskFunction::new(taylor));
            }
        }
    }
    let z = DiskFunction::identity();
    for q in &bases {
        let (Ok(at_q), Ok(at_zq)) = (functional.apply(q), functional.apply(&z.mul(q))) else {
            continue;
        };
        if at_zq == ZERO {
            continue;
        }
        let a = at_zq / at_q;
        if !(a.norm() >= 1.0) || !a.re.is_finite() || !a.im.is_finite() {
            continue;
        }
        let candidate = q.mul(&DiskFunction::new(vec![ONE, -a.inv()]));
        if let Some(found) = accept(&candidate) {
            return WitnessOutcome::Found(found);
        }
    }
    WitnessOutcome::NotFoundAtResolution
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn functional(values: &[f64]) -> CoefficientFunctional {
        CoefficientFunctional::new(values.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn evaluation_at_origin() {
        let report = recover_functional(&functional(&[1.0, 0.0, 0.0, 0.0]), 1e-12).unwrap();
        assert_eq!(report.c, c(1.0, 0.0));
        assert_eq!(report.w, c(0.0, 0.0));
        assert_eq!(report.residual, 0.0);
        assert!(report.verdict);
    }

    #[test]
    fn scaled_point_evaluation() {
        let w = c(0.4, 0.2);
        let f = CoefficientFunctional::point_evaluation(c(3.7, 0.0), w, 128);
        let report = recover_functional(&f, 1e-12).unwrap();
        assert_abs_diff_eq!((report.c - 3.7).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((report.w - w).norm(), 0.0, epsilon = 1e-15);
        assert!(report.residual < 1e-12);
    }

    #[test]
    fn derivative_at_origin_vanishes_on_one() {
        let err = recover_functional(&functional(&[0.0, 1.0, 0.0]), 1e-8).unwrap_err();
        assert_eq!(err, Error::VanishesOnOne);
        assert_eq!(err.to_string(), "functional vanishes on the outer function 1");
    }

    #[test]
    fn exterior_ratio_is_rejected() {
        let err = recover_functional(&functional(&[1.0, 2.0, 4.0]), 1e-8).unwrap_err();
        assert!(matches!(err, Error::VanishesOnOuterShift { .. }));
    }

    #[test]
    fn difference_quotient_examples() {
        let w = c(0.3, -0.5);
        let f = CoefficientFunctional::point_evaluation(c(-1.2, 0.7), w, 20);
        assert_eq!(difference_quotient_check(&f, &DiskFunction::one(), 1e-12).unwrap(), 0.0);
        let shift = DiskFunction::new(vec![-w, c(1.0, 0.0)]);
        assert!(f.apply(&shift).unwrap().norm() < 1e-12);
        let poly = DiskFunction::new((0..=20).map(|k| c((k as f64).sin(), (k as f64 * 0.3).cos())).collect());
        assert!(difference_quotient_check(&f, &poly, 1e-12).unwrap() < 1e-12);
    }

    #[test]
    fn witness_for_derivative_is_one() {
        match functional_witness(&functional(&[0.0, 1.0, 0.0]), &[], 1e-8) {
            WitnessOutcome::Found(w) => assert_eq!(w.g, DiskFunction::one()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_for_second_moment_functional() {
        // z^2 - 4 has its roots at +-2 and is killed by lambda = (1, 0, 4).
        let f = functional(&[1.0, 0.0, 4.0]);
        match functional_witness(&f, &[], 1e-12) {
            WitnessOutcome::Found(w) => {
                assert!(w.value.norm() < 1e-12);
                assert!(crate::factorization::is_outer(&w.g, 64, 1e-8).unwrap().verdict);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let f = functional(&[1.0, 0.5]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"lambda":[[1.0,0.0],[0.5,0.0]]}"#);
    }
}
