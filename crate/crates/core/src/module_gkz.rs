//! Characters of finite-dimensional algebras acting on modules.
//!
//! A functional on a module that is nonvanishing on a suitable generating set
//! factors through a character of the algebra; these routines extract that
//! character and measure how well the factorization holds.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for the algebra and module axioms.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Elements whose left-regular matrix has a smaller condition number count as invertible.
pub const INVERTIBLE_CONDITION: f64 = 1e8;

/// `e_i e_j = sum_k structure[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr")]
pub struct FiniteAlgebra {
    dim: usize,
    structure: Vec<Vec<Vec<Complex64>>>,
    unit: Vec<Complex64>,
}

#[derive(Deserialize)]
struct AlgebraRepr {
    dim: usize,
    structure: Vec<Vec<Vec<Complex64>>>,
    unit: Vec<Complex64>,
}

impl TryFrom<AlgebraRepr> for FiniteAlgebra {
    type Error = Error;

    fn try_from(repr: AlgebraRepr) -> Result<Self> {
        let algebra = FiniteAlgebra::new(repr.structure, repr.unit)?;
        check_len(repr.dim, algebra.dim)?;
        Ok(algebra)
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Shape { expected, actual });
    }
    Ok(())
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn basis(n: usize, i: usize) -> Vec<Complex64> {
    let mut e = vec![ZERO; n];
    e[i] = ONE;
    e
}

fn deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

impl FiniteAlgebra {
    /// Validates shapes only; use [`verify_algebra`] for the axioms.
    pub fn new(structure: Vec<Vec<Vec<Complex64>>>, unit: Vec<Complex64>) -> Result<Self> {
        let dim = structure.len();
        if dim == 0 {
            return Err(Error::Domain("algebra must have dimension >= 1".into()));
        }
        for plane in &structure {
            check_len(dim, plane.len())?;
            for row in plane {
                check_len(dim, row.len())?;
            }
        }
        check_len(dim, unit.len())?;
        Ok(Self {
            dim,
            structure,
            unit,
        })
    }

    /// `C^n` with the coordinatewise product.
    pub fn diagonal(n: usize) -> Result<Self> {
        let structure = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { basis(n, i) } else { vec![ZERO; n] })
                    .collect()
            })
            .collect();
        Self::new(structure, vec![ONE; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Complex64] {
        &self.unit
    }

    pub fn structure(&self) -> &[Vec<Vec<Complex64>>] {
        &self.structure
    }

    pub fn multiply(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == ZERO {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let coeff = ai * bj;
                if coeff == ZERO {
                    continue;
                }
                for (o, &s) in out.iter_mut().zip(&self.structure[i][j]) {
                    *o += coeff * s;
                }
            }
        }
        out
    }

    /// Matrix of `x -> a x` in the standard basis.
    pub fn left_regular(&self, a: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let column = self.multiply(a, &basis(n, j));
            for (i, v) in column.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Condition number of the left-regular matrix (infinite when singular).
    pub fn condition_number(&self, a: &[Complex64]) -> f64 {
        let singular = self.left_regular(a).singular_values();
        let max = singular.iter().copied().fold(0.0, f64::max);
        let min = singular.iter().copied().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min
        } else {
            f64::INFINITY
        }
    }

    pub fn is_invertible(&self, a: &[Complex64]) -> bool {
        self.condition_number(a) < INVERTIBLE_CONDITION
    }
}

/// Where an axiom fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationLocation {
    /// `1 e_i != e_i`.
    UnitLeft { basis: usize },
    /// `e_i 1 != e_i`.
    UnitRight { basis: usize },
    /// `(e_i e_j) e_k != e_i (e_j e_k)`.
    Associativity { i: usize, j: usize, k: usize },
    /// `action(1) != I`.
    ActionUnit,
    /// `action(e_i e_j) != action(e_i) action(e_j)`.
    ActionProduct { i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StructureCheck {
    Ok,
    Violation {
        location: ViolationLocation,
        magnitude: f64,
    },
}

impl StructureCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, StructureCheck::Ok)
    }
}

fn worst(found: impl IntoIterator<Item = (ViolationLocation, f64)>) -> Option<(ViolationLocation, f64)> {
    found
        .into_iter()
        .filter(|(_, m)| *m > STRUCTURE_TOL)
        .fold(None, |best, item| match best {
            Some(b) if b.1 >= item.1 => Some(b),
            _ => Some(item),
        })
}

fn into_check(found: Option<(ViolationLocation, f64)>) -> StructureCheck {
    match found {
        Some((location, magnitude)) => StructureCheck::Violation {
            location,
            magnitude,
        },
        None => StructureCheck::Ok,
    }
}

/// Checks unit laws, then associativity, over all basis elements; reports
/// the largest violation of the first failing law.
pub fn verify_algebra(algebra: &FiniteAlgebra) -> StructureCheck {
    let n = algebra.dim;
    let unit = &algebra.unit;
    let unit_laws = worst((0..n).flat_map(|i| {
        let e = basis(n, i);
        [
            (ViolationLocation::UnitLeft { basis: i }, deviation(&algebra.multiply(unit, &e), &e)),
            (ViolationLocation::UnitRight { basis: i }, deviation(&algebra.multiply(&e, unit), &e)),
        ]
    }));
    if unit_laws.is_some() {
        return into_check(unit_laws);
    }
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ij = &algebra.structure[i][j];
            for k in 0..n {
                let left = algebra.multiply(ij, &basis(n, k));
                let right = algebra.multiply(&basis(n, i), &algebra.structure[j][k]);
                triples.push((ViolationLocation::Associativity { i, j, k }, deviation(&left, &right)));
            }
        }
    }
    into_check(worst(triples))
}

/// Left action of an `n`-dimensional algebra on `C^m`: `a -> sum_i a_i action[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ActionRepr")]
pub struct ModuleAction {
    dim: usize,
    action: Vec<Vec<Vec<Complex64>>>,
}

#[derive(Deserialize)]
struct ActionRepr {
    dim: usize,
    action: Vec<Vec<Vec<Complex64>>>,
}

impl TryFrom<ActionRepr> for ModuleAction {
    type Error = Error;

    fn try_from(repr: ActionRepr) -> Result<Self> {
        ModuleAction::new(repr.dim, repr.action)
    }
}

impl ModuleAction {
    /// `action[i]` is the row-major `m x m` matrix of `e_i`.
    pub fn new(dim: usize, action: Vec<Vec<Vec<Complex64>>>) -> Result<Self> {
        if dim == 0 || action.is_empty() {
            return Err(Error::Domain("module and algebra must be nonzero".into()));
        }
        for matrix in &action {
            check_len(dim, matrix.len())?;
            for row in matrix {
                check_len(dim, row.len())?;
            }
        }
        Ok(Self { dim, action })
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: &FiniteAlgebra) -> Self {
        let n = algebra.dim;
        let action = (0..n)
            .map(|i| {
                let m = algebra.left_regular(&basis(n, i));
                (0..n).map(|r| (0..n).map(|c| m[(r, c)]).collect()).collect()
            })
            .collect();
        Self { dim: n, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra_dim(&self) -> usize {
        self.action.len()
    }

    pub fn matrices(&self) -> &[Vec<Vec<Complex64>>] {
        &self.action
    }

    /// `a . v`.
    pub fn act(&self, a: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        for (&ai, matrix) in a.iter().zip(&self.action) {
            if ai == ZERO {
                continue;
            }
            for (o, row) in out.iter_mut().zip(matrix) {
                *o += ai * dot(row, v);
            }
        }
        out
    }

    fn matrix_of(&self, a: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|c| self.act(a, &basis(self.dim, c)))
            .collect()
    }
}

/// Checks `action(1) = I` and `action(e_i e_j) = action(e_i) action(e_j)`.
pub fn verify_module(algebra: &FiniteAlgebra, module: &ModuleAction) -> Result<StructureCheck> {
    check_len(algebra.dim, module.algebra_dim())?;
    let m = module.dim;
    // matrix_of returns columns; compare column by column.
    let unit_columns = module.matrix_of(&algebra.unit);
    let unit_defect = (0..m)
        .map(|c| deviation(&unit_columns[c], &basis(m, c)))
        .fold(0.0, f64::max);
    if unit_defect > STRUCTURE_TOL {
        return Ok(into_check(Some((ViolationLocation::ActionUnit, unit_defect))));
    }
    let n = algebra.dim;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let product = &algebra.structure[i][j];
            let defect = (0..m)
                .map(|c| {
                    let v = basis(m, c);
                    let direct = module.act(product, &v);
                    let composed = module.act(&basis(n, i), &module.act(&basis(n, j), &v));
                    deviation(&direct, &composed)
                })
                .fold(0.0, f64::max);
            pairs.push((ViolationLocation::ActionProduct { i, j }, defect));
        }
    }
    Ok(into_check(worst(pairs)))
}

/// How membership in the generating set is described.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    /// Every vector with all coordinates nonzero.
    AllCoordinatesNonzero,
    /// Exactly the listed vectors.
    UserList,
}

/// Declared sample elements of the generating set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeneratingSetRepr")]
pub struct GeneratingSet {
    elements: Vec<Vec<Complex64>>,
    tag: Membership,
}

#[derive(Deserialize)]
struct GeneratingSetRepr {
    elements: Vec<Vec<Complex64>>,
    tag: Membership,
}

impl TryFrom<GeneratingSetRepr> for GeneratingSet {
    type Error = Error;

    fn try_from(repr: GeneratingSetRepr) -> Result<Self> {
        GeneratingSet::new(repr.elements, repr.tag)
    }
}

impl GeneratingSet {
    pub fn new(elements: Vec<Vec<Complex64>>, tag: Membership) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::Domain("generating set must be nonempty".into()));
        };
        let m = first.len();
        for e in &elements {
            check_len(m, e.len())?;
        }
        if tag == Membership::AllCoordinatesNonzero
            && elements.iter().any(|e| e.iter().any(|&x| x == ZERO))
        {
            return Err(Error::InvalidParameter(
                "element with a zero coordinate declared under all-coordinates-nonzero".into(),
            ));
        }
        Ok(Self { elements, tag })
    }

    pub fn elements(&self) -> &[Vec<Complex64>] {
        &self.elements
    }

    pub fn tag(&self) -> Membership {
        self.tag
    }

    fn contains(&self, v: &[Complex64], tol: f64) -> Option<bool> {
        match self.tag {
            Membership::AllCoordinatesNonzero => {
                let scale = max_abs(v);
                Some(v.iter().all(|x| x.norm() > tol * scale))
            }
            Membership::UserList => None,
        }
    }
}

/// Character extracted from a module functional, with its consistency defects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterReport {
    /// `chi(e_i)`.
    pub chi: Vec<Complex64>,
    /// `max |chi_s(e_i) - chi_s'(e_i)|` over declared samples.
    pub max_s_deviation: f64,
    /// `max |chi(e_i e_j) - chi(e_i) chi(e_j)|`.
    pub multiplicativity_defect: f64,
    /// `max |Lambda(e_i f_j) - chi(e_i) Lambda(f_j)|` over algebra and module bases.
    pub eq11_defect: f64,
    /// `|chi(1) - 1|`.
    pub unit_defect: f64,
    /// Whether `{e_i s}` spans the module for every declared `s`.
    pub spans_on_samples: bool,
    /// Closure of the samples under seeded invertible elements; `None` when the
    /// membership tag gives no predicate to test.
    pub closure_on_samples: Option<bool>,
    pub verdict: bool,
    pub note: String,
}

const CLOSURE_SAMPLES: usize = 8;

/// `chi_s(a) = Lambda(a s) / Lambda(s)` for every declared `s`, compared across
/// samples and checked for multiplicativity and `Lambda(a m) = chi(a) Lambda(m)`.
pub fn extract_character(
    algebra: &FiniteAlgebra,
    module: &ModuleAction,
    set: &GeneratingSet,
    functional: &[Complex64],
    tol: f64,
) -> Result<CharacterReport> {
    let n = algebra.dim;
    let m = module.dim;
    check_len(n, module.algebra_dim())?;
    check_len(m, functional.len())?;
    check_len(m, set.elements[0].len())?;
    let lambda_norm = norm2(functional);

    let mut characters = Vec::with_capacity(set.elements.len());
    for (index, s) in set.elements.iter().enumerate() {
        let at_s = dot(functional, s);
        if !(at_s.norm() > tol * lambda_norm * norm2(s)) {
            return Err(Error::VanishesOnGenerator {
                index,
                element: s.clone(),
            });
        }
        let chi_s: Vec<Complex64> = (0..n)
            .map(|i| dot(functional, &module.act(&basis(n, i), s)) / at_s)
            .collect();
        characters.push(chi_s);
    }
    let chi = characters[0].clone();
    let max_s_deviation = characters
        .iter()
        .flat_map(|a| characters.iter().map(move |b| deviation(a, b)))
        .fold(0.0, f64::max);

    let value = |a: &[Complex64]| dot(&chi, a);
    let mut multiplicativity_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let defect = (value(&algebra.structure[i][j]) - chi[i] * chi[j]).norm();
            multiplicativity_defect = multiplicativity_defect.max(defect);
        }
    }
    let mut eq11_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..m {
            let f = basis(m, j);
            let defect = (dot(functional, &module.act(&basis(n, i), &f)) - chi[i] * functional[j]).norm();
            eq11_defect = eq11_defect.max(defect);
        }
    }
    let unit_defect = (value(&algebra.unit) - ONE).norm();

    let spans_on_samples = set.elements.iter().all(|s| {
        let columns: Vec<Complex64> = (0..n).flat_map(|i| module.act(&basis(n, i), s)).collect();
        let matrix = DMatrix::from_column_slice(m, n, &columns);
        let singular = matrix.singular_values();
        let max = singular.iter().copied().fold(0.0, f64::max);
        singular.iter().filter(|&&v| v > 1e-10 * max).count() == m
    });

    let closure_on_samples = closure_check(algebra, module, set, tol);
    let verdict = max_s_deviation <= tol
        && multiplicativity_defect <= tol
        && eq11_defect <= tol
        && unit_defect <= tol;
    let note = format!(
        "generating-set conditions checked only on {} declared sample(s)",
        set.elements.len()
    );
    Ok(CharacterReport {
        chi,
        max_s_deviation,
        multiplicativity_defect,
        eq11_defect,
        unit_defect,
        spans_on_samples,
        closure_on_samples,
        verdict,
        note,
    })
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn closure_check(
    algebra: &FiniteAlgebra,
    module: &ModuleAction,
    set: &GeneratingSet,
    tol: f64,
) -> Option<bool> {
    set.contains(&set.elements[0], tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let invertibles: Vec<Vec<Complex64>> = std::iter::repeat_with(|| random_element(&mut rng, algebra.dim))
        .take(4 * CLOSURE_SAMPLES)
        .filter(|a| algebra.is_invertible(a))
        .take(CLOSURE_SAMPLES)
        .collect();
    Some(set.elements.iter().all(|s| {
        invertibles
            .iter()
            .all(|a| set.contains(&module.act(a, s), tol).unwrap_or(false))
    }))
}

/// Result of sampling a normalized functional on an algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ScalarGkzOutcome {
    /// No violation found; a finite sample cannot prove the hypothesis.
    ConsistentAtSampleSize { trials: usize, invertible_samples: usize },
    VanishesOnInvertible {
        element: Vec<Complex64>,
        value: Complex64,
        condition_number: f64,
    },
    NotMultiplicative { i: usize, j: usize, defect: f64 },
}

/// Samples invertible elements looking for a zero of `Lambda`, then checks
/// multiplicativity on basis pairs.
///
/// Elements of the kernel of `Lambda` are probed first (`e_i - Lambda(e_i) 1`
/// and random `r - Lambda(r) 1`), since any invertible one is a counterexample.
pub fn scalar_gkz_check(
    algebra: &FiniteAlgebra,
    functional: &[Complex64],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ScalarGkzOutcome> {
    let n = algebra.dim;
    check_len(n, functional.len())?;
    let at_unit = dot(functional, &algebra.unit);
    if !((at_unit - ONE).norm() <= tol) {
        return Err(Error::Normalization { value: at_unit });
    }
    let lambda_norm = norm2(functional);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let kernel_element = |r: Vec<Complex64>| -> Vec<Complex64> {
        let value = dot(functional, &r);
        let mut a: Vec<Complex64> = r.iter().zip(&algebra.unit).map(|(x, u)| x - value * u).collect();
        if let Some(pivot) = a
            .iter()
            .copied()
            .filter(|x| x.norm() > 0.0)
            .reduce(|best, x| if x.norm() > best.norm() * (1.0 + 1e-12) { x } else { best })
        {
            a.iter_mut().for_each(|x| *x /= pivot);
        }
        a
    };
    let mut probes: Vec<Vec<Complex64>> = (0..n).map(|i| kernel_element(basis(n, i))).collect();
    probes.extend((0..trials).map(|_| kernel_element(random_element(&mut rng, n))));
    for a in probes {
        let condition_number = algebra.condition_number(&a);
        if condition_number < INVERTIBLE_CONDITION {
            return Ok(ScalarGkzOutcome::VanishesOnInvertible {
                value: dot(functional, &a),
                element: a,
                condition_number,
            });
        }
    }

    let mut invertible_samples = 0;
    for _ in 0..trials {
        let a = random_element(&mut rng, n);
        let condition_number = algebra.condition_number(&a);
        if condition_number >= INVERTIBLE_CONDITION {
            continue;
        }
        invertible_samples += 1;
        let value = dot(functional, &a);
        if !(value.norm() > tol * lambda_norm * norm2(&a)) {
            return Ok(ScalarGkzOutcome::VanishesOnInvertible {
                element: a,
                value,
                condition_number,
            });
        }
    }

    for i in 0..n {
        for j in 0..n {
            let defect = (dot(functional, &algebra.structure[i][j]) - functional[i] * functional[j]).norm();
            if defect > tol {
                return Ok(ScalarGkzOutcome::NotMultiplicative { i, j, defect });
            }
        }
    }
    Ok(ScalarGkzOutcome::ConsistentAtSampleSize {
        trials,
        invertible_samples,
    })
}
