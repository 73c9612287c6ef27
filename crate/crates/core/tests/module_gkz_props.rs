use hardy_gkz::module_gkz::{
    extract_character, verify_algebra, verify_module, FiniteAlgebra, GeneratingSet, Membership,
    ModuleAction,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

/// Diagonal algebra acting on `C^n` through `P diag(a) P^{-1}`, with the
/// functional `m -> mu (P^{-1} m)_j` and samples `P v` for `v` with `v_j != 0`.
#[derive(Debug)]
struct Instance {
    algebra: FiniteAlgebra,
    module: ModuleAction,
    set: Vec<Vec<Complex64>>,
    functional: Vec<Complex64>,
    j: usize,
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(complex(), n * n),
                0..n,
                complex(),
                prop::collection::vec(prop::collection::vec(complex(), n), 8..12),
            )
        })
        .prop_map(|(n, perturbation, j, mu, samples)| {
            let p = DMatrix::<Complex64>::identity(n, n)
                + DMatrix::from_vec(n, n, perturbation) * Complex64::new(0.3, 0.0);
            let p_inv = p.clone().try_inverse().expect("near-identity matrix is invertible");
            let algebra = FiniteAlgebra::diagonal(n).unwrap();
            let action = (0..n)
                .map(|i| {
                    let mut e = DMatrix::<Complex64>::zeros(n, n);
                    e[(i, i)] = Complex64::new(1.0, 0.0);
                    let m = &p * e * &p_inv;
                    (0..n).map(|r| (0..n).map(|c| m[(r, c)]).collect()).collect()
                })
                .collect();
            let module = ModuleAction::new(n, action).unwrap();
            let mu = mu + Complex64::new(1.5, 0.0);
            let functional: Vec<Complex64> = (0..n).map(|k| mu * p_inv[(j, k)]).collect();
            let set = samples
                .into_iter()
                .map(|mut v| {
                    v[j] += Complex64::new(2.0, 0.0);
                    (&p * nalgebra::DVector::from_vec(v)).iter().copied().collect()
                })
                .collect();
            Instance { algebra, module, set, functional, j }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn character_extraction_is_exact(inst in instance()) {
        prop_assert!(verify_algebra(&inst.algebra).is_ok());
        prop_assert!(verify_module(&inst.algebra, &inst.module).unwrap().is_ok());
        let set = GeneratingSet::new(inst.set.clone(), Membership::UserList).unwrap();
        let report = extract_character(&inst.algebra, &inst.module, &set, &inst.functional, 1e-10).unwrap();
        prop_assert!(report.max_s_deviation <= 1e-12, "{:?}", report);
        prop_assert!(report.multiplicativity_defect <= 1e-12);
        prop_assert!(report.eq11_defect <= 1e-12);
        prop_assert!(report.verdict);
        for (i, chi) in report.chi.iter().enumerate() {
            let expected = if i == inst.j { 1.0 } else { 0.0 };
            prop_assert!((chi - expected).norm() <= 1e-12);
        }
    }

    #[test]
    fn character_does_not_depend_on_first_sample(inst in instance()) {
        let forward = GeneratingSet::new(inst.set.clone(), Membership::UserList).unwrap();
        let mut reversed_elements = inst.set.clone();
        reversed_elements.reverse();
        let reversed = GeneratingSet::new(reversed_elements, Membership::UserList).unwrap();
        let a = extract_character(&inst.algebra, &inst.module, &forward, &inst.functional, 1e-10).unwrap();
        let b = extract_character(&inst.algebra, &inst.module, &reversed, &inst.functional, 1e-10).unwrap();
        for (x, y) in a.chi.iter().zip(&b.chi) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
    }
}
