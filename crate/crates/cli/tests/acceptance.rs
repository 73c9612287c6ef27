//! Acceptance checks at N = 4096, d = 256; one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use hardy_gkz::engine::{
    check_outer_nonvanishing, classify_isometry, recover_functional, recover_operator,
    swap_unitary, ClassifyOptions, CoefficientFunctional, IsometryClass, WitnessSearch,
};
use hardy_gkz::factorization::{
    factorize, is_outer, outer_from_modulus, outer_part_of, BlaschkeProduct, SingularAtom,
};
use hardy_gkz::function::{boundary_samples, BoundaryFunction, DEFAULT_DEGREE, DEFAULT_GRID};
use hardy_gkz::mobius::{forelli_isometry, shift_multiplier_norm, shift_norm_trend, wco_matrix};
use hardy_gkz::module_gkz::{
    extract_character, FiniteAlgebra, GeneratingSet, Membership, ModuleAction,
};
use hardy_gkz::{DiskFunction, Error, MobiusMap, Space};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = DEFAULT_GRID;
const D: usize = DEFAULT_DEGREE;

type Outcome = Result<String, String>;

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn disk_point(rng: &mut ChaCha8Rng, max_radius: f64) -> Complex64 {
    Complex64::from_polar(max_radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI))
}

fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn modulus_of(n: usize, f: impl Fn(Complex64) -> Complex64) -> Vec<f64> {
    (0..n)
        .map(|j| f(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).norm())
        .collect()
}

/// `a_0 + tail` with the tail rescaled to total modulus `budget`.
fn bounded(a0: Complex64, tail: &[Complex64], budget: f64) -> DiskFunction {
    let total: f64 = tail.iter().map(|c| c.norm()).sum::<f64>().max(1e-12);
    let mut taylor = vec![a0];
    taylor.extend(tail.iter().map(|c| c * (budget / total)));
    DiskFunction::new(taylor)
}

fn outer_reconstruction() -> Outcome {
    let one_minus_z = outer_from_modulus(&modulus_of(N, |z| z - 1.0), D).map_err(|e| e.to_string())?;
    let dev1 = one_minus_z.max_deviation(&DiskFunction::from_real(&[1.0, -1.0]));
    let two_plus_z = outer_from_modulus(&modulus_of(N, |z| z + 2.0), D).map_err(|e| e.to_string())?;
    let dev2 = two_plus_z.max_deviation(&DiskFunction::from_real(&[2.0, 1.0]));
    ensure(dev1 <= 1e-8, || format!("|1 - z| deviation {dev1:.3e}"))?;
    ensure(dev2 <= 1e-10, || format!("|2 + z| deviation {dev2:.3e}"))?;
    Ok(format!("1 - z dev {dev1:.2e}, 2 + z dev {dev2:.2e}"))
}

fn factorization_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_outer: f64 = 0.0;
    for seed in 0..100 {
        let mut r = rng(1000 + seed);
        let zeros: Vec<Complex64> = (0..r.gen_range(0..=5)).map(|_| disk_point(&mut r, 0.8)).collect();
        let blaschke = BlaschkeProduct::new(zeros, unimodular(&mut r)).map_err(|e| e.to_string())?;
        let coeffs: Vec<(f64, f64)> = (0..3).map(|_| (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let budget: f64 = r.gen_range(0.1..0.9);
        let total: f64 = coeffs.iter().map(|(x, y)| x.abs() + y.abs()).sum();
        let modulus: Vec<f64> = (0..N)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / N as f64;
                1.0 + coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, (x, y))| (x * ((k + 1) as f64 * t).cos() + y * ((k + 1) as f64 * t).sin()) * budget / total)
                    .sum::<f64>()
            })
            .collect();
        let outer = outer_from_modulus(&modulus, D).map_err(|e| e.to_string())?;
        let mut samples = blaschke.boundary_samples(N).map_err(|e| e.to_string())?.samples;
        if r.gen_bool(0.5) {
            let atom = SingularAtom::new(unimodular(&mut r), r.gen_range(0.0..0.2)).map_err(|e| e.to_string())?;
            for (s, a) in samples.iter_mut().zip(atom.boundary_samples(N).map_err(|e| e.to_string())?.samples) {
                *s *= a;
            }
        }
        for (s, o) in samples.iter_mut().zip(boundary_samples(&outer, N).map_err(|e| e.to_string())?.samples) {
            *s *= o;
        }
        let f = BoundaryFunction::new(samples).map_err(|e| e.to_string())?;
        let factorization = factorize(&f, D).map_err(|e| e.to_string())?;
        worst = worst.max(factorization.reconstruct().max_deviation(&f).map_err(|e| e.to_string())?);

        let pure = blaschke.boundary_samples(N).map_err(|e| e.to_string())?;
        let outer_of_pure = outer_part_of(&pure, D).map_err(|e| e.to_string())?;
        let one = DiskFunction::one();
        worst_outer = worst_outer.max(outer_of_pure.max_deviation(&one));
    }
    ensure(worst <= 1e-5, || format!("reconstruction deviation {worst:.3e}"))?;
    ensure(worst_outer <= 1e-6, || format!("outer part of Blaschke product off by {worst_outer:.3e}"))?;
    Ok(format!("max reconstruction dev {worst:.2e}, Blaschke outer dev {worst_outer:.2e}"))
}

fn outerness_defect() -> Outcome {
    let blaschke = BlaschkeProduct::new(vec![Complex64::new(0.5, 0.0)], Complex64::new(1.0, 0.0))
        .map_err(|e| e.to_string())?
        .taylor(D);
    let report = is_outer(&blaschke, N, 1e-8).map_err(|e| e.to_string())?;
    ensure((report.defect - 2f64.ln()).abs() <= 1e-6, || format!("defect {}", report.defect))?;
    ensure(!report.verdict, || "Blaschke factor reported outer".into())?;
    let shift = is_outer(&DiskFunction::from_real(&[-1.0, 1.0]), N, 1e-8).map_err(|e| e.to_string())?;
    ensure(shift.verdict, || format!("z - 1 not outer: {shift:?}"))?;
    Ok(format!("Blaschke defect {:.9}, z - 1 defect {:.2e}", report.defect, shift.defect))
}

fn functional_recovery() -> Outcome {
    let mut worst_param: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    let mut r = rng(4);
    for _ in 0..1000 {
        let c = Complex64::from_polar(r.gen_range(0.01..100.0), r.gen_range(0.0..2.0 * PI));
        let w = disk_point(&mut r, 0.95);
        let lambda: Vec<Complex64> = (0..=D as u32).map(|k| c * w.powu(k)).collect();
        let functional = CoefficientFunctional::new(lambda).map_err(|e| e.to_string())?;
        let report = recover_functional(&functional, 1e-12).map_err(|e| e.to_string())?;
        worst_param = worst_param
            .max((report.c - c).norm() / c.norm())
            .max((report.w - w).norm() / w.norm().max(f64::MIN_POSITIVE));
        worst_residual = worst_residual.max(report.residual);
        ensure(report.verdict, || format!("verdict false for c = {c}, w = {w}"))?;
    }
    ensure(worst_param <= 1e-10, || format!("parameter error {worst_param:.3e}"))?;
    ensure(worst_residual <= 1e-12, || format!("residual {worst_residual:.3e}"))?;
    let mut derivative = vec![Complex64::new(0.0, 0.0); D + 1];
    derivative[1] = Complex64::new(1.0, 0.0);
    let err = recover_functional(&CoefficientFunctional::new(derivative).map_err(|e| e.to_string())?, 1e-8);
    ensure(err == Err(Error::VanishesOnOne), || format!("derivative functional gave {err:?}"))?;
    Ok(format!("max relative parameter error {worst_param:.2e}, max residual {worst_residual:.2e}"))
}

fn operator_recovery() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let mut r = rng(5000 + seed);
        let psi0 = Complex64::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
        let psi_tail: Vec<Complex64> = (0..r.gen_range(1..=4)).map(|_| random_complex(&mut r)).collect();
        let psi = bounded(psi0, &psi_tail, 0.8 * psi0.norm());
        let phi0 = disk_point(&mut r, 0.4);
        let phi_tail: Vec<Complex64> = (0..r.gen_range(1..=4)).map(|_| random_complex(&mut r)).collect();
        let phi = bounded(phi0, &phi_tail, 0.9 - phi0.norm());
        let t = wco_matrix(&psi, &phi, D).map_err(|e| e.to_string())?;
        let report = recover_operator(&t, 1e-9).map_err(|e| format!("seed {seed}: {e}"))?;
        worst = worst.max(report.psi.max_deviation(&psi)).max(report.phi.max_deviation(&phi));
    }
    ensure(worst <= 1e-9, || format!("parameter deviation {worst:.3e}"))?;
    Ok(format!("max parameter deviation {worst:.2e}"))
}

fn isometry_dichotomy() -> Outcome {
    let options = ClassifyOptions::default();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let mut r = rng(6000 + seed);
        let m = MobiusMap::new(disk_point(&mut r, 0.5), unimodular(&mut r)).map_err(|e| e.to_string())?;
        let c = unimodular(&mut r);
        let t = forelli_isometry(&m, c, 2.0, D).map_err(|e| e.to_string())?;
        match classify_isometry(&t, &options).map_err(|e| format!("seed {seed}: {e}"))? {
            IsometryClass::Forelli(cert) => {
                worst = worst
                    .max((cert.w - m.w()).norm())
                    .max((cert.c_phi - m.c()).norm())
                    .max((cert.c - c).norm());
            }
            IsometryClass::Counterexample(report) => {
                return Err(format!("seed {seed}: Forelli isometry rejected: {}", report.reason))
            }
        }
    }
    ensure(worst <= 1e-8, || format!("certificate error {worst:.3e}"))?;

    let swap = swap_unitary(D).map_err(|e| e.to_string())?;
    let g = DiskFunction::from_real(&[1.0, 0.5]);
    let witness = check_outer_nonvanishing(&swap, std::slice::from_ref(&g), &WitnessSearch::default(), 1e-8)
        .ok_or("no witness for the swap applied to 1 + z/2")?;
    let offset = (witness.z0 + 0.5).norm();
    ensure(offset <= 1e-3, || format!("witness at {}", witness.z0))?;
    match classify_isometry(&swap, &options).map_err(|e| e.to_string())? {
        IsometryClass::Counterexample(report) => {
            ensure(report.witnesses.iter().any(|w| w.g == g && (w.z0 + 0.5).norm() <= 1e-3), || {
                "classifier witnesses miss 1 + z/2".into()
            })?
        }
        IsometryClass::Forelli(_) => return Err("swap unitary certified as Forelli".into()),
    }
    Ok(format!("20 certificates, max error {worst:.2e}; swap witness |z0 + 0.5| = {offset:.2e}"))
}

fn forelli_norm_preservation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut r = rng(7);
    for _ in 0..50 {
        let m = MobiusMap::new(disk_point(&mut r, 0.5), unimodular(&mut r)).map_err(|e| e.to_string())?;
        let t = forelli_isometry(&m, unimodular(&mut r), 2.0, D).map_err(|e| e.to_string())?;
        let f = DiskFunction::new((0..=r.gen_range(0..=64)).map(|_| random_complex(&mut r)).collect());
        let ratio = t.apply(&f).map_err(|e| e.to_string())?.l2_coefficient_norm() / f.l2_coefficient_norm();
        worst = worst.max((ratio - 1.0).abs());
    }
    ensure(worst <= 1e-7, || format!("norm ratio off by {worst:.3e}"))?;
    Ok(format!("max |ratio - 1| = {worst:.2e}"))
}

fn multiplier_spectrum() -> Outcome {
    for n in 1..=64 {
        let hardy = shift_multiplier_norm(Space::Hardy, n, D).map_err(|e| e.to_string())?;
        ensure((hardy - 1.0).abs() <= 1e-12, || format!("Hardy norm {hardy} at n = {n}"))?;
        let dirichlet = shift_multiplier_norm(Space::Dirichlet, n, D).map_err(|e| e.to_string())?;
        ensure(dirichlet == ((n + 1) as f64).sqrt(), || format!("Dirichlet norm {dirichlet} at n = {n}"))?;
    }
    let trend = shift_norm_trend(Space::Dirichlet, 64, D).map_err(|e| e.to_string())?;
    ensure(trend.windows(2).all(|w| w[1].root < w[0].root), || "trend not decreasing".into())?;
    let last = trend.last().ok_or("empty trend")?.root;
    ensure(last <= 1.05, || format!("root at n = 64 is {last}"))?;
    Ok(format!("Dirichlet root at n = 64: {last:.6}"))
}

fn conjugated_diagonal(seed: u64) -> (FiniteAlgebra, ModuleAction, GeneratingSet, Vec<Complex64>) {
    let mut r = rng(9000 + seed);
    let n = r.gen_range(2..=6);
    let p = DMatrix::<Complex64>::identity(n, n)
        + DMatrix::from_fn(n, n, |_, _| random_complex(&mut r) * 0.3);
    let p_inv = p.clone().try_inverse().expect("near-identity matrix is invertible");
    let action = (0..n)
        .map(|i| {
            let mut e = DMatrix::<Complex64>::zeros(n, n);
            e[(i, i)] = Complex64::new(1.0, 0.0);
            let m = &p * e * &p_inv;
            (0..n).map(|row| (0..n).map(|col| m[(row, col)]).collect()).collect()
        })
        .collect();
    let j = r.gen_range(0..n);
    let mu = Complex64::from_polar(r.gen_range(0.5..2.0), r.gen_range(0.0..2.0 * PI));
    let functional = (0..n).map(|k| mu * p_inv[(j, k)]).collect();
    let elements = (0..10)
        .map(|_| {
            let mut v = DVector::from_fn(n, |_, _| random_complex(&mut r));
            v[j] += Complex64::new(2.0, 0.0);
            (&p * v).iter().copied().collect()
        })
        .collect();
    (
        FiniteAlgebra::diagonal(n).unwrap(),
        ModuleAction::new(n, action).unwrap(),
        GeneratingSet::new(elements, Membership::UserList).unwrap(),
        functional,
    )
}

fn module_gkz() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let (algebra, module, set, functional) = conjugated_diagonal(seed);
        let report = extract_character(&algebra, &module, &set, &functional, 1e-10).map_err(|e| e.to_string())?;
        worst = worst
            .max(report.max_s_deviation)
            .max(report.multiplicativity_defect)
            .max(report.eq11_defect);
    }
    ensure(worst <= 1e-10, || format!("defect {worst:.3e}"))?;

    let one = Complex64::new(1.0, 0.0);
    let diag = FiniteAlgebra::diagonal(2).unwrap();
    let module = ModuleAction::regular(&diag);
    let bad = vec![one, -one];
    let set = GeneratingSet::new(vec![vec![one, one * 2.0], bad.clone()], Membership::AllCoordinatesNonzero).unwrap();
    let err = extract_character(&diag, &module, &set, &[one, one], 1e-12);
    ensure(err == Err(Error::VanishesOnGenerator { index: 1, element: bad }), || format!("got {err:?}"))?;
    Ok(format!("max defect over 50 instances {worst:.2e}; s = (1, -1) rejected"))
}

fn bin(args: &[&str], dir: &Path) -> (Option<i32>, Vec<u8>) {
    let output = Command::new(env!("CARGO_BIN_EXE_hardy-gkz"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (output.status.code(), output.stdout)
}

fn determinism() -> Outcome {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = work.path();
    let setup: [(&str, &[&str]); 4] = [
        ("swap.json", &["build", "swap", "--degree", "64"]),
        ("forelli.json", &["build", "forelli", "--w", "0.3,0.1", "--c-phi", "0,1", "--c", "-1", "--degree", "64"]),
        ("wco.json", &["build", "wco", "--degree", "64", "--in", "WCO"]),
        ("functional.json", &["build", "functional", "--c", "2,1", "--w", "0.4,-0.3", "--degree", "64"]),
    ];
    let wco = fixtures.join("wco_pair.json");
    for (name, args) in setup {
        let args: Vec<&str> = args.iter().map(|a| if *a == "WCO" { wco.to_str().unwrap() } else { a }).collect();
        let (code, out) = bin(&args, dir);
        ensure(code == Some(0), || format!("builder {name} exited with {code:?}"))?;
        std::fs::write(dir.join(name), out).map_err(|e| e.to_string())?;
    }
    let fixture = |name: &str| fixtures.join(name).to_str().unwrap().to_owned();
    let work_file = |name: &str| dir.join(name).to_str().unwrap().to_owned();
    let commands: Vec<Vec<String>> = vec![
        vec!["factor".into(), "--in".into(), fixture("blaschke_times_outer.json")],
        vec!["recover-functional".into(), "--in".into(), work_file("functional.json")],
        vec!["recover-functional".into(), "--in".into(), fixture("second_moment_functional.json")],
        vec!["recover-operator".into(), "--in".into(), work_file("wco.json")],
        vec!["classify-isometry".into(), "--in".into(), work_file("forelli.json")],
        vec!["classify-isometry".into(), "--in".into(), work_file("swap.json")],
        vec!["module-gkz".into(), "--in".into(), fixture("module_first_coordinate.json")],
        vec!["scalar-gkz".into(), "--in".into(), fixture("scalar_average.json")],
        vec!["scalar-gkz".into(), "--in".into(), fixture("scalar_character.json")],
        vec!["shift-norms".into(), "--space".into(), "dirichlet".into(), "--n".into(), "3".into()],
        vec!["shift-norms".into(), "--space".into(), "bergman".into(), "--format".into(), "csv".into()],
        vec!["family".into(), "--count".into(), "24".into()],
        vec!["build".into(), "forelli".into(), "--w".into(), "0.5".into(), "--p".into(), "3".into()],
    ];
    for args in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = bin(&args, dir);
        let second = bin(&args, dir);
        ensure(first == second, || format!("{args:?} differs between runs"))?;
        ensure(!first.1.is_empty(), || format!("{args:?} produced no output"))?;
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len() + 4))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("outer reconstruction", outer_reconstruction),
        ("factorization round trip", factorization_round_trip),
        ("outerness defect", outerness_defect),
        ("functional recovery", functional_recovery),
        ("operator recovery", operator_recovery),
        ("isometry dichotomy", isometry_dichotomy),
        ("Forelli norm preservation", forelli_norm_preservation),
        ("multiplier spectrum", multiplier_spectrum),
        ("module character", module_gkz),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.2}s]", index + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{secs:.2}s]", index + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
