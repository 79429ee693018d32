//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use lorentz_qubits::cli::oracle_state;
use lorentz_qubits::correlation::{
    correlator_symmetry_check, haar_twirl_mc, pauli_correlation_table, polarized_determinant, random_observable,
    singlet_correlation, DetPreservingMap, SymmetryCheck,
};
use lorentz_qubits::invariants::{
    concurrence, linear_entropy, linear_mutual_info_subsets, linear_mutual_info_trace, relative_deviation,
    spectral_invariants,
};
use lorentz_qubits::linalg::{pauli, ComplexMatrix};
use lorentz_qubits::lorentz::{boost, boost_z, rotation, sample_sl2c, spin_hom, vector_from_herm};
use lorentz_qubits::seed::{rng_from_seed, sub_seed};
use lorentz_qubits::states::{apply_local, preset, sample_state, LocalAction, Preset, QubitState, StateKind};
use rand::Rng;

const MASTER_SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

/// Running maximum of a deviation against a fixed bound.
struct Bound {
    label: &'static str,
    worst: f64,
    bound: f64,
    ok: bool,
}

impl Bound {
    fn new(label: &'static str, bound: f64) -> Self {
        Self {
            label,
            worst: 0.0,
            bound,
            ok: true,
        }
    }

    fn observe(&mut self, value: f64) {
        self.worst = self.worst.max(value);
        self.ok &= value <= self.bound;
    }

    fn text(&self) -> String {
        format!("{} {:.2e} <= {:.0e}", self.label, self.worst, self.bound)
    }
}

fn combine(bounds: &[&Bound], extra: &[(bool, String)]) -> Outcome {
    let pass = bounds.iter().all(|b| b.ok) && extra.iter().all(|(ok, _)| *ok);
    let mut parts: Vec<String> = bounds.iter().map(|b| b.text()).collect();
    parts.extend(
        extra
            .iter()
            .map(|(ok, s)| format!("{s}{}", if *ok { "" } else { " (violated)" })),
    );
    Outcome::new(pass, parts.join("; "))
}

fn kind(t: usize) -> StateKind {
    if t.is_multiple_of(2) {
        StateKind::Pure
    } else {
        StateKind::Mixed
    }
}

fn ac1_trace_formula() -> Outcome {
    let mut dev = Bound::new("max rel dev", 1e-8);
    let mut count = 0;
    for n in 1..=6usize {
        for t in 0..200 {
            let (s, _) = oracle_state(n, t, sub_seed(MASTER_SEED, (n * 1000 + t) as u64)).unwrap();
            let trace = linear_mutual_info_trace(&s);
            dev.observe(relative_deviation(linear_mutual_info_subsets(&s).unwrap(), trace));
            count += 1;
        }
    }
    combine(&[&dev], &[(true, format!("{count} states, n=1..6"))])
}

fn ac2_lorentz_invariance() -> Outcome {
    let mut spec = Bound::new("spectral", 1e-7);
    let mut il = Bound::new("I_L", 1e-7);
    let mut conc = Bound::new("concurrence", 1e-7);
    for n in 1..=5usize {
        for t in 0..100 {
            let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x2, (n * 1000 + t) as u64));
            let s = sample_state(&mut rng, n, kind(t)).unwrap();
            let action = LocalAction::random(&mut rng, n, 2.0).unwrap();
            let moved = apply_local(&s, &action).unwrap();
            for (a, b) in spectral_invariants(&moved).iter().zip(spectral_invariants(&s)) {
                spec.observe(relative_deviation(*a, b));
            }
            il.observe(relative_deviation(
                linear_mutual_info_trace(&moved),
                linear_mutual_info_trace(&s),
            ));
            if n == 2 {
                conc.observe(relative_deviation(
                    concurrence(&moved).unwrap(),
                    concurrence(&s).unwrap(),
                ));
            }
        }
    }
    combine(&[&spec, &il, &conc], &[(true, "500 pairs, clamp 2.0".into())])
}

fn ac3_entropic_derivation() -> Outcome {
    let mut dev = Bound::new("S_L rel dev", 1e-9);
    for t in 0..1000 {
        let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x3, t));
        let s = sample_state(&mut rng, 1, kind(t as usize)).unwrap();
        let lam = sample_sl2c(&mut rng, 2.0).unwrap();
        let moved = apply_local(&s, &LocalAction::new(vec![lam]).unwrap()).unwrap();
        let before = linear_entropy(&s);
        dev.observe((linear_entropy(&moved) - before).abs() / before.abs().max(1.0));
    }
    // Negative control: depolarizing map with p = 0.5 on a pure state.
    let pure = sample_state(
        &mut rng_from_seed(sub_seed(MASTER_SEED ^ 0x3, u64::MAX)),
        1,
        StateKind::Pure,
    )
    .unwrap();
    let p = 0.5;
    let depolarized = &pure.rho().scale_real(1.0 - p) + &ComplexMatrix::identity(2).scale_real(p * pure.trace() / 2.0);
    let change = (linear_entropy(&QubitState::new(1, depolarized).unwrap()) - linear_entropy(&pure)).abs();
    combine(&[&dev], &[(change > 0.1, format!("control change {change:.3} > 0.1"))])
}

fn ac4_canonical_values() -> Outcome {
    let singlet = preset(Preset::Singlet).unwrap();
    let s_l = linear_entropy(&singlet);
    let c = concurrence(&singlet).unwrap();
    let i_s = linear_mutual_info_trace(&singlet);
    let w4 = linear_mutual_info_trace(&preset(Preset::WState(4)).unwrap());
    let ghz4 = linear_mutual_info_trace(&preset(Preset::Ghz(4)).unwrap());
    let two = linear_mutual_info_trace(&preset(Preset::ProductOfSinglets(2)).unwrap());
    let mut odd = Bound::new("odd-n pure I_L", 1e-9);
    for n in [1usize, 3, 5] {
        for t in 0..50 {
            let s = sample_state(
                &mut rng_from_seed(sub_seed(MASTER_SEED ^ 0x4, (n * 100 + t) as u64)),
                n,
                StateKind::Pure,
            )
            .unwrap();
            odd.observe(linear_mutual_info_trace(&s));
        }
    }
    combine(
        &[&odd],
        &[
            (
                s_l.abs() <= 1e-12 && (c - 1.0).abs() <= 1e-9 && (i_s - 1.0).abs() <= 1e-9,
                format!("singlet S_L={s_l:.1e} C={c:.12} I_L={i_s:.12}"),
            ),
            (w4.abs() <= 1e-9, format!("W4 I_L={w4:.1e}")),
            ((ghz4 - 1.0).abs() <= 1e-9, format!("GHZ4 I_L={ghz4:.12}")),
            ((two - 1.0).abs() <= 1e-8, format!("two singlets I_L={two:.12}")),
        ],
    )
}

fn ac5_multiplicativity() -> Outcome {
    let mut dev = Bound::new("max rel dev", 1e-8);
    for t in 0..100u64 {
        let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x5, t));
        let k = rng.random_range(1..=3usize);
        let mut remaining = 6usize;
        let mut factors = Vec::new();
        for i in 0..k {
            let max_here = remaining - (k - i - 1);
            let n = rng.random_range(1..=max_here.min(3));
            remaining -= n;
            factors.push(sample_state(&mut rng, n, kind(i + t as usize)).unwrap());
        }
        let product = factors[1..]
            .iter()
            .fold(factors[0].clone(), |acc, f| acc.tensor(f).unwrap());
        let expected: f64 = factors.iter().map(linear_mutual_info_trace).product();
        dev.observe(relative_deviation(linear_mutual_info_trace(&product), expected));
    }
    combine(&[&dev], &[(true, "100 tuples".into())])
}

fn ac6_minkowski_metric() -> Outcome {
    let mut table = Bound::new("table", 1e-12);
    for (mu, row) in pauli_correlation_table().iter().enumerate() {
        for (nu, &v) in row.iter().enumerate() {
            let eta = if mu != nu {
                0.0
            } else if mu == 0 {
                1.0
            } else {
                -1.0
            };
            table.observe((v - eta).abs());
        }
    }
    let mut bilinear = Bound::new("correlator vs polarized det", 1e-10);
    for t in 0..1000 {
        let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x6, t));
        let (o1, o2) = (random_observable(&mut rng), random_observable(&mut rng));
        bilinear.observe((singlet_correlation(&o1, &o2).unwrap() - polarized_determinant(&o1, &o2).unwrap()).abs());
    }
    let mut symmetry = Bound::new("symmetry rel dev", 1e-8);
    let relative = |c: SymmetryCheck| c.max_deviation / c.scale;
    let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x6, u64::MAX));
    for t in 0..100u64 {
        let axis: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let lam = if t % 2 == 0 {
            boost(axis, rng.random_range(-2.0..2.0)).unwrap()
        } else {
            rotation(axis, rng.random_range(0.0..std::f64::consts::TAU)).unwrap()
        };
        let check = correlator_symmetry_check(&DetPreservingMap::Conjugation(lam), 10, rng.random()).unwrap();
        symmetry.observe(relative(check));
    }
    symmetry.observe(relative(
        correlator_symmetry_check(&DetPreservingMap::Parity, 100, 7).unwrap(),
    ));
    combine(&[&table, &bilinear, &symmetry], &[])
}

/// χ and ζ from Pauli coordinates: Tr O = 2t, Tr(O₁O₂) = 2(t₁t₂ + x₁x₂ + y₁y₂ + z₁z₂).
fn chi_zeta_oracle(o1: &ComplexMatrix, o2: &ComplexMatrix) -> (f64, f64) {
    let a = vector_from_herm(o1).unwrap().to_array();
    let b = vector_from_herm(o2).unwrap().to_array();
    let tr_tr = 4.0 * a[0] * b[0];
    let tr12 = 2.0 * a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>();
    (tr_tr / 3.0 - tr12 / 6.0, tr_tr / 6.0 - tr12 / 3.0)
}

fn ac7_haar_twirl() -> Outcome {
    let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x7, 0));
    let pairs = [
        ("(1,1)", pauli::identity(), pauli::identity()),
        ("(Z,Z)", pauli::z(), pauli::z()),
        ("(X,Y)", pauli::x(), pauli::y()),
        ("(rand,rand)", random_observable(&mut rng), random_observable(&mut rng)),
    ];
    let mut extra = Vec::new();
    for (i, (name, o1, o2)) in pairs.iter().enumerate() {
        let est = haar_twirl_mc(o1, o2, 100_000, sub_seed(MASTER_SEED ^ 0x7, i as u64 + 1)).unwrap();
        let (chi, zeta) = chi_zeta_oracle(o1, o2);
        let exact = (est.chi - chi).abs() <= 4.0 * f64::EPSILON * chi.abs().max(1.0)
            && (est.zeta - zeta).abs() <= 4.0 * f64::EPSILON * zeta.abs().max(1.0);
        extra.push((
            est.pass() && exact,
            format!("{name} dev {:.1e} / se {:.1e}", est.max_abs_deviation, est.std_error),
        ));
    }
    combine(&[], &extra)
}

fn ac8_spin_homomorphism() -> Outcome {
    let mut hom = Bound::new("homomorphism", 1e-9);
    let mut eta = Bound::new("eta defect", 1e-9);
    let mut det = Bound::new("|det-1|", 1e-9);
    let mut orthochronous = true;
    for t in 0..200 {
        let mut rng = rng_from_seed(sub_seed(MASTER_SEED ^ 0x8, t));
        let a = sample_sl2c(&mut rng, 2.0).unwrap();
        let b = sample_sl2c(&mut rng, 2.0).unwrap();
        let (la, lb, lab) = (spin_hom(&a), spin_hom(&b), spin_hom(&a.compose(&b)));
        hom.observe(lab.max_abs_diff(&la.compose(&lb)));
        for l in [la, lb, lab] {
            eta.observe(l.metric_defect());
            det.observe((l.determinant() - 1.0).abs());
            orthochronous &= l.get(0, 0) >= 1.0;
        }
    }
    let mut closed = Bound::new("boost closed form", 1e-10);
    for r in [0.5, 1.0, 2.0f64] {
        let l = spin_hom(&boost_z(r).unwrap());
        let (ch, sh) = (r.cosh(), r.sinh());
        let want = [
            [ch, 0.0, 0.0, sh],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [sh, 0.0, 0.0, ch],
        ];
        for (row, want_row) in l.entries().iter().zip(want) {
            for (x, y) in row.iter().zip(want_row) {
                closed.observe((x - y).abs());
            }
        }
    }
    combine(&[&hom, &eta, &det, &closed], &[(orthochronous, "(0,0) >= 1".into())])
}

fn ac9_purity() -> Outcome {
    let mut pure = Bound::new("pure S_L", 1e-10);
    let mut least_mixed = f64::INFINITY;
    for t in 0..100 {
        let n = 1 + (t % 4) as usize;
        let s = sample_state(&mut rng_from_seed(sub_seed(MASTER_SEED ^ 0x9, t)), n, StateKind::Pure).unwrap();
        pure.observe(linear_entropy(&s).abs());
        let m = sample_state(&mut rng_from_seed(sub_seed(MASTER_SEED ^ 0x19, t)), 1, StateKind::Mixed).unwrap();
        least_mixed = least_mixed.min(linear_entropy(&m));
    }
    combine(
        &[&pure],
        &[(least_mixed >= 1e-4, format!("min mixed S_L {least_mixed:.2e} >= 1e-4"))],
    )
}

fn strip_wall_time(report: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(report).expect("report is JSON");
    v.as_object_mut()
        .expect("report is an object")
        .remove("wall_time_seconds");
    v
}

fn ac10_determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &[
            "invariants",
            "--random",
            "mixed",
            "--n",
            "3",
            "--trials",
            "20",
            "--seed",
            "11",
        ],
        &["oracle", "--n", "4", "--trials", "20", "--seed", "12"],
        &["metric", "--trials", "100", "--maps", "10", "--parity", "--seed", "13"],
        &[
            "twirl",
            "--o1",
            "random",
            "--o2",
            "X",
            "--samples",
            "20000",
            "--seed",
            "14",
        ],
        &[
            "boost",
            "--random",
            "mixed",
            "--n",
            "2",
            "--random-action",
            "--seed",
            "15",
        ],
    ];
    let bin = env!("CARGO_BIN_EXE_lorentz-qubits");
    let mut extra = Vec::new();
    for args in runs {
        let outputs: Vec<(bool, String)> = (0..2)
            .map(|_| {
                let out = Command::new(bin).args(args).output().expect("binary runs");
                (
                    out.status.success(),
                    String::from_utf8(out.stdout).expect("utf-8 report"),
                )
            })
            .collect();
        let same = strip_wall_time(&outputs[0].1) == strip_wall_time(&outputs[1].1);
        extra.push((same && outputs[0].0 && outputs[1].0, format!("{} identical", args[0])));
    }
    combine(&[], &extra)
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 trace-formula oracle", ac1_trace_formula),
        ("AC2 Lorentz invariance", ac2_lorentz_invariance),
        ("AC3 entropic derivation", ac3_entropic_derivation),
        ("AC4 canonical values", ac4_canonical_values),
        ("AC5 multiplicativity", ac5_multiplicativity),
        ("AC6 Minkowski metric", ac6_minkowski_metric),
        ("AC7 Haar twirl", ac7_haar_twirl),
        ("AC8 spin homomorphism", ac8_spin_homomorphism),
        ("AC9 purity", ac9_purity),
        ("AC10 determinism", ac10_determinism),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {name}: {} ({:.2}s)",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        failures += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
