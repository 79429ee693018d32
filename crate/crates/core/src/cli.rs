//! Command-line experiments: argument parsing, orchestration and reports.
//!
//! Every command produces a [`RunReport`] that echoes the effective
//! configuration, per-trial records, aggregate deviations and pass/fail
//! checks. Identical configurations give byte-identical reports apart from
//! `wall_time_seconds`.
//!
//! Exit codes: 0 when every check passes, 1 on a property failure, 2 on
//! invalid input.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{
    correlator_symmetry_check, haar_twirl_mc, pauli_correlation_table, polarized_determinant, random_observable,
    singlet_correlation, DetPreservingMap, TwirlSummary, SYMMETRY_TOL,
};
use crate::error::{Error, Result};
use crate::invariants::{
    concurrence, invariant_report, linear_entropy, linear_mutual_info_subsets, linear_mutual_info_trace,
    relative_deviation, spectral_invariants, InvariantSet,
};
use crate::linalg::{pauli, ComplexMatrix};
use crate::lorentz::{boost, herm_from_vector, rotation, sample_sl2c, MinkowskiVector, SL2C};
use crate::seed::{rng_from_seed, sub_seed, SPLIT_RULE};
use crate::states::{apply_local, preset, sample_state, LocalAction, Preset, QubitState, StateKind};

pub const DEFAULT_MAX_RAPIDITY: f64 = 2.0;
/// Relative tolerance for invariance under local SL(2,C) actions.
pub const INVARIANCE_TOL: f64 = 1e-7;
/// Relative tolerance for subset sum vs trace formula.
pub const ORACLE_TOL: f64 = 1e-8;
pub const NON_NEGATIVITY_TOL: f64 = 1e-9;
pub const TABLE_TOL: f64 = 1e-12;
pub const BILINEAR_TOL: f64 = 1e-10;
/// Relative tolerance for entropy preservation in `boost`.
pub const BOOST_TOL: f64 = 1e-9;
pub const ORACLE_MAX_QUBITS: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "lorentz-qubits",
    version,
    about = "Lorentzian invariants of multi-qubit states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants of one state and their stability under random local SL(2,C) actions.
    Invariants(InvariantsArgs),
    /// Subset-sum mutual information against Tr(ρρ⋆) on random states.
    Oracle(OracleArgs),
    /// Singlet correlator as the Minkowski metric on qubit observables.
    Metric(MetricArgs),
    /// Monte Carlo check of the U⊗U twirl.
    Twirl(TwirlArgs),
    /// Apply a local action to a state and compare entropies.
    Boost(BoostArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Master seed; sub-seeds are derived per trial.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write per-trial records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Override the command's primary tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Named state, e.g. singlet, ghz4, wstate4, product_of_singlets2, maximally_mixed1, basis0.
    #[arg(long, conflicts_with_all = ["random", "input"])]
    pub preset: Option<String>,
    /// Random state of the given kind (pure or mixed).
    #[arg(long, conflicts_with = "input")]
    pub random: Option<StateKind>,
    /// State file: {"n": int, "matrix": [[[re, im], ...], ...]}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Qubit count for random states and size-less presets.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_RAPIDITY)]
    pub max_rapidity: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    /// Random observable pairs for the correlator/polarized-determinant comparison.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Random SL(2,C) conjugations to test the correlator symmetry against.
    #[arg(long, default_value_t = 100)]
    pub maps: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_RAPIDITY)]
    pub max_rapidity: f64,
    /// Also check a z-boost of this rapidity.
    #[arg(long)]
    pub boost: Option<f64>,
    /// Also check a z-rotation by this angle.
    #[arg(long)]
    pub rotation: Option<f64>,
    /// Also check the parity map (x, y, z) -> (-x, -y, -z).
    #[arg(long)]
    pub parity: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TwirlArgs {
    /// Pauli letter (I, X, Y, Z), inline `t,x,y,z`, or `random`.
    #[arg(long, default_value = "Z")]
    pub o1: String,
    #[arg(long, default_value = "Z")]
    pub o2: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoostArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Boost rapidity applied to every qubit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rapidity: f64,
    /// Rotation angle applied to every qubit after the boost.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Boost/rotation axis: x, y, z or `ax,ay,az`.
    #[arg(long, default_value = "z")]
    pub axis: String,
    /// Use an independent random SL(2,C) factor per qubit instead.
    #[arg(long)]
    pub random_action: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_RAPIDITY)]
    pub max_rapidity: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Effective configuration after defaults, echoed into every report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub seed: u64,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub max_rapidity: Option<f64>,
    pub tolerance: Option<f64>,
    pub preset: Option<String>,
    pub random: Option<StateKind>,
    pub input_path: Option<String>,
    pub output_path: Option<String>,
    pub csv_path: Option<String>,
    pub samples: Option<usize>,
    pub o1: Option<String>,
    pub o2: Option<String>,
    pub maps: Option<usize>,
    pub boost: Option<f64>,
    pub rotation: Option<f64>,
    pub parity: Option<bool>,
    pub rapidity: Option<f64>,
    pub theta: Option<f64>,
    pub axis: Option<String>,
    pub random_action: Option<bool>,
}

impl ExperimentConfig {
    fn with_common(mut self, common: &CommonArgs) -> Self {
        self.seed = common.seed;
        self.output_path = common.output.as_ref().map(|p| p.display().to_string());
        self.csv_path = common.csv.as_ref().map(|p| p.display().to_string());
        self
    }

    fn with_state(mut self, state: &StateArgs, n: usize) -> Self {
        self.preset = state.preset.clone();
        self.random = state.random;
        self.input_path = state.input.as_ref().map(|p| p.display().to_string());
        self.n = Some(n);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub values: BTreeMap<String, f64>,
}

/// One pass/fail property: `value <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub seed_rule: String,
    pub details: serde_json::Value,
    pub records: Vec<TrialRecord>,
    pub aggregates: BTreeMap<String, f64>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub wall_time_seconds: f64,
}

impl RunReport {
    fn new(
        config: ExperimentConfig,
        details: serde_json::Value,
        records: Vec<TrialRecord>,
        checks: Vec<CheckResult>,
    ) -> Self {
        let mut aggregates = BTreeMap::new();
        for record in &records {
            for (key, &value) in &record.values {
                let slot = aggregates.entry(format!("max_{key}")).or_insert(f64::NEG_INFINITY);
                *slot = f64::max(*slot, value);
            }
        }
        let pass = checks.iter().all(|c| c.pass);
        Self {
            command: config.command.clone(),
            config,
            seed_rule: SPLIT_RULE.to_string(),
            details,
            records,
            aggregates,
            checks,
            pass,
            wall_time_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV projection of the per-trial records.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let keys: Vec<String> = {
            let mut k: Vec<String> = self.records.iter().flat_map(|r| r.values.keys().cloned()).collect();
            k.sort();
            k.dedup();
            k
        };
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["trial".to_string(), "seed".to_string()];
        header.extend(keys.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.records {
            let mut row = vec![r.trial.to_string(), r.seed.to_string()];
            row.extend(
                keys.iter()
                    .map(|k| r.values.get(k).map_or(String::new(), |v| format!("{v:e}"))),
            );
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn ensure_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Argument("--trials must be at least 1".into()));
    }
    Ok(())
}

fn tolerance(common: &CommonArgs, default: f64) -> Result<f64> {
    match common.tol {
        Some(t) if !t.is_finite() || t < 0.0 => Err(Error::Argument(format!("--tol must be finite and >= 0, got {t}"))),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

/// Resolves the state source. With nothing given, `fallback` is used.
pub fn load_state(args: &StateArgs, seed: u64, fallback: Preset) -> Result<QubitState> {
    if let Some(path) = &args.input {
        return QubitState::load(path);
    }
    if let Some(kind) = args.random {
        let n = args.n.ok_or_else(|| Error::Argument("--random needs --n".into()))?;
        return sample_state(&mut rng_from_seed(sub_seed(seed, u64::MAX)), n, kind);
    }
    match &args.preset {
        Some(name) => preset(Preset::parse(name, args.n.unwrap_or(1))?),
        None => preset(fallback),
    }
}

/// Parses `I`, `X`, `Y`, `Z`, `t,x,y,z`, or `random` (drawn from `rng`).
pub fn parse_observable<R: Rng + ?Sized>(spec: &str, rng: &mut R) -> Result<ComplexMatrix> {
    let s = spec.trim();
    match s.to_ascii_uppercase().as_str() {
        "I" | "1" => return Ok(pauli::identity()),
        "X" => return Ok(pauli::x()),
        "Y" => return Ok(pauli::y()),
        "Z" => return Ok(pauli::z()),
        "RANDOM" => return Ok(random_observable(rng)),
        _ => {}
    }
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Argument(format!("cannot parse observable `{spec}`")))?;
    match parts.as_slice() {
        &[t, x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(herm_from_vector(MinkowskiVector::new(t, x, y, z))),
        _ => Err(Error::Argument(format!(
            "observable `{spec}` needs 4 finite coordinates"
        ))),
    }
}

fn parse_axis(spec: &str) -> Result<[f64; 3]> {
    match spec.trim().to_ascii_lowercase().as_str() {
        "x" => Ok([1.0, 0.0, 0.0]),
        "y" => Ok([0.0, 1.0, 0.0]),
        "z" => Ok([0.0, 0.0, 1.0]),
        other => {
            let parts: Vec<f64> = other
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Argument(format!("cannot parse axis `{spec}`")))?;
            <[f64; 3]>::try_from(parts).map_err(|_| Error::Argument(format!("axis `{spec}` needs 3 components")))
        }
    }
}

fn record(trial: usize, seed: u64, values: &[(&str, f64)]) -> TrialRecord {
    TrialRecord {
        trial,
        seed,
        values: values.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
    }
}

fn max_of(records: &[TrialRecord], key: &str) -> f64 {
    records
        .iter()
        .filter_map(|r| r.values.get(key))
        .fold(0.0, |acc, &v| f64::max(acc, v))
}

fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| relative_deviation(x, y))
        .fold(0.0, f64::max)
}

pub fn cmd_invariants(args: &InvariantsArgs) -> Result<RunReport> {
    ensure_trials(args.trials)?;
    let tol = tolerance(&args.common, INVARIANCE_TOL)?;
    let state = load_state(&args.state, args.common.seed, Preset::Singlet)?;
    let n = state.n();
    let base: InvariantSet = invariant_report(&state)?;

    let records = (0..args.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialRecord> {
            let seed = sub_seed(args.common.seed, trial as u64);
            let mut rng = rng_from_seed(seed);
            let action = LocalAction::random(&mut rng, n, args.max_rapidity)?;
            let moved = apply_local(&state, &action)?;
            let i_l = linear_mutual_info_trace(&moved);
            let mut values = vec![
                ("i_l_after", i_l),
                ("dev_i_l", relative_deviation(i_l, base.i_l_trace)),
                (
                    "dev_spectral",
                    max_relative(&spectral_invariants(&moved), &base.spectral_invariants),
                ),
                ("trace_after", moved.trace()),
            ];
            if let Some(c0) = base.concurrence {
                values.push(("dev_concurrence", relative_deviation(concurrence(&moved)?, c0)));
            }
            Ok(record(trial, seed, &values))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checks = vec![
        CheckResult::at_most(
            "trace_formula",
            relative_deviation(base.i_l_subset, base.i_l_trace),
            ORACLE_TOL,
        ),
        CheckResult::at_most("non_negativity", (-base.i_l_trace).max(0.0), NON_NEGATIVITY_TOL),
        CheckResult::at_most("invariance_i_l", max_of(&records, "dev_i_l"), tol),
        CheckResult::at_most("invariance_spectral", max_of(&records, "dev_spectral"), tol),
    ];
    if base.concurrence.is_some() {
        checks.push(CheckResult::at_most(
            "invariance_concurrence",
            max_of(&records, "dev_concurrence"),
            tol,
        ));
    }

    let config = ExperimentConfig {
        command: "invariants".into(),
        trials: Some(args.trials),
        max_rapidity: Some(args.max_rapidity),
        tolerance: Some(tol),
        ..Default::default()
    }
    .with_common(&args.common)
    .with_state(&args.state, n);
    let details = serde_json::json!({ "invariants": base });
    Ok(RunReport::new(config, details, records, checks))
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<RunReport> {
    ensure_trials(args.trials)?;
    if args.n == 0 || args.n > ORACLE_MAX_QUBITS {
        return Err(Error::Argument(format!(
            "oracle supports 1..={ORACLE_MAX_QUBITS} qubits, got {}",
            args.n
        )));
    }
    let tol = tolerance(&args.common, ORACLE_TOL)?;
    let records = (0..args.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrialRecord> {
            let seed = sub_seed(args.common.seed, trial as u64);
            let (state, scale) = oracle_state(args.n, trial, seed)?;
            let subset = linear_mutual_info_subsets(&state)?;
            let trace = linear_mutual_info_trace(&state);
            Ok(record(
                trial,
                seed,
                &[
                    ("pure", if trial % 2 == 0 { 1.0 } else { 0.0 }),
                    ("scale", scale),
                    ("i_l_subset", subset),
                    ("i_l_trace", trace),
                    ("deviation", relative_deviation(subset, trace)),
                ],
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = vec![CheckResult::at_most(
        "trace_formula",
        max_of(&records, "deviation"),
        tol,
    )];
    let config = ExperimentConfig {
        command: "oracle".into(),
        n: Some(args.n),
        trials: Some(args.trials),
        tolerance: Some(tol),
        ..Default::default()
    }
    .with_common(&args.common);
    Ok(RunReport::new(config, serde_json::Value::Null, records, checks))
}

/// Trial `t` of the oracle: pure when `t` is even, mixed otherwise; trials
/// with `t % 4 >= 2` are rescaled by e^u, u uniform in [−3, 3].
pub fn oracle_state(n: usize, trial: usize, seed: u64) -> Result<(QubitState, f64)> {
    let mut rng = rng_from_seed(seed);
    let kind = if trial.is_multiple_of(2) {
        StateKind::Pure
    } else {
        StateKind::Mixed
    };
    let state = sample_state(&mut rng, n, kind)?;
    if trial % 4 >= 2 {
        let scale = rng.random_range(-3.0f64..=3.0).exp();
        Ok((state.scaled(scale)?, scale))
    } else {
        Ok((state, 1.0))
    }
}

pub fn cmd_metric(args: &MetricArgs) -> Result<RunReport> {
    ensure_trials(args.trials)?;
    let tol = tolerance(&args.common, BILINEAR_TOL)?;
    let table = pauli_correlation_table();
    let table_dev = table
        .iter()
        .enumerate()
        .flat_map(|(mu, row)| {
            row.iter().enumerate().map(move |(nu, &v)| {
                let want = if mu != nu {
                    0.0
                } else if mu == 0 {
                    1.0
                } else {
                    -1.0
                };
                (v - want).abs()
            })
        })
        .fold(0.0, f64::max);

    let records = (0..args.trials)
        .map(|trial| -> Result<TrialRecord> {
            let seed = sub_seed(args.common.seed, trial as u64);
            let mut rng = rng_from_seed(seed);
            let o1 = random_observable(&mut rng);
            let o2 = random_observable(&mut rng);
            let corr = singlet_correlation(&o1, &o2)?;
            let polar = polarized_determinant(&o1, &o2)?;
            let swapped = singlet_correlation(&o2, &o1)?;
            Ok(record(
                trial,
                seed,
                &[
                    ("correlation", corr),
                    ("dev_polarized", (corr - polar).abs()),
                    ("dev_symmetry", (corr - swapped).abs()),
                ],
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let map_seed = sub_seed(args.common.seed, u64::MAX - 1);
    let mut map_rng = rng_from_seed(map_seed);
    let mut symmetry: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let mut worst_random = 0.0f64;
    let mut worst_scale = 1.0f64;
    for k in 0..args.maps {
        let lam = if k % 2 == 0 {
            sample_sl2c(&mut map_rng, args.max_rapidity)?
        } else {
            let axis: [f64; 3] = std::array::from_fn(|_| map_rng.random_range(-1.0..1.0));
            let theta = map_rng.random_range(0.0..std::f64::consts::TAU);
            rotation(axis, theta)?
        };
        let check = correlator_symmetry_check(&DetPreservingMap::Conjugation(lam), 10, map_rng.random())?;
        worst_random = worst_random.max(check.max_deviation);
        worst_scale = worst_scale.max(check.scale);
    }
    let mut checks = vec![
        CheckResult::at_most("pauli_table", table_dev, TABLE_TOL),
        CheckResult::at_most(
            "correlator_vs_polarized_determinant",
            max_of(&records, "dev_polarized"),
            tol,
        ),
        CheckResult::at_most("correlator_symmetric", max_of(&records, "dev_symmetry"), tol),
    ];
    if args.maps > 0 {
        checks.push(CheckResult::at_most(
            "symmetry_random_maps",
            worst_random / worst_scale,
            SYMMETRY_TOL,
        ));
        symmetry.insert(
            "random_maps".into(),
            serde_json::json!({ "maps": args.maps, "max_deviation": worst_random, "scale": worst_scale }),
        );
    }

    let mut named: Vec<(&str, DetPreservingMap)> = Vec::new();
    if let Some(eta) = args.boost {
        named.push(("boost", DetPreservingMap::Conjugation(boost([0.0, 0.0, 1.0], eta)?)));
    }
    if let Some(theta) = args.rotation {
        named.push((
            "rotation",
            DetPreservingMap::Conjugation(crate::lorentz::rotation_z(theta)),
        ));
    }
    if args.parity {
        named.push(("parity", DetPreservingMap::Parity));
    }
    for (i, (name, map)) in named.iter().enumerate() {
        let check = correlator_symmetry_check(map, args.trials.min(100), sub_seed(map_seed, i as u64))?;
        checks.push(CheckResult::at_most(
            &format!("symmetry_{name}"),
            check.max_deviation / check.scale,
            SYMMETRY_TOL,
        ));
        symmetry.insert((*name).into(), serde_json::to_value(check)?);
    }

    let config = ExperimentConfig {
        command: "metric".into(),
        trials: Some(args.trials),
        maps: Some(args.maps),
        max_rapidity: Some(args.max_rapidity),
        tolerance: Some(tol),
        boost: args.boost,
        rotation: args.rotation,
        parity: Some(args.parity),
        ..Default::default()
    }
    .with_common(&args.common);
    let details = serde_json::json!({ "pauli_table": table, "symmetry": symmetry });
    Ok(RunReport::new(config, details, records, checks))
}

pub fn cmd_twirl(args: &TwirlArgs) -> Result<RunReport> {
    let mut rng = rng_from_seed(sub_seed(args.common.seed, u64::MAX - 2));
    let o1 = parse_observable(&args.o1, &mut rng)?;
    let o2 = parse_observable(&args.o2, &mut rng)?;
    let estimate = haar_twirl_mc(&o1, &o2, args.samples, args.common.seed)?;
    let summary: TwirlSummary = estimate.summary();
    let bound = crate::correlation::TWIRL_SIGMA * summary.std_error + crate::correlation::TWIRL_ABS_FLOOR;
    let checks = vec![CheckResult::at_most(
        "twirl_within_5_sigma",
        summary.max_abs_deviation,
        bound,
    )];
    let config = ExperimentConfig {
        command: "twirl".into(),
        samples: Some(args.samples),
        o1: Some(args.o1.clone()),
        o2: Some(args.o2.clone()),
        ..Default::default()
    }
    .with_common(&args.common);
    let mean: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| [estimate.mean[(i, j)].re, estimate.mean[(i, j)].im])
                .collect()
        })
        .collect();
    let details = serde_json::json!({
        "twirl": summary,
        "o1": crate::lorentz::vector_from_herm(&o1)?,
        "o2": crate::lorentz::vector_from_herm(&o2)?,
        "mean": mean,
    });
    Ok(RunReport::new(config, details, Vec::new(), checks))
}

pub fn cmd_boost(args: &BoostArgs) -> Result<RunReport> {
    let tol = tolerance(&args.common, BOOST_TOL)?;
    let state = load_state(&args.state, args.common.seed, Preset::Basis0(args.state.n.unwrap_or(1)))?;
    let n = state.n();
    let action = if args.random_action {
        let mut rng = rng_from_seed(sub_seed(args.common.seed, 0));
        LocalAction::random(&mut rng, n, args.max_rapidity)?
    } else {
        let axis = parse_axis(&args.axis)?;
        let factor: SL2C = rotation(axis, args.theta)?.compose(&boost(axis, args.rapidity)?);
        LocalAction::uniform(&factor, n)?
    };
    let moved = apply_local(&state, &action)?;

    let sl_before = linear_entropy(&state);
    let sl_after = linear_entropy(&moved);
    let il_before = linear_mutual_info_trace(&state);
    let il_after = linear_mutual_info_trace(&moved);
    // For one qubit the linear entropy is Tr(ρρ⋆) itself; for more qubits
    // the preserved quantity is the mutual information.
    let check = if n == 1 {
        CheckResult::at_most("linear_entropy_preserved", relative_deviation(sl_after, sl_before), tol)
    } else {
        CheckResult::at_most(
            "mutual_information_preserved",
            relative_deviation(il_after, il_before),
            tol,
        )
    };
    let factors: Vec<Vec<Vec<[f64; 2]>>> = action
        .factors()
        .iter()
        .map(|f| {
            let m = f.matrix();
            (0..2)
                .map(|i| (0..2).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect()
        })
        .collect();
    let details = serde_json::json!({
        "state": moved.to_json(),
        "factors": factors,
        "linear_entropy_before": sl_before,
        "linear_entropy_after": sl_after,
        "i_l_before": il_before,
        "i_l_after": il_after,
        "trace_before": state.trace(),
        "trace_after": moved.trace(),
    });
    let config = ExperimentConfig {
        command: "boost".into(),
        rapidity: Some(args.rapidity),
        theta: Some(args.theta),
        axis: Some(args.axis.clone()),
        random_action: Some(args.random_action),
        max_rapidity: Some(args.max_rapidity),
        tolerance: Some(tol),
        ..Default::default()
    }
    .with_common(&args.common)
    .with_state(&args.state, n);
    Ok(RunReport::new(config, details, Vec::new(), vec![check]))
}

fn common_of(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Invariants(a) => &a.common,
        Command::Oracle(a) => &a.common,
        Command::Metric(a) => &a.common,
        Command::Twirl(a) => &a.common,
        Command::Boost(a) => &a.common,
    }
}

/// Runs a parsed command and stamps the wall time.
pub fn execute(cmd: &Command) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match cmd {
        Command::Invariants(a) => cmd_invariants(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Metric(a) => cmd_metric(a),
        Command::Twirl(a) => cmd_twirl(a),
        Command::Boost(a) => cmd_boost(a),
    }?;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn emit(report: &RunReport, common: &CommonArgs) -> Result<()> {
    let json = report.to_json();
    match &common.output {
        Some(path) => write_file(path, &json)?,
        None => println!("{json}"),
    }
    if let Some(path) = &common.csv {
        report.write_csv(fs::File::create(path)?)?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Entry point used by the binary.
pub fn run(cli: Cli) -> ExitCode {
    let common = common_of(&cli.command).clone();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&report, &common) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for check in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {:.3e} > {:.3e}", check.name, check.value, check.tolerance);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("lorentz-qubits").chain(args.iter().copied())).unwrap()
    }

    fn report(args: &[&str]) -> RunReport {
        execute(&parse(args).command).unwrap()
    }

    #[test]
    fn invariants_singlet() {
        let r = report(&["invariants", "--preset", "singlet", "--trials", "20", "--seed", "7"]);
        assert!(r.pass);
        let inv = &r.details["invariants"];
        assert!((inv["i_l_trace"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!((inv["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(r.records.len(), 20);
        assert!(r.checks.iter().any(|c| c.name == "invariance_concurrence"));
    }

    #[test]
    fn invariants_wstate_and_random_pure() {
        let r = report(&["invariants", "--preset", "wstate4", "--trials", "5"]);
        assert!(r.pass);
        assert!(r.details["invariants"]["i_l_trace"].as_f64().unwrap().abs() < 1e-9);

        let r = report(&["invariants", "--random", "pure", "--n", "3", "--trials", "10"]);
        assert!(r.pass);
        assert!(r.details["invariants"]["i_l_trace"].as_f64().unwrap() <= 1e-9);
        assert!(r.aggregates["max_i_l_after"] <= 1e-9);
    }

    #[test]
    fn oracle_runs_and_passes() {
        let r = report(&["oracle", "--n", "3", "--trials", "8", "--seed", "1"]);
        assert!(r.pass);
        assert_eq!(r.config.n, Some(3));
        let scaled = r.records.iter().filter(|t| t.values["scale"] != 1.0).count();
        assert_eq!(scaled, 4);
        assert!(execute(&parse(&["oracle", "--n", "7"]).command).is_err());
    }

    #[test]
    fn metric_with_named_maps() {
        let r = report(&[
            "metric",
            "--trials",
            "50",
            "--maps",
            "6",
            "--boost",
            "1.5",
            "--parity",
            "--rotation",
            "0.3",
        ]);
        assert!(r.pass, "{:?}", r.checks);
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"symmetry_boost"));
        assert!(names.contains(&"symmetry_parity"));
        assert!(names.contains(&"symmetry_rotation"));
    }

    #[test]
    fn twirl_identity_exact() {
        let r = report(&["twirl", "--o1", "I", "--o2", "I", "--samples", "1000"]);
        assert!(r.pass);
        assert_eq!(r.details["twirl"]["chi"].as_f64(), Some(1.0));
        assert_eq!(r.details["twirl"]["zeta"].as_f64(), Some(0.0));
    }

    #[test]
    fn boost_basis0() {
        let r = report(&["boost", "--preset", "basis0", "--rapidity", "1.0"]);
        assert!(r.pass);
        let m = &r.details["state"]["matrix"];
        assert!((m[0][0][0].as_f64().unwrap() - 1f64.exp()).abs() < 1e-12);
        assert!(m[1][1][0].as_f64().unwrap().abs() < 1e-15);
        assert!(r.details["linear_entropy_after"].as_f64().unwrap().abs() < 1e-12);

        let r = report(&[
            "boost",
            "--random",
            "mixed",
            "--n",
            "1",
            "--rapidity",
            "2",
            "--seed",
            "9",
        ]);
        assert!(r.pass);
        let before = r.details["trace_before"].as_f64().unwrap();
        let after = r.details["trace_after"].as_f64().unwrap();
        assert!((before - after).abs() > 1e-3);
    }

    #[test]
    fn observable_parsing() {
        let mut rng = rng_from_seed(0);
        assert_eq!(parse_observable("z", &mut rng).unwrap(), pauli::z());
        assert_eq!(
            parse_observable("1,0,0,1", &mut rng).unwrap(),
            ComplexMatrix::from_real_diag(&[2.0, 0.0])
        );
        assert!(parse_observable("1,2", &mut rng).is_err());
        assert!(parse_observable("Q", &mut rng).is_err());
        assert_eq!(parse_axis("x").unwrap(), [1.0, 0.0, 0.0]);
        assert!(parse_axis("1,2").is_err());
    }

    #[test]
    fn input_errors_surface() {
        assert!(execute(&parse(&["invariants", "--random", "pure"]).command).is_err());
        assert!(execute(&parse(&["invariants", "--preset", "nonsense"]).command).is_err());
        assert!(execute(&parse(&["twirl", "--samples", "10"]).command).is_err());
        assert!(execute(&parse(&["invariants", "--trials", "0"]).command).is_err());
        assert!(Cli::try_parse_from(["x", "invariants", "--preset", "singlet", "--random", "pure"]).is_err());
    }

    #[test]
    fn csv_projection() {
        let r = report(&["oracle", "--n", "1", "--trials", "3"]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "trial,seed,deviation,i_l_subset,i_l_trace,pure,scale"
        );
        assert_eq!(lines.count(), 3);
    }
}
