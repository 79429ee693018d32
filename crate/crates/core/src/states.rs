//! n-qubit states (possibly un-normalized), the spin-flip, the W-matrix and
//! local SL(2,C)^{⊗n} actions.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, herm_eig, kron_all, mat_sqrt_psd, partial_trace, ComplexMatrix, HermitianCheckTolerance};
use crate::lorentz::SL2C;
use crate::seed::rng_from_seed;

/// Largest qubit count supported by the state layer.
pub const MAX_QUBITS: usize = 8;
/// Relative floor for the smallest eigenvalue accepted at construction.
pub const PSD_TOL_RELATIVE: f64 = 1e-9;
/// Largest imaginary part tolerated on the trace.
pub const TRACE_IMAG_TOL: f64 = 1e-12;

/// A positive semi-definite Hermitian operator on n qubits with positive
/// trace. Normalization is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n: usize,
    rho: ComplexMatrix,
}

impl QubitState {
    /// Validates Hermiticity, positivity and trace.
    pub fn new(n: usize, rho: ComplexMatrix) -> Result<Self> {
        check_qubits(n)?;
        if rho.dim() != 1 << n {
            return Err(Error::Size(format!(
                "{n}-qubit state needs a {0}x{0} matrix, got {1}x{1}",
                1usize << n,
                rho.dim()
            )));
        }
        rho.ensure_hermitian(HermitianCheckTolerance::default())?;
        let tr = rho.trace();
        if tr.im.abs() > TRACE_IMAG_TOL || tr.re.is_nan() || tr.re <= 0.0 {
            return Err(Error::Argument(format!(
                "trace must be real and positive, got {:.3e}{:+.3e}i",
                tr.re, tr.im
            )));
        }
        let rho = rho.hermitian_part();
        let eig = herm_eig(&rho, HermitianCheckTolerance::default())?;
        let min = *eig.eigenvalues.last().expect("non-empty spectrum");
        let threshold = -PSD_TOL_RELATIVE * rho.max_abs();
        if min < threshold {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
                threshold,
            });
        }
        Ok(Self { n, rho })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn trusted(n: usize, rho: ComplexMatrix) -> Self {
        debug_assert_eq!(rho.dim(), 1 << n);
        Self { n, rho }
    }

    /// Normalized projector onto `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = crate::linalg::qubit_count(psi.len())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Size(format!("state vector length {} is not 2^n", psi.len())))?;
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Argument("state vector must be non-zero and finite".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|a| a / norm).collect();
        Self::new(n, ComplexMatrix::projector(&v))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// Same state multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::Argument(format!("scale factor must be positive, got {k}")));
        }
        Ok(Self::trusted(self.n, self.rho.scale_real(k)))
    }

    pub fn normalized(&self) -> Self {
        Self::trusted(self.n, self.rho.scale_real(1.0 / self.trace()))
    }

    /// Tensor product self ⊗ other.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_qubits(self.n + other.n)?;
        Ok(Self::trusted(
            self.n + other.n,
            crate::linalg::kron(&self.rho, &other.rho)?,
        ))
    }

    pub fn to_json(&self) -> StateFile {
        StateFile {
            n: self.n,
            matrix: (0..self.dim())
                .map(|i| {
                    (0..self.dim())
                        .map(|j| {
                            let z = self.rho[(i, j)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(file: &StateFile) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = file
            .matrix
            .iter()
            .map(|row| row.iter().map(|&[re, im]| c(re, im)).collect())
            .collect();
        Self::new(file.n, ComplexMatrix::from_rows(&rows)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// On-disk state schema: `{ "n": int, "matrix": [[[re, im], ...], ...] }`,
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Argument(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

/// One SL(2,C) factor per qubit; acts as M = Λ₁ ⊗ ⋯ ⊗ Λ_n.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAction {
    factors: Vec<SL2C>,
}

impl LocalAction {
    pub fn new(factors: Vec<SL2C>) -> Result<Self> {
        check_qubits(factors.len())?;
        Ok(Self { factors })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![SL2C::identity(); n])
    }

    /// The same factor on every qubit.
    pub fn uniform(lam: &SL2C, n: usize) -> Result<Self> {
        Self::new(vec![lam.clone(); n])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, max_rapidity: f64) -> Result<Self> {
        let factors = (0..n)
            .map(|_| crate::lorentz::sample_sl2c(rng, max_rapidity))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[SL2C] {
        &self.factors
    }

    /// M = Λ₁ ⊗ ⋯ ⊗ Λ_n
    pub fn operator(&self) -> ComplexMatrix {
        kron_all(self.factors.iter().map(SL2C::matrix)).expect("qubit count is bounded")
    }

    /// M⁻¹ built from the closed-form factor inverses.
    pub fn inverse_operator(&self) -> ComplexMatrix {
        let inv: Vec<SL2C> = self.factors.iter().map(SL2C::inverse).collect();
        kron_all(inv.iter().map(SL2C::matrix)).expect("qubit count is bounded")
    }
}

/// Index-level form of Y^{⊗n}: column `b` has its single non-zero entry in
/// row `b ^ mask`, equal to the product of `i` (bit 0) and `−i` (bit 1)
/// over the bits of `b`.
fn y_string_entry(n: usize, col: usize) -> Complex64 {
    let ones = col.count_ones() as usize;
    let zeros = n - ones;
    // i^zeros · (−i)^ones = i^(zeros − ones) = i^(zeros + 3·ones)
    match (zeros + 3 * ones) % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

/// ρ⋆ = Y^{⊗n} ρ̄ Y^{⊗n}
pub fn spin_flip(s: &QubitState) -> QubitState {
    let n = s.n;
    let dim = s.dim();
    let mask = dim - 1;
    let rho = s.rho();
    let mut out = ComplexMatrix::zeros(dim);
    for a in 0..dim {
        let ya = y_string_entry(n, a ^ mask);
        for b in 0..dim {
            let yb = y_string_entry(n, b);
            out[(a, b)] = ya * rho[(a ^ mask, b ^ mask)].conj() * yb;
        }
    }
    QubitState::trusted(n, out)
}

/// W = ρρ⋆
pub fn w_matrix(s: &QubitState) -> ComplexMatrix {
    s.rho().matmul(spin_flip(s).rho())
}

/// Spectrum of W, read off the Hermitian matrix √ρ ρ⋆ √ρ; descending and
/// clamped at zero.
pub fn w_spectrum(s: &QubitState) -> Vec<f64> {
    let root = mat_sqrt_psd(s.rho()).expect("validated state is PSD");
    let flipped = spin_flip(s);
    let h = root.matmul(flipped.rho()).matmul(&root).hermitian_part();
    let eig = herm_eig(&h, HermitianCheckTolerance::default()).expect("Hermitian by construction");
    eig.eigenvalues.into_iter().map(|l| l.max(0.0)).collect()
}

/// ρ′ = MρM†. The trace is not preserved.
pub fn apply_local(s: &QubitState, a: &LocalAction) -> Result<QubitState> {
    if a.len() != s.n {
        return Err(Error::Argument(format!(
            "local action has {} factors for a {}-qubit state",
            a.len(),
            s.n
        )));
    }
    let m = a.operator();
    let out = m.matmul(s.rho()).matmul(&m.adjoint()).hermitian_part();
    Ok(QubitState::trusted(s.n, out))
}

/// Reduced state on `subset` (1-based qubit labels, relative order kept).
pub fn reduce(s: &QubitState, subset: &[usize]) -> Result<QubitState> {
    let rho = partial_trace(s.rho(), s.n, subset)?;
    let k = crate::linalg::qubit_count(rho.dim()).expect("power of two");
    Ok(QubitState::trusted(k, rho))
}

/// Named reference states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// (|01⟩ − |10⟩)/√2
    Singlet,
    Ghz(usize),
    WState(usize),
    /// k copies of the singlet on qubit pairs (1,2), (3,4), …
    ProductOfSinglets(usize),
    MaximallyMixed(usize),
    /// |0…0⟩⟨0…0|
    Basis0(usize),
}

impl Preset {
    pub fn qubits(self) -> usize {
        match self {
            Preset::Singlet => 2,
            Preset::ProductOfSinglets(k) => 2 * k,
            Preset::Ghz(n) | Preset::WState(n) | Preset::MaximallyMixed(n) | Preset::Basis0(n) => n,
        }
    }

    /// Parses `name`, `nameN` or `name(N)`. Names that need a size and carry
    /// none take `default_n`.
    pub fn parse(s: &str, default_n: usize) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let skip = if s.starts_with("basis0") { "basis0".len() } else { 0 };
        let split = s[skip..]
            .find(|ch: char| ch.is_ascii_digit() || ch == '(')
            .map_or(s.len(), |i| i + skip);
        let (name, rest) = s.split_at(split);
        let rest = rest.trim_start_matches('(').trim_end_matches(')');
        let size = if rest.is_empty() {
            None
        } else {
            Some(
                rest.parse::<usize>()
                    .map_err(|_| Error::Argument(format!("bad size in preset `{s}`")))?,
            )
        };
        let name = name.trim_end_matches(['_', '-']);
        let n = size.unwrap_or(default_n);
        let preset = match name {
            "singlet" => {
                if size.is_some_and(|k| k != 2) {
                    return Err(Error::Argument("the singlet is a 2-qubit state".into()));
                }
                Preset::Singlet
            }
            "ghz" => Preset::Ghz(n),
            "w" | "wstate" | "w_state" => Preset::WState(n),
            "singlets" | "product_of_singlets" => Preset::ProductOfSinglets(size.unwrap_or(2)),
            "mixed" | "maximally_mixed" => Preset::MaximallyMixed(n),
            "basis0" | "zero" => Preset::Basis0(n),
            _ => return Err(Error::Argument(format!("unknown preset `{s}`"))),
        };
        preset.validate()?;
        Ok(preset)
    }

    fn validate(self) -> Result<()> {
        match self {
            Preset::Ghz(n) | Preset::WState(n) if n < 2 => {
                Err(Error::Argument(format!("{self} needs at least 2 qubits")))
            }
            Preset::ProductOfSinglets(0) => Err(Error::Argument("need at least one singlet".into())),
            _ => check_qubits(self.qubits()),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Singlet => write!(f, "singlet"),
            Preset::Ghz(n) => write!(f, "ghz({n})"),
            Preset::WState(n) => write!(f, "wstate({n})"),
            Preset::ProductOfSinglets(k) => write!(f, "product_of_singlets({k})"),
            Preset::MaximallyMixed(n) => write!(f, "maximally_mixed({n})"),
            Preset::Basis0(n) => write!(f, "basis0({n})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 1)
    }
}

pub fn singlet_vector() -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]
}

pub fn preset(p: Preset) -> Result<QubitState> {
    p.validate()?;
    match p {
        Preset::Singlet => QubitState::pure(&singlet_vector()),
        Preset::Ghz(n) => {
            let mut v = vec![c(0.0, 0.0); 1 << n];
            v[0] = c(1.0, 0.0);
            v[(1 << n) - 1] = c(1.0, 0.0);
            QubitState::pure(&v)
        }
        Preset::WState(n) => {
            let mut v = vec![c(0.0, 0.0); 1 << n];
            for q in 0..n {
                v[1 << q] = c(1.0, 0.0);
            }
            QubitState::pure(&v)
        }
        Preset::ProductOfSinglets(k) => {
            let single = preset(Preset::Singlet)?;
            let mut acc = single.clone();
            for _ in 1..k {
                acc = acc.tensor(&single)?;
            }
            Ok(acc)
        }
        Preset::MaximallyMixed(n) => {
            let dim = 1usize << n;
            QubitState::new(n, ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
        }
        Preset::Basis0(n) => {
            let mut v = vec![c(0.0, 0.0); 1 << n];
            v[0] = c(1.0, 0.0);
            QubitState::pure(&v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pure" => Ok(StateKind::Pure),
            "mixed" => Ok(StateKind::Mixed),
            other => Err(Error::Argument(format!(
                "state kind must be pure or mixed, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Pure => "pure",
            StateKind::Mixed => "mixed",
        })
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Pure: projector of a normalized complex Gaussian vector.
/// Mixed: GG†/Tr(GG†) with G a square complex Gaussian matrix.
pub fn sample_state<R: Rng + ?Sized>(rng: &mut R, n: usize, kind: StateKind) -> Result<QubitState> {
    check_qubits(n)?;
    let dim = 1usize << n;
    match kind {
        StateKind::Pure => {
            let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let v: Vec<Complex64> = v.iter().map(|a| a / norm).collect();
            Ok(QubitState::trusted(n, ComplexMatrix::projector(&v).hermitian_part()))
        }
        StateKind::Mixed => {
            let g = ComplexMatrix::from_vec_unchecked(dim, (0..dim * dim).map(|_| gaussian(rng)).collect());
            let ggd = g.matmul(&g.adjoint()).hermitian_part();
            let tr = ggd.trace().re;
            Ok(QubitState::trusted(n, ggd.scale_real(1.0 / tr)))
        }
    }
}

/// Seeded form of [`sample_state`].
pub fn random_state(n: usize, kind: StateKind, rng_seed: u64) -> Result<QubitState> {
    sample_state(&mut rng_from_seed(rng_seed), n, kind)
}
