//! The singlet correlation function 𝒞(𝒪₁,𝒪₂) = ⟨Ψ⁻|𝒪₁⊗𝒪₂|Ψ⁻⟩ on qubit
//! observables, its identification with the polarized determinant, and a
//! Monte Carlo check of the U⊗U twirl.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, det, gram_schmidt_qr, kron, pauli, ComplexMatrix};
use crate::lorentz::{herm_from_vector, vector_from_herm, LorentzMatrix4, MinkowskiVector, SL2C};
use crate::seed::{rng_from_seed, sub_seed};
use crate::states::singlet_vector;

/// Twirl estimates must lie within this many standard errors.
pub const TWIRL_SIGMA: f64 = 5.0;
/// Absolute floor added to the twirl bound; covers cases whose sample
/// variance is pure rounding noise (e.g. the identity pair).
pub const TWIRL_ABS_FLOOR: f64 = 1e-12;
pub const MIN_TWIRL_SAMPLES: usize = 1000;
/// Allowed symmetry deviation, relative to max(1, |𝒞|).
pub const SYMMETRY_TOL: f64 = 1e-8;

const TWIRL_SHARDS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub value: f64,
    pub o1: MinkowskiVector,
    pub o2: MinkowskiVector,
}

fn check_observable(o: &ComplexMatrix) -> Result<MinkowskiVector> {
    vector_from_herm(o)
}

/// ⟨Ψ⁻|𝒪₁⊗𝒪₂|Ψ⁻⟩ for Hermitian 2x2 observables.
pub fn singlet_correlation(o1: &ComplexMatrix, o2: &ComplexMatrix) -> Result<f64> {
    Ok(singlet_correlation_result(o1, o2)?.value)
}

pub fn singlet_correlation_result(o1: &ComplexMatrix, o2: &ComplexMatrix) -> Result<CorrelationResult> {
    let v1 = check_observable(o1)?;
    let v2 = check_observable(o2)?;
    let psi = singlet_vector();
    let op = kron(o1, o2)?;
    let applied = op.apply(&psi);
    let value: Complex64 = psi.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum();
    Ok(CorrelationResult {
        value: value.re,
        o1: v1,
        o2: v2,
    })
}

/// ½(det(𝒪₁ + 𝒪₂) − det(𝒪₁) − det(𝒪₂))
pub fn polarized_determinant(o1: &ComplexMatrix, o2: &ComplexMatrix) -> Result<f64> {
    if o1.dim() != 2 || o2.dim() != 2 {
        return Err(Error::Size("polarized determinant takes 2x2 matrices".into()));
    }
    Ok(0.5 * (det(&(o1 + o2)) - det(o1) - det(o2)).re)
}

/// ½(Tr 𝒪₁ Tr 𝒪₂ − Tr 𝒪₁𝒪₂)
pub fn trace_form(o1: &ComplexMatrix, o2: &ComplexMatrix) -> f64 {
    0.5 * (o1.trace() * o2.trace() - o1.trace_product(o2)).re
}

/// 𝒞(σ_μ, σ_ν) for μ, ν ∈ {0..3}.
pub fn pauli_correlation_table() -> [[f64; 4]; 4] {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            singlet_correlation(&pauli::sigma(mu), &pauli::sigma(nu)).expect("Pauli matrices are Hermitian")
        })
    })
}

/// The 4x4 swap operator F|ab⟩ = |ba⟩.
pub fn swap_operator() -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            f[(2 * b + a, 2 * a + b)] = c(1.0, 0.0);
        }
    }
    f
}

/// χ = Tr𝒪₁Tr𝒪₂/3 − Tr(𝒪₁𝒪₂)/6
pub fn twirl_chi(o1: &ComplexMatrix, o2: &ComplexMatrix) -> f64 {
    let tt = (o1.trace() * o2.trace()).re;
    let t12 = o1.trace_product(o2).re;
    tt / 3.0 - t12 / 6.0
}

/// ζ = Tr𝒪₁Tr𝒪₂/6 − Tr(𝒪₁𝒪₂)/3
pub fn twirl_zeta(o1: &ComplexMatrix, o2: &ComplexMatrix) -> f64 {
    let tt = (o1.trace() * o2.trace()).re;
    let t12 = o1.trace_product(o2).re;
    tt / 6.0 - t12 / 3.0
}

/// χ𝟙 − ζF
pub fn twirl_closed_form(o1: &ComplexMatrix, o2: &ComplexMatrix) -> ComplexMatrix {
    &ComplexMatrix::identity(4).scale_real(twirl_chi(o1, o2)) - &swap_operator().scale_real(twirl_zeta(o1, o2))
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) folded back into Q.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_vec_unchecked(
            dim,
            (0..dim * dim)
                .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        );
        // Modified Gram-Schmidt leaves diag(R) real positive already, which is
        // exactly the phase fix; the loop only guards the measure-zero
        // rank-deficient draw.
        if let Ok((q, r_diag)) = gram_schmidt_qr(&g) {
            debug_assert!(r_diag.iter().all(|d| d.im == 0.0 && d.re > 0.0));
            return q;
        }
    }
}

/// Result of a twirl Monte Carlo run.
#[derive(Debug, Clone)]
pub struct TwirlEstimate {
    pub sample_count: usize,
    pub mean: ComplexMatrix,
    /// Largest entrywise standard error of the mean.
    pub std_error: f64,
    pub chi: f64,
    pub zeta: f64,
    /// ‖mean − (χ𝟙 − ζF)‖_max
    pub max_abs_deviation: f64,
}

impl TwirlEstimate {
    pub fn pass(&self) -> bool {
        self.max_abs_deviation <= TWIRL_SIGMA * self.std_error + TWIRL_ABS_FLOOR
    }

    pub fn summary(&self) -> TwirlSummary {
        TwirlSummary {
            samples: self.sample_count,
            chi: self.chi,
            zeta: self.zeta,
            max_abs_deviation: self.max_abs_deviation,
            std_error: self.std_error,
            pass: self.pass(),
        }
    }
}

/// JSON form of a [`TwirlEstimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwirlSummary {
    pub samples: usize,
    pub chi: f64,
    pub zeta: f64,
    pub max_abs_deviation: f64,
    pub std_error: f64,
    pub pass: bool,
}

#[derive(Clone)]
struct Moments {
    count: usize,
    sum: Vec<Complex64>,
    // Σ re², Σ im² per entry.
    sum_sq: Vec<(f64, f64)>,
}

impl Moments {
    fn new(len: usize) -> Self {
        Self {
            count: 0,
            sum: vec![c(0.0, 0.0); len],
            sum_sq: vec![(0.0, 0.0); len],
        }
    }

    fn push(&mut self, m: &ComplexMatrix) {
        self.count += 1;
        for ((s, q), z) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(m.entries()) {
            *s += z;
            q.0 += z.re * z.re;
            q.1 += z.im * z.im;
        }
    }

    fn merge(mut self, other: &Self) -> Self {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            a.0 += b.0;
            a.1 += b.1;
        }
        self
    }
}

/// Monte Carlo estimate of ∫ (U⊗U)(𝒪₁⊗𝒪₂)(U⊗U)† dU over Haar-random U(2).
///
/// Samples are split over fixed shards seeded from `rng_seed`; shards are
/// merged in index order so the estimate is bitwise reproducible.
pub fn haar_twirl_mc(o1: &ComplexMatrix, o2: &ComplexMatrix, samples: usize, rng_seed: u64) -> Result<TwirlEstimate> {
    if samples < MIN_TWIRL_SAMPLES {
        return Err(Error::Argument(format!(
            "twirl needs at least {MIN_TWIRL_SAMPLES} samples, got {samples}"
        )));
    }
    check_observable(o1)?;
    check_observable(o2)?;
    let op = kron(o1, o2)?;

    let shards = TWIRL_SHARDS as usize;
    let partials: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = samples / shards + usize::from(shard < samples % shards);
            let mut rng = rng_from_seed(sub_seed(rng_seed, shard as u64));
            let mut moments = Moments::new(16);
            for _ in 0..count {
                let u = haar_unitary(&mut rng, 2);
                let uu = kron(&u, &u).expect("4x4");
                moments.push(&uu.matmul(&op).matmul(&uu.adjoint()));
            }
            moments
        })
        .collect();
    let total = partials.iter().fold(Moments::new(16), |acc, m| acc.merge(m));

    let n = total.count as f64;
    let mean_entries: Vec<Complex64> = total.sum.iter().map(|s| s / n).collect();
    let std_error = total
        .sum
        .iter()
        .zip(&total.sum_sq)
        .map(|(s, q)| {
            let mre = s.re / n;
            let mim = s.im / n;
            let var_re = ((q.0 / n - mre * mre) * n / (n - 1.0)).max(0.0);
            let var_im = ((q.1 / n - mim * mim) * n / (n - 1.0)).max(0.0);
            ((var_re + var_im) / n).sqrt()
        })
        .fold(0.0, f64::max);
    let mean = ComplexMatrix::from_vec_unchecked(4, mean_entries);
    let expected = twirl_closed_form(o1, o2);
    Ok(TwirlEstimate {
        sample_count: samples,
        max_abs_deviation: mean.max_abs_diff(&expected),
        mean,
        std_error,
        chi: twirl_chi(o1, o2),
        zeta: twirl_zeta(o1, o2),
    })
}

/// A linear map on Herm₂ expected to preserve the determinant.
#[derive(Debug, Clone)]
pub enum DetPreservingMap {
    /// 𝒪 ↦ Λ𝒪Λ†
    Conjugation(SL2C),
    /// (t, x, y, z) ↦ (t, −x, −y, −z), i.e. 𝒪 ↦ Tr(𝒪)𝟙 − 𝒪
    Parity,
    /// Arbitrary η-preserving matrix acting on Pauli coordinates.
    Coordinates(LorentzMatrix4),
}

impl DetPreservingMap {
    pub fn identity() -> Self {
        DetPreservingMap::Conjugation(SL2C::identity())
    }

    /// Validates η-preservation of a raw 4x4 matrix.
    pub fn from_entries(entries: [[f64; 4]; 4]) -> Result<Self> {
        Ok(DetPreservingMap::Coordinates(LorentzMatrix4::new(entries)?))
    }

    pub fn apply(&self, o: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            DetPreservingMap::Conjugation(lam) => Ok(lam.conjugate(o).hermitian_part()),
            DetPreservingMap::Parity => Ok(herm_from_vector(vector_from_herm(o)?.parity())),
            DetPreservingMap::Coordinates(l) => Ok(herm_from_vector(l.apply(vector_from_herm(o)?))),
        }
    }
}

/// Outcome of [`correlator_symmetry_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub trials: usize,
    /// max |𝒞(𝒪₁,𝒪₂) − 𝒞(L𝒪₁, L𝒪₂)|
    pub max_deviation: f64,
    /// max(1, largest |𝒞| seen)
    pub scale: f64,
}

impl SymmetryCheck {
    pub fn pass(&self) -> bool {
        self.max_deviation <= SYMMETRY_TOL * self.scale
    }
}

/// Random observable with standard-normal Pauli coordinates.
pub fn random_observable<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    herm_from_vector(MinkowskiVector::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ))
}

pub fn correlator_symmetry_check(map: &DetPreservingMap, trials: usize, rng_seed: u64) -> Result<SymmetryCheck> {
    if trials == 0 {
        return Err(Error::Argument("need at least one trial".into()));
    }
    if let DetPreservingMap::Coordinates(l) = map {
        LorentzMatrix4::new(*l.entries())?;
    }
    let mut rng = rng_from_seed(rng_seed);
    let mut max_deviation = 0.0f64;
    let mut scale = 1.0f64;
    for _ in 0..trials {
        let o1 = random_observable(&mut rng);
        let o2 = random_observable(&mut rng);
        let before = singlet_correlation(&o1, &o2)?;
        let after = singlet_correlation(&map.apply(&o1)?, &map.apply(&o2)?)?;
        max_deviation = max_deviation.max((before - after).abs());
        scale = scale.max(before.abs()).max(after.abs());
    }
    Ok(SymmetryCheck {
        trials,
        max_deviation,
        scale,
    })
}
