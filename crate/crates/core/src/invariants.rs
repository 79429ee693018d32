//! Scalar invariants of (possibly un-normalized) n-qubit states.
//!
//! The linear n-partite mutual information I_L is computed two ways: as the
//! alternating sum of linear entropies over all non-empty qubit subsets, and
//! as Tr(ρρ⋆). The two must agree for every state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{reduce, w_matrix, w_spectrum, QubitState, MAX_QUBITS};

/// Subsets entering the alternating sum: the full set is included, the
/// empty set (whose linear entropy is identically zero) is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetSignConvention;

impl SubsetSignConvention {
    pub const INCLUDE_FULL_SET: bool = true;
    pub const INCLUDE_EMPTY_SET: bool = false;
}

/// All invariants of a single state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub linear_entropy: f64,
    #[serde(rename = "trace_W")]
    pub trace_w: f64,
    pub spectral_invariants: Vec<f64>,
    pub concurrence: Option<f64>,
    pub i_l_subset: f64,
    pub i_l_trace: f64,
}

/// S_L(ρ) = Tr(ρ)² − Tr(ρ²)
pub fn linear_entropy(s: &QubitState) -> f64 {
    let rho = s.rho();
    let tr = rho.trace().re;
    // Tr(ρ²) = Σ|ρ_ij|² for Hermitian ρ.
    let purity: f64 = rho.entries().iter().map(|z| z.norm_sqr()).sum();
    tr * tr - purity
}

/// Power sums p_k = Σ λ_i^k of the W-spectrum, k = 1..=dim.
pub fn w_power_sums(s: &QubitState) -> Vec<f64> {
    power_sums(&w_spectrum(s))
}

fn power_sums(spectrum: &[f64]) -> Vec<f64> {
    let d = spectrum.len();
    let mut powers = spectrum.to_vec();
    let mut sums = Vec::with_capacity(d);
    for _ in 0..d {
        sums.push(powers.iter().sum());
        for (p, &l) in powers.iter_mut().zip(spectrum) {
            *p *= l;
        }
    }
    sums
}

/// Elementary symmetric polynomials from power sums (Newton's identities):
/// k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i.
pub fn elementary_from_power_sums(p: &[f64]) -> Vec<f64> {
    let mut e = Vec::with_capacity(p.len() + 1);
    e.push(1.0);
    for k in 1..=p.len() {
        let mut acc = 0.0;
        for i in 1..=k {
            let term = e[k - i] * p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / k as f64);
    }
    e.remove(0);
    e
}

/// e_1..e_{2ⁿ} of the W-spectrum. e_1 = Tr(W).
pub fn spectral_invariants(s: &QubitState) -> Vec<f64> {
    elementary_from_power_sums(&w_power_sums(s))
}

/// Eigenvalues below this multiple of ε·λ_max are rounding noise and are
/// zeroed before square roots in [`concurrence`].
pub const CONCURRENCE_NOISE_ULPS: f64 = 8.0;

/// max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄} over the descending W-spectrum of a
/// 2-qubit state. No renormalization is applied.
pub fn concurrence(s: &QubitState) -> Result<f64> {
    if s.n() != 2 {
        return Err(Error::Argument(format!("concurrence needs 2 qubits, got {}", s.n())));
    }
    let spectrum = w_spectrum(s);
    let floor = CONCURRENCE_NOISE_ULPS * f64::EPSILON * spectrum[0];
    let roots: Vec<f64> = spectrum
        .iter()
        .map(|&l| if l <= floor { 0.0 } else { l.sqrt() })
        .collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Qubit labels (1-based) selected by the bits of `mask`.
fn subset_of(mask: usize, n: usize) -> Vec<usize> {
    (1..=n).filter(|q| mask >> (q - 1) & 1 == 1).collect()
}

/// Σ_{∅ ≠ A ⊆ {1..n}} (−1)^{|A|+1} S_L(ρ_A)
pub fn linear_mutual_info_subsets(s: &QubitState) -> Result<f64> {
    let n = s.n();
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!(
            "subset sum supports 1..={MAX_QUBITS} qubits, got {n}"
        )));
    }
    let mut total = 0.0;
    for mask in 1usize..(1 << n) {
        let subset = subset_of(mask, n);
        let s_l = linear_entropy(&reduce(s, &subset)?);
        if subset.len() % 2 == 1 {
            total += s_l;
        } else {
            total -= s_l;
        }
    }
    Ok(total)
}

/// Re Tr(W)
pub fn linear_mutual_info_trace(s: &QubitState) -> f64 {
    w_matrix(s).trace().re
}

pub fn invariant_report(s: &QubitState) -> Result<InvariantSet> {
    let i_l_trace = linear_mutual_info_trace(s);
    let concurrence = if s.n() == 2 { Some(concurrence(s)?) } else { None };
    Ok(InvariantSet {
        linear_entropy: linear_entropy(s),
        trace_w: i_l_trace,
        spectral_invariants: spectral_invariants(s),
        concurrence,
        i_l_subset: linear_mutual_info_subsets(s)?,
        i_l_trace,
    })
}

/// |a − b| / max(1, |b|)
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
