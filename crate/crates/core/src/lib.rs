//! Lorentzian invariants of multi-qubit states.
//!
//! Local SL(2,C) actions `ρ ↦ (Λ₁⊗⋯⊗Λ_n) ρ (Λ₁⊗⋯⊗Λ_n)†` leave the spectrum
//! of the W-matrix `ρρ⋆` unchanged. This crate computes that spectrum and
//! the scalars derived from it (linear entropy, concurrence, the linear
//! n-partite mutual information), the spin homomorphism onto the Lorentz
//! group, and the singlet correlator viewed as the Minkowski metric on
//! qubit observables. Every identity is checkable numerically; the `cli`
//! module drives seeded experiments and emits JSON reports.
//!
//! ```
//! use lorentz_qubits::invariants::{concurrence, linear_mutual_info_trace};
//! use lorentz_qubits::lorentz::boost;
//! use lorentz_qubits::states::{apply_local, preset, LocalAction, Preset};
//!
//! # fn main() -> lorentz_qubits::Result<()> {
//! let singlet = preset(Preset::Singlet)?;
//! let lam = boost([0.0, 0.0, 1.0], 1.5)?;
//! let moved = apply_local(&singlet, &LocalAction::new(vec![lam.clone(), lam])?)?;
//! assert!((linear_mutual_info_trace(&moved) - 1.0).abs() < 1e-9);
//! assert!((concurrence(&moved)? - 1.0).abs() < 1e-9);
//! # Ok(())
//! # }
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod correlation;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod lorentz;
pub mod seed;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianCheckTolerance};
pub use lorentz::{LorentzMatrix4, MinkowskiVector, SL2C};
pub use states::{LocalAction, Preset, QubitState, StateKind};
