//! SL(2,C), its action on Hermitian 2x2 matrices, and the spin homomorphism
//! onto the restricted Lorentz group.
//!
//! A Hermitian matrix `t𝟙 + xX + yY + zZ` is identified with the Minkowski
//! vector `(t, x, y, z)`; its determinant is the Minkowski form
//! `t² − x² − y² − z²`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, det, herm_eig, pauli, ComplexMatrix, HermitianCheckTolerance};
use crate::seed::rng_from_seed;

/// Allowed |det − 1| for an SL(2,C) element.
pub const SL2C_DET_TOL: f64 = 1e-10;
/// Allowed ‖Lᵀ η L − η‖_max for a Lorentz matrix.
pub const LORENTZ_TOL: f64 = 1e-9;
/// Largest rapidity accepted by the constructors.
pub const MAX_RAPIDITY: f64 = 20.0;

const MIN_SAMPLE_DET: f64 = 1e-6;

/// Minkowski metric diag(1, −1, −1, −1).
pub const ETA: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
];

/// A 2x2 complex matrix of unit determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct SL2C(ComplexMatrix);

impl SL2C {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::Size(format!(
                "SL(2,C) element must be 2x2, got {}x{}",
                m.dim(),
                m.dim()
            )));
        }
        let d = det(&m);
        if (d - c(1.0, 0.0)).norm() > SL2C_DET_TOL {
            return Err(Error::Contract(format!(
                "determinant {:.3e}{:+.3e}i is not 1 within {SL2C_DET_TOL:e}",
                d.re, d.im
            )));
        }
        Ok(Self(m))
    }

    /// Rescales an invertible 2x2 matrix by the principal square root of its
    /// determinant.
    pub fn normalized(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::Size("SL(2,C) element must be 2x2".into()));
        }
        let d = det(m);
        if d.norm() == 0.0 {
            return Err(Error::Argument("cannot normalize a singular matrix".into()));
        }
        Self::new(m.scale(d.sqrt().inv()))
    }

    pub fn identity() -> Self {
        Self(ComplexMatrix::identity(2))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Closed-form inverse `[[d, −b], [−c, a]]`.
    pub fn inverse(&self) -> Self {
        let m = &self.0;
        Self(ComplexMatrix::from_2x2([
            [m[(1, 1)], -m[(0, 1)]],
            [-m[(1, 0)], m[(0, 0)]],
        ]))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.matmul(&other.0))
    }

    pub fn neg(&self) -> Self {
        Self(self.0.scale_real(-1.0))
    }

    /// ΛOΛ†
    pub fn conjugate(&self, o: &ComplexMatrix) -> ComplexMatrix {
        self.0.matmul(o).matmul(&self.0.adjoint())
    }

    /// Singular values (largest first).
    pub fn singular_values(&self) -> [f64; 2] {
        let gram = self.0.adjoint().matmul(&self.0);
        let eig =
            herm_eig(&gram.hermitian_part(), HermitianCheckTolerance::default()).expect("Gram matrix is Hermitian");
        [eig.eigenvalues[0].max(0.0).sqrt(), eig.eigenvalues[1].max(0.0).sqrt()]
    }
}

/// Pauli-basis coordinates of a Hermitian 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl MinkowskiVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// (t, −x, −y, −z)
    pub fn parity(self) -> Self {
        Self::new(self.t, -self.x, -self.y, -self.z)
    }
}

/// t𝟙 + xX + yY + zZ = [[t + z, x − iy], [x + iy, t − z]]
pub fn herm_from_vector(v: MinkowskiVector) -> ComplexMatrix {
    ComplexMatrix::from_2x2([[c(v.t + v.z, 0.0), c(v.x, -v.y)], [c(v.x, v.y), c(v.t - v.z, 0.0)]])
}

/// Inverse of [`herm_from_vector`]: `x_μ = Tr(h σ_μ) / 2`.
pub fn vector_from_herm(h: &ComplexMatrix) -> Result<MinkowskiVector> {
    if h.dim() != 2 {
        return Err(Error::Size(format!(
            "expected a 2x2 matrix, got {}x{}",
            h.dim(),
            h.dim()
        )));
    }
    h.ensure_hermitian(HermitianCheckTolerance::default())?;
    Ok(pauli_coordinates(h))
}

fn pauli_coordinates(h: &ComplexMatrix) -> MinkowskiVector {
    MinkowskiVector::new(
        0.5 * (h[(0, 0)] + h[(1, 1)]).re,
        0.5 * (h[(0, 1)] + h[(1, 0)]).re,
        0.5 * (h[(1, 0)] - h[(0, 1)]).im,
        0.5 * (h[(0, 0)] - h[(1, 1)]).re,
    )
}

pub fn minkowski_form(v: MinkowskiVector) -> f64 {
    v.t * v.t - v.x * v.x - v.y * v.y - v.z * v.z
}

/// A real 4x4 matrix acting on (t, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzMatrix4 {
    entries: [[f64; 4]; 4],
}

impl LorentzMatrix4 {
    /// Accepts any matrix preserving η within [`LORENTZ_TOL`] (improper and
    /// non-orthochronous elements included).
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        let l = Self { entries };
        let defect = l.metric_defect();
        if defect.is_nan() || defect > LORENTZ_TOL {
            return Err(Error::Contract(format!(
                "matrix does not preserve the Minkowski form (defect {defect:.3e})"
            )));
        }
        Ok(l)
    }

    pub fn identity() -> Self {
        Self {
            entries: ETA.map(|row| row.map(f64::abs)),
        }
    }

    /// Spatial inversion (t, x, y, z) ↦ (t, −x, −y, −z).
    pub fn parity() -> Self {
        Self { entries: ETA }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    pub fn apply(&self, v: MinkowskiVector) -> MinkowskiVector {
        let a = v.to_array();
        MinkowskiVector::from_array(std::array::from_fn(|i| (0..4).map(|j| self.entries[i][j] * a[j]).sum()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            entries: mat4_mul(&self.entries, &other.entries),
        }
    }

    /// ‖Lᵀ η L − η‖_max
    pub fn metric_defect(&self) -> f64 {
        let lt = std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i]));
        let g = mat4_mul(&mat4_mul(&lt, &ETA), &self.entries);
        max_abs_diff4(&g, &ETA)
    }

    pub fn determinant(&self) -> f64 {
        det4(&self.entries)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff4(&self.entries, &other.entries)
    }
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

fn max_abs_diff4(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut acc = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            acc = -acc;
        }
        acc *= a[col][col];
        for r in (col + 1)..4 {
            let f = a[r][col] / a[col][col];
            for j in col..4 {
                a[r][j] -= f * a[col][j];
            }
        }
    }
    acc
}

/// Image of Λ under SL(2,C) → SO⁺(1,3): column μ holds the Pauli
/// coordinates of Λ σ_μ Λ†.
pub fn spin_hom(lam: &SL2C) -> LorentzMatrix4 {
    let mut entries = [[0.0; 4]; 4];
    for mu in 0..4 {
        let v = pauli_coordinates(&lam.conjugate(&pauli::sigma(mu))).to_array();
        for (row, value) in v.into_iter().enumerate() {
            entries[row][mu] = value;
        }
    }
    LorentzMatrix4 { entries }
}

fn check_rapidity(rapidity: f64) -> Result<()> {
    if !rapidity.is_finite() || rapidity.abs() > MAX_RAPIDITY {
        return Err(Error::Range(format!(
            "rapidity {rapidity} outside [-{MAX_RAPIDITY}, {MAX_RAPIDITY}]"
        )));
    }
    Ok(())
}

/// diag(e^{η/2}, e^{−η/2})
pub fn boost_z(rapidity: f64) -> Result<SL2C> {
    check_rapidity(rapidity)?;
    let h = 0.5 * rapidity;
    Ok(SL2C(ComplexMatrix::from_real_diag(&[h.exp(), (-h).exp()])))
}

/// diag(e^{−iθ/2}, e^{iθ/2})
pub fn rotation_z(theta: f64) -> SL2C {
    let h = 0.5 * theta;
    SL2C(ComplexMatrix::from_diag(&[
        Complex64::from_polar(1.0, -h),
        Complex64::from_polar(1.0, h),
    ]))
}

fn axis_sigma(axis: [f64; 3]) -> Result<ComplexMatrix> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::Argument("axis must be a non-zero finite vector".into()));
    }
    let [x, y, z] = axis.map(|a| a / norm);
    Ok(herm_from_vector(MinkowskiVector::new(0.0, x, y, z)))
}

/// exp(η n·σ / 2) = cosh(η/2)𝟙 + sinh(η/2) n·σ
pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<SL2C> {
    check_rapidity(rapidity)?;
    let ns = axis_sigma(axis)?;
    let h = 0.5 * rapidity;
    let m = &ComplexMatrix::identity(2).scale_real(h.cosh()) + &ns.scale_real(h.sinh());
    SL2C::normalized(&m)
}

/// exp(−iθ n·σ / 2) = cos(θ/2)𝟙 − i sin(θ/2) n·σ
pub fn rotation(axis: [f64; 3], theta: f64) -> Result<SL2C> {
    let ns = axis_sigma(axis)?;
    let h = 0.5 * theta;
    let m = &ComplexMatrix::identity(2).scale_real(h.cos()) + &ns.scale(c(0.0, -h.sin()));
    SL2C::normalized(&m)
}

/// Random SL(2,C) element with singular-value ratio at most e^{max_rapidity}.
///
/// A complex Ginibre 2x2 draw is normalized by the principal square root of
/// its determinant. If its singular values are too spread, the positive
/// factor of the polar decomposition is replaced by one with the largest
/// allowed ratio, keeping both the unitary factor and the eigenbasis.
pub fn sample_sl2c<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> Result<SL2C> {
    if !(max_rapidity > 0.0 && max_rapidity <= MAX_RAPIDITY) {
        return Err(Error::Range(format!(
            "max_rapidity {max_rapidity} outside (0, {MAX_RAPIDITY}]"
        )));
    }
    let m = loop {
        let data: Vec<Complex64> = (0..4)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let g = ComplexMatrix::from_vec_unchecked(2, data);
        let d = det(&g);
        if d.norm() >= MIN_SAMPLE_DET {
            break g.scale(d.sqrt().inv());
        }
    };

    let gram = m.adjoint().matmul(&m).hermitian_part();
    let eig = herm_eig(&gram, HermitianCheckTolerance::default())?;
    let s_max = eig.eigenvalues[0].max(0.0).sqrt();
    let s_min = eig.eigenvalues[1].max(0.0).sqrt();
    let limit = max_rapidity.exp();

    let m = if s_max > limit * s_min {
        let target_max = (0.5 * max_rapidity).exp();
        let target_min = (-0.5 * max_rapidity).exp();
        let factors = [target_max / s_max, target_min / s_min];
        let rescale = eig.reconstruct_with(|l| {
            if l >= 0.5 * (eig.eigenvalues[0] + eig.eigenvalues[1]) {
                factors[0]
            } else {
                factors[1]
            }
        });
        m.matmul(&rescale)
    } else {
        m
    };
    SL2C::normalized(&m)
}

/// Seeded form of [`sample_sl2c`].
pub fn random_sl2c(rng_seed: u64, max_rapidity: f64) -> Result<SL2C> {
    sample_sl2c(&mut rng_from_seed(rng_seed), max_rapidity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn herm_vector_examples() {
        let id = herm_from_vector(MinkowskiVector::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(id, ComplexMatrix::identity(2));
        let h = herm_from_vector(MinkowskiVector::new(1.0, 0.0, 0.0, 1.0));
        assert_eq!(h, ComplexMatrix::from_real_diag(&[2.0, 0.0]));
        assert_eq!(
            vector_from_herm(&pauli::x()).unwrap(),
            MinkowskiVector::new(0.0, 1.0, 0.0, 0.0)
        );
        assert_eq!(
            vector_from_herm(&pauli::y()).unwrap(),
            MinkowskiVector::new(0.0, 0.0, 1.0, 0.0)
        );
    }

    #[test]
    fn vector_from_herm_rejects_non_hermitian() {
        let m = ComplexMatrix::from_2x2([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(vector_from_herm(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn minkowski_form_examples() {
        assert_eq!(minkowski_form(MinkowskiVector::new(1.0, 0.0, 0.0, 0.0)), 1.0);
        assert_eq!(minkowski_form(MinkowskiVector::new(1.0, 1.0, 0.0, 0.0)), 0.0);
        assert_eq!(minkowski_form(MinkowskiVector::new(2.0, 1.0, 1.0, 1.0)), 1.0);
    }

    #[test]
    fn spin_hom_identity_and_kernel() {
        assert_eq!(spin_hom(&SL2C::identity()), LorentzMatrix4::identity());
        assert_eq!(spin_hom(&SL2C::identity().neg()), LorentzMatrix4::identity());
    }

    #[test]
    fn spin_hom_of_z_boost_is_cosh_sinh() {
        for eta in [0.5, 1.0, 2.0, -1.3] {
            let l = spin_hom(&boost_z(eta).unwrap());
            let (ch, sh) = (eta.cosh(), eta.sinh());
            let expected = [
                [ch, 0.0, 0.0, sh],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [sh, 0.0, 0.0, ch],
            ];
            assert!(max_abs_diff4(l.entries(), &expected) < 1e-12, "eta = {eta}");
        }
    }

    #[test]
    fn spin_hom_of_z_rotation() {
        let theta = 0.7;
        let l = spin_hom(&rotation_z(theta));
        let (co, si) = (theta.cos(), theta.sin());
        let expected = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, co, -si, 0.0],
            [0.0, si, co, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert!(max_abs_diff4(l.entries(), &expected) < 1e-14);
    }

    #[test]
    fn generator_examples() {
        assert_eq!(boost_z(0.0).unwrap(), SL2C::identity());
        let r = rotation_z(2.0 * PI);
        assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0)) < 1e-15);
        assert!(matches!(boost_z(20.5), Err(Error::Range(_))));
        assert!(matches!(boost_z(f64::NAN), Err(Error::Range(_))));
    }

    #[test]
    fn axis_generators_match_z_forms() {
        let b = boost([0.0, 0.0, 2.0], 1.1).unwrap();
        assert!(b.matrix().max_abs_diff(boost_z(1.1).unwrap().matrix()) < 1e-14);
        let r = rotation([0.0, 0.0, 1.0], 0.4).unwrap();
        assert!(r.matrix().max_abs_diff(rotation_z(0.4).matrix()) < 1e-15);
        assert!(boost([0.0, 0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn sl2c_new_checks_determinant() {
        assert!(SL2C::new(ComplexMatrix::from_real_diag(&[2.0, 1.0])).is_err());
        assert!(SL2C::new(ComplexMatrix::identity(3)).is_err());
        let s = SL2C::normalized(&ComplexMatrix::from_real_diag(&[2.0, 1.0])).unwrap();
        assert!((det(s.matrix()) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn random_sl2c_postconditions() {
        for seed in 0..200 {
            let s = random_sl2c(seed, 2.0).unwrap();
            assert!((det(s.matrix()) - c(1.0, 0.0)).norm() <= SL2C_DET_TOL);
            let [hi, lo] = s.singular_values();
            assert!(hi / lo <= 2f64.exp() + 1e-6, "seed {seed}: ratio {}", hi / lo);
        }
        assert_eq!(random_sl2c(42, 1.0).unwrap(), random_sl2c(42, 1.0).unwrap());
        assert!(matches!(random_sl2c(1, 0.0), Err(Error::Range(_))));
        assert!(matches!(random_sl2c(1, 21.0), Err(Error::Range(_))));
    }

    #[test]
    fn clamp_is_active_for_small_limits() {
        // With a tight limit most draws exceed it, so the clamp sets the ratio exactly.
        let mut hit = 0;
        for seed in 0..50 {
            let [hi, lo] = random_sl2c(seed, 0.1).unwrap().singular_values();
            let r = hi / lo;
            assert!(r <= 0.1f64.exp() + 1e-9);
            if (r - 0.1f64.exp()).abs() < 1e-9 {
                hit += 1;
            }
        }
        assert!(hit > 25);
    }

    #[test]
    fn parity_preserves_metric_but_is_improper() {
        let p = LorentzMatrix4::parity();
        assert_eq!(p.metric_defect(), 0.0);
        assert_eq!(p.determinant(), -1.0);
        assert!(LorentzMatrix4::new([
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0]
        ])
        .is_err());
    }
}
