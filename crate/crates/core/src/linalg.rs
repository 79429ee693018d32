//! Dense complex matrix kernel.
//!
//! Storage is row-major. For multi-qubit operators, qubit 1 is the most
//! significant tensor slot: basis index `b` has qubit `q` (1-based) in bit
//! `n - q`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix dimension any constructor or product will produce.
pub const MAX_DIM: usize = 1 << 12;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Absolute entrywise tolerance used when checking Hermiticity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianCheckTolerance {
    atol: f64,
}

impl HermitianCheckTolerance {
    pub fn new(atol: f64) -> Result<Self> {
        if !atol.is_finite() || atol < 0.0 {
            return Err(Error::Argument(format!(
                "tolerance must be finite and >= 0, got {atol}"
            )));
        }
        Ok(Self { atol })
    }

    pub fn atol(&self) -> f64 {
        self.atol
    }
}

impl Default for HermitianCheckTolerance {
    fn default() -> Self {
        Self { atol: 1e-10 }
    }
}

/// Square dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Size(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument(format!(
                "non-finite entry at ({}, {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Size(format!(
                "row of length {} in a {dim}-row matrix",
                bad.len()
            )));
        }
        Self::from_vec(dim, rows.concat())
    }

    /// Fixed-size convenience constructor for the 2x2 case.
    pub fn from_2x2(entries: [[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![entries[0][0], entries[0][1], entries[1][0], entries[1][1]],
        }
    }

    pub(crate) fn from_vec_unchecked(dim: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// The rank-one matrix |v><v|.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in trace_product");
        let n = self.dim;
        let mut acc = c(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |m[i,j] - conj(m[j,i])|.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn ensure_hermitian(&self, tol: HermitianCheckTolerance) -> Result<()> {
        let asymmetry = self.hermitian_asymmetry();
        if asymmetry > tol.atol() {
            return Err(Error::NotHermitian {
                asymmetry,
                tolerance: tol.atol(),
            });
        }
        Ok(())
    }

    /// (m + m†) / 2
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = c(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = avg;
                out[(j, i)] = avg.conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in apply");
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|k| self.data[i * n + k] * v[k]).sum())
            .collect()
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() <= 1e-14 * scale {
                return Err(Error::Argument("matrix is singular to working precision".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let av = a[(col, j)];
                    let iv = inv[(col, j)];
                    a[(r, j)] -= f * av;
                    inv[(r, j)] -= f * iv;
                }
            }
        }
        Ok(inv)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Size("dimension must be positive".into()));
    }
    if dim > MAX_DIM {
        return Err(Error::Size(format!("dimension {dim} exceeds maximum {MAX_DIM}")));
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Pauli matrices in the order (1, X, Y, Z).
pub mod pauli {
    use super::{c, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_2x2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_2x2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_2x2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    /// sigma_mu for mu in 0..4.
    pub fn sigma(mu: usize) -> ComplexMatrix {
        match mu {
            0 => identity(),
            1 => x(),
            2 => y(),
            3 => z(),
            _ => panic!("Pauli index {mu} out of range 0..4"),
        }
    }
}

/// Kronecker product; `(a ⊗ b)[i·db + k, j·db + l] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (da, db) = (a.dim, b.dim);
    let dim = da
        .checked_mul(db)
        .filter(|&d| d <= MAX_DIM)
        .ok_or_else(|| Error::Size(format!("kron of {da}x{da} and {db}x{db} exceeds {MAX_DIM} rows")))?;
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a non-empty list, left to right.
pub fn kron_all<'a, I>(factors: I) -> Result<ComplexMatrix>
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut iter = factors.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Argument("kron of an empty list".into()))?
        .clone();
    iter.try_fold(first, |acc, m| kron(&acc, m))
}

/// Number of qubits `n` with `2^n == dim`, if any.
pub fn qubit_count(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Reduced matrix on the qubits in `keep` (1-based), which keep their
/// relative order.
pub fn partial_trace(rho: &ComplexMatrix, n: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    if n == 0 || n > 12 || rho.dim != 1 << n {
        return Err(Error::Size(format!(
            "matrix of dimension {} is not a {n}-qubit operator",
            rho.dim
        )));
    }
    if keep.is_empty() {
        return Err(Error::Argument("kept subsystem must be non-empty".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    if let Some(&bad) = kept.iter().find(|&&q| q == 0 || q > n) {
        return Err(Error::Argument(format!("qubit index {bad} outside 1..={n}")));
    }
    if kept.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Argument(format!("duplicate qubit index in {keep:?}")));
    }
    if kept.len() == n {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
    let bit = |q: usize| n - q;

    // Spread the bits of a compact index onto the given qubit positions.
    let scatter = |compact: usize, qubits: &[usize]| -> usize {
        let m = qubits.len();
        qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let b = (compact >> (m - 1 - pos)) & 1;
            acc | (b << bit(q))
        })
    };

    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let kept_offsets: Vec<usize> = (0..dk).map(|i| scatter(i, &kept)).collect();
    let traced_offsets: Vec<usize> = (0..dt).map(|t| scatter(t, &traced)).collect();

    let mut out = ComplexMatrix::zeros(dk);
    for (i, &ri) in kept_offsets.iter().enumerate() {
        for (j, &cj) in kept_offsets.iter().enumerate() {
            let mut acc = c(0.0, 0.0);
            for &t in &traced_offsets {
                acc += rho[(ri | t, cj | t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Hermitian eigendecomposition: eigenvalues descending, eigenvectors as
/// the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V · diag(f(λ)) · V†
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = c(0.0, 0.0);
                for (k, &wk) in w.iter().enumerate() {
                    if wk != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * wk;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = c(out[(i, i)].re, 0.0);
        }
        out
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
pub fn herm_eig(m: &ComplexMatrix, tol: HermitianCheckTolerance) -> Result<HermitianEigen> {
    m.ensure_hermitian(tol)?;
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let floor = (f64::EPSILON * 1e-3 * frob).max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= floor {
                    continue;
                }
                // Negligible relative to both diagonal entries.
                let dp = a[(p, p)].re.abs();
                let dq = a[(q, q)].re.abs();
                if dp + 1e3 * mag == dp && dq + 1e3 * mag == dq {
                    continue;
                }
                rotated = true;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Phase makes the (p,q) entry real, then a real Jacobi rotation
                // annihilates it.
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let pc = phase.conj();
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let g00 = c(cs, 0.0);
                let g01 = c(sn, 0.0);
                let g10 = pc * -sn;
                let g11 = pc * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g00 + akq * g10;
                    a[(k, q)] = akp * g01 + akq * g11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
                    a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[(p, q)] = c(0.0, 0.0);
                a[(q, p)] = c(0.0, 0.0);
                a[(p, p)] = c(a[(p, p)].re, 0.0);
                a[(q, q)] = c(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g00 + vkq * g10;
                    v[(k, q)] = vkp * g01 + vkq * g11;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)];
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Relative threshold below which a negative eigenvalue is treated as a
/// genuine positivity violation rather than rounding drift.
pub const PSD_CLAMP_RELATIVE: f64 = 1e-10;

/// Positive square root of a Hermitian PSD matrix.
pub fn mat_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m, HermitianCheckTolerance::default())?;
    let threshold = -PSD_CLAMP_RELATIVE * m.max_abs();
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < threshold {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
            threshold,
        });
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Determinant; closed form for 2x2, partially pivoted LU otherwise.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim;
    match n {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => {
            let mut a = m.clone();
            let mut acc = c(1.0, 0.0);
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                    .unwrap_or(col);
                let pv = a[(pivot, col)];
                if pv.re == 0.0 && pv.im == 0.0 {
                    return c(0.0, 0.0);
                }
                if pivot != col {
                    for j in 0..n {
                        a.data.swap(pivot * n + j, col * n + j);
                    }
                    acc = -acc;
                }
                acc *= pv;
                for r in (col + 1)..n {
                    let f = a[(r, col)] / pv;
                    if f.re == 0.0 && f.im == 0.0 {
                        continue;
                    }
                    for j in col..n {
                        let x = a[(col, j)];
                        a[(r, j)] -= f * x;
                    }
                }
            }
            acc
        }
    }
}

/// Coefficients `[c_0, …, c_{d-1}]` of the monic characteristic polynomial
/// det(λ𝟙 − m) = λ^d + c_{d−1}λ^{d−1} + … + c_0 (Faddeev–LeVerrier).
pub fn char_poly_coeffs(m: &ComplexMatrix) -> Vec<Complex64> {
    let d = m.dim;
    let mut coeffs = vec![c(0.0, 0.0); d + 1];
    coeffs[d] = c(1.0, 0.0);
    // M_k = m·M_{k−1} + c_{d−k+1}·𝟙, starting from M_0 = 0.
    let mut mk = ComplexMatrix::zeros(d);
    for k in 1..=d {
        let mut next = m.matmul(&mk);
        let shift = coeffs[d - k + 1];
        for i in 0..d {
            next[(i, i)] += shift;
        }
        mk = next;
        coeffs[d - k] = -m.trace_product(&mk) / (k as f64);
    }
    coeffs.truncate(d);
    coeffs
}

/// Thin QR by modified Gram–Schmidt; returns (Q, diag(R)).
pub fn gram_schmidt_qr(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let n = m.dim;
    let mut q = m.clone();
    let mut r_diag = Vec::with_capacity(n);
    for j in 0..n {
        for k in 0..j {
            let mut proj = c(0.0, 0.0);
            for i in 0..n {
                proj += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..n {
                let qik = q[(i, k)];
                q[(i, j)] -= proj * qik;
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            return Err(Error::Argument("rank-deficient input to QR".into()));
        }
        for i in 0..n {
            q[(i, j)] /= norm;
        }
        r_diag.push(c(norm, 0.0));
    }
    Ok((q, r_diag))
}
