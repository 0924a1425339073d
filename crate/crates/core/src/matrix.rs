//! Dense complex matrices for small operator algebra.
//!
//! Everything in this crate lives on 2x2, 4x4 or 8x8 matrices, so the
//! representation is a plain row-major `Vec<Complex64>` with eager
//! arithmetic. Hermitian eigendecompositions are delegated to nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute per-entry tolerance for structural identities.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for spectral quantities (eigenvalues, optimized probabilities).
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Serialized form: complex entries as `[re, im]` pairs, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.rows * r.cols != r.entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix with {} entries",
                r.rows,
                r.cols,
                r.entries.len()
            )));
        }
        Ok(ComplexMatrix {
            rows: r.rows,
            cols: r.cols,
            entries: r.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entry by entry from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, entries }
    }

    /// Builds a matrix from nested row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        ComplexMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.iter().flatten().copied().collect(),
        }
    }

    /// Builds a matrix from real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    /// Column vector |i> in a `dim`-dimensional space.
    pub fn basis_ket(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        Self::from_fn(dim, 1, |r, _| {
            Complex64::new(if r == index { 1.0 } else { 0.0 }, 0.0)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Copies the `nrows x ncols` block starting at `(row0, col0)`.
    pub fn block(&self, row0: usize, col0: usize, nrows: usize, ncols: usize) -> Self {
        assert!(row0 + nrows <= self.rows && col0 + ncols <= self.cols);
        Self::from_fn(nrows, ncols, |r, c| self[(row0 + r, col0 + c)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference |a_ij - b_ij|. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise comparison under an explicit absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    /// max |M - M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// max |M†M - I|.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.dagger() * self).max_abs_diff(&Self::identity(self.cols))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_defect() <= tol
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().copied())
    }

    /// Eigendecomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues in ascending order together with the matching
    /// orthonormal eigenvectors as columns. Fails if the matrix is not
    /// Hermitian within 1e-10.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        let defect = self.hermiticity_defect();
        if !self.is_square() || defect > 1e-10 {
            return Err(Error::NotHermitian { defect });
        }
        let se = self.to_na().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let eigenvectors =
            ComplexMatrix::from_fn(self.rows, self.rows, |r, c| se.eigenvectors[(r, order[c])]);
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Smallest eigenvalue of a Hermitian matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigen()?.eigenvalues[0])
    }

    /// Singular values in descending order.
    ///
    /// Singular values carry only absolute O(eps) error, so spectral
    /// quantities that would otherwise take square roots of near-zero
    /// eigenvalues (fidelity, concurrence) are computed through them.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = self.to_na().svd(false, false);
        let mut vals: Vec<f64> = svd.singular_values.iter().copied().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// Positive-semidefinite square root via eigendecomposition, with
    /// negative eigenvalues (numerical noise) clamped to zero.
    pub fn psd_sqrt(&self) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eigen()?;
        let n = self.rows;
        let v = &eig.eigenvectors;
        let mut scaled = v.clone();
        for c in 0..n {
            let s = Complex64::new(eig.eigenvalues[c].max(0.0).sqrt(), 0.0);
            for r in 0..n {
                scaled[(r, c)] *= s;
            }
        }
        Ok(&scaled * &v.dagger())
    }
}

/// Result of a Hermitian eigendecomposition: ascending eigenvalues and the
/// matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Largest eigenvalue with its eigenvector.
    pub fn max_pair(&self) -> (f64, Vec<Complex64>) {
        let last = self.eigenvalues.len() - 1;
        let vec = (0..self.eigenvectors.rows())
            .map(|r| self.eigenvectors[(r, last)])
            .collect();
        (self.eigenvalues[last], vec)
    }
}

/// Kronecker product; dimensions multiply.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Largest eigenvalue of a Hermitian matrix together with a unit-norm
/// eigenvector. Fails on non-Hermitian input (defect above 1e-10).
pub fn max_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<(f64, Vec<Complex64>)> {
    Ok(m.hermitian_eigen()?.max_pair())
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl std::ops::Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for multiplication");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl std::ops::Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{sigma_x, sigma_z};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert!(tensor(&i2, &i2).approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn tensor_bit_flips_both_registers() {
        let xx = tensor(&sigma_x(), &sigma_x());
        let ket00 = ComplexMatrix::basis_ket(4, 0);
        let ket11 = ComplexMatrix::basis_ket(4, 3);
        assert!((&xx * &ket00).approx_eq(&ket11, STRUCTURAL_TOL));
    }

    #[test]
    fn tensor_top_left_block_scales_by_first_entry() {
        // E (x) V has c * V as its top-left block for E = [[c, -s], [s, c]].
        let (cos8, sin8) = ((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
        let e = ComplexMatrix::from_real_rows(&[vec![cos8, -sin8], vec![sin8, cos8]]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v1 = ComplexMatrix::from_real_rows(&[vec![h, -h], vec![h, h]]);
        let prod = tensor(&e, &v1);
        assert!(prod.block(0, 0, 2, 2).approx_eq(&v1.scale_re(cos8), STRUCTURAL_TOL));
    }

    #[test]
    fn hermitian_eigen_of_sigma_z() {
        let (val, vec) = max_eigenvalue_hermitian(&sigma_z()).unwrap();
        assert!((val - 1.0).abs() < SPECTRAL_TOL);
        // eigenvector along |0>, up to phase
        assert!((vec[0].norm() - 1.0).abs() < SPECTRAL_TOL);
        assert!(vec[1].norm() < SPECTRAL_TOL);
    }

    #[test]
    fn hermitian_eigen_of_projector_onto_plus() {
        let half = 0.5;
        let m = ComplexMatrix::from_real_rows(&[vec![half, half], vec![half, half]]);
        let (val, vec) = max_eigenvalue_hermitian(&m).unwrap();
        assert!((val - 1.0).abs() < SPECTRAL_TOL);
        assert!((vec[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < SPECTRAL_TOL);
        assert!((vec[1].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < SPECTRAL_TOL);
    }

    #[test]
    fn max_eigenvalue_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(max_eigenvalue_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.5)],
            vec![c(0.5, -0.5), c(1.0, 0.0)],
        ]);
        let s = m.psd_sqrt().unwrap();
        assert!((&s * &s).approx_eq(&m, 1e-10));
    }

    #[test]
    fn serde_roundtrip_preserves_entries() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, -2.0), c(0.0, 0.25)],
            vec![c(-0.5, 0.0), c(3.0, 1.0)],
        ]);
        let json = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert!(m.approx_eq(&back, 0.0));
    }

    #[test]
    fn serde_rejects_inconsistent_shape() {
        let bad = r#"{"rows":2,"cols":2,"entries":[[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
