//! Complex-matrix kernels behind every capacity expression.
//!
//! Only what the capacity math needs: Hermitian Gram products, the
//! `log2 det(sA + I)` mutual-information kernel and a Moore-Penrose
//! pseudo-inverse for wide, full-row-rank channel matrices.

use std::fmt;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::LinalgError;

/// Relative singular-value cutoff below which a channel is treated as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Relative tolerance (against the trace) for accepting tiny negative eigenvalues.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::StorageLength {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(idx) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: idx / cols,
                col: idx % cols,
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Builds a matrix entry by entry. Panics on a zero dimension or a non-finite entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let inner = DMatrix::from_fn(rows, cols, |r, c| {
            let z = f(r, c);
            assert!(z.re.is_finite() && z.im.is_finite(), "non-finite entry at ({r}, {c})");
            z
        });
        Self { inner }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Complex64::ONE } else { Complex64::ZERO })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::ZERO)
    }

    /// Real row-major entries, a convenience for tests and small literals.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        let z: Vec<Complex64> = entries.iter().map(|&re| Complex64::new(re, 0.0)).collect();
        Self::from_row_major(rows, cols, &z)
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.inner[(r, c)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    /// Squared Frobenius norm, i.e. `trace(A A^H)`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols() != rhs.rows() {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                lhs: (self.rows(), self.cols()),
                rhs: (rhs.rows(), rhs.cols()),
            });
        }
        Ok(Self {
            inner: &self.inner * &rhs.inner,
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(LinalgError::DimensionMismatch {
                op: "add",
                lhs: (self.rows(), self.cols()),
                rhs: (rhs.rows(), rhs.cols()),
            });
        }
        Ok(Self {
            inner: &self.inner + &rhs.inner,
        })
    }

    /// Max-abs entrywise distance; matrices of different shape are infinitely far apart.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.inner.clone().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub(crate) fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                let z = self.inner[(r, c)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix addition with mismatched shapes")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product with mismatched shapes")
    }
}

/// `H H^H`.
pub fn hermitian_gram(h: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        inner: &h.inner * h.inner.adjoint(),
    }
}

/// `log2 det(scale * A + I)` for Hermitian PSD `A`, in bits.
///
/// `A` is symmetrized as `(A + A^H) / 2` first. The determinant is taken from
/// the diagonal of a Cholesky factor, so it never overflows at high SNR.
pub fn log_det_capacity(a: &ComplexMatrix, scale: f64) -> Result<f64, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !scale.is_finite() || scale < 0.0 {
        return Err(LinalgError::InvalidScale(scale));
    }
    let n = a.rows();
    let sym = symmetrize(a.as_nalgebra());

    // A + tol*I is positive definite iff every eigenvalue of A exceeds -tol.
    let trace = sym.trace().re;
    let tol = PSD_TOLERANCE * trace.max(0.0) + f64::MIN_POSITIVE;
    let mut shifted = sym.clone();
    for i in 0..n {
        shifted[(i, i)] += tol;
    }
    if cholesky_log_diag(&shifted).is_none() {
        return Err(LinalgError::NotPositiveSemidefinite { trace });
    }

    let mut target = sym * Complex64::new(scale, 0.0);
    for i in 0..n {
        target[(i, i)] += Complex64::ONE;
    }
    let log_diag = cholesky_log_diag(&target).ok_or(LinalgError::NotPositiveSemidefinite { trace })?;
    // det = prod(L_ii)^2
    Ok((2.0 * log_diag / std::f64::consts::LN_2).max(0.0))
}

/// Moore-Penrose pseudo-inverse of a full-rank matrix.
///
/// Channels are wide (`rows <= cols`) and need full row rank; tall inputs
/// such as a pseudo-inverse itself need full column rank. Computed from the
/// thin SVD `H = U S V^H` as `V S^-1 U^H`. Rank is judged by the
/// smallest-to-largest singular value ratio against [`RANK_TOLERANCE`].
pub fn pseudo_inverse(h: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let svd = h.inner.clone().svd(true, true);
    let u = svd.u.as_ref().ok_or(LinalgError::SvdFailed)?;
    let v_t = svd.v_t.as_ref().ok_or(LinalgError::SvdFailed)?;
    let sigma = &svd.singular_values;

    let largest = sigma.iter().copied().fold(0.0, f64::max);
    let smallest = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = if largest > 0.0 { smallest / largest } else { 0.0 };
    if ratio.is_nan() || ratio <= RANK_TOLERANCE {
        return Err(LinalgError::Singular { ratio });
    }

    // V S^-1 U^H, with U: rows x k, V^H: k x cols, k = min(rows, cols).
    let mut v_scaled = v_t.adjoint();
    for (j, s) in sigma.iter().enumerate() {
        let inv = Complex64::new(1.0 / s, 0.0);
        v_scaled.column_mut(j).iter_mut().for_each(|z| *z *= inv);
    }
    Ok(ComplexMatrix {
        inner: v_scaled * u.adjoint(),
    })
}

fn symmetrize(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Natural log of the product of Cholesky diagonal entries, or `None` if a
/// pivot is not strictly positive.
fn cholesky_log_diag(a: &DMatrix<Complex64>) -> Option<f64> {
    let n = a.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    let mut log_sum = 0.0;
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !d.is_finite() || d <= 0.0 {
            return None;
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        log_sum += ljj.ln();
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Some(log_sum)
}
