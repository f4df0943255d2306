//! Dense complex linear algebra used by every classifier.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. PSD decisions use a
//! relative threshold `-tol * (1 + ||M||_inf)` so that moment matrices and
//! operator blocks of very different magnitude are judged consistently.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Default relative tolerance for PSD and residual tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative tolerance for the Hermiticity precondition of eigenvalue routines.
pub const HERMITIAN_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real row-major rows.
pub fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    DMatrix::from_fn(r, cols, |i, j| c(rows[i][j], 0.0))
}

pub fn diag(values: &[Complex64]) -> ComplexMatrix {
    DMatrix::from_diagonal(&DVector::from_column_slice(values))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    DMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c(values[i], 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::zeros(rows, cols)
}

/// Induced infinity norm (maximum absolute row sum).
pub fn norm_inf(m: &ComplexMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

fn ensure_same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    ensure_square(a)?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// `ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_square(a, b)?;
    Ok(a * b - b * a)
}

/// `T*T - TT*`.
pub fn self_commutator(t: &ComplexMatrix) -> ComplexMatrix {
    let adj = t.adjoint();
    &adj * t - t * &adj
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
fn sorted_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_square(m)?;
    let deviation = norm_inf(&(m - m.adjoint()));
    if deviation > HERMITIAN_TOL * (1.0 + norm_inf(m)) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(sorted_eigen(m).0)
}

/// Scales a vector so that its first (largest-modulus) component is real positive.
pub fn canonical_phase(v: &ComplexVector) -> ComplexVector {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return v.clone();
    }
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-10)).unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    v.map(|z| z / phase)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Absolute threshold actually applied, `tol * (1 + ||M||_inf)`.
    pub tolerance_used: f64,
    pub witness_vector: Option<Vec<Complex64>>,
}

impl PsdVerdict {
    /// `<v, M v>` for the witness, if present.
    pub fn witness_value(&self, m: &ComplexMatrix) -> Option<f64> {
        self.witness_vector.as_ref().map(|w| {
            let v = DVector::from_column_slice(w);
            (v.adjoint() * hermitian_part(m) * &v)[(0, 0)].re
        })
    }
}

/// Decides positive semidefiniteness of the Hermitian part of `m`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    ensure_square(m)?;
    let h = hermitian_part(m);
    let tolerance_used = tol * (1.0 + norm_inf(&h));
    if h.nrows() == 0 {
        return Ok(PsdVerdict {
            is_psd: true,
            min_eigenvalue: 0.0,
            tolerance_used,
            witness_vector: None,
        });
    }
    let (values, vectors) = sorted_eigen(&h);
    let min_eigenvalue = values[0];
    let is_psd = min_eigenvalue >= -tolerance_used;
    let witness_vector = (!is_psd).then(|| {
        let v = canonical_phase(&vectors.column(0).into_owned());
        v.iter().cloned().collect()
    });
    Ok(PsdVerdict {
        is_psd,
        min_eigenvalue,
        tolerance_used,
        witness_vector,
    })
}

/// Orthonormal basis (as columns) for the span of `vectors`.
///
/// Modified Gram-Schmidt with one reorthogonalization pass; a vector whose
/// residual after projection is at most `tol * (1 + ||v||)` is dropped.
pub fn orthonormal_span(vectors: &[ComplexVector], tol: f64) -> Result<ComplexMatrix> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    let dim = first.len();
    let mut basis: Vec<ComplexVector> = Vec::new();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                left: (dim, 1),
                right: (v.len(), 1),
            });
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.dotc(&r);
                r -= q * coeff;
            }
        }
        let norm = r.norm();
        if norm > tol * (1.0 + v.norm()) {
            basis.push(r / c(norm, 0.0));
        }
    }
    Ok(columns_to_matrix(dim, &basis))
}

pub fn columns_to_matrix(dim: usize, cols: &[ComplexVector]) -> ComplexMatrix {
    DMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
}

pub fn matrix_columns(m: &ComplexMatrix) -> Vec<ComplexVector> {
    m.column_iter().map(|col| col.into_owned()).collect()
}

/// `||Q*Q - I||_inf`.
pub fn orthonormality_defect(q: &ComplexMatrix) -> f64 {
    norm_inf(&(q.adjoint() * q - identity(q.ncols())))
}

/// Eigenvalues of a general square matrix via the complex Schur form, sorted by
/// real then imaginary part.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let (_, t) = m.clone().schur().unpack();
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(values)
}

/// Schur vectors and diagonal of a (near-)normal matrix: `m ~ Q diag(d) Q*`.
pub fn normal_eigendecomposition(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok((zeros(0, 0), Vec::new()));
    }
    let (q, t) = m.clone().schur().unpack();
    Ok((q, (0..n).map(|i| t[(i, i)]).collect()))
}

/// Leading principal block of size `size`.
pub fn leading_block(m: &ComplexMatrix, size: usize) -> ComplexMatrix {
    m.view((0, 0), (size, size)).into_owned()
}

/// Principal block on the index range `[start, start + size)`.
pub fn principal_block(m: &ComplexMatrix, start: usize, size: usize) -> ComplexMatrix {
    m.view((start, start), (size, size)).into_owned()
}

/// Block-diagonal direct sum.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}
