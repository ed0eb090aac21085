//! Euclidean projection onto the cone of symmetric positive semi-definite
//! matrices.
//!
//! For square `X` the nearest PSD matrix in Frobenius norm is obtained from
//! the symmetric part `X_sym = ½(X + Xᵀ) = V Σ Vᵀ` by clipping the spectrum:
//!
//! ```text
//! π(X) = V max(Σ, 0) Vᵀ
//! ```
//!
//! When `X_sym` is positive definite it is its own projection, which a
//! Cholesky factorization certifies far more cheaply than an
//! eigendecomposition. [`project_psd_fastpath`] takes that shortcut.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{matmul_transpose, sym_eig, try_cholesky, DenseMatrix};

/// Relative asymmetry accepted by [`PsdMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Negative eigenvalue slack, relative to `1 + ‖X‖_F`.
pub const EIGENVALUE_SLACK: f64 = 1e-8;

/// A symmetric positive semi-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix(DenseMatrix);

impl PsdMatrix {
    /// Validates symmetry and the sign of the spectrum.
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                op: "PsdMatrix::new",
                shape: matrix.shape(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("PsdMatrix::new".into()));
        }
        let asymmetry = matrix.asymmetry();
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                op: "PsdMatrix::new",
                asymmetry,
            });
        }
        let min_eigenvalue = symmetric_part(&matrix).and_then(|s| sym_eig(&s))?.min_eigenvalue();
        if min_eigenvalue < -EIGENVALUE_SLACK * (1.0 + matrix.frobenius_norm()) {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix that is PSD by construction (a projection output, a
    /// Gram matrix, ...). Not validated.
    pub(crate) fn new_unchecked(matrix: DenseMatrix) -> Self {
        Self(matrix)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DenseMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DenseMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }
}

impl AsRef<DenseMatrix> for PsdMatrix {
    fn as_ref(&self) -> &DenseMatrix {
        &self.0
    }
}

impl Serialize for PsdMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PsdMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = DenseMatrix::deserialize(deserializer)?;
        PsdMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// `½(Xᵀ + X)`; the result is exactly symmetric.
pub fn symmetric_part(x: &DenseMatrix) -> Result<DenseMatrix> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            op: "symmetric_part",
            shape: x.shape(),
        });
    }
    let n = x.rows();
    Ok(DenseMatrix::from_fn(n, n, |i, j| {
        0.5 * (x.get(i, j) + x.get(j, i))
    }))
}

/// Nearest PSD matrix to `X` in Frobenius norm.
pub fn project_psd(x: &DenseMatrix) -> Result<PsdMatrix> {
    project_symmetric(&symmetric_part(x)?)
}

fn project_symmetric(sym: &DenseMatrix) -> Result<PsdMatrix> {
    let n = sym.rows();
    let eig = sym_eig(sym)?;
    // eigenvalues are descending, so the positive ones lead
    let rank = eig.eigenvalues.iter().take_while(|&&l| l > 0.0).count();
    if rank == 0 {
        return Ok(PsdMatrix::zeros(n));
    }
    if rank == n {
        return Ok(PsdMatrix::new_unchecked(sym.clone()));
    }
    let v = &eig.eigenvectors;
    let roots: Vec<f64> = eig.eigenvalues[..rank].iter().map(|l| l.sqrt()).collect();
    let w = DenseMatrix::from_fn(n, rank, |i, j| v.get(i, j) * roots[j]);
    let mut out = matmul_transpose(&w, &w)?;
    crate::linalg::symmetrize_in_place(&mut out);
    Ok(PsdMatrix::new_unchecked(out))
}

/// Projection that skips the eigendecomposition when the symmetric part of
/// `X` is positive definite. Returns whether the shortcut was taken.
pub fn project_psd_fastpath(x: &DenseMatrix) -> Result<(PsdMatrix, bool)> {
    let sym = symmetric_part(x)?;
    if try_cholesky(&sym)? {
        Ok((PsdMatrix::new_unchecked(sym), true))
    } else {
        Ok((project_symmetric(&sym)?, false))
    }
}
