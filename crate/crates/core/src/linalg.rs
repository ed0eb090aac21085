//! Dense linear-algebra kernels.
//!
//! [`DenseMatrix`] wraps a column-major [`faer::Mat`]; the logical order used
//! for construction, serialization and iteration is row-major. Every
//! decomposition used by the solvers goes through this module so the
//! contracts (eigenvalue ordering, Cholesky pivot rule, QR sign convention)
//! live in one place.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use faer::{Mat, Side};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Numerical tolerances used by the kernel contracts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius asymmetry accepted by [`sym_eig_with`].
    pub symmetry: f64,
    /// A QR diagonal entry below `rank * ‖M‖_F` is treated as rank deficiency.
    pub rank: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        symmetry: 1e-12,
        rank: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A real dense matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    inner: Mat<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: Mat::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: Mat::identity(n, n),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self {
            inner: Mat::from_fn(rows, cols, f),
        }
    }

    /// Square diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 })
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| entries[i * cols + j]))
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Shape("matrix must have at least one entry".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Shape(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Ok(Self::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.read(i, j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.inner.write(i, j, value);
    }

    pub fn as_faer(&self) -> &Mat<f64> {
        &self.inner
    }

    pub fn into_faer(self) -> Mat<f64> {
        self.inner
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self {
            inner: self.inner.transpose().to_owned(),
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows().min(self.cols()))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_squared().sqrt()
    }

    pub fn frobenius_norm_squared(&self) -> f64 {
        frob_inner(self, self).expect("same shape")
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(f64::is_finite)
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows()).flat_map(move |i| (0..self.cols()).map(move |j| self.get(i, j)))
    }

    pub fn scaled(&self, factor: f64) -> DenseMatrix {
        Self {
            inner: faer::scale(factor) * &self.inner,
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: f64, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), other.shape(), "add_scaled: shape mismatch");
        Self::from_fn(self.rows(), self.cols(), |i, j| {
            self.get(i, j) + factor * other.get(i, j)
        })
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> DenseMatrix {
        Self::from_fn(self.rows(), self.cols(), |i, j| f(self.get(i, j)))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Relative asymmetry ‖S − Sᵀ‖_F / (1 + ‖S‖_F).
    pub fn asymmetry(&self) -> f64 {
        debug_assert!(self.is_square());
        let n = self.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.get(i, j) - self.get(j, i);
                acc += 2.0 * d * d;
            }
        }
        acc.sqrt() / (1.0 + self.frobenius_norm())
    }

    fn from_faer(inner: Mat<f64>) -> Self {
        Self { inner }
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix{:?} ", self.shape())?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl From<Mat<f64>> for DenseMatrix {
    fn from(inner: Mat<f64>) -> Self {
        Self { inner }
    }
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        DenseMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_faer(&self.inner + &rhs.inner)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_faer(&self.inner - &rhs.inner)
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: f64) -> DenseMatrix {
        self.scaled(rhs)
    }
}

/// Matrix product `L·R`.
pub fn matmul(left: &DenseMatrix, right: &DenseMatrix) -> Result<DenseMatrix> {
    if left.cols() != right.rows() {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: left.shape(),
            right: right.shape(),
        });
    }
    Ok(DenseMatrix::from_faer(&left.inner * &right.inner))
}

/// Product `L·Rᵀ` without materializing the transpose.
pub fn matmul_transpose(left: &DenseMatrix, right: &DenseMatrix) -> Result<DenseMatrix> {
    if left.cols() != right.cols() {
        return Err(Error::DimensionMismatch {
            op: "matmul_transpose",
            left: left.shape(),
            right: right.shape(),
        });
    }
    Ok(DenseMatrix::from_faer(
        left.inner.as_ref() * right.inner.transpose(),
    ))
}

/// Frobenius inner product `Tr[LᵀR]`.
pub fn frob_inner(left: &DenseMatrix, right: &DenseMatrix) -> Result<f64> {
    if left.shape() != right.shape() {
        return Err(Error::DimensionMismatch {
            op: "frob_inner",
            left: left.shape(),
            right: right.shape(),
        });
    }
    let mut acc = 0.0;
    for j in 0..left.cols() {
        let (l, r) = (left.inner.col(j), right.inner.col(j));
        for i in 0..left.rows() {
            acc += l.read(i) * r.read(i);
        }
    }
    Ok(acc)
}

/// Eigendecomposition `S = V·diag(λ)·Vᵀ` of a symmetric matrix.
///
/// Eigenvalues are sorted in **descending** order and column `i` of
/// `eigenvectors` belongs to `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvectors: DenseMatrix,
    pub eigenvalues: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V·diag(f(λ))·Vᵀ`, symmetrized exactly.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = DenseMatrix::from_fn(n, n, |i, j| v.get(i, j) * weights[j]);
        let mut out = matmul_transpose(&scaled, v).expect("square factors");
        symmetrize_in_place(&mut out);
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

pub(crate) fn symmetrize_in_place(m: &mut DenseMatrix) {
    let n = m.rows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, avg);
            m.set(j, i, avg);
        }
    }
}

pub fn sym_eig(s: &DenseMatrix) -> Result<SpectralDecomposition> {
    sym_eig_with(s, &Tolerances::DEFAULT)
}

pub fn sym_eig_with(s: &DenseMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            op: "sym_eig",
            shape: s.shape(),
        });
    }
    if !s.is_finite() {
        return Err(Error::NonFinite("sym_eig input".into()));
    }
    let asym = s.asymmetry();
    if asym > tol.symmetry {
        return Err(Error::NotSymmetric {
            op: "sym_eig",
            asymmetry: asym,
        });
    }
    let n = s.rows();
    let evd = s.inner.selfadjoint_eigendecomposition(Side::Lower);
    let (u, vals) = (evd.u(), evd.s().column_vector());
    // faer returns ascending order
    let eigenvalues: Vec<f64> = (0..n).rev().map(|i| vals.read(i)).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |i, j| u.read(i, n - 1 - j));
    if !eigenvalues.iter().all(|l| l.is_finite()) || !eigenvectors.is_finite() {
        return Err(Error::NonFinite("sym_eig output".into()));
    }
    Ok(SpectralDecomposition {
        eigenvectors,
        eigenvalues,
    })
}

/// Attempts an LLᵀ factorization; `true` iff every pivot is strictly
/// positive. A zero pivot (boundary of the PSD cone) counts as failure.
pub fn try_cholesky(s: &DenseMatrix) -> Result<bool> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            op: "try_cholesky",
            shape: s.shape(),
        });
    }
    if !s.is_finite() {
        return Ok(false);
    }
    let Ok(llt) = s.inner.cholesky(Side::Lower) else {
        return Ok(false);
    };
    let l = llt.compute_l();
    Ok((0..s.rows()).all(|i| {
        let p = l.read(i, i);
        p.is_finite() && p > 0.0
    }))
}

/// Orthogonal factor Q of `M = QR`, with columns signed so that `diag(R) ≥ 0`.
pub fn qr_orthogonal_factor(m: &DenseMatrix) -> Result<DenseMatrix> {
    qr_orthogonal_factor_with(m, &Tolerances::DEFAULT)
}

pub fn qr_orthogonal_factor_with(m: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            op: "qr_orthogonal_factor",
            shape: m.shape(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("qr input".into()));
    }
    let n = m.rows();
    let qr = m.inner.qr();
    let r = qr.compute_r();
    let q = qr.compute_q();
    let threshold = tol.rank * m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let d = r.read(i, i);
        if d.abs() <= threshold {
            return Err(Error::RankDeficient { pivot: i });
        }
        signs.push(d.signum());
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| q.read(i, j) * signs[j]))
}

/// Largest singular value.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    m.inner
        .singular_values()
        .into_iter()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_sym(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        let m = random(n, n, rng);
        &m + &m.transpose()
    }

    fn naive_product(l: &DenseMatrix, r: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_fn(l.rows(), r.cols(), |i, j| {
            (0..l.cols()).map(|k| l.get(i, k) * r.get(k, j)).sum()
        })
    }

    #[test]
    fn matmul_identity_and_diagonals() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matmul(&DenseMatrix::identity(2), &m).unwrap(), m);
        let p = matmul(
            &DenseMatrix::from_diagonal(&[2.0, 3.0]),
            &DenseMatrix::from_diagonal(&[5.0, 7.0]),
        )
        .unwrap();
        assert_eq!(p, DenseMatrix::from_diagonal(&[10.0, 21.0]));
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = random(4, 3, &mut rng);
        let r = random(3, 2, &mut rng);
        let fast = matmul(&l, &r).unwrap();
        assert!(fast.max_abs_diff(&naive_product(&l, &r)) <= 1e-12);
        let lt = matmul_transpose(&l, &l).unwrap();
        assert!(lt.max_abs_diff(&naive_product(&l, &l.transpose())) <= 1e-12);
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let err = matmul(&DenseMatrix::zeros(2, 3), &DenseMatrix::zeros(2, 3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn frob_inner_examples() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(frob_inner(&i2, &i2).unwrap(), 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random(3, 3, &mut rng);
        assert_eq!(frob_inner(&m, &DenseMatrix::zeros(3, 3)).unwrap(), 0.0);
        let n = random(3, 3, &mut rng);
        let via_trace = naive_product(&m.transpose(), &n).trace();
        assert!((frob_inner(&m, &n).unwrap() - via_trace).abs() <= 1e-12);
        assert!(frob_inner(&m, &DenseMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn sym_eig_examples() {
        let d = sym_eig(&DenseMatrix::from_diagonal(&[3.0, -1.0])).unwrap();
        assert_eq!(d.eigenvalues, vec![3.0, -1.0]);
        assert!((d.eigenvectors.get(0, 0).abs() - 1.0).abs() < 1e-14);
        assert!((d.eigenvectors.get(1, 1).abs() - 1.0).abs() < 1e-14);

        let id = sym_eig(&DenseMatrix::identity(4)).unwrap();
        assert!(id.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-14));

        // λ² − 1 = 0 ⇒ λ = ±1, eigenvectors (1, ±1)/√2.
        let swap = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = sym_eig(&swap).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = (e.eigenvectors.get(0, 0), e.eigenvectors.get(1, 0));
        let v1 = (e.eigenvectors.get(0, 1), e.eigenvectors.get(1, 1));
        assert!((v0.0.abs() - h).abs() < 1e-14 && (v0.0 - v0.1).abs() < 1e-14);
        assert!((v1.0.abs() - h).abs() < 1e-14 && (v1.0 + v1.1).abs() < 1e-14);
    }

    #[test]
    fn sym_eig_rejects_bad_input() {
        assert!(matches!(
            sym_eig(&DenseMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let asym = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(sym_eig(&asym), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn sym_eig_reconstructs_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 5, 17, 50] {
            let s = random_sym(n, &mut rng);
            let e = sym_eig(&s).unwrap();
            let v = &e.eigenvectors;
            let vtv = matmul(&v.transpose(), v).unwrap();
            assert!((&vtv - &DenseMatrix::identity(n)).frobenius_norm() <= 1e-10);
            let err = (&e.reconstruct() - &s).frobenius_norm();
            assert!(err <= 1e-8 * (1.0 + s.frobenius_norm()), "n={n} err={err}");
            assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn cholesky_pivot_rule() {
        assert!(try_cholesky(&DenseMatrix::identity(2)).unwrap());
        assert!(!try_cholesky(&DenseMatrix::from_diagonal(&[1.0, -1.0])).unwrap());
        assert!(!try_cholesky(&DenseMatrix::from_diagonal(&[1.0, 0.0])).unwrap());
        assert!(try_cholesky(&DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn cholesky_success_implies_nonnegative_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut successes = 0;
        for _ in 0..200 {
            let n = rng.random_range(1..12);
            let s = &random_sym(n, &mut rng) + &DenseMatrix::identity(n).scaled(1.5);
            if try_cholesky(&s).unwrap() {
                successes += 1;
                let min = sym_eig(&s).unwrap().min_eigenvalue();
                assert!(min > -1e-8 * s.frobenius_norm());
            }
        }
        assert!(successes > 10);
    }

    #[test]
    fn qr_factor_examples() {
        let q = qr_orthogonal_factor(&DenseMatrix::identity(3)).unwrap();
        assert!(q.max_abs_diff(&DenseMatrix::identity(3)) < 1e-14);
        let q = qr_orthogonal_factor(&DenseMatrix::from_diagonal(&[2.0, 5.0])).unwrap();
        for (i, j) in [(0, 0), (1, 1)] {
            assert!((q.get(i, j).abs() - 1.0).abs() < 1e-14);
        }
        assert!(q.get(0, 1).abs() < 1e-14 && q.get(1, 0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random(10, 10, &mut rng);
        let q = qr_orthogonal_factor(&g).unwrap();
        let qtq = matmul(&q.transpose(), &q).unwrap();
        assert!((&qtq - &DenseMatrix::identity(10)).frobenius_norm() <= 1e-10);
        // sign convention: Qᵀ·M has a nonnegative diagonal
        let r = matmul(&q.transpose(), &g).unwrap();
        assert!(r.diagonal().iter().all(|&d| d > 0.0));

        let singular = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            qr_orthogonal_factor(&singular),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&DenseMatrix::identity(4)) - 1.0).abs() < 1e-14);
        assert!((spectral_norm(&DenseMatrix::from_diagonal(&[3.0, -7.0])) - 7.0).abs() < 1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = random(5, 3, &mut rng);
        let gram = naive_product(&m.transpose(), &m);
        let oracle = sym_eig(&gram).unwrap().max_eigenvalue().sqrt();
        assert!((spectral_norm(&m) - oracle).abs() <= 1e-10);
    }

    #[test]
    fn matmul_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (a, b, c, d) = (
                rng.random_range(1..8),
                rng.random_range(1..8),
                rng.random_range(1..8),
                rng.random_range(1..8),
            );
            let (x, y, z) = (random(a, b, &mut rng), random(b, c, &mut rng), random(c, d, &mut rng));
            let left = matmul(&matmul(&x, &y).unwrap(), &z).unwrap();
            let right = matmul(&x, &matmul(&y, &z).unwrap()).unwrap();
            let rel = (&left - &right).frobenius_norm() / left.frobenius_norm().max(1e-300);
            assert!(rel <= 1e-10);
        }
    }

    #[test]
    fn serde_uses_nested_rows() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[1.0,2.0,3.0],[4.0,5.0,6.0]]");
        let back: DenseMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<DenseMatrix>("[[1.0],[2.0,3.0]]").is_err());
    }
}
