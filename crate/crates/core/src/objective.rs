//! The Procrustes objective `F(X) = ½‖XA − B‖_F²` over square `X`.
//!
//! Its gradient is `∇F(X) = (XA − B)Aᵀ`, which is generally not symmetric;
//! the projection symmetrizes. Both share the residual `XA − B`, so
//! [`SmoothObjective::evaluate`] hands the residual back as a cache and the
//! gradient is formed from it with a single extra product.

use serde::{Deserialize, Serialize};

use crate::cone::PsdMatrix;
use crate::error::{Error, Result};
use crate::linalg::{frob_inner, matmul, matmul_transpose, spectral_norm, DenseMatrix};

/// A smooth function of a square matrix, as consumed by the solvers.
pub trait SmoothObjective {
    /// Data shared between a value and a subsequent gradient evaluation.
    type Cache;

    /// Side length of the square argument.
    fn dim(&self) -> usize;

    /// Objective value plus whatever the gradient can reuse.
    fn evaluate(&self, x: &DenseMatrix) -> Result<(f64, Self::Cache)>;

    /// Gradient at `x`, given the cache produced by `evaluate(x)`.
    fn gradient_from_cache(&self, x: &DenseMatrix, cache: &Self::Cache) -> Result<DenseMatrix>;

    fn value(&self, x: &DenseMatrix) -> Result<f64> {
        Ok(self.evaluate(x)?.0)
    }

    fn value_and_gradient(&self, x: &DenseMatrix) -> Result<(f64, DenseMatrix)> {
        let (value, cache) = self.evaluate(x)?;
        Ok((value, self.gradient_from_cache(x, &cache)?))
    }
}

/// One PSDP instance: `A`, `B` ∈ ℝⁿˣᵐ and, for synthetic instances, the
/// planted optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDocument", into = "InstanceDocument")]
pub struct ProblemInstance {
    pub label: String,
    a: DenseMatrix,
    b: DenseMatrix,
    known_optimum: Option<PsdMatrix>,
}

impl ProblemInstance {
    pub fn new(label: impl Into<String>, a: DenseMatrix, b: DenseMatrix) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::DimensionMismatch {
                op: "ProblemInstance::new",
                left: a.shape(),
                right: b.shape(),
            });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("problem data".into()));
        }
        Ok(Self {
            label: label.into(),
            a,
            b,
            known_optimum: None,
        })
    }

    pub fn with_known_optimum(mut self, x_star: PsdMatrix) -> Result<Self> {
        if x_star.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                op: "with_known_optimum",
                left: x_star.as_matrix().shape(),
                right: (self.n(), self.n()),
            });
        }
        self.known_optimum = Some(x_star);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn known_optimum(&self) -> Option<&PsdMatrix> {
        self.known_optimum.as_ref()
    }

    fn check_argument(&self, x: &DenseMatrix, op: &'static str) -> Result<()> {
        if x.shape() != (self.n(), self.n()) {
            return Err(Error::DimensionMismatch {
                op,
                left: x.shape(),
                right: (self.n(), self.n()),
            });
        }
        Ok(())
    }

    /// `XA − B`.
    pub fn residual(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_argument(x, "residual")?;
        Ok(&matmul(x, &self.a)? - &self.b)
    }

    /// `½‖XA − B‖_F²`.
    pub fn objective(&self, x: &DenseMatrix) -> Result<f64> {
        self.value(x)
    }

    /// `(XA − B)Aᵀ`.
    pub fn gradient(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let residual = self.residual(x)?;
        self.gradient_from_cache(x, &residual)
    }

    /// `⟨∇F(X), Z⟩`.
    pub fn directional_derivative(&self, x: &DenseMatrix, z: &DenseMatrix) -> Result<f64> {
        self.check_argument(z, "directional_derivative")?;
        frob_inner(&self.gradient(x)?, z)
    }

    /// `‖A‖₂²`, the Lipschitz constant of `∇F` in Frobenius norm.
    pub fn lipschitz_constant(&self) -> f64 {
        let s = spectral_norm(&self.a);
        s * s
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl SmoothObjective for ProblemInstance {
    type Cache = DenseMatrix;

    fn dim(&self) -> usize {
        self.n()
    }

    fn evaluate(&self, x: &DenseMatrix) -> Result<(f64, DenseMatrix)> {
        let residual = self.residual(x)?;
        let value = 0.5 * residual.frobenius_norm_squared();
        if !value.is_finite() {
            return Err(Error::NonFinite("objective".into()));
        }
        Ok((value, residual))
    }

    fn gradient_from_cache(&self, _x: &DenseMatrix, residual: &DenseMatrix) -> Result<DenseMatrix> {
        let g = matmul_transpose(residual, &self.a)?;
        if !g.is_finite() {
            return Err(Error::NonFinite("gradient".into()));
        }
        Ok(g)
    }
}

/// Wire format `{label, n, m, A, B, X_star?}`; matrices are arrays of rows.
#[derive(Serialize, Deserialize)]
struct InstanceDocument {
    label: String,
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: DenseMatrix,
    #[serde(rename = "B")]
    b: DenseMatrix,
    #[serde(rename = "X_star", default, skip_serializing_if = "Option::is_none")]
    x_star: Option<PsdMatrix>,
}

impl TryFrom<InstanceDocument> for ProblemInstance {
    type Error = Error;

    fn try_from(doc: InstanceDocument) -> Result<Self> {
        if doc.a.shape() != (doc.n, doc.m) {
            return Err(Error::Shape(format!(
                "A is {:?} but n = {}, m = {}",
                doc.a.shape(),
                doc.n,
                doc.m
            )));
        }
        let inst = ProblemInstance::new(doc.label, doc.a, doc.b)?;
        match doc.x_star {
            Some(x) => inst.with_known_optimum(x),
            None => Ok(inst),
        }
    }
}

impl From<ProblemInstance> for InstanceDocument {
    fn from(inst: ProblemInstance) -> Self {
        Self {
            n: inst.n(),
            m: inst.m(),
            label: inst.label,
            a: inst.a,
            b: inst.b,
            x_star: inst.known_optimum,
        }
    }
}
