//! Solvers for the positive semi-definite Procrustes problem
//!
//! ```text
//! minimize ½‖XA − B‖_F²   subject to  X = Xᵀ ⪰ 0
//! ```
//!
//! The main method ([`spg::solve`]) is a non-monotone spectral projected
//! gradient iteration with Barzilai–Borwein steps and a Cholesky shortcut
//! for the projection. Fixed-step projected gradient and its accelerated
//! variant live in [`baselines`]; [`generator`] and [`bench`] build seeded
//! synthetic instances and aggregate experiment tables.

pub mod baselines;
pub mod bench;
pub mod cone;
pub mod error;
pub mod generator;
pub mod linalg;
pub mod objective;
pub mod spg;

pub use cone::{project_psd, project_psd_fastpath, symmetric_part, PsdMatrix};
pub use error::{Error, Result};
pub use linalg::DenseMatrix;
pub use objective::{ProblemInstance, SmoothObjective};
pub use spg::{solve, BbRule, SolveReport, SolverConfig, Termination};
