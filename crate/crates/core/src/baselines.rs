//! Comparison methods with a fixed step `1/L`, `L = ‖A‖₂²`.
//!
//! * [`grad_solve`]: `X_{k+1} = π(X_k − ∇F(X_k)/L)`.
//! * [`fgm_solve`]: Nesterov's accelerated scheme. The extrapolated point
//!   `Y_k` may leave the cone; only `X_k` iterates are projected and
//!   reported.
//!
//! Both stop on `‖X_{k+1} − X_k‖_F ≤ ε` and count one objective
//! evaluation per iteration plus one at the start.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cone::{project_psd, PsdMatrix};
use crate::error::{Error, Result};
use crate::linalg::{frob_inner, DenseMatrix};
use crate::objective::{ProblemInstance, SmoothObjective};
use crate::spg::{global_error, SolveReport, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    pub epsilon: f64,
    pub max_iter: usize,
    /// Gradient-based adaptive restart for FGM.
    pub restart: bool,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-5,
            max_iter: 10_000,
            restart: false,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        Ok(())
    }
}

fn step_length(inst: &ProblemInstance) -> f64 {
    let l = inst.lipschitz_constant();
    if l > 0.0 { 1.0 / l } else { 1.0 }
}

fn check_start(inst: &ProblemInstance, x0: &PsdMatrix) -> Result<()> {
    if x0.dim() != inst.n() {
        return Err(Error::DimensionMismatch {
            op: "baseline start",
            left: x0.as_matrix().shape(),
            right: (inst.n(), inst.n()),
        });
    }
    Ok(())
}

/// Projected gradient with constant step `1/L`.
pub fn grad_solve(inst: &ProblemInstance, x0: PsdMatrix, cfg: &BaselineConfig) -> Result<SolveReport> {
    grad_solve_observed(inst, x0, cfg, &mut |_, _| {})
}

/// As [`grad_solve`], calling `observer(k, F(X_k))` for every iterate
/// including the start.
pub fn grad_solve_observed(
    inst: &ProblemInstance,
    x0: PsdMatrix,
    cfg: &BaselineConfig,
    observer: &mut dyn FnMut(usize, f64),
) -> Result<SolveReport> {
    cfg.validate()?;
    check_start(inst, &x0)?;
    let start = Instant::now();
    let step = step_length(inst);
    let (mut f, mut grad) = inst.value_and_gradient(x0.as_matrix())?;
    observer(0, f);
    let mut x = x0;
    let mut nfe = 1;
    let mut k = 0;
    let mut xerr = f64::INFINITY;
    let termination = loop {
        if k >= cfg.max_iter {
            break Termination::MaxIter;
        }
        let next = project_psd(&x.as_matrix().add_scaled(-step, &grad))?;
        (f, grad) = inst.value_and_gradient(next.as_matrix())?;
        nfe += 1;
        k += 1;
        observer(k, f);
        xerr = (next.as_matrix() - x.as_matrix()).frobenius_norm();
        x = next;
        if xerr <= cfg.epsilon {
            break Termination::Tolerance;
        }
    };
    Ok(SolveReport {
        global_error: global_error(inst, &x),
        x_hat: x,
        nitr: k,
        nfe,
        wall_time_s: start.elapsed().as_secs_f64(),
        fval: f,
        xerr,
        termination,
        projections: k,
        fastpath_hits: 0,
        trace: None,
    })
}

/// Accelerated projected gradient:
///
/// ```text
/// X_{k+1} = π(Y_k − ∇F(Y_k)/L)
/// t_{k+1} = (1 + √(1 + 4t_k²)) / 2
/// Y_{k+1} = X_{k+1} + ((t_k − 1)/t_{k+1}) (X_{k+1} − X_k)
/// ```
///
/// starting from `Y_0 = X_0`, `t_0 = 1`.
pub fn fgm_solve(inst: &ProblemInstance, x0: PsdMatrix, cfg: &BaselineConfig) -> Result<SolveReport> {
    cfg.validate()?;
    check_start(inst, &x0)?;
    let start = Instant::now();
    let step = step_length(inst);
    let mut x = x0;
    let mut y: DenseMatrix = x.as_matrix().clone();
    let mut t = 1.0_f64;
    let mut nfe = 0;
    let mut k = 0;
    let mut xerr = f64::INFINITY;
    let termination = loop {
        if k >= cfg.max_iter {
            break Termination::MaxIter;
        }
        let grad = inst.gradient(&y)?;
        nfe += 1;
        let next = project_psd(&y.add_scaled(-step, &grad))?;
        k += 1;
        let diff = next.as_matrix() - x.as_matrix();
        xerr = diff.frobenius_norm();
        if xerr <= cfg.epsilon {
            x = next;
            break Termination::Tolerance;
        }
        let restart = cfg.restart && frob_inner(&(&y - next.as_matrix()), &diff)? > 0.0;
        if restart {
            t = 1.0;
            y = next.as_matrix().clone();
        } else {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = next.as_matrix().add_scaled((t - 1.0) / t_next, &diff);
            t = t_next;
        }
        if !y.is_finite() {
            return Err(Error::NonFinite("FGM extrapolation".into()));
        }
        x = next;
    };
    let fval = inst.value(x.as_matrix())?;
    Ok(SolveReport {
        global_error: global_error(inst, &x),
        x_hat: x,
        nitr: k,
        nfe: nfe + 1,
        wall_time_s: start.elapsed().as_secs_f64(),
        fval,
        xerr,
        termination,
        projections: k,
        fastpath_hits: 0,
        trace: None,
    })
}
