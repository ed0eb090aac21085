//! Non-monotone spectral projected gradient over the PSD cone ("OptPSDP").
//!
//! Each iteration searches along the projection arc
//! `Z_k(τ) = π(X_k − τ∇F(X_k))`, shrinking `τ ← ητ` until
//!
//! ```text
//! F(Z_k(τ)) ≤ C_k + σ ⟨∇F(X_k), Z_k(τ) − X_k⟩
//! ```
//!
//! where `C_k` is the Zhang–Hager weighted average of past objective values:
//!
//! ```text
//! Q_{k+1} = γ Q_k + 1,    C_{k+1} = (γ Q_k C_k + F(X_{k+1})) / Q_{k+1}
//! ```
//!
//! With `γ = 0` the reference collapses to `F(X_k)` and the method is the
//! monotone Armijo-on-the-arc projected gradient. After acceptance the next
//! trial step is a Barzilai–Borwein quotient (in absolute value) clipped to
//! `[τ_min, τ_max]`. Iteration stops once `‖X_k − X_{k−1}‖_F ≤ ε`, with
//! `X_{−1} = X_0 + I` so at least one step is always taken.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cone::{project_psd, project_psd_fastpath, PsdMatrix};
use crate::error::{Error, Result};
use crate::linalg::{frob_inner, DenseMatrix};
use crate::objective::{ProblemInstance, SmoothObjective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BbRule {
    /// `‖S‖² / ⟨S, Y⟩`
    Bb1,
    /// `⟨S, Y⟩ / ‖Y‖²`
    Bb2,
    /// BB1 on even iterations, BB2 on odd ones.
    #[serde(alias = "alt")]
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Sufficient-decrease constant, in (0, 1).
    pub sigma: f64,
    pub tau0: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    /// Stop once `‖X_k − X_{k−1}‖_F ≤ epsilon`.
    pub epsilon: f64,
    /// Non-monotonicity weight in [0, 1); 0 is monotone.
    pub gamma: f64,
    /// Backtracking factor in (0, 1).
    pub eta: f64,
    pub max_iter: usize,
    pub max_backtracks: usize,
    pub bb_rule: BbRule,
    pub use_fastpath: bool,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            sigma: 1e-4,
            tau0: 1e-3,
            tau_min: 1e-20,
            tau_max: 1e20,
            epsilon: 1e-5,
            gamma: 0.85,
            eta: 0.2,
            max_iter: 10_000,
            max_backtracks: 60,
            bb_rule: BbRule::Bb1,
            use_fastpath: true,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let checks = [
            (open_unit(self.sigma), "sigma must lie in (0, 1)"),
            (self.tau0 > 0.0 && self.tau0.is_finite(), "tau0 must be positive"),
            (self.tau_min > 0.0, "tau_min must be positive"),
            (self.tau_min <= self.tau_max, "tau_min must not exceed tau_max"),
            (self.epsilon > 0.0, "epsilon must be positive"),
            ((0.0..1.0).contains(&self.gamma), "gamma must lie in [0, 1)"),
            (open_unit(self.eta), "eta must lie in (0, 1)"),
            (self.max_iter > 0, "max_iter must be positive"),
            (self.max_backtracks > 0, "max_backtracks must be positive"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::InvalidConfig((*msg).into())),
            None => Ok(()),
        }
    }

    fn clip_tau(&self, tau: f64) -> f64 {
        tau.min(self.tau_max).max(self.tau_min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    Tolerance,
    MaxIter,
    LineSearchStall,
}

/// One row of the optional iteration trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    /// Step accepted by the line search.
    pub tau: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub fval: f64,
    pub trials: usize,
    pub fastpath: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(rename = "X_hat")]
    pub x_hat: PsdMatrix,
    pub nitr: usize,
    /// Objective evaluations, including the one at the starting point.
    pub nfe: usize,
    pub wall_time_s: f64,
    pub fval: f64,
    /// `‖X̂ − X_penultimate‖_F`.
    pub xerr: f64,
    /// `‖X* − X̂‖_F` when the instance carries a planted optimum.
    pub global_error: Option<f64>,
    pub termination: Termination,
    pub projections: usize,
    pub fastpath_hits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<IterationRecord>>,
}

impl SolveReport {
    pub fn fastpath_rate(&self) -> f64 {
        if self.projections == 0 {
            0.0
        } else {
            self.fastpath_hits as f64 / self.projections as f64
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_trace_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_trace_csv(self.trace.as_deref().unwrap_or_default(), path)
    }
}

pub fn write_trace_csv(records: &[IterationRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for rec in records {
        w.serialize(rec)?;
    }
    // header-only output for an empty trace
    if records.is_empty() {
        w.write_record(["k", "tau", "C", "Q", "fval", "trials", "fastpath"])?;
    }
    w.flush()?;
    Ok(())
}

/// Mutable state of one run.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x_curr: PsdMatrix,
    pub x_prev: PsdMatrix,
    pub f_curr: f64,
    pub grad_curr: DenseMatrix,
    pub grad_prev: Option<DenseMatrix>,
    /// Zhang–Hager reference value.
    pub c: f64,
    pub q: f64,
    pub tau: f64,
    pub k: usize,
    pub nfe: usize,
    pub projections: usize,
    pub fastpath_hits: usize,
}

impl SolverState {
    /// State before the first iteration, with `X_{−1} = X_0 + I`.
    pub fn initial<O: SmoothObjective>(obj: &O, x0: PsdMatrix, cfg: &SolverConfig) -> Result<Self> {
        let (f0, cache) = obj.evaluate(x0.as_matrix())?;
        let grad = obj.gradient_from_cache(x0.as_matrix(), &cache)?;
        let n = x0.dim();
        let x_prev = PsdMatrix::new_unchecked(x0.as_matrix() + &DenseMatrix::identity(n));
        Ok(Self {
            x_curr: x0,
            x_prev,
            f_curr: f0,
            grad_curr: grad,
            grad_prev: None,
            c: f0,
            q: 1.0,
            tau: cfg.clip_tau(cfg.tau0),
            k: 0,
            nfe: 1,
            projections: 0,
            fastpath_hits: 0,
        })
    }

    pub fn step_norm(&self) -> f64 {
        (self.x_curr.as_matrix() - self.x_prev.as_matrix()).frobenius_norm()
    }
}

/// Progress notifications for invariant checking and tracing.
#[derive(Debug)]
pub enum SolverEvent<'a> {
    /// A line-search candidate at iteration `k`.
    Trial {
        k: usize,
        tau: f64,
        fval: f64,
        /// `⟨∇F(X_k), Z_k(τ) − X_k⟩`
        directional: f64,
        reference: f64,
        fastpath: bool,
    },
    /// `X_k` was accepted; `c`, `q` are the updated averages `C_k`, `Q_k`.
    Accepted {
        k: usize,
        x: &'a PsdMatrix,
        fval: f64,
        c: f64,
        q: f64,
        tau: f64,
        trials: usize,
        directional: f64,
        fastpath: bool,
    },
}

/// `Z(τ) = π(X − τ G)`; second value reports whether the Cholesky shortcut
/// was used.
pub fn projection_arc_point(
    x: &PsdMatrix,
    grad: &DenseMatrix,
    tau: f64,
    use_fastpath: bool,
) -> Result<(PsdMatrix, bool)> {
    if !(tau > 0.0) {
        return Err(Error::InvalidConfig(format!("step must be positive, got {tau}")));
    }
    let y = x.as_matrix().add_scaled(-tau, grad);
    if !y.is_finite() {
        return Err(Error::NonFinite("projection arc".into()));
    }
    if use_fastpath {
        project_psd_fastpath(&y)
    } else {
        Ok((project_psd(&y)?, false))
    }
}

const BB_DEGENERACY: f64 = 1e-30;

/// Barzilai–Borwein step from the secant pair `S = X_k − X_{k−1}`,
/// `Y = ∇F(X_k) − ∇F(X_{k−1})`, in absolute value. `None` when the
/// denominator vanishes; callers keep their previous step.
///
/// For [`BbRule::Alternate`], `k` is the index of the iterate the step will
/// be taken from.
pub fn bb_step(s: &DenseMatrix, y: &DenseMatrix, rule: BbRule, k: usize) -> Option<f64> {
    let sy = frob_inner(s, y).ok()?;
    let scale = s.frobenius_norm() * y.frobenius_norm();
    let use_bb1 = match rule {
        BbRule::Bb1 => true,
        BbRule::Bb2 => false,
        BbRule::Alternate => k.is_multiple_of(2),
    };
    let (num, den) = if use_bb1 {
        (s.frobenius_norm_squared(), sy)
    } else {
        (sy, y.frobenius_norm_squared())
    };
    if den == 0.0 || den.abs() <= BB_DEGENERACY * scale {
        return None;
    }
    let step = (num / den).abs();
    step.is_finite().then_some(step)
}

/// Zhang–Hager update: returns `(C_{k+1}, Q_{k+1})`.
pub fn update_averages(c: f64, q: f64, f_next: f64, gamma: f64) -> (f64, f64) {
    let q_next = gamma * q + 1.0;
    let c_next = (gamma * q * c + f_next) / q_next;
    (c_next, q_next)
}

/// Result of one non-monotone line search.
#[derive(Debug, Clone)]
pub struct LineSearchOutcome<C> {
    pub x_next: PsdMatrix,
    pub f_next: f64,
    pub cache: C,
    pub tau: f64,
    pub trials: usize,
    pub fastpath_hits: usize,
    pub directional: f64,
    pub last_fastpath: bool,
    /// `false` when `max_backtracks` shrinks did not satisfy the condition;
    /// `x_next` is then the best trial seen.
    pub accepted: bool,
}

/// Backtracks `τ ← ητ` from `tau_init` until
/// `F(Z(τ)) ≤ C_k + σ⟨∇F(X_k), Z(τ) − X_k⟩`.
pub fn nonmonotone_line_search<O: SmoothObjective>(
    obj: &O,
    state: &SolverState,
    tau_init: f64,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&SolverEvent<'_>),
) -> Result<LineSearchOutcome<O::Cache>> {
    let mut tau = tau_init;
    let mut fastpath_hits = 0;
    let mut best: Option<LineSearchOutcome<O::Cache>> = None;
    for trial in 1..=cfg.max_backtracks + 1 {
        let (z, fast) = projection_arc_point(&state.x_curr, &state.grad_curr, tau, cfg.use_fastpath)?;
        fastpath_hits += usize::from(fast);
        let (fz, cache) = obj.evaluate(z.as_matrix())?;
        let directional = frob_inner(&state.grad_curr, &(z.as_matrix() - state.x_curr.as_matrix()))?;
        observer(&SolverEvent::Trial {
            k: state.k,
            tau,
            fval: fz,
            directional,
            reference: state.c,
            fastpath: fast,
        });
        let accepted = fz <= state.c + cfg.sigma * directional;
        let improves = best.as_ref().is_none_or(|b| fz < b.f_next);
        if accepted || improves {
            best = Some(LineSearchOutcome {
                x_next: z,
                f_next: fz,
                cache,
                tau,
                trials: trial,
                fastpath_hits,
                directional,
                last_fastpath: fast,
                accepted,
            });
        }
        if accepted {
            break;
        }
        tau *= cfg.eta;
    }
    let mut out = best.expect("at least one trial");
    out.fastpath_hits = fastpath_hits;
    out.trials = if out.accepted { out.trials } else { cfg.max_backtracks + 1 };
    Ok(out)
}

/// Runs the method on any smooth objective from a feasible start.
pub fn minimize<O: SmoothObjective>(
    obj: &O,
    x0: PsdMatrix,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&SolverEvent<'_>),
) -> Result<SolveReport> {
    cfg.validate()?;
    if x0.dim() != obj.dim() {
        return Err(Error::DimensionMismatch {
            op: "minimize",
            left: x0.as_matrix().shape(),
            right: (obj.dim(), obj.dim()),
        });
    }
    let start = Instant::now();
    let mut state = SolverState::initial(obj, x0, cfg)?;
    let mut trace = cfg.record_trace.then(Vec::new);

    let termination = loop {
        if state.step_norm() <= cfg.epsilon {
            break Termination::Tolerance;
        }
        if state.k >= cfg.max_iter {
            break Termination::MaxIter;
        }
        let ls = nonmonotone_line_search(obj, &state, state.tau, cfg, observer)?;
        state.nfe += ls.trials;
        state.projections += ls.trials;
        state.fastpath_hits += ls.fastpath_hits;

        if !ls.accepted {
            if ls.f_next < state.f_curr {
                state.x_prev = std::mem::replace(&mut state.x_curr, ls.x_next);
                state.f_curr = ls.f_next;
                state.k += 1;
            }
            break Termination::LineSearchStall;
        }

        let grad_next = obj.gradient_from_cache(ls.x_next.as_matrix(), &ls.cache)?;
        let (c_next, q_next) = update_averages(state.c, state.q, ls.f_next, cfg.gamma);
        let s = ls.x_next.as_matrix() - state.x_curr.as_matrix();
        let y = &grad_next - &state.grad_curr;
        state.k += 1;
        let next_tau = bb_step(&s, &y, cfg.bb_rule, state.k).unwrap_or(ls.tau);

        observer(&SolverEvent::Accepted {
            k: state.k,
            x: &ls.x_next,
            fval: ls.f_next,
            c: c_next,
            q: q_next,
            tau: ls.tau,
            trials: ls.trials,
            directional: ls.directional,
            fastpath: ls.last_fastpath,
        });
        if let Some(t) = trace.as_mut() {
            t.push(IterationRecord {
                k: state.k,
                tau: ls.tau,
                c: c_next,
                q: q_next,
                fval: ls.f_next,
                trials: ls.trials,
                fastpath: ls.last_fastpath,
            });
        }

        state.x_prev = std::mem::replace(&mut state.x_curr, ls.x_next);
        state.grad_prev = Some(std::mem::replace(&mut state.grad_curr, grad_next));
        state.f_curr = ls.f_next;
        state.c = c_next;
        state.q = q_next;
        state.tau = cfg.clip_tau(next_tau);
    };

    Ok(SolveReport {
        xerr: state.step_norm(),
        nitr: state.k,
        nfe: state.nfe,
        wall_time_s: start.elapsed().as_secs_f64(),
        fval: state.f_curr,
        global_error: None,
        termination,
        projections: state.projections,
        fastpath_hits: state.fastpath_hits,
        trace,
        x_hat: state.x_curr,
    })
}

/// Solves a PSDP instance; fills `global_error` from the planted optimum.
pub fn solve(inst: &ProblemInstance, x0: PsdMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_observed(inst, x0, cfg, &mut |_| {})
}

pub fn solve_observed(
    inst: &ProblemInstance,
    x0: PsdMatrix,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&SolverEvent<'_>),
) -> Result<SolveReport> {
    let mut report = minimize(inst, x0, cfg, observer)?;
    report.global_error = global_error(inst, &report.x_hat);
    Ok(report)
}

pub(crate) fn global_error(inst: &ProblemInstance, x_hat: &PsdMatrix) -> Option<f64> {
    inst.known_optimum()
        .map(|x_star| (x_star.as_matrix() - x_hat.as_matrix()).frobenius_norm())
}

/// `‖X − π(X − ∇F(X))‖_F`; zero exactly at stationary points.
pub fn stationarity_residual(inst: &ProblemInstance, x: &PsdMatrix) -> Result<f64> {
    let grad = inst.gradient(x.as_matrix())?;
    let (z, _) = projection_arc_point(x, &grad, 1.0, false)?;
    Ok((x.as_matrix() - z.as_matrix()).frobenius_norm())
}
