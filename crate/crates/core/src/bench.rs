//! Experiment presets, repeated seeded runs and table output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{fgm_solve, grad_solve, BaselineConfig};
use crate::cone::PsdMatrix;
use crate::error::{Error, Result};
use crate::generator::{derive_seed, make_instance, GeneratorSpec, OptimumKind, ProblemKind};
use crate::objective::ProblemInstance;
use crate::spg::{solve, BbRule, IterationRecord, SolveReport, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "OptPSDP", alias = "optpsdp")]
    OptPsdp,
    #[serde(rename = "Grad", alias = "grad")]
    Grad,
    #[serde(rename = "FGM", alias = "fgm")]
    Fgm,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::OptPsdp, Method::Grad, Method::Fgm];

    pub fn name(self) -> &'static str {
        match self {
            Method::OptPsdp => "OptPSDP",
            Method::Grad => "Grad",
            Method::Fgm => "FGM",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "optpsdp" => Ok(Method::OptPsdp),
            "grad" => Ok(Method::Grad),
            "fgm" => Ok(Method::Fgm),
            _ => Err(Error::InvalidConfig(format!("unknown method `{s}`"))),
        }
    }
}

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}

fn default_reps() -> usize {
    50
}

fn default_true() -> bool {
    true
}

fn default_bb() -> BbRule {
    BbRule::Bb1
}

fn default_optimum() -> OptimumKind {
    OptimumKind::ProjectedRandom
}

/// One experiment: a generator setting run `reps` times for each method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub problem: ProblemKind,
    #[serde(default = "default_optimum")]
    pub optimum: OptimumKind,
    /// Non-monotonicity weight for OptPSDP.
    pub gamma: f64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_bb")]
    pub bb_rule: BbRule,
    #[serde(default = "default_true")]
    pub use_fastpath: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("no methods requested".into()));
        }
        self.generator_spec(0).validate()?;
        self.solver_config().validate()
    }

    pub fn generator_spec(&self, rep: usize) -> GeneratorSpec {
        GeneratorSpec {
            n: self.n,
            m: self.m,
            problem: self.problem,
            optimum: self.optimum,
            seed: derive_seed(self.master_seed, rep as u64),
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            gamma: self.gamma,
            bb_rule: self.bb_rule,
            use_fastpath: self.use_fastpath,
            ..SolverConfig::default()
        }
    }

    pub fn header(&self) -> String {
        format!(
            "{}: n = {}, m = {}, problem = {}, γ = {}",
            self.label,
            self.n,
            self.m,
            self.problem.number(),
            self.gamma
        )
    }
}

/// `(n, m, problem, γ)` for E1..E18; E13..E18 use a rank-deficient optimum.
const PRESETS: [(usize, usize, ProblemKind, f64); 18] = [
    (100, 70, ProblemKind::P1, 0.8),
    (150, 100, ProblemKind::P1, 0.85),
    (1000, 100, ProblemKind::P1, 0.85),
    (1500, 1500, ProblemKind::P1, 0.85),
    (30, 10, ProblemKind::P2, 0.85),
    (100, 50, ProblemKind::P2, 0.55),
    (60, 60, ProblemKind::P2, 0.85),
    (120, 120, ProblemKind::P2, 0.55),
    (50, 10, ProblemKind::P3, 0.55),
    (100, 10, ProblemKind::P3, 0.55),
    (100, 100, ProblemKind::P3, 0.55),
    (150, 150, ProblemKind::P3, 0.55),
    (10, 70, ProblemKind::P1, 0.55),
    (1000, 1000, ProblemKind::P1, 0.85),
    (60, 30, ProblemKind::P2, 0.85),
    (100, 100, ProblemKind::P2, 0.55),
    (60, 30, ProblemKind::P3, 0.55),
    (120, 120, ProblemKind::P3, 0.55),
];

pub fn preset(label: &str) -> Result<ExperimentSpec> {
    let index: usize = label
        .strip_prefix(['E', 'e'])
        .and_then(|d| d.parse().ok())
        .filter(|i| (1..=PRESETS.len()).contains(i))
        .ok_or_else(|| Error::UnknownPreset(label.to_string()))?;
    let (n, m, problem, gamma) = PRESETS[index - 1];
    Ok(ExperimentSpec {
        label: format!("E{index}"),
        n,
        m,
        problem,
        optimum: if index >= 13 {
            OptimumKind::RankDeficient
        } else {
            OptimumKind::ProjectedRandom
        },
        gamma,
        methods: default_methods(),
        reps: default_reps(),
        master_seed: 0,
        bb_rule: BbRule::Bb1,
        use_fastpath: true,
    })
}

pub fn run_method(
    method: Method,
    inst: &ProblemInstance,
    x0: &PsdMatrix,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let baseline = BaselineConfig {
        epsilon: cfg.epsilon,
        max_iter: cfg.max_iter,
        restart: false,
    };
    match method {
        Method::OptPsdp => solve(inst, x0.clone(), cfg),
        Method::Grad => grad_solve(inst, x0.clone(), &baseline),
        Method::Fgm => fgm_solve(inst, x0.clone(), &baseline),
    }
}

/// Everything produced by one repetition.
#[derive(Debug)]
pub struct RepOutcome {
    pub instance: ProblemInstance,
    pub x0: PsdMatrix,
    /// In the order of `spec.methods`.
    pub reports: Vec<(Method, Result<SolveReport>)>,
}

/// Generates instance `rep` and runs every requested method from the same
/// start.
pub fn run_rep(spec: &ExperimentSpec, rep: usize, record_trace: bool) -> Result<RepOutcome> {
    let (mut instance, x0) = make_instance(&spec.generator_spec(rep))?;
    instance.label = spec.label.clone();
    let cfg = SolverConfig {
        record_trace,
        ..spec.solver_config()
    };
    let reports = spec
        .methods
        .iter()
        .map(|&method| (method, run_method(method, &instance, &x0, &cfg)))
        .collect();
    Ok(RepOutcome {
        instance,
        x0,
        reports,
    })
}

/// Per-method means over the successful repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub label: String,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub problem: u8,
    pub gamma: f64,
    pub reps: usize,
    pub failures: usize,
    pub nitr_mean: f64,
    pub nfe_mean: f64,
    pub time_mean_s: f64,
    pub xerr_mean: f64,
    pub fval_mean: f64,
    pub global_error_mean: Option<f64>,
    /// Fraction of projections certified by Cholesky (OptPSDP only).
    pub fastpath_rate: f64,
}

impl AggregateRow {
    pub fn failed(&self) -> bool {
        self.failures > 0
    }
}

#[derive(Debug, Default)]
struct Accumulator {
    runs: usize,
    failures: usize,
    nitr: f64,
    nfe: f64,
    time: f64,
    xerr: f64,
    fval: f64,
    global_error: Option<f64>,
    all_have_global: bool,
    projections: usize,
    fastpath_hits: usize,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            all_have_global: true,
            ..Default::default()
        }
    }

    fn push(&mut self, report: &Result<SolveReport>) {
        let Ok(r) = report else {
            self.failures += 1;
            return;
        };
        self.runs += 1;
        self.nitr += r.nitr as f64;
        self.nfe += r.nfe as f64;
        self.time += r.wall_time_s;
        self.xerr += r.xerr;
        self.fval += r.fval;
        match r.global_error {
            Some(g) => *self.global_error.get_or_insert(0.0) += g,
            None => self.all_have_global = false,
        }
        self.projections += r.projections;
        self.fastpath_hits += r.fastpath_hits;
    }

    fn finish(self, spec: &ExperimentSpec, method: Method) -> AggregateRow {
        let k = self.runs as f64;
        let mean = |v: f64| if self.runs == 0 { f64::NAN } else { v / k };
        AggregateRow {
            label: spec.label.clone(),
            method,
            n: spec.n,
            m: spec.m,
            problem: spec.problem.number(),
            gamma: spec.gamma,
            reps: spec.reps,
            failures: self.failures,
            nitr_mean: mean(self.nitr),
            nfe_mean: mean(self.nfe),
            time_mean_s: mean(self.time),
            xerr_mean: mean(self.xerr),
            fval_mean: mean(self.fval),
            global_error_mean: self
                .global_error
                .filter(|_| self.all_have_global && self.runs > 0)
                .map(mean),
            fastpath_rate: if self.projections == 0 {
                0.0
            } else {
                self.fastpath_hits as f64 / self.projections as f64
            },
        }
    }
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub rows: Vec<AggregateRow>,
    /// OptPSDP iteration trace of repetition 0, when requested.
    pub trace: Option<Vec<IterationRecord>>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<AggregateRow>> {
    Ok(run_experiment_with(spec, false)?.rows)
}

/// Runs all repetitions in index order and aggregates per method.
pub fn run_experiment_with(spec: &ExperimentSpec, trace_first_rep: bool) -> Result<ExperimentOutcome> {
    spec.validate()?;
    let mut accs: Vec<Accumulator> = spec.methods.iter().map(|_| Accumulator::new()).collect();
    let mut trace = None;
    for rep in 0..spec.reps {
        let outcome = run_rep(spec, rep, trace_first_rep && rep == 0)?;
        for (acc, (method, report)) in accs.iter_mut().zip(&outcome.reports) {
            acc.push(report);
            if *method == Method::OptPsdp && trace.is_none() {
                if let Ok(r) = report {
                    trace = r.trace.clone();
                }
            }
        }
    }
    let rows = accs
        .into_iter()
        .zip(&spec.methods)
        .map(|(acc, &method)| acc.finish(spec, method))
        .collect();
    Ok(ExperimentOutcome { rows, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(Error::InvalidConfig(format!("unknown format `{s}`"))),
        }
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "label",
    "method",
    "n",
    "m",
    "problem",
    "gamma",
    "nitr",
    "nfe",
    "time_s",
    "xerr",
    "fval",
    "global_error",
    "fastpath_rate",
];

pub fn emit(rows: &[AggregateRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => emit_csv(rows),
        OutputFormat::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        OutputFormat::Markdown => Ok(emit_markdown(rows)),
    }
}

fn emit_csv(rows: &[AggregateRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.label.clone(),
            r.method.name().to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.problem.to_string(),
            r.gamma.to_string(),
            r.nitr_mean.to_string(),
            r.nfe_mean.to_string(),
            r.time_mean_s.to_string(),
            r.xerr_mean.to_string(),
            r.fval_mean.to_string(),
            r.global_error_mean.map(|g| g.to_string()).unwrap_or_default(),
            r.fastpath_rate.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit_markdown(rows: &[AggregateRow]) -> String {
    let mut out = String::new();
    let mut current: Option<&str> = None;
    for r in rows {
        if current != Some(r.label.as_str()) {
            if current.is_some() {
                out.push('\n');
            }
            current = Some(&r.label);
            let _ = writeln!(
                out,
                "**{}: n = {}, m = {}, problem = {}, γ = {}**\n",
                r.label, r.n, r.m, r.problem, r.gamma
            );
            out.push_str("| Method | Nitr | Nfe | Time | XErr | Fval | Global Error | Fastpath |\n");
            out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|\n");
        }
        if r.failures == r.reps {
            let _ = writeln!(out, "| {} | FAILED | | | | | | |", r.method.name());
            continue;
        }
        let global = r
            .global_error_mean
            .map_or_else(|| "-".to_string(), |g| format!("{g:.3e}"));
        let _ = writeln!(
            out,
            "| {}{} | {:.0} | {:.0} | {:.3} | {:.2e} | {:.2e} | {} | {:.2} |",
            r.method.name(),
            if r.failures > 0 {
                format!(" ({} FAILED)", r.failures)
            } else {
                String::new()
            },
            r.nitr_mean,
            r.nfe_mean,
            r.time_mean_s,
            r.xerr_mean,
            r.fval_mean,
            global,
            r.fastpath_rate
        );
    }
    out
}
