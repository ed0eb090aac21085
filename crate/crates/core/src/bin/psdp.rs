use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psdp_core::bench::{self, emit, preset, ExperimentSpec, Method, OutputFormat};
use psdp_core::generator::{make_instance, GeneratorSpec, OptimumKind, ProblemKind};
use psdp_core::spg::write_trace_csv;
use psdp_core::{BbRule, Error, ProblemInstance, PsdMatrix, Result};

#[derive(Parser)]
#[command(name = "psdp", version, about = "PSD Procrustes solvers and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run preset or custom experiments and print aggregated tables.
    Run(RunArgs),
    /// Write one generated instance as JSON.
    Generate(GenerateArgs),
    /// Solve an instance stored as JSON and print the report.
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BbArg {
    Bb1,
    Bb2,
    Alt,
}

impl From<BbArg> for BbRule {
    fn from(b: BbArg) -> Self {
        match b {
            BbArg::Bb1 => BbRule::Bb1,
            BbArg::Bb2 => BbRule::Bb2,
            BbArg::Alt => BbRule::Alternate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Markdown,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Markdown => OutputFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Paper preset E1..E18.
    #[arg(long, conflicts_with_all = ["n", "spec_file"])]
    preset: Option<String>,
    /// JSON file with a list of experiment specs.
    #[arg(long, conflicts_with = "n")]
    spec_file: Option<PathBuf>,
    #[arg(long, requires_all = ["m", "problem"])]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    problem: Option<u8>,
    /// Non-monotonicity weight (overrides the preset value).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rank_deficient: bool,
    #[arg(long)]
    label: Option<String>,
    /// Comma-separated subset of optpsdp,grad,fgm.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    bb: Option<BbArg>,
    #[arg(long)]
    no_fastpath: bool,
    /// Iteration trace CSV of the first OptPSDP run.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    problem: u8,
    #[arg(long)]
    rank_deficient: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long, default_value = "optpsdp")]
    method: String,
    #[arg(long, default_value_t = 0.85)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "bb1")]
    bb: BbArg,
    #[arg(long)]
    no_fastpath: bool,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn experiments(args: &RunArgs) -> Result<Vec<ExperimentSpec>> {
    let mut specs = if let Some(label) = &args.preset {
        vec![preset(label)?]
    } else if let Some(path) = &args.spec_file {
        serde_json::from_str(&fs::read_to_string(path)?)?
    } else if let (Some(n), Some(m), Some(problem)) = (args.n, args.m, args.problem) {
        vec![ExperimentSpec {
            label: args.label.clone().unwrap_or_else(|| "custom".into()),
            n,
            m,
            problem: ProblemKind::from_number(problem)?,
            optimum: if args.rank_deficient {
                OptimumKind::RankDeficient
            } else {
                OptimumKind::ProjectedRandom
            },
            gamma: args.gamma.unwrap_or(0.85),
            ..preset("E1")?
        }]
    } else {
        return Err(Error::InvalidConfig(
            "give --preset, --spec-file, or --n/--m/--problem".into(),
        ));
    };
    let methods = args
        .methods
        .as_ref()
        .map(|names| names.iter().map(|s| s.parse()).collect::<Result<Vec<Method>>>())
        .transpose()?;
    for spec in &mut specs {
        if let Some(gamma) = args.gamma {
            spec.gamma = gamma;
        }
        if let Some(methods) = &methods {
            spec.methods.clone_from(methods);
        }
        if let Some(reps) = args.reps {
            spec.reps = reps;
        }
        if let Some(seed) = args.seed {
            spec.master_seed = seed;
        }
        if let Some(bb) = args.bb {
            spec.bb_rule = bb.into();
        }
        if args.no_fastpath {
            spec.use_fastpath = false;
        }
        spec.validate()?;
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = specs.iter().find(|s| !seen.insert(s.label.as_str())) {
        return Err(Error::InvalidConfig(format!("duplicate label `{}`", dup.label)));
    }
    Ok(specs)
}

fn trace_path(base: &Path, label: &str, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    base.with_file_name(format!("{stem}_{label}.csv"))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<bool> {
    let specs = experiments(&args)?;
    let mut rows = Vec::new();
    for spec in &specs {
        let outcome = bench::run_experiment_with(spec, args.trace.is_some())?;
        if let (Some(base), Some(trace)) = (&args.trace, &outcome.trace) {
            write_trace_csv(trace, trace_path(base, &spec.label, specs.len() > 1))?;
        }
        rows.extend(outcome.rows);
    }
    for row in rows.iter().filter(|r| r.failed()) {
        eprintln!(
            "{} / {}: {} of {} runs FAILED",
            row.label,
            row.method.name(),
            row.failures,
            row.reps
        );
    }
    write_output(args.out.as_deref(), &emit(&rows, args.format.into())?)?;
    Ok(rows.iter().all(|r| !r.failed()))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let spec = GeneratorSpec {
        n: args.n,
        m: args.m,
        problem: ProblemKind::from_number(args.problem)?,
        optimum: if args.rank_deficient {
            OptimumKind::RankDeficient
        } else {
            OptimumKind::ProjectedRandom
        },
        seed: args.seed,
    };
    let (inst, _) = make_instance(&spec)?;
    write_output(args.out.as_deref(), &(inst.to_json()? + "\n"))
}

fn solve(args: SolveArgs) -> Result<()> {
    let inst = ProblemInstance::from_json(&fs::read_to_string(&args.instance)?)?;
    let method: Method = args.method.parse()?;
    let cfg = psdp_core::SolverConfig {
        gamma: args.gamma,
        bb_rule: args.bb.into(),
        use_fastpath: !args.no_fastpath,
        record_trace: args.trace.is_some(),
        ..Default::default()
    };
    let report = bench::run_method(method, &inst, &PsdMatrix::zeros(inst.n()), &cfg)?;
    if let Some(path) = &args.trace {
        report.write_trace_csv(path)?;
    }
    write_output(args.out.as_deref(), &(report.to_json()? + "\n"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Generate(args) => generate(args).map(|()| true),
        Command::Solve(args) => solve(args).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
