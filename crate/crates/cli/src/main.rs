use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use spinqec::circuits::LogicalBasis;
use spinqec::codes::CodeKind;
use spinqec::experiments::{
    parse_grid, parse_shot_policy, run_experiment, write_outputs, ExperimentConfig, ExperimentId, ReadoutSelect,
    SweepVar,
};
use spinqec::noise::Encoding;
use spinqec::sampler::ShotPolicy;

const WORKERS_ENV: &str = "QEC_SPINSIM_WORKERS";

#[derive(Parser)]
#[command(name = "qec-spinsim", version, about = "Logical error rates of distance-3 codes on spin qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write results.csv, manifest.txt and per-point ledgers.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// qec-step, surface-prep or bs-prep.
    #[arg(long)]
    experiment: ExperimentId,
    /// surface17 or bs17.
    #[arg(long, default_value = "surface17")]
    code: CodeKind,
    /// all-ld or hybrid.
    #[arg(long, default_value = "hybrid")]
    encoding: Encoding,
    /// Target state of surface-prep: plus or zero.
    #[arg(long, default_value = "plus", value_parser = parse_basis)]
    basis: LogicalBasis,
    /// `var=grid`, or just `var` for the default grid. Grid is `a,b,c`,
    /// `linspace:a:b:n` or `logspace:a:b:n`.
    #[arg(long)]
    sweep: Option<String>,
    /// Hardware override `key=value`, e.g. `st.p_1q=4e-4`. Repeatable.
    #[arg(long = "set", value_parser = parse_kv)]
    overrides: Vec<(String, String)>,
    /// ST readout infidelity: a `t_int_us,infidelity` CSV, `fallback` or `const:p`.
    #[arg(long, default_value = "fallback")]
    readout_curve: ReadoutSelect,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `base[:cap[:rel_target]]` or `fixed:N`.
    #[arg(long, default_value = "10000:1000000:0.05")]
    shots: String,
    /// Subsets with weight below this are left to the upper bound.
    #[arg(long, default_value_t = 1e-6)]
    threshold: f64,
    /// Per-point wall-clock budget in seconds; later subsets are skipped and the point is marked partial.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_basis(s: &str) -> Result<LogicalBasis, String> {
    match s {
        "plus" | "+" => Ok(LogicalBasis::Plus),
        "zero" | "0" => Ok(LogicalBasis::Zero),
        _ => Err(format!("unknown basis {s:?}")),
    }
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn default_grid(var: &SweepVar) -> Option<&'static str> {
    match var {
        SweepVar::TInt | SweepVar::TReadout => Some("logspace:0.1:10:20"),
        SweepVar::T2Star => Some("5,10,21,50,100,210,inf"),
        SweepVar::Key(_) => None,
    }
}

fn parse_sweep(s: &str) -> Result<(SweepVar, Vec<f64>), String> {
    let (name, grid) = match s.split_once('=') {
        Some((n, g)) => (n, Some(g)),
        None => (s, None),
    };
    let var: SweepVar = name.trim().parse()?;
    let grid = match grid {
        Some(g) => g,
        None => default_grid(&var).ok_or_else(|| format!("sweep {name:?} needs an explicit grid"))?,
    };
    Ok((var, parse_grid(grid)?))
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let policy: ShotPolicy = parse_shot_policy(&args.shots)?;
    let sweep = args.sweep.as_deref().map(parse_sweep).transpose()?;
    let time_budget = match args.time_budget {
        Some(s) if s > 0.0 && s.is_finite() => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(format!("time budget must be positive, got {s}")),
        None => None,
    };
    Ok(ExperimentConfig {
        experiment: args.experiment,
        code: args.code,
        encoding: args.encoding,
        basis: args.basis,
        sweep,
        overrides: args.overrides.clone(),
        readout: args.readout_curve.clone(),
        seed: args.seed,
        policy,
        threshold: args.threshold,
        time_budget,
    })
}

fn workers() -> Result<usize, String> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run(args: RunArgs) -> ExitCode {
    let config = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let n = match workers() {
        Ok(n) => n,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool");
    let result = pool.install(|| run_experiment::<f64>(&config)).and_then(|r| {
        write_outputs(&r, &args.out)?;
        Ok(r)
    });
    match result {
        Ok(r) => {
            for row in r.rows() {
                println!(
                    "{:>10} p_L in [{:.4e}, {:.4e}] +/- {:.2e}  ({:.1} s)",
                    row.sweep_value, row.p_l_lower, row.p_l_upper, row.std_err, row.wall_s
                );
            }
            if r.points.iter().any(|p| p.run.partial) {
                eprintln!("warning: time budget hit; some points are partial (see manifest)");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 3 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(args) => run(args),
    }
}
