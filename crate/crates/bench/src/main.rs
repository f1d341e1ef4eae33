use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use iqae::confint::CiMethod;
use iqae::oracle::RandomSource;
use iqae_bench::compare::{fit_algorithms, matched_budgets, run_compare, write_points, CompareSpec};
use iqae_bench::csv_io::write_sweep_rows;
use iqae_bench::kschedule::{run_kschedule, KScheduleSpec};
use iqae_bench::sweep::{run_sweep, summarize, SweepSpec};
use iqae_bench::{run_row, Algorithm, RunParams};

#[derive(Parser)]
#[command(name = "iqae-bench", version, about = "Amplitude estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single estimation, printed as one CSV row.
    Run(RunArgs),
    /// IQAE over a grid of amplitudes, targets and confidence levels.
    Sweep(SweepArgs),
    /// Statistics of K_{i+1}/K_i per iteration.
    Kschedule(KScheduleArgs),
    /// Interval half-width against oracle calls for all algorithms.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Iqae,
    Mlae,
    Qae,
    Mc,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Iqae => Algorithm::Iqae,
            AlgoArg::Mlae => Algorithm::Mlae,
            AlgoArg::Qae => Algorithm::Qae,
            AlgoArg::Mc => Algorithm::Mc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CiArg {
    Chernoff,
    Cp,
}

impl From<CiArg> for CiMethod {
    fn from(c: CiArg) -> Self {
        match c {
            CiArg::Chernoff => CiMethod::Chernoff,
            CiArg::Cp => CiMethod::ClopperPearson,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Failure probability.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Measurements per iteration (samples for Monte Carlo).
    #[arg(long, default_value_t = 100)]
    shots: u64,
    #[arg(long, value_enum, default_value = "cp")]
    ci: CiArg,
    /// Minimum growth factor of the Grover power between rounds.
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "iqae")]
    algo: AlgoArg,
    #[arg(long)]
    a: f64,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Powers (MLAE) or ancillas (QAE).
    #[arg(long, default_value_t = 5)]
    m: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    /// Amplitudes; defaults to i/20 for i = 0..=20.
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-4")]
    eps: Vec<f64>,
    #[arg(long = "alpha", value_delimiter = ',', default_value = "0.01,0.05,0.1")]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    shots: u64,
    #[arg(long, default_value_t = 10)]
    reps: u64,
    #[arg(long, value_enum, default_value = "cp")]
    ci: CiArg,
    #[arg(long, default_value_t = 2.0)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KScheduleArgs {
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value_t = 200)]
    reps: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    /// Seeds per budget.
    #[arg(long, default_value_t = 20)]
    reps: u64,
    /// IQAE targets.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Monte Carlo sample counts.
    #[arg(long, value_delimiter = ',')]
    mc: Vec<u64>,
    /// MLAE schedule lengths.
    #[arg(long, value_delimiter = ',')]
    mlae: Vec<u32>,
    /// QAE ancilla counts.
    #[arg(long, value_delimiter = ',')]
    qae: Vec<u32>,
    #[command(flatten)]
    common: Common,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn check_amplitude(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        bail!("--a must lie in [0, 1], got {a}");
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    check_amplitude(args.a)?;
    let params = RunParams {
        algorithm: args.algo.into(),
        a: args.a,
        epsilon: args.eps,
        alpha: args.common.alpha,
        shots: args.common.shots,
        ci_method: args.common.ci.into(),
        min_ratio: args.common.ratio,
        m: args.m,
    };
    let row = run_row(&params, 0, &mut RandomSource::new(args.common.seed))?;
    write_sweep_rows(output(&args.common.out)?, &[row])?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let mut spec = SweepSpec::standard(args.reps, args.seed);
    if !args.a.is_empty() {
        spec.a_values = args.a;
    }
    spec.epsilons = args.eps;
    spec.alphas = args.alphas;
    spec.n_shots = args.shots;
    spec.ci_method = args.ci.into();
    spec.min_ratio = args.ratio;
    let rows = run_sweep(&spec)?;
    write_sweep_rows(output(&args.out)?, &rows)?;
    if args.out.is_some() {
        println!("epsilon,alpha,runs,mean_overhead,max_overhead,coverage");
        for s in summarize(&rows) {
            println!(
                "{},{},{},{:.4},{:.4},{:.4}",
                s.epsilon, s.alpha, s.runs, s.mean_overhead, s.max_overhead, s.coverage
            );
        }
    }
    Ok(())
}

fn cmd_kschedule(args: KScheduleArgs) -> Result<()> {
    check_amplitude(args.a)?;
    let spec = KScheduleSpec {
        ci_method: args.common.ci.into(),
        min_ratio: args.common.ratio,
        ..KScheduleSpec::new(
            args.a,
            args.eps,
            args.common.alpha,
            args.common.shots,
            args.reps,
            args.common.seed,
        )
    };
    let report = run_kschedule(&spec)?;
    report.write_csv(output(&args.common.out)?)?;
    if args.common.out.is_some() {
        println!(
            "mean ratio after first round: {:.4}; runs repeating the first power: {}/{}",
            report.mean_ratio_after_first_round(),
            report.first_round_repeats(),
            args.reps
        );
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    check_amplitude(args.a)?;
    let mut spec = CompareSpec::standard(args.a, args.reps, args.common.seed);
    spec.alpha = args.common.alpha;
    spec.n_shots = args.common.shots;
    spec.ci_method = args.common.ci.into();
    if !args.eps.is_empty() {
        spec.iqae_epsilons = args.eps;
    }
    if !args.mc.is_empty() {
        spec.mc_samples = args.mc;
    }
    if !args.mlae.is_empty() {
        spec.mlae_powers = args.mlae;
    }
    if !args.qae.is_empty() {
        spec.qae_ancillas = args.qae;
    }
    let points = run_compare(&spec)?;
    write_points(output(&args.common.out)?, &points)?;
    if args.common.out.is_some() {
        let fits = fit_algorithms(&points);
        for fit in &fits {
            match fit.slope() {
                Some(s) => println!("{}: log-log slope {s:.4}", fit.algorithm),
                None => println!("{}: not enough budgets for a slope", fit.algorithm),
            }
        }
        for m in matched_budgets(&fits, Algorithm::Qae) {
            println!(
                "calls {:.0}: iqae half-width {:.3e}, qae half-width {:.3e}",
                m.n_oracle, m.iqae_half_width, m.other_half_width
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Kschedule(a) => cmd_kschedule(a),
        Command::Compare(a) => cmd_compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
