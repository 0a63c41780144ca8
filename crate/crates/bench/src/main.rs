use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracdg_bench::config::{LeftFrom, Metric};
use fracdg_bench::presets::{figure, published_table};
use fracdg_bench::{emit, run, sweep, BenchError, Format, MSpace, Metrics, RunConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "fracdg-bench", version, about = "DG convergence benchmarks for the fractional diffusion-wave model problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve once and report the errors.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        nsteps: usize,
        /// `auto` for ceil(N^1.5), or a subinterval count.
        #[arg(long, default_value = "auto")]
        mspace: MSpace,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 12)]
        fine_m: usize,
        /// Comma-separated subset of left, right, pp.
        #[arg(long, value_delimiter = ',', value_parser = parse_metric)]
        metrics: Option<Vec<Metric>>,
        /// Include n = 0 in the left nodal error.
        #[arg(long)]
        left_from_initial: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the sweep described by a JSON file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Overrides the spec's parallelism.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce one of the published convergence tables.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        which: u8,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Data for one of the published figures (N = 64, M = 512).
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    match s {
        "left" => Ok(Metric::Left),
        "right" => Ok(Metric::Right),
        "pp" => Ok(Metric::Pp),
        _ => Err(format!("unknown metric `{s}` (left, right, pp)")),
    }
}

fn run_sweep(config: &SweepConfig, output: &OutputArgs) -> Result<(), BenchError> {
    let outcome = sweep(config)?;
    for failed in outcome.failures() {
        eprintln!(
            "cell alpha={} gamma={} N={} failed: {}",
            failed.alpha,
            failed.gamma,
            failed.intervals,
            failed.error.as_deref().unwrap_or_default()
        );
    }
    emit(&outcome.reports, output.format, output.out.as_deref())?;
    if outcome.failures().next().is_some() {
        return Err(BenchError::Numerical("some sweep cells failed".into()));
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Solve {
            alpha,
            gamma,
            nsteps,
            mspace,
            horizon,
            fine_m,
            metrics,
            left_from_initial,
            output,
        } => {
            let config = RunConfig {
                mspace,
                horizon,
                fine_m,
                metrics: metrics.map_or_else(Metrics::all, |m| Metrics::from_list(&m)),
                left_from: if left_from_initial { LeftFrom::Initial } else { LeftFrom::First },
                ..RunConfig::new(alpha, gamma, nsteps)
            };
            let outcome = run(&config)?;
            emit(&[outcome.report], output.format, output.out.as_deref())
        }
        Command::Sweep { spec, jobs, output } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| BenchError::Config(format!("spec: {}: {e}", spec.display())))?;
            let mut config: SweepConfig = serde_json::from_str(&text)?;
            if let Some(jobs) = jobs {
                config.jobs = jobs;
            }
            run_sweep(&config, &output)
        }
        Command::Tables { which, jobs, output } => {
            let table = published_table(which).ok_or_else(|| BenchError::Config(format!("which: no table {which}")))?;
            run_sweep(&table.sweep(jobs), &output)
        }
        Command::Figure { which, jobs, output } => {
            let config = figure(which, jobs).ok_or_else(|| BenchError::Config(format!("which: no figure {which}")))?;
            run_sweep(&config, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
