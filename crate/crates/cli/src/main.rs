use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use somqual::{NeighborhoodKernel, Topology};
use somqual_cli::demo::{self, Experiment};
use somqual_cli::evaluate::{evaluate, parse_metric_list, EvaluationConfig, ReportFormat};
use somqual_cli::train::{train, TrainOptions};
use somqual_cli::{CliError, Result};

/// Quality metrics for self-organizing maps.
#[derive(Debug, Parser)]
#[command(name = "somqual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute metrics for a codebook and a data set.
    Evaluate(EvaluateArgs),
    /// Train a map with the stochastic algorithm and write its codebook.
    Train(TrainArgs),
    /// Run one of the demonstration experiments.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, default_value = "rectangular", value_parser = parse_from_str::<Topology>)]
    topology: Topology,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Prototype matrix, one row per unit in row-major order.
    #[arg(long)]
    codebook: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// One nonnegative class label per data row.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated metric names.
    #[arg(long)]
    metrics: String,
    /// Neighborhood size for trustworthiness and neighborhood preservation.
    #[arg(long)]
    k: Option<usize>,
    /// Kernel temperature for distortion.
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, default_value = "gaussian", value_parser = parse_from_str::<NeighborhoodKernel>)]
    kernel: NeighborhoodKernel,
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    /// Initial temperature [default: half the larger map side]
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    /// Initial learning rate.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Final learning rate [default: alpha / 100]
    #[arg(long)]
    alpha_final: Option<f64>,
    #[arg(long, default_value = "gaussian", value_parser = parse_from_str::<NeighborhoodKernel>)]
    kernel: NeighborhoodKernel,
    #[arg(long, default_value_t = 20_000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DemoArgs {
    /// square, tf1d or stripe.
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    outdir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_from_str<T>(s: &str) -> std::result::Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let config = EvaluationConfig {
        rows: args.grid.rows,
        cols: args.grid.cols,
        topology: args.grid.topology,
        metrics: parse_metric_list(&args.metrics)?,
        k: args.k,
        temperature: args.temperature,
        kernel: args.kernel,
        codebook: args.codebook,
        data: args.data,
        labels: args.labels,
        format: args.format.parse::<ReportFormat>()?,
    };
    let report = evaluate(&config)?;
    let text = report.render(config.format);
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?,
        None => print!("{text}"),
    }
    let failed: Vec<String> = report
        .errors()
        .map(|(metric, kind, _)| format!("{metric} ({kind})"))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::MetricsFailed {
            failed,
            total: report.metrics.len(),
        })
    }
}

fn run_train(args: TrainArgs) -> Result<()> {
    let options = TrainOptions {
        data: args.data,
        out: args.out,
        rows: args.grid.rows,
        cols: args.grid.cols,
        topology: args.grid.topology,
        t_max: args.tmax,
        t_min: args.tmin,
        alpha: args.alpha,
        alpha_final: args.alpha_final,
        iterations: args.iters,
        seed: args.seed,
        kernel: args.kernel,
    };
    train(&options).map(|_| ())
}

fn run_demo(args: DemoArgs) -> Result<()> {
    let experiment: Experiment = args.experiment.parse()?;
    match demo::run(experiment, &args.outdir, args.seed)? {
        demo::DemoOutcome::Square(rows) => {
            println!("map,topographic_error,combined_error,kruskal_shepard_error,c_measure");
            for r in rows {
                println!(
                    "{},{},{},{},{}",
                    r.map, r.topographic_error, r.combined_error, r.kruskal_shepard_error, r.c_measure
                );
            }
        }
        demo::DemoOutcome::Tf1d(outcome) => {
            println!("k,tf");
            for (k, v) in outcome.series {
                println!("{k},{v}");
            }
        }
        demo::DemoOutcome::Stripe(rows) => {
            println!("solution,quantization_error,topographic_error,combined_error");
            for r in rows {
                println!(
                    "{},{},{},{}",
                    r.solution, r.quantization_error, r.topographic_error, r.combined_error
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or_default().trim_start_matches("error: ");
            let err = CliError::Config(first.to_string());
            eprintln!("{}", err.diagnostic());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Evaluate(args) => run_evaluate(args),
        Command::Train(args) => run_train(args),
        Command::Demo(args) => run_demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
