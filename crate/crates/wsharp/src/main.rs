use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use wsharp::run::{parse_point, DemyanovBackend};
use wsharp::{execute, Command, Format, Overrides, Request};

/// Grid-empirical certificates of global weak sharp minimality.
///
/// Exit codes: 0 certified-empirical (or a non-certificate command
/// succeeded), 2 refuted-on-grid, 3 inconclusive, 1 usage or input error.
/// WSHARP_THREADS caps the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "wsharp", version)]
struct Cli {
    /// Command to run; may also be given with --command.
    #[arg(value_enum, value_name = "COMMAND")]
    command_pos: Option<Command>,
    /// Polytope files for `demyanov`.
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,
    #[arg(long = "command", value_enum, value_name = "NAME", conflicts_with = "command_pos")]
    command: Option<Command>,
    /// Problem file (JSON).
    #[arg(long, value_name = "PATH")]
    problem: Option<PathBuf>,
    /// Modulus for wsharp-check; overrides options.sigma elsewhere.
    #[arg(long)]
    sigma: Option<f64>,
    /// Penalty weight for the constrained certificates.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write x, f(x), dist to argmin and the condition value per grid point.
    #[arg(long, value_name = "PATH")]
    emit_csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Exhauster file for the exhauster certificates (default: symbolic).
    #[arg(long, value_name = "PATH")]
    exhauster: Option<PathBuf>,
    /// Level of g for errorbound.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Level of h for errorbound.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Modulus for errorbound (default: the largest valid on the grid).
    #[arg(long)]
    tau: Option<f64>,
    /// Evaluation point for slope, comma separated; repeatable.
    #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true)]
    points: Vec<Vec<f64>>,
    /// Backend for demyanov.
    #[arg(long, value_enum, default_value_t = DemyanovBackend::Auto)]
    backend: DemyanovBackend,
    /// Direction count for the sampled demyanov backend.
    #[arg(long)]
    directions: Option<usize>,
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("WSHARP_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("WSHARP_THREADS={v:?} is not a thread count"))?;
    anyhow::ensure!(n > 0, "WSHARP_THREADS must be at least 1");
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    configure_threads()?;
    let command = cli.command.or(cli.command_pos).context("no command given (see --help)")?;
    let req = Request {
        problem: cli.problem,
        files: cli.files,
        overrides: Overrides {
            sigma: cli.sigma,
            lambda: cli.lambda,
            seed: cli.seed,
            alpha: cli.alpha,
            beta: cli.beta,
            tau: cli.tau,
            points: cli.points,
            exhauster: cli.exhauster,
            backend: cli.backend,
            directions: cli.directions,
        },
        emit_csv: cli.emit_csv,
    };
    let start = Instant::now();
    let out = execute(command, &req)?;
    print!("{}", out.render(cli.format));
    eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
