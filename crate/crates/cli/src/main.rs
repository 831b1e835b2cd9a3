use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaplab::bounds::{self, TolerancePolicy};
use gaplab::fdsolver::{self, SpectralResult};
use gaplab::oracle::{self, AGREEMENT_TOL};
use gaplab::parallel::{self, Execution};
use gaplab::powerlaw;
use gaplab::sweep::{self, RowStatus, SweepConfig};
use gaplab::{Error, PotentialSpec};
use serde::Serialize;

/// Ground-state energy, spectral gap and bound verification for Neumann
/// Schrödinger operators on an interval.
#[derive(Parser)]
#[command(name = "gaplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the two lowest eigenpairs and print them as JSON.
    Solve(SolveArgs),
    /// Check every inequality against a fresh solve; exit 1 on violation.
    Verify(VerifyArgs),
    /// Solve over a range of interval lengths and write CSV.
    Sweep(SweepArgs),
    /// Fit a power law to one column of a sweep CSV.
    Fit(FitArgs),
}

#[derive(Args)]
struct Instance {
    /// Potential as inline JSON or a path to a JSON file.
    #[arg(long)]
    potential: String,
    /// Interval length L.
    #[arg(long)]
    length: f64,
    /// Base cell count; defaults to max(256, ceil(64 L)).
    #[arg(long)]
    cells: Option<usize>,
    /// Number of grid levels used for extrapolation (2 to 4).
    #[arg(long, default_value_t = fdsolver::DEFAULT_LEVELS)]
    levels: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: Instance,
    /// Leave the sampled ground state out of the output.
    #[arg(long)]
    omit_profile: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    /// Cross-check the eigenvalues against an independent method first.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct ConfigSource {
    /// Sweep configuration file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sweep configuration as inline JSON.
    #[arg(long)]
    config_json: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: ConfigSource,
    /// CSV destination; overrides the config. Standard output when unset.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Gnuplot script destination; overrides the config.
    #[arg(long)]
    plot_script: Option<PathBuf>,
    /// Compute rows one after another.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Sweep CSV file.
    csv: PathBuf,
    /// Column to fit against L.
    #[arg(long, default_value = "gap")]
    column: String,
    /// Ignore rows with L below this value.
    #[arg(long)]
    l_min: Option<f64>,
    /// Ignore rows with L above this value.
    #[arg(long)]
    l_max: Option<f64>,
}

#[derive(Serialize)]
struct FitOutput<'a> {
    csv: &'a Path,
    column: &'a str,
    #[serde(flatten)]
    fit: powerlaw::PowerLawFit,
    verdict: &'static str,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Success,
    Failure,
}

fn read_input(path: &Path) -> gaplab::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_potential(arg: &str) -> gaplab::Result<PotentialSpec> {
    if arg.trim_start().starts_with('{') {
        PotentialSpec::from_json(arg)
    } else {
        PotentialSpec::from_json(&read_input(Path::new(arg))?)
    }
}

fn solve_instance(instance: &Instance) -> gaplab::Result<(PotentialSpec, SpectralResult)> {
    let p = load_potential(&instance.potential)?;
    let cells = instance
        .cells
        .unwrap_or_else(|| fdsolver::default_base_cells(instance.length));
    let result = fdsolver::solve_extrapolated(&p, instance.length, cells, instance.levels)?;
    Ok((p, result))
}

fn print_json<T: Serialize>(value: &T) -> gaplab::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn solve(args: SolveArgs) -> gaplab::Result<Outcome> {
    let (_, mut result) = solve_instance(&args.instance)?;
    if args.omit_profile {
        result = result.without_profile();
    }
    print_json(&result)?;
    Ok(Outcome::Success)
}

fn verify(args: VerifyArgs) -> gaplab::Result<Outcome> {
    let (p, result) = solve_instance(&args.instance)?;
    let length = args.instance.length;
    let mut report = bounds::verify(&p, length, &result, &TolerancePolicy::default())?;
    if args.oracle {
        let agreement = oracle::cross_check(&p, length, &result, AGREEMENT_TOL)?;
        if !agreement.agrees() {
            log::error!("solver and oracle disagree: {agreement:?}");
        }
        report.oracle = Some(agreement);
    }
    for c in report.violations() {
        log::error!("violated: {} (slack {:?}, allowance {:?})", c.name, c.slack, c.allowance);
    }
    match args.format {
        Format::Json => print_json(&report)?,
        Format::Csv => report.write_csv(io::stdout().lock())?,
    }
    Ok(if report.all_hold() {
        Outcome::Success
    } else {
        Outcome::Failure
    })
}

fn run_sweep(args: SweepArgs) -> gaplab::Result<Outcome> {
    let text = match (&args.source.config, &args.source.config_json) {
        (Some(path), _) => read_input(path)?,
        (None, Some(json)) => json.clone(),
        (None, None) => unreachable!("clap enforces a config source"),
    };
    let mut config = SweepConfig::from_json(&text)?;
    if args.output.is_some() {
        config.output = args.output;
    }
    if args.plot_script.is_some() {
        config.plot_script = args.plot_script;
    }
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let records = sweep::run_sweep(&config, exec)?;

    match &config.output {
        Some(path) => sweep::write_csv(&records, io::BufWriter::new(fs::File::create(path)?))?,
        None => sweep::write_csv(&records, io::stdout().lock())?,
    }
    if let Some(script) = &config.plot_script {
        let csv = config.output.as_deref().unwrap_or(Path::new("sweep.csv"));
        fs::write(script, sweep::plot_script(csv, &config.potential))?;
    }

    let mut ok = true;
    for r in &records {
        match r.status {
            RowStatus::Ok => {}
            RowStatus::Violation => {
                ok = false;
                log::error!("L = {}: bound violation", r.length);
            }
            RowStatus::Error => {
                ok = false;
                log::error!("L = {}: {}", r.length, r.message.as_deref().unwrap_or("solve failed"));
            }
        }
    }
    Ok(if ok { Outcome::Success } else { Outcome::Failure })
}

fn fit(args: FitArgs) -> gaplab::Result<Outcome> {
    let text = read_input(&args.csv)?;
    let (lengths, values) = powerlaw::read_columns(text.as_bytes(), &args.column, args.l_min, args.l_max)?;
    let fit = powerlaw::fit_power_law(&lengths, &values)?;
    print_json(&FitOutput {
        csv: &args.csv,
        column: &args.column,
        fit,
        verdict: if fit.power_law { "power-law" } else { "not power-law" },
    })?;
    Ok(Outcome::Success)
}

fn run(cli: Cli) -> gaplab::Result<Outcome> {
    let threads = parallel::parse_thread_cap(std::env::var(parallel::THREADS_ENV).ok().as_deref())?;
    parallel::configure_threads(threads)?;
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Fit(args) => fit(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
