//! `longrun` — command-line front end for the exact longest-run
//! heteroscedasticity test.
//!
//! Three subcommands: `test` runs the test on a two-column CSV file,
//! `dist` prints the exact null distribution of the statistic, and
//! `simulate` estimates size and power over the benchmark models.
//!
//! Exit status is part of the contract so shell pipelines can branch on
//! the outcome: 0 = fail to reject (or a successful table command),
//! 3 = reject, 1 = usage error, 2 = data error.

mod input;
mod render;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use longrun::runs_combinatorics::{CriticalValueRecord, ExactProb, LevelConvention};
use longrun::simulation::{
    ALL_MODELS, DEFAULT_GRID_C, DEFAULT_GRID_LEVELS, DEFAULT_GRID_N, DEFAULT_MASTER_SEED,
    DEFAULT_REPLICATES, SIM_MAX_N, SIM_MIN_N,
};
use longrun::{
    null_distribution, reproduce_table, run_test, table_to_csv, table_to_json, Bandwidth, Dataset,
    Decision, MeanEstimatorSpec, PowerEstimate,
};

use render::sig4;

/// Largest `n` for which `dist` will compute the exact law.
const DIST_MAX_N: usize = 10_000;
/// A simulated cell is flagged under `--compare-paper` when it deviates
/// from the published value by more than this many percentage points.
const COMPARE_TOLERANCE_PP: f64 = 6.0;

#[derive(Parser)]
#[command(
    name = "longrun",
    version,
    about = "Exact longest-run test for heteroscedasticity in univariate regression",
    after_help = "Exit status: 0 fail to reject, 3 reject, 1 usage error, 2 data error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the test on a CSV file with header `x,y`
    Test(TestArgs),
    /// Print the exact null distribution of the longest-run statistic
    Dist(DistArgs),
    /// Estimate size and power over the benchmark models
    Simulate(SimulateArgs),
}

#[derive(clap::Args)]
struct TestArgs {
    /// Input CSV file: header line `x,y`, one observation per row
    #[arg(long)]
    input: PathBuf,

    /// Mean estimator for the residuals
    #[arg(long, value_enum, default_value_t = EstimatorKind::Kernel)]
    estimator: EstimatorKind,

    /// Fixed kernel bandwidth (default: leave-one-out cross-validation)
    #[arg(long, allow_negative_numbers = true)]
    bandwidth: Option<f64>,

    /// Use leave-one-out fitted values for the kernel residuals
    #[arg(long)]
    loo: bool,

    /// Target significance level
    #[arg(long, default_value_t = 0.05)]
    level: f64,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(clap::Args)]
struct DistArgs {
    /// Sequence length (number of observations)
    #[arg(long)]
    n: usize,

    /// Target level(s) for which to report critical values; repeatable
    #[arg(long, value_delimiter = ',')]
    level: Vec<f64>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Benchmark model id(s); repeatable (default: 1, 2, 3)
    #[arg(long, value_delimiter = ',', default_values_t = ALL_MODELS)]
    model: Vec<u8>,

    /// Sample size(s); repeatable (default: 50, 100)
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRID_N)]
    n: Vec<usize>,

    /// Heteroscedasticity strength(s); repeatable (default: 0, 0.5, 1)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = DEFAULT_GRID_C)]
    c: Vec<f64>,

    /// Target level(s); repeatable (default: 0.05, 0.10)
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRID_LEVELS)]
    level: Vec<f64>,

    /// Monte Carlo replicates per cell
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    reps: usize,

    /// Master seed; identical seeds give byte-identical output
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    seed: u64,

    /// Mean estimator applied to each replicate
    #[arg(long, value_enum, default_value_t = EstimatorKind::Kernel)]
    estimator: EstimatorKind,

    /// Fixed kernel bandwidth (default: leave-one-out cross-validation)
    #[arg(long, allow_negative_numbers = true)]
    bandwidth: Option<f64>,

    /// Use leave-one-out fitted values for the kernel residuals
    #[arg(long)]
    loo: bool,

    /// Attach published reference values and flag deviating cells
    #[arg(long)]
    compare_paper: bool,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimatorKind {
    /// True mean function (simulations only)
    Known,
    /// Sample-mean fit
    Constant,
    /// Least-squares line
    Ols,
    /// Nadaraya-Watson kernel smoother
    Kernel,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Dist(args) => cmd_dist(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Color is used only for human output on a terminal, and never when the
/// `NO_COLOR` environment variable is set to a nonempty value.
fn use_color() -> bool {
    std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").map_or(true, |v| v.is_empty())
}

fn validate_level(level: f64) -> Result<(), CliError> {
    if level.is_finite() && level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "level {level} must lie strictly between 0 and 1"
        )))
    }
}

/// Builds the estimator spec from the shared flag triple; `known` carries
/// no mean values on the command line, so it is only valid where the
/// model supplies the truth.
fn estimator_spec(
    kind: EstimatorKind,
    bandwidth: Option<f64>,
    loo: bool,
    allow_known: bool,
) -> Result<MeanEstimatorSpec, CliError> {
    if kind != EstimatorKind::Kernel {
        if bandwidth.is_some() {
            return Err(CliError::Usage(
                "--bandwidth applies only to --estimator kernel".into(),
            ));
        }
        if loo {
            return Err(CliError::Usage(
                "--loo applies only to --estimator kernel".into(),
            ));
        }
    }
    match kind {
        EstimatorKind::Known if allow_known => Ok(MeanEstimatorSpec::Known { values: None }),
        EstimatorKind::Known => Err(CliError::Usage(
            "the known estimator requires the true mean function, which is only available \
             in simulations; choose constant, ols, or kernel"
                .into(),
        )),
        EstimatorKind::Constant => Ok(MeanEstimatorSpec::Constant),
        EstimatorKind::Ols => Ok(MeanEstimatorSpec::LinearLeastSquares),
        EstimatorKind::Kernel => {
            let bandwidth = match bandwidth {
                Some(h) if h.is_finite() && h > 0.0 => Bandwidth::Fixed(h),
                Some(h) => {
                    return Err(CliError::Usage(format!(
                        "bandwidth {h} must be positive and finite"
                    )))
                }
                None => Bandwidth::Auto,
            };
            Ok(MeanEstimatorSpec::KernelSmoother { bandwidth, loo })
        }
    }
}

fn cmd_test(args: TestArgs) -> Result<ExitCode, CliError> {
    validate_level(args.level)?;
    let spec = estimator_spec(args.estimator, args.bandwidth, args.loo, false)?;
    let table = input::read_xy_csv(&args.input)?;
    if table.reordered {
        eprintln!("note: rows were not sorted by x and have been reordered");
    }
    if table.duplicates {
        eprintln!("note: duplicate x values present (fixed design with repeats)");
    }
    let data = Dataset::new(table.x, table.y).map_err(|e| CliError::Data(e.to_string()))?;
    let report = run_test(&data, &spec, args.level).map_err(|e| CliError::Data(e.to_string()))?;
    match args.format {
        Format::Human => render::print_test_human(&report, use_color()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        Format::Csv => print!("{}", render::test_to_csv(&report)),
    }
    Ok(match report.decision {
        Decision::Reject => ExitCode::from(3),
        Decision::FailToReject => ExitCode::SUCCESS,
    })
}

/// JSON shape of the `dist` subcommand: the law's rows up to the first
/// cumulative probability equal to 1, plus one critical-value pair per
/// requested level.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct DistReport {
    n: usize,
    ones: usize,
    denominator: String,
    rows: Vec<DistRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    critical_values: Vec<DistCritical>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct DistRow {
    x: usize,
    cdf: ExactProb,
    cdf_value: f64,
    pmf: ExactProb,
    pmf_value: f64,
}

/// Critical values under both selection conventions; the `test`
/// subcommand rejects by the conservative nearest-below rule.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
struct DistCritical {
    target_level: f64,
    nearest_below: CriticalValueRecord,
    nearest: CriticalValueRecord,
}

fn cmd_dist(args: DistArgs) -> Result<ExitCode, CliError> {
    if !(2..=DIST_MAX_N).contains(&args.n) {
        return Err(CliError::Usage(format!(
            "n = {} outside supported range [2, {DIST_MAX_N}]",
            args.n
        )));
    }
    for &level in &args.level {
        validate_level(level)?;
    }
    let dist = null_distribution(args.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rows = Vec::new();
    for x in 1..=args.n {
        let cdf = dist.cdf(x);
        let pmf = dist.pmf(x);
        let done = cdf.is_one();
        rows.push(DistRow {
            x,
            cdf_value: cdf.to_f64(),
            pmf_value: pmf.to_f64(),
            cdf,
            pmf,
        });
        if done {
            break;
        }
    }
    let critical_values = args
        .level
        .iter()
        .map(|&level| {
            Ok(DistCritical {
                target_level: level,
                nearest_below: dist
                    .critical_value_record(level, LevelConvention::NearestBelow)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
                nearest: dist
                    .critical_value_record(level, LevelConvention::Nearest)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = DistReport {
        n: args.n,
        ones: dist.k(),
        denominator: dist.denominator().to_string(),
        rows,
        critical_values,
    };
    match args.format {
        Format::Human => render::print_dist_human(&report),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        Format::Csv => {
            print!("{}", render::dist_to_csv(&report));
            for critical in &report.critical_values {
                eprintln!(
                    "note: target {}: nearest-below L > {} (attained {}), nearest L > {} (attained {})",
                    critical.target_level,
                    critical.nearest_below.critical_value,
                    sig4(critical.nearest_below.attained_level),
                    critical.nearest.critical_value,
                    sig4(critical.nearest.attained_level),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    for &level in &args.level {
        validate_level(level)?;
    }
    for &n in &args.n {
        if !(SIM_MIN_N..=SIM_MAX_N).contains(&n) {
            return Err(CliError::Usage(format!(
                "n = {n} outside supported simulation range [{SIM_MIN_N}, {SIM_MAX_N}]"
            )));
        }
    }
    let spec = estimator_spec(args.estimator, args.bandwidth, args.loo, true)?;
    let mut rows = reproduce_table(
        &args.model,
        &args.n,
        &args.c,
        &args.level,
        args.reps,
        args.seed,
        &spec,
    )
    .map_err(|e| CliError::Usage(e.to_string()))?;
    if !args.compare_paper {
        for row in &mut rows {
            row.paper_reference_value = None;
        }
    }
    let flagged = flag_deviations(&rows);
    match args.format {
        Format::Human => {
            render::print_simulate_human(&rows, &flagged, args.compare_paper, use_color())
        }
        Format::Json => println!("{}", table_to_json(&rows)),
        Format::Csv => print!("{}", table_to_csv(&rows)),
    }
    if args.compare_paper && args.format != Format::Human {
        for &i in &flagged {
            let row = &rows[i];
            eprintln!(
                "warning: model {} n {} c {} at level {}: estimated {} deviates more than \
                 {COMPARE_TOLERANCE_PP}pp from the published {}",
                row.model,
                row.n,
                row.c,
                sig4(row.level_attained),
                sig4(row.rejection_rate),
                sig4(row.paper_reference_value.unwrap_or_default()),
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Indices of rows whose estimate deviates from the attached published
/// value by more than the comparison tolerance.
fn flag_deviations(rows: &[PowerEstimate]) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, row)| {
            row.paper_reference_value.is_some_and(|reference| {
                (row.rejection_rate - reference).abs() * 100.0 > COMPARE_TOLERANCE_PP
            })
        })
        .map(|(i, _)| i)
        .collect()
}
