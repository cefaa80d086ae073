use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dirac_reduce::dsl::{builtin_names, builtin_source, Scenario};
use dirac_reduce::harness::pipeline::{parse_point, psi1_expression, region_center, PIPELINE_ORDER};
use dirac_reduce::harness::report::write_csv;
use dirac_reduce::harness::{realify_at, reduce_at, resolve_scenario, run_verification, Tolerances, VerifyOptions};
use dirac_reduce::oracle::{random_scenario, RandomFieldSpec};
use dirac_reduce::{Error, DEFAULT_ORDER};

#[derive(Parser)]
#[command(name = "dirac-reduce", version, about = "Verify the one-component reduction of the Dirac equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite at sampled points.
    Verify(VerifyArgs),
    /// Print the elimination pipeline at one point.
    Reduce(PointArgs),
    /// Gauge psi1 to a real function at one point.
    Realify(PointArgs),
    /// List the built-in scenarios.
    Scenarios {
        /// Print the document of one scenario.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in name, file path, or name in $DIRAC_REDUCE_SCENARIO_DIR.
    #[arg(required_unless_present = "random")]
    scenario: Option<String>,
    /// Generate a random field scenario from this seed instead.
    #[arg(long, conflicts_with = "scenario")]
    random: Option<u64>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    points: u64,
    #[arg(long, default_value_t = DEFAULT_ORDER as u64, value_parser = clap::value_parser!(u64).range(5..=10))]
    order: u64,
    /// Tolerance of the reduction identities.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Seed for point sampling; defaults to the --random seed or 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write per-point residuals as CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PointArgs {
    scenario: String,
    /// Expression for psi1; defaults to the scenario's.
    #[arg(long)]
    psi1: Option<String>,
    /// `t,x,y,z`; defaults to the region centre.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, default_value_t = PIPELINE_ORDER as u64, value_parser = clap::value_parser!(u64).range(5..=10))]
    order: u64,
    #[arg(long)]
    json: bool,
}

/// Exit 2: the request itself is unusable.
fn usage(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

/// Exit 1: the computation refused or failed.
fn failure(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))
}

fn verify(args: VerifyArgs) -> ExitCode {
    let scenario: Scenario = match (&args.scenario, args.random) {
        (_, Some(seed)) => match random_scenario(&RandomFieldSpec::with_seed(seed)) {
            Ok(s) => s,
            Err(e) => return usage(e),
        },
        (Some(name), None) => match resolve_scenario(name) {
            Ok(s) => s,
            Err(e) => return usage(e),
        },
        (None, None) => unreachable!("clap requires one of them"),
    };
    let opts = VerifyOptions {
        points: args.points as usize,
        order: args.order as usize,
        seed: args.seed.or(args.random).unwrap_or(0),
        tolerances: Tolerances {
            identity: args.tolerance,
            ..Tolerances::default()
        },
    };
    let (report, rows) = match run_verification(&scenario, &opts) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return usage(io_error(path, e));
        }
    }
    if let Some(path) = &args.csv {
        let written = File::create(path)
            .map_err(|e| io_error(path, e))
            .and_then(|f| write_csv(&rows, f));
        if let Err(e) = written {
            return usage(e);
        }
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.summary());
        if report.degenerate_points == report.points {
            println!("every point is degenerate: iF1 + F2 vanishes, the elimination is undefined for this field");
        }
    }
    if report.overall_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

struct Prepared {
    scenario: Scenario,
    psi1: dirac_reduce::dsl::Expr,
    point: [f64; 4],
}

fn prepare(args: &PointArgs) -> Result<Prepared, Error> {
    let scenario = resolve_scenario(&args.scenario)?;
    let psi1 = psi1_expression(&scenario, args.psi1.as_deref())?;
    let point = match &args.point {
        Some(text) => parse_point(text)?,
        None => region_center(&scenario),
    };
    scenario.check_point(point)?;
    Ok(Prepared { scenario, psi1, point })
}

fn point_command(args: PointArgs, realify: bool) -> ExitCode {
    let prep = match prepare(&args) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let order = args.order as usize;
    let text = if realify {
        realify_at(&prep.scenario, &prep.psi1, prep.point, order).map(|s| {
            if args.json {
                serde_json::to_string_pretty(&s).expect("finite summary")
            } else {
                s.to_string()
            }
        })
    } else {
        reduce_at(&prep.scenario, &prep.psi1, prep.point, order).map(|s| {
            if args.json {
                serde_json::to_string_pretty(&s).expect("finite summary")
            } else {
                s.to_string()
            }
        })
    };
    match text {
        Ok(t) => {
            println!("{}", t.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => failure(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Reduce(args) => point_command(args, false),
        Command::Realify(args) => point_command(args, true),
        Command::Scenarios { show: Some(name) } => match builtin_source(&name) {
            Some(src) => {
                print!("{src}");
                ExitCode::SUCCESS
            }
            None => usage(dirac_reduce::ScenarioError::Unknown(name).into()),
        },
        Command::Scenarios { show: None } => {
            for name in builtin_names() {
                let description = resolve_scenario(name)
                    .ok()
                    .and_then(|s| s.description)
                    .unwrap_or_default();
                println!("{name:<14} {description}");
            }
            ExitCode::SUCCESS
        }
    }
}
