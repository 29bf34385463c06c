use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{ArgAction, CommandFactory, Parser, Subcommand, ValueEnum};

use adsopt::benchmarks::{builtin_problem, Suite};
use adsopt::harness::{profiles_from_dir, run_campaign, write_profiles, BudgetSpec, CampaignSpec};
use adsopt::problem::{Problem, SubprocessBlackbox};
use adsopt::solvers::{equivalence_check, run, Algorithm, RunOptions, SearchKind, Tau};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "ADSOPT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "adsopt",
    version,
    about = "Direct-search blackbox optimizer (ADS, MADS, SDDS)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ads,
    Mads,
    Sdds,
    AdsOrthomads,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ads => Algorithm::Ads,
            AlgoArg::Mads => Algorithm::Mads,
            AlgoArg::Sdds => Algorithm::Sdds,
            AlgoArg::AdsOrthomads => Algorithm::AdsOrthomads,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    None,
    Quadratic,
}

impl From<SearchArg> for SearchKind {
    fn from(s: SearchArg) -> Self {
        match s {
            SearchArg::None => SearchKind::None,
            SearchArg::Quadratic => SearchKind::Quadratic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one problem and write its evaluation history.
    Run {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Registered problem name.
        #[arg(
            long,
            conflicts_with = "blackbox",
            required_unless_present = "blackbox"
        )]
        problem: Option<String>,
        /// External executable speaking the one-line stdin/stdout protocol.
        #[arg(long)]
        blackbox: Option<PathBuf>,
        /// Start point for --blackbox, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        lower: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        upper: Option<Vec<f64>>,
        /// Number of constraint values the blackbox prints after the objective.
        #[arg(long, default_value_t = 0)]
        constraints: usize,
        /// Per-evaluation timeout in seconds for --blackbox.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "quadratic")]
        search: SearchArg,
        /// Step-size factor, `p/q` or a decimal.
        #[arg(long, default_value = "1/2")]
        tau: String,
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        opportunistic: bool,
        /// Initial frame and exclusion size.
        #[arg(long)]
        initial_size: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Run a benchmark suite with several algorithms and seeds.
    Campaign {
        #[arg(long)]
        suite: String,
        #[arg(
            long,
            value_delimiter = ',',
            value_enum,
            default_value = "ads,mads,sdds"
        )]
        algos: Vec<AlgoArg>,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Evaluation budget per run.
        #[arg(
            long,
            conflicts_with = "budget_groups",
            required_unless_present = "budget_groups"
        )]
        budget: Option<usize>,
        /// Budget in groups of n+1 evaluations.
        #[arg(long)]
        budget_groups: Option<usize>,
        /// Restrict the suite to these problems.
        #[arg(long, value_delimiter = ',')]
        problems: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "quadratic")]
        search: SearchArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build data profiles from a campaign directory.
    Profile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau_acc: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that OrthoMADS and its ADS instance produce the same trial points.
    EquivCheck {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "quadratic")]
        search: SearchArg,
    },
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            algo,
            problem,
            blackbox,
            x0,
            lower,
            upper,
            constraints,
            timeout,
            budget,
            seed,
            search,
            tau,
            opportunistic,
            initial_size,
            out,
            format,
        } => {
            let algorithm = Algorithm::from(algo);
            let tau = Tau::parse(&tau).unwrap_or_else(|e| usage_error(e));
            if matches!(algorithm, Algorithm::Mads | Algorithm::AdsOrthomads)
                && tau.as_ratio().is_none()
            {
                usage_error(format!(
                    "mesh-based algorithms need a rational tau p/q with q <= 1000 (got {tau})"
                ));
            }
            if budget == 0 {
                usage_error("--budget must be at least 1");
            }
            let problem = match (problem, blackbox) {
                (Some(name), _) => builtin_problem(&name),
                (None, Some(path)) => {
                    let Some(x0) = x0 else {
                        usage_error("--blackbox needs --x0");
                    };
                    if !(timeout > 0.0 && timeout.is_finite()) {
                        usage_error("--timeout must be positive");
                    }
                    SubprocessBlackbox::new(&path, Duration::from_secs_f64(timeout)).and_then(
                        |bb| {
                            let name = path
                                .file_name()
                                .map_or("blackbox".into(), |s| s.to_string_lossy().into_owned());
                            Problem::new(
                                name,
                                x0,
                                constraints,
                                Arc::new(bb.expect_constraints(constraints)),
                            )
                        },
                    )
                }
                (None, None) => usage_error("one of --problem or --blackbox is required"),
            };
            let problem = match problem.and_then(|p| {
                if lower.is_some() || upper.is_some() {
                    p.with_bounds(lower, upper)
                } else {
                    Ok(p)
                }
            }) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let mut options = RunOptions {
                tau,
                search: search.into(),
                opportunistic,
                ..RunOptions::default()
            };
            if let Some(s) = initial_size {
                options = options.with_initial_size(s);
            }
            let history = match run(algorithm, &problem, budget, seed, &options) {
                Ok(h) => h,
                Err(e) => return fail(e),
            };
            let ext = match format {
                FormatArg::Csv => "csv",
                FormatArg::Jsonl => "jsonl",
            };
            let out = out.unwrap_or_else(|| {
                default_out_dir().join(format!(
                    "{}__{}__s{seed}.{ext}",
                    problem.name(),
                    algorithm.as_str()
                ))
            });
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                if let Err(e) = std::fs::create_dir_all(dir) {
                    return fail(format!("{}: {e}", dir.display()));
                }
            }
            let written = match format {
                FormatArg::Csv => history.write_csv(&out),
                FormatArg::Jsonl => history.write_jsonl(&out),
            };
            if let Err(e) = written {
                return fail(e);
            }
            println!(
                "{} on {}: {} evaluations, best {} -> {}",
                algorithm,
                problem.name(),
                history.records.len(),
                history.best_value(),
                out.display()
            );
            ExitCode::SUCCESS
        }
        Command::Campaign {
            suite,
            algos,
            seeds,
            budget,
            budget_groups,
            problems,
            search,
            out,
        } => {
            let suite = Suite::parse(&suite).unwrap_or_else(|e| usage_error(e));
            if seeds == 0 {
                usage_error("--seeds must be at least 1");
            }
            let budget = match (budget, budget_groups) {
                (Some(n), _) if n > 0 => BudgetSpec::Evals(n),
                (None, Some(g)) if g > 0 => BudgetSpec::Groups(g),
                _ => usage_error("the budget must be at least 1"),
            };
            if let Some(names) = &problems {
                let known = suite.problem_names();
                if let Some(bad) = names.iter().find(|n| !known.contains(n)) {
                    usage_error(format!("`{bad}` is not in suite {}", suite.as_str()));
                }
            }
            let spec = CampaignSpec {
                suite,
                algorithms: algos.into_iter().map(Algorithm::from).collect(),
                seeds,
                budget,
                options: RunOptions {
                    search: search.into(),
                    ..RunOptions::default()
                },
                problems,
            };
            let out = out
                .unwrap_or_else(|| default_out_dir().join(format!("campaign_{}", suite.as_str())));
            match run_campaign(&spec, &out) {
                Ok(m) => {
                    println!("{} runs written to {}", m.runs.len(), out.display());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Profile {
            input,
            tau_acc,
            out,
        } => {
            if !(tau_acc > 0.0 && tau_acc < 1.0) {
                usage_error("--tau-acc must lie strictly between 0 and 1");
            }
            let curves = match profiles_from_dir(&input, tau_acc) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match write_profiles(&curves, &out) {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::EquivCheck {
            problem,
            budget,
            seed,
            search,
        } => {
            if budget == 0 {
                usage_error("--budget must be at least 1");
            }
            let problem = match builtin_problem(&problem) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            let options = RunOptions {
                search: search.into(),
                ..RunOptions::default()
            };
            let report = match equivalence_check(&problem, budget, seed, &options) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            println!(
                "orthomads: {} evaluations, ads instance: {} evaluations, common prefix {}",
                report.mads.records.len(),
                report.ads.records.len(),
                report.matching
            );
            println!(
                "max relative gap: mesh {:e}, frame {:e}",
                report.mesh_gap, report.frame_gap
            );
            if report.identical() {
                println!("trial-point sequences are identical");
                ExitCode::SUCCESS
            } else {
                println!(
                    "trial-point sequences differ at evaluation {}",
                    report.matching + 1
                );
                ExitCode::from(1)
            }
        }
    }
}
