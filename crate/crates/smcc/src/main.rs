use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smcc::config::{DatasetSpec, PartialConfig, Psi};
use smcc::runner::{self, RunStatus};
use smcc::suites::{Scale, Suite};
use smcc::{io, report, Error};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "smcc", version, about = "Distributed submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write one CSV row per (algorithm, k, seed).
    Run(Box<RunArgs>),
    /// Run the verification suites; exits 0 only if all pass.
    Verify(VerifyArgs),
    /// Generate a dataset.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Aggregate result CSVs into mean/min/max per (algorithm, k).
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithms, comma separated (greedy, lag, ltc, rg, r-dash, g-dash,
    /// t-dash, t-dash-opt, l-dist, med+<algorithm>).
    #[arg(long = "algo", value_delimiter = ',')]
    algorithms: Vec<String>,
    /// Edge list or similarity CSV, or a generator such as `ba:n=1000,m=5,seed=1`.
    #[arg(long)]
    dataset: Option<String>,
    /// maxcover, maxcover-exclusive, influencemax, revenuemax or imagesumm.
    #[arg(long)]
    objective: Option<String>,
    /// Cardinality constraints, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Machine count.
    #[arg(long)]
    ell: Option<usize>,
    /// Per-machine capacity, or `auto` for ⌈n/ℓ⌉.
    #[arg(long)]
    psi: Option<String>,
    /// A single seed.
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Seeds as a list `0,1,2` or a range `0..10`.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Wall-clock budget per run.
    #[arg(long = "timeout-s")]
    timeout_s: Option<f64>,
    /// Enforced capacity is ⌊Ψ · slack⌋.
    #[arg(long)]
    capacity_slack: Option<f64>,
    /// R-DASH and RandGreeDI return the best solution of any machine.
    #[arg(long)]
    best_of_all_machines: bool,
    /// Known optimum, used by t-dash-opt.
    #[arg(long)]
    opt: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (default: all).
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Smaller instances and fewer trials.
    #[arg(long)]
    quick: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Barabási–Albert graph as an edge list.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Erdős–Rényi graph as an edge list.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attach uniform (0, 1] weights.
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cosine similarity matrix of random sparse feature vectors.
    Similarity {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Result CSVs written by `run`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, Error> {
    let bad = || Error::Config(format!("bad seed list `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..hi).collect());
    }
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect()
}

fn overrides(args: &RunArgs) -> Result<PartialConfig, Error> {
    let seeds = match (&args.seeds, args.seed) {
        (Some(s), _) => Some(parse_seeds(s)?),
        (None, Some(seed)) => Some(vec![seed]),
        (None, None) => None,
    };
    Ok(PartialConfig {
        algorithms: (!args.algorithms.is_empty()).then(|| args.algorithms.clone()),
        objective: args.objective.clone(),
        dataset: args.dataset.as_deref().map(str::parse::<DatasetSpec>).transpose()?,
        k: (!args.k.is_empty()).then(|| args.k.clone()),
        eps: args.eps,
        ell: args.ell,
        psi: args.psi.as_deref().map(str::parse::<Psi>).transpose()?,
        capacity_slack: args.capacity_slack,
        seeds,
        parallelism: args.parallelism,
        out: args.out.clone(),
        timeout_s: args.timeout_s,
        best_of_all_machines: args.best_of_all_machines.then_some(true),
        opt: args.opt,
        influence_p: None,
        revenue_alpha: None,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Core(smcc_core::Error::Infeasible(_)) => EXIT_INFEASIBLE,
        _ => EXIT_RUNTIME,
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        })?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(args: RunArgs) -> Result<u8, Error> {
    let file = match &args.config {
        Some(path) => PartialConfig::load(path)?,
        None => PartialConfig::default(),
    };
    let cfg = overrides(&args)?.over(file).finish()?;
    let rows = runner::run_experiment(&cfg)?;
    runner::write_rows(open_output(cfg.out.as_ref())?, &rows)?;
    if rows.iter().any(|r| r.status == RunStatus::Error) {
        Ok(EXIT_RUNTIME)
    } else if rows.iter().any(|r| r.status == RunStatus::Infeasible) {
        Ok(EXIT_INFEASIBLE)
    } else {
        Ok(0)
    }
}

fn verify(args: VerifyArgs) -> Result<u8, Error> {
    let suites = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites
            .iter()
            .map(|s| Suite::parse(s).ok_or_else(|| Error::Config(format!("unknown suite `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    let scale = if args.quick { Scale::Quick } else { Scale::Full };
    let mut all_pass = true;
    for suite in suites {
        let outcome = suite.run(scale)?;
        all_pass &= outcome.pass;
        println!(
            "{} {} ({:.1} s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.name,
            outcome.elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    Ok(if all_pass { 0 } else { EXIT_VERIFY })
}

fn generate(cmd: GenCommand) -> Result<u8, Error> {
    match cmd {
        GenCommand::Ba { n, m, seed, out } => {
            io::write_edge_list(&out, &smcc_core::data::generate_ba(n, m, seed).map_err(config_error)?)?
        }
        GenCommand::Er { n, p, seed, weighted, out } => io::write_edge_list(
            &out,
            &smcc_core::data::generate_erdos_renyi(n, p, weighted, seed).map_err(config_error)?,
        )?,
        GenCommand::Similarity { n, dim, density, seed, out } => io::write_similarity_csv(
            &out,
            &smcc_core::data::generate_features(n, dim, density, seed).map_err(config_error)?,
        )?,
    }
    Ok(0)
}

fn config_error(e: smcc_core::Error) -> Error {
    Error::Config(e.to_string())
}

fn aggregate(args: ReportArgs) -> Result<u8, Error> {
    let mut rows = Vec::new();
    for path in &args.inputs {
        let file = File::open(path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        rows.extend(runner::read_rows(file)?);
    }
    report::write_aggregates(open_output(args.out.as_ref())?, &report::aggregate(&rows))?;
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(*args),
        Command::Verify(args) => verify(args),
        Command::Gen(cmd) => generate(cmd),
        Command::Report(args) => aggregate(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
