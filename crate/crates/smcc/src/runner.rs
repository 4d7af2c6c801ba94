//! Runs every `(algorithm, k, seed)` of an experiment and collects one CSV
//! row per run.

use std::io::Write;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smcc_core::centralized;
use smcc_core::data::{generate_ba, generate_erdos_renyi, generate_features, GraphData};
use smcc_core::distributed::{self, RunOptions};
use smcc_core::verify::brute_force_opt;
use smcc_core::{Cluster, ClusterConfig, Objective, OrderedSolution, RandomTape, SubmodularInstance};

use crate::config::{Algorithm, DatasetSpec, ExperimentConfig, ObjectiveName};
use crate::error::{Error, Result};
use crate::exec::{effective_parallelism, RayonExecutor};
use crate::io;

/// Column order of the results CSV.
pub const CSV_HEADER: [&str; 14] = [
    "algo",
    "objective",
    "n",
    "k",
    "ell",
    "eps",
    "seed",
    "value",
    "queries",
    "adaptive_rounds",
    "mr_rounds",
    "elements_communicated",
    "wall_ms",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    /// Finished, but an inner threshold-sampling call failed.
    Degraded,
    Infeasible,
    Timeout,
    Error,
}

impl RunStatus {
    pub fn finished(self) -> bool {
        matches!(self, RunStatus::Ok | RunStatus::Degraded)
    }
}

/// One results row. Counter fields are empty unless the run finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub algo: String,
    pub objective: String,
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub eps: f64,
    pub seed: u64,
    pub value: Option<f64>,
    pub queries: Option<u64>,
    pub adaptive_rounds: Option<u64>,
    pub mr_rounds: Option<u64>,
    pub elements_communicated: Option<u64>,
    pub wall_ms: u64,
    pub status: RunStatus,
}

pub fn load_graph(dataset: &DatasetSpec, weighted: bool) -> Result<GraphData> {
    match *dataset {
        DatasetSpec::File { ref path } => io::load_edge_list(path, weighted),
        DatasetSpec::Ba { n, m, seed } => Ok(generate_ba(n, m, seed)?),
        DatasetSpec::Er { n, p, seed } => Ok(generate_erdos_renyi(n, p, weighted, seed)?),
        DatasetSpec::Features { .. } => Err(Error::Config("a features dataset is not a graph".into())),
    }
}

/// Loads or generates the dataset and wraps it in the configured objective.
pub fn build_instance(cfg: &ExperimentConfig) -> Result<SubmodularInstance> {
    let objective = match cfg.objective {
        ObjectiveName::ImageSumm => {
            let similarity = match cfg.dataset {
                DatasetSpec::File { ref path } => io::load_similarity_csv(path)?,
                DatasetSpec::Features { n, dim, density, seed } => generate_features(n, dim, density, seed)?,
                _ => return Err(Error::Config("imagesumm needs similarity data".into())),
            };
            Objective::image_summ(similarity)
        }
        ObjectiveName::MaxCover => Objective::max_cover(&load_graph(&cfg.dataset, false)?),
        ObjectiveName::MaxCoverExclusive => Objective::max_cover_exclusive(&load_graph(&cfg.dataset, false)?),
        ObjectiveName::InfluenceMax => Objective::influence_max(&load_graph(&cfg.dataset, false)?, cfg.influence_p)?,
        ObjectiveName::RevenueMax => Objective::revenue_max(&load_graph(&cfg.dataset, true)?, cfg.revenue_alpha)?,
    };
    Ok(SubmodularInstance::new(objective))
}

struct Outcome {
    solution: OrderedSolution,
    queries: u64,
    adaptive_rounds: u64,
    mr_rounds: u64,
    elements_communicated: u64,
}

#[derive(Clone)]
struct Task {
    algorithm: Algorithm,
    k: usize,
    seed: u64,
    opt: Option<f64>,
}

fn execute(
    inst: &SubmodularInstance,
    cfg: &ExperimentConfig,
    task: &Task,
    executor: &RayonExecutor,
) -> smcc_core::Result<Outcome> {
    let inst = inst.with_fresh_ledger();
    let tape = RandomTape::new(task.seed);
    let all: Vec<usize> = (0..inst.n()).collect();
    let centralized_outcome = |solution: OrderedSolution| {
        let spent = inst.ledger().snapshot();
        Outcome {
            solution,
            queries: spent.queries,
            adaptive_rounds: spent.adaptive_rounds,
            mr_rounds: 0,
            elements_communicated: 0,
        }
    };
    match task.algorithm {
        Algorithm::Greedy => Ok(centralized_outcome(centralized::greedy(&inst, &all, task.k)?)),
        Algorithm::Lag => Ok(centralized_outcome(centralized::lag(&inst, &all, task.k, cfg.eps, None, &tape)?)),
        Algorithm::Ltc => Ok(centralized_outcome(centralized::ltc(&inst, &all, task.k, &tape)?)),
        Algorithm::Mr(m) => {
            let psi = cfg.psi.resolve(inst.n(), cfg.ell);
            let cluster_cfg = ClusterConfig::new(cfg.ell, psi).with_slack(cfg.capacity_slack);
            let mut cluster = Cluster::new(cluster_cfg, executor);
            let options = RunOptions {
                opt_value: task.opt,
                best_of_all_machines: cfg.best_of_all_machines,
            };
            let report = distributed::run(&inst, m, task.k, cfg.eps, &mut cluster, &tape, &options)?;
            Ok(Outcome {
                solution: report.solution,
                queries: report.queries,
                adaptive_rounds: report.adaptive_rounds,
                mr_rounds: report.mr_rounds,
                elements_communicated: report.elements_communicated,
            })
        }
    }
}

fn needs_opt(a: Algorithm) -> bool {
    a == Algorithm::Mr(smcc_core::MrAlgorithm::Direct(distributed::Distributed::TDashOpt))
}

/// Runs the experiment on an already built instance. Rows come back in
/// configuration order: algorithm, then k, then seed.
pub fn run_on_instance(cfg: &ExperimentConfig, inst: &SubmodularInstance) -> Result<Vec<Row>> {
    let threads = effective_parallelism(cfg.parallelism);
    let executor = RayonExecutor::new(threads);
    let mut tasks = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &k in &cfg.k {
            let opt = if needs_opt(algorithm) {
                match cfg.opt {
                    Some(v) => Some(v),
                    None => Some(
                        brute_force_opt(inst, k)
                            .map_err(|e| Error::Config(format!("t-dash-opt needs --opt: {e}")))?
                            .opt_value,
                    ),
                }
            } else {
                None
            };
            for &seed in &cfg.seeds {
                tasks.push(Task { algorithm, k, seed, opt });
            }
        }
    }
    let timeout = Duration::from_secs_f64(cfg.timeout_s);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .thread_name(|i| format!("smcc-run-{i}"))
        .build()
        .map_err(|e| Error::Validation(format!("cannot start run pool: {e}")))?;
    info!("running {} task(s) on {threads} thread(s)", tasks.len());
    let rows = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| run_task(inst, cfg, task, &executor, timeout))
            .collect::<Vec<Row>>()
    });
    Ok(rows)
}

/// Runs one task on its own thread so a timeout can abandon it. An abandoned
/// run keeps its thread until it finishes or the process exits.
fn run_task(
    inst: &SubmodularInstance,
    cfg: &ExperimentConfig,
    task: &Task,
    executor: &RayonExecutor,
    timeout: Duration,
) -> Row {
    let (tx, rx) = mpsc::channel();
    let started = Instant::now();
    {
        let (inst, cfg, task, executor) = (inst.clone(), cfg.clone(), task.clone(), executor.clone());
        std::thread::Builder::new()
            .name(format!("smcc-{}-k{}-s{}", task.algorithm.name(), task.k, task.seed))
            .spawn(move || {
                let _ = tx.send(execute(&inst, &cfg, &task, &executor));
            })
            .expect("failed to spawn run thread");
    }
    let received = rx.recv_timeout(timeout);
    let wall_ms = started.elapsed().as_millis() as u64;
    let mut row = Row {
        algo: task.algorithm.name(),
        objective: cfg.objective.name().into(),
        n: inst.n(),
        k: task.k,
        ell: cfg.ell,
        eps: cfg.eps,
        seed: task.seed,
        value: None,
        queries: None,
        adaptive_rounds: None,
        mr_rounds: None,
        elements_communicated: None,
        wall_ms,
        status: RunStatus::Error,
    };
    let label = format!("{} k={} seed={}", row.algo, row.k, row.seed);
    match received {
        Ok(Ok(out)) => {
            row.status = if out.solution.degraded() {
                RunStatus::Degraded
            } else {
                RunStatus::Ok
            };
            row.value = Some(out.solution.value);
            row.queries = Some(out.queries);
            row.adaptive_rounds = Some(out.adaptive_rounds);
            row.mr_rounds = Some(out.mr_rounds);
            row.elements_communicated = Some(out.elements_communicated);
        }
        Ok(Err(smcc_core::Error::Infeasible(why))) => {
            warn!("{label}: infeasible: {why}");
            row.status = RunStatus::Infeasible;
        }
        Ok(Err(e)) => {
            warn!("{label}: {e}");
            row.status = RunStatus::Error;
        }
        Err(mpsc::RecvTimeoutError::Timeout) => {
            warn!("{label}: timed out after {:.1} s", timeout.as_secs_f64());
            row.status = RunStatus::Timeout;
        }
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            warn!("{label}: run thread panicked");
            row.status = RunStatus::Error;
        }
    }
    row
}

/// Builds the instance and runs everything.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    if cfg.seeds.is_empty() {
        return Ok(Vec::new());
    }
    let inst = build_instance(cfg)?;
    run_on_instance(cfg, &inst)
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Validation(format!("cannot write results: {e}")))?;
    Ok(())
}

pub fn read_rows<R: std::io::Read>(input: R) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(Error::Validation(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
