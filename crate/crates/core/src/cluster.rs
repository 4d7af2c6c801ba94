//! A simulated MapReduce cluster.
//!
//! Machines are slots in a vector. A round runs one task per machine through
//! an [`Executor`], checks every machine's load against its capacity, merges
//! the per-machine query ledgers and tallies the elements shipped.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;

use rand::Rng;

use crate::distributed::{Distributed, MrAlgorithm};
use crate::error::{Error, Result};
use crate::math;
use crate::oracle::SubmodularInstance;
use crate::randomness::RandomTape;

pub type Job<'a> = Box<dyn FnOnce() + Send + 'a>;

/// Runs a batch of independent jobs, possibly concurrently. Must not return
/// before every job has finished.
pub trait Executor: Send + Sync {
    fn execute<'a>(&self, jobs: Vec<Job<'a>>);
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn execute<'a>(&self, jobs: Vec<Job<'a>>) {
        for job in jobs {
            job();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterConfig {
    /// Machine count `ℓ`.
    pub ell: usize,
    /// Per-machine capacity `Ψ` in elements.
    pub psi: usize,
    /// Enforced capacity is `⌊Ψ · slack⌋`.
    pub capacity_slack: f64,
    /// Worker threads used to simulate machines.
    pub parallelism: usize,
}

impl ClusterConfig {
    pub fn new(ell: usize, psi: usize) -> Self {
        ClusterConfig {
            ell,
            psi,
            capacity_slack: 1.0,
            parallelism: 1,
        }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.capacity_slack = slack;
        self
    }

    pub fn capacity(&self) -> usize {
        math::floor(self.psi as f64 * self.capacity_slack) as usize
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.ell == 0 || self.psi == 0 {
            return Err(Error::InvalidParameter("ell and psi must be positive".into()));
        }
        if !(self.capacity_slack.is_finite() && self.capacity_slack >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "capacity slack {} must be at least 1",
                self.capacity_slack
            )));
        }
        if n > 0 && self.ell > n {
            return Err(Error::InvalidParameter(format!(
                "{} machines for {} elements",
                self.ell, n
            )));
        }
        if self.capacity().saturating_mul(self.ell) < n {
            return Err(Error::InvalidParameter(format!(
                "total capacity {}·{} cannot hold {} elements",
                self.ell,
                self.capacity(),
                n
            )));
        }
        Ok(())
    }
}

/// A machine's data at a round barrier.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineState {
    pub id: usize,
    pub local_elements: Vec<usize>,
    pub inbox: Vec<usize>,
}

impl MachineState {
    pub fn load(&self) -> usize {
        self.local_elements.len() + self.inbox.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundLedger {
    pub mr_rounds: u64,
    pub elements_communicated: u64,
}

/// What a machine computed and how many elements it sends on.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineOutput<T> {
    pub value: T,
    pub shipped: usize,
}

static SEQUENTIAL: Sequential = Sequential;

pub struct Cluster<'e> {
    config: ClusterConfig,
    executor: &'e dyn Executor,
    rounds: RoundLedger,
    resident: usize,
}

impl Cluster<'static> {
    pub fn sequential(config: ClusterConfig) -> Self {
        Cluster::new(config, &SEQUENTIAL)
    }
}

impl<'e> Cluster<'e> {
    pub fn new(config: ClusterConfig, executor: &'e dyn Executor) -> Self {
        Cluster {
            config,
            executor,
            rounds: RoundLedger::default(),
            resident: 0,
        }
    }

    pub fn config(&self) -> &ClusterConfig {
        &self.config
    }

    pub fn rounds(&self) -> RoundLedger {
        self.rounds
    }

    /// Elements every machine holds besides its round input (for example a
    /// partial solution passed along by an outer loop).
    pub fn set_resident(&mut self, elements: usize) {
        self.resident = elements;
    }

    pub fn record_communication(&mut self, elements: u64) {
        self.rounds.elements_communicated += elements;
    }

    /// Fails with a capacity violation if a machine holds too much.
    pub fn check_capacity(&self, machine: usize, load: usize) -> Result<()> {
        let load = load + self.resident;
        let capacity = self.config.capacity();
        if load > capacity {
            return Err(Error::CapacityViolation {
                machine,
                load,
                capacity,
            });
        }
        Ok(())
    }

    /// One MR round over `loads.len()` machines; machine `i` holds `loads[i]`
    /// elements. Adds one MR round and the shipped element counts.
    pub fn run_round<T, F>(&mut self, inst: &SubmodularInstance, loads: &[usize], task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&Machine<'_>) -> Result<MachineOutput<T>> + Sync,
    {
        for (machine, &load) in loads.iter().enumerate() {
            self.check_capacity(machine, load)?;
        }
        let executor = self.executor;
        let outputs = run_parallel(executor, inst, loads.len(), &|id, fork| {
            task(&Machine {
                id,
                inst: fork,
                executor,
            })
        })?;
        self.rounds.mr_rounds += 1;
        let mut values = Vec::with_capacity(outputs.len());
        for out in outputs {
            self.rounds.elements_communicated += out.shipped as u64;
            values.push(out.value);
        }
        Ok(values)
    }
}

/// A machine's view during a round: its id, its fork of the instance and a
/// way to run independent calls side by side.
pub struct Machine<'a> {
    id: usize,
    inst: &'a SubmodularInstance,
    executor: &'a dyn Executor,
}

impl Machine<'_> {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn instance(&self) -> &SubmodularInstance {
        self.inst
    }

    /// Independent calls inside this machine. They count as parallel adaptive
    /// work, not as an MR round.
    pub fn fan_out<T, F>(&self, count: usize, task: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, &SubmodularInstance) -> Result<T> + Sync,
    {
        run_parallel(self.executor, self.inst, count, &task)
    }
}

/// Runs `count` tasks on forks of `inst` and merges their ledgers back as
/// parallel work. Results come back in task order.
pub fn run_parallel<T, F>(
    executor: &dyn Executor,
    inst: &SubmodularInstance,
    count: usize,
    task: &F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &SubmodularInstance) -> Result<T> + Sync,
{
    let forks: Vec<SubmodularInstance> = (0..count).map(|_| inst.with_fresh_ledger()).collect();
    let mut slots: Vec<Option<Result<T>>> = (0..count).map(|_| None).collect();
    let jobs: Vec<Job<'_>> = slots
        .iter_mut()
        .zip(&forks)
        .enumerate()
        .map(|(i, (slot, fork))| {
            Box::new(move || {
                *slot = Some(task(i, fork));
            }) as Job<'_>
        })
        .collect();
    executor.execute(jobs);
    inst.ledger()
        .absorb_parallel(forks.iter().map(|f| f.ledger().snapshot()));
    slots
        .into_iter()
        .map(|s| s.expect("executor skipped a job"))
        .collect()
}

fn check_parts(parts: &[Vec<usize>], cfg: &ClusterConfig) -> Result<()> {
    let capacity = cfg.capacity();
    for (machine, part) in parts.iter().enumerate() {
        if part.len() > capacity {
            return Err(Error::CapacityViolation {
                machine,
                load: part.len(),
                capacity,
            });
        }
    }
    Ok(())
}

/// Sends every element of `ground` to one machine chosen uniformly at random.
/// Draws are made per id over `0..n`, so an element's machine does not depend
/// on which other elements are being partitioned.
pub fn partition_uniform(
    ground: &[usize],
    n: usize,
    cfg: &ClusterConfig,
    tape: &RandomTape,
) -> Result<Vec<Vec<usize>>> {
    let ell = cfg.ell.max(1);
    let mut rng = tape.stream(0);
    let home: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ell)).collect();
    let mut parts = alloc::vec![Vec::new(); ell];
    for &e in ground {
        if e >= n {
            return Err(Error::InvalidElement { element: e, n });
        }
        parts[home[e]].push(e);
    }
    check_parts(&parts, cfg)?;
    Ok(parts)
}

/// Places every element on each machine independently with probability `1/ℓ`.
pub fn partition_independent(
    ground: &[usize],
    n: usize,
    cfg: &ClusterConfig,
    tape: &RandomTape,
) -> Result<Vec<Vec<usize>>> {
    let ell = cfg.ell.max(1);
    let p = 1.0 / ell as f64;
    let mut rng = tape.stream(0);
    let mut placed = alloc::vec![false; n * ell];
    for flag in placed.iter_mut() {
        *flag = rng.gen_bool(p);
    }
    let mut parts = alloc::vec![Vec::new(); ell];
    for &e in ground {
        if e >= n {
            return Err(Error::InvalidElement { element: e, n });
        }
        for (machine, part) in parts.iter_mut().enumerate() {
            if placed[e * ell + machine] {
                part.push(e);
            }
        }
    }
    check_parts(&parts, cfg)?;
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible(String),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Feasibility::Feasible => Ok(()),
            Feasibility::Infeasible(why) => Err(Error::Infeasible(why)),
        }
    }
}

/// Checks the constraint-size precondition of `algorithm` with all constants
/// taken as 1. `summary` says whether the objective has compressed marginal
/// summaries (used by MED).
pub fn check_constraint_feasibility(
    cfg: &ClusterConfig,
    algorithm: MrAlgorithm,
    k: usize,
    n: usize,
    eps: f64,
    summary: bool,
) -> Feasibility {
    let kf = k as f64;
    let psi = cfg.psi as f64;
    let ell = cfg.ell.max(1) as f64;
    let verdict = |ok: bool, rule: &str, lhs: f64, rhs: f64| {
        if ok {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible(format!("{rule} violated ({lhs} vs {rhs})"))
        }
    };
    match algorithm {
        MrAlgorithm::Direct(d) => match d {
            Distributed::RDash | Distributed::RandGreedi | Distributed::TDashOpt => {
                verdict(kf < psi / ell, "k < ψ/ℓ", kf, psi / ell)
            }
            Distributed::GDash => verdict(kf < eps * psi / ell, "k < εψ/ℓ", kf, eps * psi / ell),
            Distributed::TDash => {
                let lhs = kf * math::ln(kf.max(1.0));
                verdict(lhs < eps * psi / ell, "k log(k) < εψ/ℓ", lhs, eps * psi / ell)
            }
            Distributed::LDist => {
                let rhs = psi / (ell * math::ln(psi));
                verdict(kf < rhs, "k < ψ/(ℓ log(ψ))", kf, rhs)
            }
        },
        MrAlgorithm::Med(_) => {
            if k > n {
                return Feasibility::Infeasible(format!("k ≤ n violated ({k} vs {n})"));
            }
            if cfg.psi / cfg.ell.max(1) == 0 {
                return Feasibility::Infeasible(format!(
                    "k′ = ⌊ψ/ℓ⌋ ≥ 1 violated (ψ={}, ℓ={})",
                    cfg.psi, cfg.ell
                ));
            }
            if summary {
                return Feasibility::Feasible;
            }
            let nf = n as f64;
            if ell > 1.0 && psi >= 2.0 * nf / ell && kf <= nf / (ell - 1.0) {
                return Feasibility::Feasible;
            }
            let bound = if ell > 1.0 {
                ((ell * psi - nf) / (ell - 1.0) + 1.0).min(psi - ell + 1.0)
            } else if psi >= nf {
                psi
            } else {
                -1.0
            };
            verdict(
                kf <= bound,
                "k ≤ min{(ℓψ−n)/(ℓ−1)+1, ψ−ℓ+1}",
                kf,
                bound,
            )
        }
    }
}
