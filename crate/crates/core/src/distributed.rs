//! MapReduce algorithms: R-DASH, G-DASH, T-DASH (with and without a known
//! optimum), L-Dist, RandGreeDI and the MED wrapper.
//!
//! Tape layout: child `PARTITION` drives machine assignment, child `MACHINES`
//! the per-machine calls, child `PRIMARY` the calls on machine 0 and child
//! `BINS` the bin sampling of T-DASH. MED gives iteration `i` the sub-tape
//! `child(i)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use rand::Rng;

use crate::centralized::{
    self, check_eps, greedy, lag, last_k, ltc, Guess, OrderedSolution, Status, ThreshSeqParams,
};
use crate::cluster::{
    check_constraint_feasibility, partition_independent, partition_uniform, Cluster, MachineOutput,
};
use crate::error::{Error, Result};
use crate::math;
use crate::oracle::SubmodularInstance;
use crate::randomness::RandomTape;

const PARTITION: u64 = 0;
const MACHINES: u64 = 1;
const PRIMARY: u64 = 2;
const BINS: u64 = 3;

/// The two-or-more-round distributed algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distributed {
    RDash,
    GDash,
    TDash,
    TDashOpt,
    LDist,
    RandGreedi,
}

impl Distributed {
    pub const ALL: [Distributed; 6] = [
        Distributed::RDash,
        Distributed::GDash,
        Distributed::TDash,
        Distributed::TDashOpt,
        Distributed::LDist,
        Distributed::RandGreedi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distributed::RDash => "r-dash",
            Distributed::GDash => "g-dash",
            Distributed::TDash => "t-dash",
            Distributed::TDashOpt => "t-dash-opt",
            Distributed::LDist => "l-dist",
            Distributed::RandGreedi => "rg",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        match s.as_str() {
            "randgreedi" | "rand-greedi" => Some(Distributed::RandGreedi),
            "rdash" => Some(Distributed::RDash),
            "gdash" => Some(Distributed::GDash),
            "tdash" => Some(Distributed::TDash),
            "tdash-opt" | "tdashopt" => Some(Distributed::TDashOpt),
            "ldist" => Some(Distributed::LDist),
            other => Distributed::ALL.into_iter().find(|d| d.name() == other),
        }
    }

    /// MR rounds of one run.
    pub fn mr_rounds(self, eps: f64) -> u64 {
        match self {
            Distributed::GDash => math::ceil_tolerant(1.0 / eps) as u64,
            _ => 2,
        }
    }
}

/// A distributed algorithm, either on its own or inside MED.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MrAlgorithm {
    Direct(Distributed),
    Med(Distributed),
}

impl MrAlgorithm {
    pub fn name(self) -> String {
        match self {
            MrAlgorithm::Direct(d) => d.name().into(),
            MrAlgorithm::Med(d) => format!("med+{}", d.name()),
        }
    }

    /// Accepts `r-dash`, `rg`, `med+rg`, `med-rg` and similar spellings.
    pub fn parse(s: &str) -> Option<Self> {
        let lower = s.trim().to_ascii_lowercase();
        for prefix in ["med+", "med-", "med_"] {
            if let Some(rest) = lower.strip_prefix(prefix) {
                return Distributed::parse(rest).map(MrAlgorithm::Med);
            }
        }
        Distributed::parse(&lower).map(MrAlgorithm::Direct)
    }

    pub fn component(self) -> Distributed {
        match self {
            MrAlgorithm::Direct(d) | MrAlgorithm::Med(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    /// Optimum value, required by T-DASH knowing OPT.
    pub opt_value: Option<f64>,
    /// R-DASH and RandGreeDI return the best of every machine's solution and
    /// the merged one instead of only machine 0's.
    pub best_of_all_machines: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub k: usize,
    pub eps: f64,
    pub ell: usize,
    pub psi: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: String,
    pub solution: OrderedSolution,
    pub queries: u64,
    pub adaptive_rounds: u64,
    pub mr_rounds: u64,
    pub elements_communicated: u64,
    pub seed: u64,
    pub params: RunParams,
    /// Some inner threshold-sampling call failed; the run still finished.
    pub degraded: bool,
}

/// Runs `algorithm` after checking its constraint-size precondition.
pub fn run(
    inst: &SubmodularInstance,
    algorithm: MrAlgorithm,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    options: &RunOptions,
) -> Result<RunReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    check_eps(eps)?;
    let n = inst.n();
    cluster.config().validate(n)?;
    check_constraint_feasibility(
        cluster.config(),
        algorithm,
        k,
        n,
        eps,
        inst.objective().has_summary(),
    )
    .into_result()?;
    if algorithm == MrAlgorithm::Med(Distributed::TDashOpt) {
        return Err(Error::InvalidParameter(
            "t-dash-opt cannot run inside med: the optimum of each residual objective is unknown"
                .into(),
        ));
    }
    let ground: Vec<usize> = (0..n).collect();
    let before = inst.ledger().snapshot();
    let rounds_before = cluster.rounds();
    let solution = match algorithm {
        MrAlgorithm::Direct(d) => run_component(inst, d, &ground, k, eps, cluster, tape, options)?,
        MrAlgorithm::Med(d) => med_core(inst, d, k, eps, cluster, tape, options)?,
    };
    let spent = inst.ledger().snapshot().since(before);
    let rounds = cluster.rounds();
    let cfg = cluster.config();
    Ok(RunReport {
        algorithm: algorithm.name(),
        degraded: solution.degraded(),
        solution,
        queries: spent.queries,
        adaptive_rounds: spent.adaptive_rounds,
        mr_rounds: rounds.mr_rounds - rounds_before.mr_rounds,
        elements_communicated: rounds.elements_communicated - rounds_before.elements_communicated,
        seed: tape.seed(),
        params: RunParams {
            k,
            eps,
            ell: cfg.ell,
            psi: cfg.psi,
        },
    })
}

pub fn r_dash(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<RunReport> {
    let algo = MrAlgorithm::Direct(Distributed::RDash);
    run(inst, algo, k, eps, cluster, tape, &RunOptions::default())
}

pub fn g_dash(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<RunReport> {
    let algo = MrAlgorithm::Direct(Distributed::GDash);
    run(inst, algo, k, eps, cluster, tape, &RunOptions::default())
}

pub fn t_dash(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<RunReport> {
    let algo = MrAlgorithm::Direct(Distributed::TDash);
    run(inst, algo, k, eps, cluster, tape, &RunOptions::default())
}

pub fn t_dash_opt(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    opt_value: f64,
) -> Result<RunReport> {
    let options = RunOptions {
        opt_value: Some(opt_value),
        ..RunOptions::default()
    };
    run(inst, MrAlgorithm::Direct(Distributed::TDashOpt), k, eps, cluster, tape, &options)
}

pub fn l_dist(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<RunReport> {
    let algo = MrAlgorithm::Direct(Distributed::LDist);
    run(inst, algo, k, eps, cluster, tape, &RunOptions::default())
}

/// RandGreeDI has no accuracy parameter; `eps` only matters for reporting.
pub fn rand_greedi(
    inst: &SubmodularInstance,
    k: usize,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<RunReport> {
    let algo = MrAlgorithm::Direct(Distributed::RandGreedi);
    run(inst, algo, k, 0.5, cluster, tape, &RunOptions::default())
}

pub fn med(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    component: Distributed,
    tape: &RandomTape,
) -> Result<RunReport> {
    run(inst, MrAlgorithm::Med(component), k, eps, cluster, tape, &RunOptions::default())
}

#[allow(clippy::too_many_arguments)]
fn run_component(
    inst: &SubmodularInstance,
    algorithm: Distributed,
    ground: &[usize],
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    options: &RunOptions,
) -> Result<OrderedSolution> {
    match algorithm {
        Distributed::RDash => two_round(inst, ground, cluster, tape, options.best_of_all_machines, |g, set, t| {
            lag(g, set, k, eps, None, t)
        }),
        Distributed::RandGreedi => two_round(inst, ground, cluster, tape, options.best_of_all_machines, |g, set, _| {
            greedy(g, set, k)
        }),
        Distributed::GDash => g_dash_core(inst, ground, k, eps, cluster, tape),
        Distributed::TDashOpt => {
            let opt = options.opt_value.ok_or_else(|| {
                Error::InvalidParameter("t-dash-opt needs the optimum value".into())
            })?;
            t_dash_opt_core(inst, ground, k, eps, cluster, tape, opt)
        }
        Distributed::TDash => t_dash_core(inst, ground, k, eps, cluster, tape),
        Distributed::LDist => Ok(l_dist_core(inst, ground, k, eps, cluster, tape)?.best),
    }
}

fn union_of<'a, I: IntoIterator<Item = &'a OrderedSolution>>(n: usize, sols: I) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in sols {
        for &x in &s.items {
            if !core::mem::replace(&mut seen[x], true) {
                out.push(x);
            }
        }
    }
    out
}

/// First solution of maximum value.
fn best_of(candidates: Vec<OrderedSolution>) -> OrderedSolution {
    let mut best: Option<OrderedSolution> = None;
    for c in candidates {
        if best.as_ref().is_none_or(|b| c.value > b.value) {
            best = Some(c);
        }
    }
    best.unwrap_or_else(OrderedSolution::empty)
}

fn total_failures<'a, I: IntoIterator<Item = &'a OrderedSolution>>(sols: I) -> u32 {
    sols.into_iter()
        .map(|s| s.inner_failures + u32::from(s.status == Status::Failure))
        .sum()
}

/// Partition, solve on every machine, solve again on the union at machine 0
/// and keep the better of that and machine 0's own solution.
fn two_round<A>(
    inst: &SubmodularInstance,
    ground: &[usize],
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    all_machines: bool,
    alg: A,
) -> Result<OrderedSolution>
where
    A: Fn(&SubmodularInstance, &[usize], &RandomTape) -> Result<OrderedSolution> + Sync,
{
    let n = inst.n();
    let parts = partition_uniform(ground, n, cluster.config(), &tape.child(PARTITION).child(0))?;
    let loads: Vec<usize> = parts.iter().map(Vec::len).collect();
    let machine_tapes = tape.child(MACHINES).child(0);
    let local = cluster.run_round(inst, &loads, |m| {
        let s = alg(m.instance(), &parts[m.id()], &machine_tapes.child(m.id() as u64))?;
        Ok(MachineOutput {
            shipped: s.len(),
            value: s,
        })
    })?;
    let pool = union_of(n, &local);
    let primary_tape = tape.child(PRIMARY);
    let merged = cluster
        .run_round(inst, &[pool.len()], |m| {
            Ok(MachineOutput {
                value: alg(m.instance(), &pool, &primary_tape)?,
                shipped: 0,
            })
        })?
        .remove(0);
    let failures = total_failures(local.iter().chain([&merged]));
    let mut best = if all_machines {
        let mut all = vec![merged];
        all.extend(local);
        best_of(all)
    } else {
        let first = local.into_iter().next().unwrap_or_else(OrderedSolution::empty);
        best_of(vec![merged, first])
    };
    best.inner_failures = failures;
    best.status = Status::Success;
    Ok(best)
}

fn g_dash_core(
    inst: &SubmodularInstance,
    ground: &[usize],
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    let n = inst.n();
    let ell = cluster.config().ell;
    let rounds = math::ceil_tolerant(1.0 / eps) as u64;
    let mut best = OrderedSolution::empty();
    let mut carried: Vec<usize> = Vec::new();
    let mut failures = 0;
    for r in 0..rounds {
        let parts = partition_uniform(ground, n, cluster.config(), &tape.child(PARTITION).child(r))?;
        let inputs: Vec<Vec<usize>> = parts
            .into_iter()
            .map(|mut p| {
                let mut seen = vec![false; n];
                p.iter().for_each(|&x| seen[x] = true);
                p.extend(carried.iter().copied().filter(|&x| !seen[x]));
                p
            })
            .collect();
        let loads: Vec<usize> = inputs.iter().map(Vec::len).collect();
        let machine_tapes = tape.child(MACHINES).child(r);
        let sols = cluster.run_round(inst, &loads, |m| {
            let s = lag(m.instance(), &inputs[m.id()], k, eps, None, &machine_tapes.child(m.id() as u64))?;
            Ok(MachineOutput {
                shipped: s.len() * ell,
                value: s,
            })
        })?;
        failures += total_failures(&sols);
        let mut candidates = vec![best];
        candidates.extend(sols.iter().cloned());
        best = best_of(candidates);
        let mut next = carried.clone();
        next.extend(union_of(n, &sols));
        carried = union_of(
            n,
            [&OrderedSolution {
                items: next,
                ..OrderedSolution::empty()
            }],
        );
        let capacity = cluster.config().capacity();
        if carried.len() > capacity {
            return Err(Error::CapacityViolation {
                machine: 0,
                load: carried.len(),
                capacity,
            });
        }
    }
    best.inner_failures = failures;
    best.status = Status::Success;
    Ok(best)
}

/// `S_1 ∪ T` where `T` extends `S_1` on the marginal objective.
fn extend(
    inst: &SubmodularInstance,
    seed: &OrderedSolution,
    pool: &[usize],
    params: &ThreshSeqParams,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    let g = inst.restrict_to_marginal(&seed.items)?;
    let t = centralized::thresh_seq_mod(&g, pool, params, tape)?;
    let mut items = seed.items.clone();
    items.extend(&t.items);
    Ok(OrderedSolution {
        items,
        value: seed.value + t.value,
        status: t.status,
        inner_failures: 0,
    })
}

fn t_dash_opt_core(
    inst: &SubmodularInstance,
    ground: &[usize],
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    opt: f64,
) -> Result<OrderedSolution> {
    if !(opt.is_finite() && opt > 0.0) {
        return Err(Error::InvalidParameter(format!("optimum {opt} must be positive")));
    }
    let n = inst.n();
    let ell = cluster.config().ell;
    let params = ThreshSeqParams {
        k,
        delta: 1.0 / (ell as f64 + 1.0),
        eps,
        tau: 3.0 / 8.0 * opt / k as f64,
    };
    let parts = partition_independent(ground, n, cluster.config(), &tape.child(PARTITION).child(0))?;
    let loads: Vec<usize> = parts.iter().map(Vec::len).collect();
    let machine_tapes = tape.child(MACHINES).child(0);
    let local = cluster.run_round(inst, &loads, |m| {
        let s = centralized::thresh_seq_mod(m.instance(), &parts[m.id()], &params, &machine_tapes.child(m.id() as u64))?;
        Ok(MachineOutput {
            shipped: s.len(),
            value: s,
        })
    })?;
    let failures = total_failures(&local);
    let pool = union_of(n, &local);
    let full = local.iter().position(|s| s.len() == k);
    let primary_tape = tape.child(PRIMARY);
    let mut result = cluster
        .run_round(inst, &[pool.len()], |m| {
            let value = match full {
                Some(i) => local[i].clone(),
                None => {
                    let first = &local[0];
                    let rest = ThreshSeqParams {
                        k: k - first.len(),
                        ..params
                    };
                    extend(m.instance(), first, &pool, &rest, &primary_tape)?
                }
            };
            Ok(MachineOutput { value, shipped: 0 })
        })?
        .remove(0);
    result.inner_failures = failures + u32::from(result.status == Status::Failure);
    result.status = Status::Success;
    Ok(result)
}

struct GuessRun {
    best_singleton: f64,
    tau: Vec<f64>,
    sols: Vec<OrderedSolution>,
}

fn t_dash_core(
    inst: &SubmodularInstance,
    ground: &[usize],
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<OrderedSolution> {
    let n = inst.n();
    let ell = cluster.config().ell;
    let alpha = 3.0 / 8.0;
    let delta = 1.0 / (ell as f64 + 1.0);
    let steps = math::ceil_tolerant(math::ln(k as f64) / math::ln(1.0 + eps)) as usize;
    let parts = partition_independent(ground, n, cluster.config(), &tape.child(PARTITION).child(0))?;
    let loads: Vec<usize> = parts.iter().map(Vec::len).collect();
    let machine_tapes = tape.child(MACHINES).child(0);
    let runs = cluster.run_round(inst, &loads, |m| {
        let local = &parts[m.id()];
        let empty = m.instance().empty_state();
        let best_singleton = m.instance().gains(&empty, local).into_iter().fold(0.0, f64::max);
        if best_singleton <= 0.0 {
            return Ok(MachineOutput {
                value: GuessRun {
                    best_singleton,
                    tau: Vec::new(),
                    sols: Vec::new(),
                },
                shipped: 0,
            });
        }
        let tau: Vec<f64> = (0..=steps)
            .map(|j| alpha * best_singleton / k as f64 * math::powi(1.0 + eps, j as u32))
            .collect();
        let own = machine_tapes.child(m.id() as u64);
        let sols = m.fan_out(tau.len(), |j, fork| {
            let params = ThreshSeqParams {
                k,
                delta,
                eps,
                tau: tau[j],
            };
            centralized::thresh_seq_mod(fork, local, &params, &own.child(j as u64))
        })?;
        let shipped = sols.iter().map(OrderedSolution::len).sum();
        Ok(MachineOutput {
            value: GuessRun {
                best_singleton,
                tau,
                sols,
            },
            shipped,
        })
    })?;
    let failures = total_failures(runs.iter().flat_map(|r| &r.sols));
    let pool_size = union_of(n, runs.iter().flat_map(|r| &r.sols)).len();
    let top = runs.iter().map(|r| r.best_singleton).fold(0.0, f64::max);
    let bin_tape = tape.child(BINS);
    let primary_tape = tape.child(PRIMARY);
    let mut result = cluster
        .run_round(inst, &[pool_size], |m| {
            if top <= 0.0 {
                return Ok(MachineOutput {
                    value: OrderedSolution::empty(),
                    shipped: 0,
                });
            }
            let level = |x: usize| alpha * top / k as f64 * math::powi(1.0 + eps, x as u32);
            let finals = m.fan_out(steps + 2, |x, fork| {
                let (lo, hi) = (level(x), level(x + 1));
                let members: Vec<&OrderedSolution> = runs
                    .iter()
                    .flat_map(|r| r.tau.iter().zip(&r.sols))
                    .filter(|(t, _)| lo <= **t && **t <= hi)
                    .map(|(_, s)| s)
                    .collect();
                if members.is_empty() {
                    return Ok(None);
                }
                let pick = bin_tape.stream(x as u64).gen_range(0..members.len());
                let seed = members[pick];
                let pool = union_of(n, members.iter().copied());
                let params = ThreshSeqParams {
                    k: k - seed.len(),
                    delta,
                    eps,
                    tau: lo,
                };
                extend(fork, seed, &pool, &params, &primary_tape.child(x as u64)).map(Some)
            })?;
            let inner = finals
                .iter()
                .flatten()
                .filter(|s| s.status == Status::Failure)
                .count() as u32;
            let mut best = best_of(finals.into_iter().flatten().collect());
            best.inner_failures = inner;
            Ok(MachineOutput {
                value: best,
                shipped: 0,
            })
        })?
        .remove(0);
    result.inner_failures += failures;
    result.status = Status::Success;
    Ok(result)
}

/// Intermediate sets of one L-Dist run.
#[derive(Debug, Clone, PartialEq)]
pub struct LDistTrace {
    /// Machine 0's LTC solution.
    pub first_machine: OrderedSolution,
    /// LTC on the union of machine solutions.
    pub merged: OrderedSolution,
    /// Last `k` items of `merged`.
    pub merged_tail: OrderedSolution,
    /// Threshold-greedy post-processing of `merged`.
    pub refined: OrderedSolution,
    pub best: OrderedSolution,
}

/// L-Dist with its intermediate sets exposed, after the feasibility check.
pub fn l_dist_trace(
    inst: &SubmodularInstance,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<LDistTrace> {
    check_eps(eps)?;
    let n = inst.n();
    cluster.config().validate(n)?;
    check_constraint_feasibility(cluster.config(), MrAlgorithm::Direct(Distributed::LDist), k, n, eps, false)
        .into_result()?;
    let ground: Vec<usize> = (0..n).collect();
    l_dist_core(inst, &ground, k, eps, cluster, tape)
}

fn l_dist_core(
    inst: &SubmodularInstance,
    ground: &[usize],
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
) -> Result<LDistTrace> {
    let n = inst.n();
    let parts = partition_uniform(ground, n, cluster.config(), &tape.child(PARTITION).child(0))?;
    let loads: Vec<usize> = parts.iter().map(Vec::len).collect();
    let machine_tapes = tape.child(MACHINES).child(0);
    let local = cluster.run_round(inst, &loads, |m| {
        let part = &parts[m.id()];
        let s = if part.is_empty() {
            OrderedSolution::empty()
        } else {
            ltc(m.instance(), part, k, &machine_tapes.child(m.id() as u64))?
        };
        Ok(MachineOutput {
            shipped: s.len(),
            value: s,
        })
    })?;
    let pool = union_of(n, &local);
    let primary_tape = tape.child(PRIMARY);
    let trace = cluster
        .run_round(inst, &[pool.len()], |m| {
            let g = m.instance();
            let first_machine = local[0].clone();
            if pool.is_empty() {
                let e = OrderedSolution::empty();
                return Ok(MachineOutput {
                    value: LDistTrace {
                        first_machine,
                        merged: e.clone(),
                        merged_tail: e.clone(),
                        refined: e.clone(),
                        best: e,
                    },
                    shipped: 0,
                });
            }
            let merged = ltc(g, &pool, k, &primary_tape)?;
            let merged_tail = last_k(g, &merged, k)?;
            let refined = centralized::threshold_greedy(
                g,
                &merged.items,
                k,
                Guess {
                    gamma: merged_tail.value,
                    alpha: 0.5,
                },
                eps,
            )?;
            let first_tail = last_k(g, &first_machine, k)?;
            let best = best_of(vec![first_tail, merged_tail.clone(), refined.clone()]);
            Ok(MachineOutput {
                value: LDistTrace {
                    first_machine,
                    merged,
                    merged_tail,
                    refined,
                    best,
                },
                shipped: 0,
            })
        })?
        .remove(0);
    Ok(trace)
}

fn med_core(
    inst: &SubmodularInstance,
    component: Distributed,
    k: usize,
    eps: f64,
    cluster: &mut Cluster<'_>,
    tape: &RandomTape,
    options: &RunOptions,
) -> Result<OrderedSolution> {
    let n = inst.n();
    let ell = cluster.config().ell;
    let step = cluster.config().psi / ell;
    let iterations = k.div_ceil(step);
    let summarized = inst.objective().has_summary();
    let mut items: Vec<usize> = Vec::new();
    let mut value = 0.0;
    let mut failures = 0;
    for i in 0..iterations {
        let budget = step.min(k - items.len());
        if budget == 0 {
            break;
        }
        let residual = if items.is_empty() {
            inst.clone()
        } else if summarized {
            inst.with_summary(inst.summarize(&items)?)?
        } else {
            cluster.record_communication((ell * items.len()) as u64);
            cluster.set_resident(items.len());
            inst.restrict_to_marginal(&items)?
        };
        let mut taken = vec![false; n];
        items.iter().for_each(|&x| taken[x] = true);
        let ground: Vec<usize> = (0..n).filter(|&x| !taken[x]).collect();
        let part = run_component(&residual, component, &ground, budget, eps, cluster, &tape.child(i as u64), options);
        cluster.set_resident(0);
        let part = part?;
        failures += part.inner_failures + u32::from(part.status == Status::Failure);
        value += part.value;
        items.extend(part.items);
    }
    Ok(OrderedSolution {
        items,
        value,
        status: Status::Success,
        inner_failures: failures,
    })
}
