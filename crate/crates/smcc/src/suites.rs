//! The verification suites behind `smcc verify` and the acceptance tests.
//! Each returns a pass/fail outcome with a one-line summary.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use smcc_core::centralized::{self, ThreshSeqParams};
use smcc_core::data::{generate_ba, generate_random_instance, ObjectiveKind};
use smcc_core::distributed::{self, Distributed, MrAlgorithm, RunOptions};
use smcc_core::verify::{
    brute_force_opt, check_ltc, check_thresh_seq, ratio_suite, rcp_exhaustive, rcp_suite, thresh_seq_failure_count,
    ConsistentAlgorithm, RatioAlgorithm, RatioClusters, RcpSummary,
};
use smcc_core::{Cluster, ClusterConfig, Objective, RandomTape, SubmodularInstance};

use crate::config::{Algorithm, DatasetSpec, ExperimentConfig, ObjectiveName, Psi};
use crate::error::Result;
use crate::runner::{run_on_instance, write_rows, Row, RunStatus};

/// `Full` runs the sizes the suites are specified at; `Quick` is a smoke
/// version for interactive use and tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

impl Scale {
    fn pick<T>(self, quick: T, full: T) -> T {
        match self {
            Scale::Quick => quick,
            Scale::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Consistency,
    ThreshSeqPostconditions,
    ThreshSeqFailureRate,
    LtcChain,
    Ratio,
    MrRounds,
    QueryScaling,
    Determinism,
    MedScaling,
    SummaryFidelity,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Consistency,
        Suite::ThreshSeqPostconditions,
        Suite::ThreshSeqFailureRate,
        Suite::LtcChain,
        Suite::Ratio,
        Suite::MrRounds,
        Suite::QueryScaling,
        Suite::Determinism,
        Suite::MedScaling,
        Suite::SummaryFidelity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Consistency => "consistency",
            Suite::ThreshSeqPostconditions => "thresh-seq-postconditions",
            Suite::ThreshSeqFailureRate => "thresh-seq-failure-rate",
            Suite::LtcChain => "ltc-chain",
            Suite::Ratio => "ratio",
            Suite::MrRounds => "mr-rounds",
            Suite::QueryScaling => "query-scaling",
            Suite::Determinism => "determinism",
            Suite::MedScaling => "med-scaling",
            Suite::SummaryFidelity => "summary-fidelity",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s.trim())
    }

    pub fn run(self, scale: Scale) -> Result<SuiteOutcome> {
        let started = Instant::now();
        let (pass, detail) = match self {
            Suite::Consistency => consistency(scale)?,
            Suite::ThreshSeqPostconditions => thresh_seq_postconditions(scale)?,
            Suite::ThreshSeqFailureRate => thresh_seq_failure_rate(scale)?,
            Suite::LtcChain => ltc_chain(scale)?,
            Suite::Ratio => ratio(scale)?,
            Suite::MrRounds => mr_rounds(scale)?,
            Suite::QueryScaling => query_scaling(scale)?,
            Suite::Determinism => determinism(scale)?,
            Suite::MedScaling => med_scaling(scale)?,
            Suite::SummaryFidelity => summary_fidelity(scale)?,
        };
        Ok(SuiteOutcome {
            name: self.name(),
            pass,
            detail,
            elapsed: started.elapsed(),
        })
    }
}

type Verdict = (bool, String);

const TSM_PLACEHOLDER: ConsistentAlgorithm = ConsistentAlgorithm::ThreshSeqMod {
    delta: 0.1,
    eps: 0.2,
    tau: 0.0,
};

fn first_violation(s: &RcpSummary) -> String {
    match s.violations.first() {
        Some(t) => format!(" first: A={:?} B={:?} seed={}", t.a, t.b, t.seed),
        None => String::new(),
    }
}

fn consistency(scale: Scale) -> Result<Verdict> {
    let trials = scale.pick(100, 1000);
    let exhaustive_n = scale.pick(6, 8);
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, kind) in [TSM_PLACEHOLDER, ConsistentAlgorithm::Lag { eps: 0.2 }, ConsistentAlgorithm::Ltc]
        .into_iter()
        .enumerate()
    {
        let randomized = rcp_suite(kind, trials, 64, 8, 1000 + i as u64)?;
        let mut exhaustive = RcpSummary::default();
        for (j, objective) in ObjectiveKind::ALL.into_iter().enumerate() {
            let inst = generate_random_instance(objective, exhaustive_n, 0.3, j as u64)?;
            let top = (0..exhaustive_n)
                .map(|x| inst.evaluate_uncounted(&[x]))
                .collect::<smcc_core::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let alg = match kind {
                ConsistentAlgorithm::ThreshSeqMod { delta, eps, .. } => ConsistentAlgorithm::ThreshSeqMod {
                    delta,
                    eps,
                    tau: 0.3 * top,
                },
                other => other,
            };
            for k in [2, 3] {
                exhaustive.merge(rcp_exhaustive(alg, &inst, k, &RandomTape::new(j as u64 * 10 + k as u64))?);
            }
        }
        let bad = randomized.violations.len() + exhaustive.violations.len();
        pass &= bad == 0;
        parts.push(format!(
            "{}: {}/{} randomized ({} unmet), {}/{} exhaustive violated{}",
            kind.name(),
            randomized.violations.len(),
            randomized.trials,
            randomized.unmet,
            exhaustive.violations.len(),
            exhaustive.trials,
            first_violation(&randomized),
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn thresh_seq_postconditions(scale: Scale) -> Result<Verdict> {
    let runs = scale.pick(300, 3000);
    let mut rng = RandomTape::new(7).stream(0);
    let mut broken = Vec::new();
    for r in 0..runs {
        let kind = ObjectiveKind::ALL[r % ObjectiveKind::ALL.len()];
        let n = rng.gen_range(2..=120);
        let inst = generate_random_instance(kind, n, rng.gen_range(0.02..0.3), rng.gen())?;
        let mut candidates: Vec<usize> = (0..n).collect();
        candidates.shuffle(&mut rng);
        candidates.truncate(rng.gen_range(1..=n));
        let top = candidates
            .iter()
            .map(|&x| inst.evaluate_uncounted(&[x]))
            .collect::<smcc_core::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let params = ThreshSeqParams {
            k: rng.gen_range(1..=12),
            delta: rng.gen_range(0.01..0.5),
            eps: *[0.05, 0.1, 0.2, 0.4, 0.7].choose(&mut rng).unwrap_or(&0.2),
            tau: top * rng.gen_range(0.0..1.2),
        };
        let sol = centralized::thresh_seq_mod(&inst, &candidates, &params, &RandomTape::new(r as u64))?;
        if let Err(why) = check_thresh_seq(&inst, &candidates, &params, &sol) {
            broken.push(format!("run {r}: {why}"));
        }
    }
    let detail = match broken.first() {
        None => format!("{runs} runs, all postconditions hold"),
        Some(first) => format!("{} of {runs} runs broken; {first}", broken.len()),
    };
    Ok((broken.is_empty(), detail))
}

fn thresh_seq_failure_rate(scale: Scale) -> Result<Verdict> {
    let runs = scale.pick(1000, 10_000);
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, kind) in [ObjectiveKind::MaxCover, ObjectiveKind::RevenueMax].into_iter().enumerate() {
        let n = 100;
        let inst = generate_random_instance(kind, n, 0.05, 40 + i as u64)?;
        let top = (0..n)
            .map(|x| inst.evaluate_uncounted(&[x]))
            .collect::<smcc_core::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let params = ThreshSeqParams {
            k: 10,
            delta: 0.1,
            eps: 0.2,
            tau: 0.2 * top,
        };
        let (failures, broken) = thresh_seq_failure_count(&inst, &params, runs, 90 + i as u64)?;
        let allowed = 2.0 * params.delta / n as f64 * runs as f64;
        let ok = failures as f64 <= allowed && broken.is_empty();
        pass &= ok;
        parts.push(format!(
            "{}: {failures} failures in {runs} runs (allowed {allowed:.1}), {} broken postconditions",
            kind.name(),
            broken.len()
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn ltc_chain(scale: Scale) -> Result<Verdict> {
    let runs = scale.pick(300, 3000);
    let mut rng = RandomTape::new(11).stream(0);
    let mut broken = Vec::new();
    let mut with_opt = 0;
    for r in 0..runs {
        let kind = ObjectiveKind::ALL[r % ObjectiveKind::ALL.len()];
        let small = r % 3 == 0;
        let n = if small { rng.gen_range(2..=16) } else { rng.gen_range(2..=400) };
        let k = rng.gen_range(1..=10);
        let inst = generate_random_instance(kind, n, rng.gen_range(0.01..0.3), rng.gen())?;
        let all: Vec<usize> = (0..n).collect();
        let sol = centralized::ltc(&inst, &all, k, &RandomTape::new(r as u64))?;
        let opt = if small {
            with_opt += 1;
            Some(brute_force_opt(&inst, k)?.opt_value)
        } else {
            None
        };
        if let Err(why) = check_ltc(&inst, k, &sol, opt) {
            broken.push(format!("run {r}: {why}"));
        }
    }
    let detail = match broken.first() {
        None => format!("{runs} runs ({with_opt} against OPT), chain holds"),
        Some(first) => format!("{} of {runs} runs broken; {first}", broken.len()),
    };
    Ok((broken.is_empty(), detail))
}

fn ratio(scale: Scale) -> Result<Verdict> {
    let seeds: Vec<u64> = (0..scale.pick(20, 200)).collect();
    let kinds = [
        ObjectiveKind::MaxCover,
        ObjectiveKind::InfluenceMax,
        ObjectiveKind::RevenueMax,
        ObjectiveKind::ImageSumm,
    ];
    let instances = kinds
        .iter()
        .enumerate()
        .map(|(i, &kind)| generate_random_instance(kind, 14 + i, 0.2, 300 + i as u64))
        .collect::<smcc_core::Result<Vec<SubmodularInstance>>>()?;
    let mut failing = Vec::new();
    let mut worst: Option<(f64, String)> = None;
    let mut rows = 0;
    for alg in RatioAlgorithm::ALL {
        for row in ratio_suite(alg, &instances, &seeds, &[2, 3, 4], 0.2, &RatioClusters::default())? {
            rows += 1;
            let margin = row.mean / row.threshold.max(f64::MIN_POSITIVE);
            if worst.as_ref().is_none_or(|(m, _)| margin < *m) {
                worst = Some((margin, format!("{} on instance {} k={}", row.algorithm, row.instance, row.k)));
            }
            if !row.pass {
                failing.push(format!(
                    "{} inst {} k={} mean {:.4} < {:.4}",
                    row.algorithm, row.instance, row.k, row.mean, row.threshold
                ));
            }
        }
    }
    let (margin, at) = worst.unwrap_or((f64::INFINITY, String::new()));
    let detail = if failing.is_empty() {
        format!("{rows} (algorithm, instance, k) rows pass; tightest mean/threshold {margin:.3} for {at}")
    } else {
        format!("{} of {rows} rows fail: {}", failing.len(), failing.join(", "))
    };
    Ok((failing.is_empty(), detail))
}

/// MR rounds each direct algorithm must take.
pub fn expected_mr_rounds(algorithm: MrAlgorithm, eps: f64) -> Option<u64> {
    match algorithm {
        MrAlgorithm::Direct(d) => Some(d.mr_rounds(eps)),
        MrAlgorithm::Med(_) => None,
    }
}

fn round_mismatches(rows: &[Row], eps: f64) -> Vec<String> {
    rows.iter()
        .filter(|r| r.status.finished())
        .filter_map(|r| {
            let alg = MrAlgorithm::parse(&r.algo)?;
            let expected = expected_mr_rounds(alg, eps)?;
            (r.mr_rounds != Some(expected)).then(|| format!("{} k={} seed={}: {:?} rounds", r.algo, r.k, r.seed, r.mr_rounds))
        })
        .collect()
}

fn mr_rounds(scale: Scale) -> Result<Verdict> {
    let n = scale.pick(600, 2000);
    let inst = SubmodularInstance::new(Objective::max_cover(&generate_ba(n, 3, 5)?));
    let seeds = scale.pick(3u64, 10);
    let mut checked = 0;
    let mut bad = Vec::new();
    for eps in [0.1, 0.2, 0.3, 0.5] {
        for d in Distributed::ALL {
            for k in [2, 6] {
                for seed in 0..seeds {
                    let mut cluster = Cluster::sequential(ClusterConfig::new(4, n).with_slack(1.0));
                    let options = RunOptions {
                        opt_value: Some(3.0 * k as f64),
                        best_of_all_machines: false,
                    };
                    let report = distributed::run(
                        &inst,
                        MrAlgorithm::Direct(d),
                        k,
                        eps,
                        &mut cluster,
                        &RandomTape::new(seed),
                        &options,
                    )?;
                    checked += 1;
                    let expected = d.mr_rounds(eps);
                    if report.mr_rounds != expected {
                        bad.push(format!("{} eps={eps} k={k} seed={seed}: {} vs {expected}", d.name(), report.mr_rounds));
                    }
                }
            }
        }
    }
    let detail = match bad.first() {
        None => format!("{checked} runs, all round counts exact"),
        Some(first) => format!("{} of {checked} runs off; {first}", bad.len()),
    };
    Ok((bad.is_empty(), detail))
}

fn graph_config(algorithms: &[&str], n: usize, k: Vec<usize>, eps: f64, ell: usize, psi: usize, seeds: Vec<u64>) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        algorithms: algorithms.iter().map(|a| a.parse()).collect::<Result<Vec<Algorithm>>>()?,
        objective: ObjectiveName::MaxCover,
        dataset: DatasetSpec::Ba { n, m: 5, seed: 1 },
        k,
        eps,
        ell,
        psi: Psi::Fixed(psi),
        capacity_slack: 1.25,
        seeds,
        parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        out: None,
        timeout_s: 600.0,
        best_of_all_machines: false,
        opt: None,
        influence_p: smcc_core::data::DEFAULT_INFLUENCE_P,
        revenue_alpha: smcc_core::data::DEFAULT_REVENUE_ALPHA,
    })
}

fn ba_instance(n: usize) -> Result<SubmodularInstance> {
    Ok(SubmodularInstance::new(Objective::max_cover(&generate_ba(n, 5, 1)?)))
}

fn mean_queries_per_n(rows: &[Row], algo: &str) -> Option<f64> {
    let q: Vec<f64> = rows
        .iter()
        .filter(|r| r.algo == algo && r.status.finished())
        .filter_map(|r| r.queries.map(|q| q as f64 / r.n as f64))
        .collect();
    (!q.is_empty()).then(|| q.iter().sum::<f64>() / q.len() as f64)
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

fn query_scaling(scale: Scale) -> Result<Verdict> {
    let sizes: Vec<usize> = scale.pick(vec![1_000, 4_000], vec![1_000, 10_000, 100_000]);
    let seeds: Vec<u64> = (0..scale.pick(2, 3)).collect();
    let (k, eps, ell) = (20, 0.2, 4);
    let mut per_n: Vec<(f64, f64)> = Vec::new();
    let mut problems = Vec::new();
    for &n in &sizes {
        let cfg = graph_config(&["r-dash", "l-dist"], n, vec![k], eps, ell, n / 2, seeds.clone())?;
        let rows = run_on_instance(&cfg, &ba_instance(n)?)?;
        problems.extend(round_mismatches(&rows, eps));
        problems.extend(
            rows.iter()
                .filter(|r| !r.status.finished())
                .map(|r| format!("{} n={n}: {:?}", r.algo, r.status)),
        );
        match (mean_queries_per_n(&rows, "r-dash"), mean_queries_per_n(&rows, "l-dist")) {
            (Some(r), Some(l)) => per_n.push((r, l)),
            _ => problems.push(format!("n={n}: missing runs")),
        }
    }
    let r_spread = spread(&per_n.iter().map(|p| p.0).collect::<Vec<_>>());
    let l_spread = spread(&per_n.iter().map(|p| p.1).collect::<Vec<_>>());
    let shown: Vec<String> = sizes
        .iter()
        .zip(&per_n)
        .map(|(n, (r, l))| format!("n={n}: r-dash {r:.1}/n, l-dist {l:.2}/n"))
        .collect();
    let pass = problems.is_empty() && r_spread <= 3.0 && l_spread <= 2.0;
    let mut detail = format!(
        "{}; spread r-dash {r_spread:.2} (≤ 3), l-dist {l_spread:.2} (≤ 2)",
        shown.join(", ")
    );
    if let Some(p) = problems.first() {
        detail.push_str(&format!("; {} problem(s), first: {p}", problems.len()));
    }
    Ok((pass, detail))
}

/// The CSV with every `wall_ms` zeroed.
fn canonical_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let stripped: Vec<Row> = rows.iter().cloned().map(|r| Row { wall_ms: 0, ..r }).collect();
    let mut out = Vec::new();
    write_rows(&mut out, &stripped)?;
    Ok(out)
}

fn determinism(scale: Scale) -> Result<Verdict> {
    let n = scale.pick(800, 3000);
    let algorithms = [
        "greedy", "lag", "ltc", "rg", "r-dash", "g-dash", "t-dash", "t-dash-opt", "l-dist", "med+rg", "med+r-dash",
    ];
    let seeds: Vec<u64> = (0..scale.pick(2, 4)).collect();
    let mut cfg = graph_config(&algorithms, n, vec![5, 10], 0.2, 4, n, seeds)?;
    cfg.opt = Some(400.0);
    let inst = ba_instance(n)?;
    cfg.parallelism = 1;
    let serial = run_on_instance(&cfg, &inst)?;
    cfg.parallelism = 8;
    let parallel = run_on_instance(&cfg, &inst)?;
    let unfinished = serial.iter().filter(|r| !r.status.finished()).count();
    let same = canonical_csv(&serial)? == canonical_csv(&parallel)?;
    let detail = format!(
        "{} rows, parallelism 1 vs 8 {} ({unfinished} unfinished)",
        serial.len(),
        if same { "byte-identical" } else { "DIFFER" }
    );
    Ok((same && unfinished == 0, detail))
}

fn med_scaling(scale: Scale) -> Result<Verdict> {
    let n = scale.pick(8_000, 50_000);
    let ell = 8;
    let psi = n / ell;
    let k_prime = psi / ell;
    let k_max = n / (ell - 1);
    let ks: Vec<usize> = vec![k_prime / 4, k_prime / 2, k_prime - 1, k_prime + 1, 2 * k_prime, 4 * k_prime, k_max];
    let seeds = vec![0u64];
    let inst = ba_instance(n)?;
    let med_cfg = graph_config(&["med+rg", "rg"], n, ks.clone(), 0.1, ell, psi, seeds.clone())?;
    let tight = run_on_instance(&med_cfg, &inst)?;
    let mut problems = Vec::new();
    let mut worst_gap: f64 = 0.0;
    for &k in &ks {
        let med = tight.iter().find(|r| r.algo == "med+rg" && r.k == k);
        let vanilla = tight.iter().find(|r| r.algo == "rg" && r.k == k);
        let Some(med) = med.filter(|r| r.status.finished()) else {
            problems.push(format!("med+rg infeasible or failed at k={k}"));
            continue;
        };
        let vanilla_status = vanilla.map(|r| r.status);
        if k >= k_prime && vanilla_status != Some(RunStatus::Infeasible) {
            problems.push(format!("rg at Ψ={psi} accepted k={k} ≥ {k_prime}"));
        }
        let relaxed_psi = psi.max(ell * k + 1);
        let relaxed_cfg = graph_config(&["rg"], n, vec![k], 0.1, ell, relaxed_psi, seeds.clone())?;
        let relaxed = run_on_instance(&relaxed_cfg, &inst)?;
        match relaxed.first().and_then(|r| r.value) {
            Some(reference) => {
                let value = med.value.unwrap_or(0.0);
                let gap = (value - reference).abs() / reference.max(value).max(f64::MIN_POSITIVE);
                worst_gap = worst_gap.max(gap);
                if gap > 0.05 {
                    problems.push(format!("k={k}: med+rg {value} vs rg {reference}"));
                }
            }
            None => problems.push(format!("relaxed rg failed at k={k}")),
        }
    }
    let detail = format!(
        "n={n}, ℓ={ell}, Ψ={psi}, k′={k_prime}, k ∈ {ks:?}; largest relative gap {:.2}%{}",
        100.0 * worst_gap,
        problems.first().map(|p| format!("; {} problem(s), first: {p}", problems.len())).unwrap_or_default()
    );
    Ok((problems.is_empty(), detail))
}

fn close(kind: ObjectiveKind, a: f64, b: f64) -> bool {
    if kind == ObjectiveKind::MaxCover {
        a == b
    } else {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }
}

fn summary_fidelity(scale: Scale) -> Result<Verdict> {
    let kinds = [
        ObjectiveKind::MaxCover,
        ObjectiveKind::InfluenceMax,
        ObjectiveKind::RevenueMax,
        ObjectiveKind::ImageSumm,
    ];
    let small_n = scale.pick(8, 10);
    let large_n = scale.pick(2_000, 10_000);
    let pairs = scale.pick(1_000, 10_000);
    let per_base = 10;
    let mut mismatches = Vec::new();
    let mut checked = 0u64;
    for (i, kind) in kinds.into_iter().enumerate() {
        let inst = generate_random_instance(kind, small_n, 0.3, 500 + i as u64)?;
        let full = 1u32 << small_n;
        let members = |mask: u32| -> Vec<usize> { (0..small_n).filter(|&b| mask >> b & 1 == 1).collect() };
        for s in 0..full {
            let base = members(s);
            let summary = inst.summarize(&base)?;
            let f_base = inst.evaluate_uncounted(&base)?;
            for x in 0..full {
                let extra = members(x);
                let mut union: Vec<usize> = members(s | x);
                union.dedup();
                let direct = inst.evaluate_uncounted(&union)? - f_base;
                let via = inst.eval_with_summary(&summary, &extra)?;
                checked += 1;
                if !close(kind, direct, via) {
                    mismatches.push(format!("{} S={base:?} X={extra:?}: {via} vs {direct}", kind.name()));
                }
            }
        }
        let density = if kind == ObjectiveKind::ImageSumm { 0.3 } else { 5.0 / large_n as f64 };
        let inst = generate_random_instance(kind, large_n, density, 600 + i as u64)?;
        let mut rng = RandomTape::new(700 + i as u64).stream(0);
        let ids: Vec<usize> = (0..large_n).collect();
        for _ in 0..pairs / per_base {
            let size = rng.gen_range(0..=10);
            let base: Vec<usize> = ids.choose_multiple(&mut rng, size).copied().collect();
            let summary = inst.summarize(&base)?;
            let f_base = inst.evaluate_uncounted(&base)?;
            for _ in 0..per_base {
                let size = rng.gen_range(1..=5);
                let extra: Vec<usize> = ids.choose_multiple(&mut rng, size).copied().collect();
                let mut union = base.clone();
                union.extend(extra.iter().filter(|x| !base.contains(x)));
                let direct = inst.evaluate_uncounted(&union)? - f_base;
                let via = inst.eval_with_summary(&summary, &extra)?;
                checked += 1;
                if !close(kind, direct, via) {
                    mismatches.push(format!("{} n={large_n}: {via} vs {direct}", kind.name()));
                }
            }
        }
    }
    let detail = match mismatches.first() {
        None => format!("{checked} (S, X) pairs agree"),
        Some(first) => format!("{} of {checked} pairs differ; {first}", mismatches.len()),
    };
    Ok((mismatches.is_empty(), detail))
}
