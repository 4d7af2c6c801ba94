use std::sync::Arc;

use smcc_core::centralized::{greedy, ltc, ThreshSeqParams};
use smcc_core::data::{generate_random_instance, GraphData, ObjectiveKind};
use smcc_core::oracle::SetFunction;
use smcc_core::verify::{
    binomial, brute_force_opt, check_ltc, check_thresh_seq, ratio_suite, rcp_exhaustive, rcp_suite, rcp_trial,
    submodularity_check, thresh_seq_failure_count, ConsistentAlgorithm, PropertyVerdict, RatioAlgorithm,
    RatioClusters, RcpVerdict,
};
use smcc_core::{Error, Objective, RandomTape, SubmodularInstance};

fn path3() -> SubmodularInstance {
    let g = GraphData::new(3, vec![(0, 1), (1, 2)], None).unwrap().0;
    SubmodularInstance::new(Objective::max_cover(&g))
}

#[test]
fn brute_force_on_path() {
    let r = brute_force_opt(&path3(), 1).unwrap();
    assert_eq!(r.opt_value, 3.0);
    assert_eq!(r.opt_set, vec![1]);
    assert_eq!(r.enumerated, 3);
}

#[test]
fn brute_force_modular_takes_top_weights() {
    let w = vec![0.5, 3.0, 1.0, 2.5, 0.1, 2.0];
    let inst = SubmodularInstance::new(Objective::modular(w).unwrap());
    let r = brute_force_opt(&inst, 3).unwrap();
    assert!((r.opt_value - 7.5).abs() < 1e-12);
    assert_eq!(r.opt_set, vec![1, 3, 5]);
    assert_eq!(r.enumerated, binomial(6, 3));
}

#[test]
fn brute_force_full_set_and_large_k() {
    let inst = generate_random_instance(ObjectiveKind::InfluenceMax, 9, 0.3, 4).unwrap();
    let all: Vec<usize> = (0..9).collect();
    let full = inst.evaluate_uncounted(&all).unwrap();
    assert_eq!(brute_force_opt(&inst, 9).unwrap().opt_value, full);
    let beyond = brute_force_opt(&inst, 20).unwrap();
    assert_eq!(beyond.opt_value, full);
    assert_eq!(beyond.enumerated, 1);
}

#[test]
fn brute_force_leaves_ledger_alone() {
    let inst = generate_random_instance(ObjectiveKind::MaxCover, 12, 0.2, 1).unwrap();
    brute_force_opt(&inst, 3).unwrap();
    assert_eq!(inst.ledger().snapshot().queries, 0);
}

#[test]
fn brute_force_guard() {
    let inst = generate_random_instance(ObjectiveKind::Modular, 60, 0.0, 1).unwrap();
    assert!(matches!(brute_force_opt(&inst, 30), Err(Error::TooLarge { .. })));
}

#[test]
fn brute_force_matches_greedy_on_modular() {
    for seed in 0..20 {
        let inst = generate_random_instance(ObjectiveKind::Modular, 14, 0.0, seed).unwrap();
        let all: Vec<usize> = (0..14).collect();
        for k in 1..=5 {
            let g = greedy(&inst, &all, k).unwrap();
            let mut items = g.items.clone();
            items.sort_unstable();
            let opt = brute_force_opt(&inst, k).unwrap();
            assert_eq!(items, opt.opt_set);
            let direct = inst.evaluate_uncounted(&opt.opt_set).unwrap();
            assert_eq!(inst.evaluate_uncounted(&items).unwrap(), direct);
        }
    }
}

#[test]
fn rcp_trial_with_empty_b_holds() {
    let inst = generate_random_instance(ObjectiveKind::RevenueMax, 20, 0.3, 2).unwrap();
    let a: Vec<usize> = (0..20).collect();
    for alg in [
        ConsistentAlgorithm::Ltc,
        ConsistentAlgorithm::Lag { eps: 0.2 },
        ConsistentAlgorithm::ThreshSeqMod { delta: 0.1, eps: 0.2, tau: 0.01 },
    ] {
        let trial = rcp_trial(alg, &inst, &a, &[], 4, &RandomTape::new(3));
        assert_eq!(trial.verdict, RcpVerdict::Holds, "{}", alg.name());
        assert_eq!(trial.seed, 3);
    }
}

#[test]
fn rcp_trial_with_unreachable_threshold_holds() {
    let inst = path3();
    let alg = ConsistentAlgorithm::ThreshSeqMod { delta: 0.1, eps: 0.2, tau: 1e9 };
    let trial = rcp_trial(alg, &inst, &[0], &[2], 2, &RandomTape::new(0));
    assert_eq!(trial.verdict, RcpVerdict::Holds);
}

#[test]
fn rcp_trial_reports_overlap_and_selected_b() {
    let inst = path3();
    let trial = rcp_trial(ConsistentAlgorithm::Ltc, &inst, &[0, 1], &[1], 1, &RandomTape::new(0));
    assert!(matches!(trial.verdict, RcpVerdict::PreconditionUnmet(_)));
    // element 1 covers everything and is always picked
    let trial = rcp_trial(ConsistentAlgorithm::Ltc, &inst, &[0], &[1], 1, &RandomTape::new(0));
    assert!(matches!(trial.verdict, RcpVerdict::PreconditionUnmet(_)));
}

#[test]
fn ltc_is_consistent_exhaustively() {
    for seed in 0..3 {
        let inst = generate_random_instance(ObjectiveKind::MaxCover, 7, 0.3, seed).unwrap();
        let s = rcp_exhaustive(ConsistentAlgorithm::Ltc, &inst, 2, &RandomTape::new(seed)).unwrap();
        assert_eq!(s.trials, 3usize.pow(7) - 2usize.pow(7));
        assert!(s.violations.is_empty());
        assert_eq!(s.holds + s.unmet, s.trials);
    }
}

#[test]
fn ltc_rcp_suite_is_clean() {
    let s = rcp_suite(ConsistentAlgorithm::Ltc, 150, 24, 5, 11).unwrap();
    assert_eq!(s.trials, 150);
    assert!(s.violations.is_empty());
    assert!(s.holds > 0);
}

#[test]
fn rcp_exhaustive_guard() {
    let inst = generate_random_instance(ObjectiveKind::Modular, 11, 0.0, 1).unwrap();
    assert!(rcp_exhaustive(ConsistentAlgorithm::Ltc, &inst, 2, &RandomTape::new(0)).is_err());
}

struct Supermodular;

impl SetFunction for Supermodular {
    fn ground_size(&self) -> usize {
        4
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        (set.len() * set.len()) as f64
    }
}

#[test]
fn submodularity_finds_counterexample() {
    let inst = SubmodularInstance::new(Objective::custom(Arc::new(Supermodular)));
    match submodularity_check(&inst, 0, 0).unwrap() {
        PropertyVerdict::Counterexample { a, b, x, left, right } => {
            assert!(a.iter().all(|e| b.contains(e)));
            assert!(!b.contains(&x));
            assert!(left < right);
        }
        v => panic!("expected a counterexample, got {v:?}"),
    }
}

#[test]
fn modular_is_submodular_sampled() {
    let inst = generate_random_instance(ObjectiveKind::Modular, 200, 0.0, 5).unwrap();
    let v = submodularity_check(&inst, 500, 1).unwrap();
    assert_eq!(v, PropertyVerdict::Holds { checked: 1000 });
}

#[test]
fn postcondition_checkers_accept_real_runs() {
    let inst = generate_random_instance(ObjectiveKind::MaxCover, 60, 0.1, 8).unwrap();
    let params = ThreshSeqParams { k: 6, delta: 0.1, eps: 0.2, tau: 2.0 };
    let (failures, broken) = thresh_seq_failure_count(&inst, &params, 200, 1).unwrap();
    assert!(broken.is_empty(), "{broken:?}");
    assert!(failures <= 10);
    let all: Vec<usize> = (0..60).collect();
    for seed in 0..20 {
        let sol = ltc(&inst, &all, 6, &RandomTape::new(seed)).unwrap();
        check_ltc(&inst, 6, &sol, None).unwrap();
    }
}

#[test]
fn postcondition_checkers_reject_bad_solutions() {
    let inst = path3();
    let params = ThreshSeqParams { k: 1, delta: 0.1, eps: 0.2, tau: 1.0 };
    let mut sol = greedy(&inst, &[0, 1, 2], 2).unwrap();
    assert!(check_thresh_seq(&inst, &[0, 1, 2], &params, &sol).is_err());
    sol = greedy(&inst, &[0, 2], 1).unwrap();
    let strict = ThreshSeqParams { k: 3, tau: 0.5, ..params };
    // stopping short while 1 and 2 still gain 1 ≥ τ
    assert!(check_thresh_seq(&inst, &[0, 1, 2], &strict, &sol).is_err());
    assert!(check_ltc(&inst, 1, &sol, Some(100.0)).is_err());
}

#[test]
fn ratio_suite_smoke() {
    let instances: Vec<SubmodularInstance> = (0..2)
        .map(|s| generate_random_instance(ObjectiveKind::MaxCover, 10, 0.2, s).unwrap())
        .collect();
    let seeds: Vec<u64> = (0..10).collect();
    for alg in RatioAlgorithm::ALL {
        let rows = ratio_suite(alg, &instances, &seeds, &[2, 3], 0.2, &RatioClusters::default()).unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            assert!(r.pass, "{r:?}");
            assert!(r.mean <= r.opt + 1e-9);
        }
    }
}
