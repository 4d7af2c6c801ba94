use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use smcc_core::data::{generate_erdos_renyi, generate_random_instance, GraphData, ObjectiveKind, SimilarityData};
use smcc_core::oracle::SetFunction;
use smcc_core::verify::{monotonicity_check, submodularity_check};
use smcc_core::{Error, Objective, SubmodularInstance};

fn path3() -> GraphData {
    GraphData::new(3, vec![(0, 1), (1, 2)], None).unwrap().0
}

fn star(leaves: usize) -> GraphData {
    GraphData::new(leaves + 1, (1..=leaves).map(|l| (0, l)).collect(), None).unwrap().0
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

// Independent formulas, written against the raw edge list.

fn neighbours(g: &GraphData) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

fn cover_oracle(g: &GraphData, s: &[usize]) -> f64 {
    let adj = neighbours(g);
    (0..g.n)
        .filter(|i| s.contains(i) || adj[*i].iter().any(|j| s.contains(j)))
        .count() as f64
}

fn influence_oracle(g: &GraphData, p: f64, s: &[usize]) -> f64 {
    let adj = neighbours(g);
    (0..g.n)
        .map(|i| {
            if s.contains(&i) {
                1.0
            } else {
                let c = adj[i].iter().filter(|j| s.contains(j)).count();
                1.0 - (1.0 - p).powi(c as i32)
            }
        })
        .sum()
}

fn revenue_oracle(g: &GraphData, alpha: f64, s: &[usize]) -> f64 {
    let w = g.weights.as_ref().unwrap();
    let mut best = std::collections::BTreeMap::new();
    for (e, &(u, v)) in g.edges.iter().enumerate() {
        let slot = best.entry((u.min(v), u.max(v))).or_insert(0.0f64);
        *slot = slot.max(w[e]);
    }
    (0..g.n)
        .map(|i| {
            let total: f64 = best
                .iter()
                .filter(|((a, b), _)| (*a == i && s.contains(b)) || (*b == i && s.contains(a)))
                .map(|(_, w)| *w)
                .sum();
            total.powf(alpha)
        })
        .sum()
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn max_cover_path_values() {
    let inst = SubmodularInstance::new(Objective::max_cover(&path3()));
    assert_eq!(inst.value(&[1]).unwrap(), 3.0);
    assert_eq!(inst.value(&[]).unwrap(), 0.0);
    assert_eq!(inst.marginal(0, &[1]).unwrap(), 0.0);
    let snap = inst.ledger().snapshot();
    assert_eq!(snap.queries, 3);
    assert_eq!(snap.adaptive_rounds, 3);
}

#[test]
fn exclusive_cover_counts_only_neighbours() {
    let inst = SubmodularInstance::new(Objective::max_cover_exclusive(&path3()));
    assert_eq!(inst.value(&[1]).unwrap(), 2.0);
    assert_eq!(inst.value(&[0, 2]).unwrap(), 1.0);
}

#[test]
fn influence_star_center() {
    let inst = SubmodularInstance::new(Objective::influence_max(&star(3), 0.01).unwrap());
    let v = inst.value(&[0]).unwrap();
    assert!((v - 1.03).abs() < 1e-12, "{v}");
}

#[test]
fn empty_set_is_zero_for_builtins() {
    for kind in ObjectiveKind::ALL {
        let inst = generate_random_instance(kind, 12, 0.3, 4).unwrap();
        assert_eq!(inst.value(&[]).unwrap(), 0.0, "{kind:?}");
    }
}

#[test]
fn invalid_element_rejected() {
    let inst = SubmodularInstance::new(Objective::max_cover(&path3()));
    assert!(matches!(inst.value(&[3]), Err(Error::InvalidElement { element: 3, n: 3 })));
    assert!(inst.marginal(7, &[]).is_err());
}

#[test]
fn marginal_of_member_is_zero() {
    let inst = generate_random_instance(ObjectiveKind::RevenueMax, 10, 0.4, 2).unwrap();
    assert_eq!(inst.marginal(3, &[1, 3, 5]).unwrap(), 0.0);
}

#[test]
fn modular_marginal_ignores_base() {
    let inst = SubmodularInstance::new(Objective::modular(vec![0.5, 2.0, 1.25]).unwrap());
    assert_eq!(inst.marginal(1, &[]).unwrap(), 2.0);
    assert_eq!(inst.marginal(1, &[0, 2]).unwrap(), 2.0);
    let singles: Vec<Vec<usize>> = (0..3).map(|i| vec![i]).collect();
    assert_eq!(inst.value_batch(&singles).unwrap(), vec![0.5, 2.0, 1.25]);
    assert!(Objective::modular(vec![1.0, -0.1]).is_err());
}

#[test]
fn batches_cost_one_round() {
    let inst = generate_random_instance(ObjectiveKind::MaxCover, 8, 0.3, 1).unwrap();
    assert_eq!(inst.value_batch(&[]).unwrap(), Vec::<f64>::new());
    assert_eq!(inst.ledger().snapshot().adaptive_rounds, 0);
    assert_eq!(inst.value_batch(&[vec![]]).unwrap(), vec![0.0]);
    let s = inst.ledger().snapshot();
    assert_eq!((s.queries, s.adaptive_rounds), (1, 1));
    inst.value_batch(&[vec![0], vec![1, 2], vec![3]]).unwrap();
    let s = inst.ledger().snapshot();
    assert_eq!((s.queries, s.adaptive_rounds), (4, 2));
}

#[test]
fn builtins_match_independent_formulas() {
    for seed in 0..5 {
        let g = generate_erdos_renyi(9, 0.35, true, seed).unwrap();
        let cover = SubmodularInstance::new(Objective::max_cover(&g));
        let infl = SubmodularInstance::new(Objective::influence_max(&g, 0.2).unwrap());
        let rev = SubmodularInstance::new(Objective::revenue_max(&g, 0.3).unwrap());
        for s in subsets(9) {
            assert_eq!(cover.evaluate_uncounted(&s).unwrap(), cover_oracle(&g, &s));
            assert!(rel_close(infl.evaluate_uncounted(&s).unwrap(), influence_oracle(&g, 0.2, &s)));
            assert!(rel_close(rev.evaluate_uncounted(&s).unwrap(), revenue_oracle(&g, 0.3, &s)));
        }
    }
}

#[test]
fn image_summ_matches_matrix_formula() {
    let n = 5;
    let m: Vec<f64> = (0..n * n).map(|i| ((i * 7919) % 13) as f64 / 13.0).collect();
    let (sim, clamped) = SimilarityData::from_matrix(n, m.clone()).unwrap();
    assert_eq!(clamped, 0);
    let inst = SubmodularInstance::new(Objective::image_summ(sim));
    for s in subsets(n) {
        let want: f64 = (0..n)
            .map(|i| s.iter().map(|&j| m[i * n + j]).fold(0.0, f64::max))
            .sum();
        assert!(rel_close(inst.evaluate_uncounted(&s).unwrap(), want));
    }
}

#[test]
fn restriction_composes_and_shares_ledger() {
    let inst = SubmodularInstance::new(Objective::max_cover(&path3()));
    let g = inst.restrict_to_marginal(&[1]).unwrap();
    assert_eq!(g.value(&[0]).unwrap(), 0.0);
    assert_eq!(g.value(&[1]).unwrap(), 0.0);
    assert_eq!(inst.ledger().snapshot().queries, 2);
    let same = inst.restrict_to_marginal(&[]).unwrap();
    for s in subsets(3) {
        assert_eq!(same.evaluate_uncounted(&s).unwrap(), inst.evaluate_uncounted(&s).unwrap());
    }
}

#[test]
fn saturated_cover_summary_is_zero() {
    let inst = SubmodularInstance::new(Objective::max_cover(&path3()));
    let summary = inst.summarize(&[1]).unwrap();
    for s in subsets(3) {
        assert_eq!(inst.eval_with_summary(&summary, &s).unwrap(), 0.0);
    }
}

#[test]
fn empty_summary_is_the_objective() {
    for kind in ObjectiveKind::ALL {
        let inst = generate_random_instance(kind, 7, 0.3, 9).unwrap();
        let summary = inst.summarize(&[]).unwrap();
        for s in subsets(7) {
            let a = inst.eval_with_summary(&summary, &s).unwrap();
            assert!(rel_close(a, inst.evaluate_uncounted(&s).unwrap()));
        }
    }
}

struct Supermodular;

impl SetFunction for Supermodular {
    fn ground_size(&self) -> usize {
        3
    }
    fn evaluate(&self, set: &[usize]) -> f64 {
        (set.len() * set.len()) as f64
    }
}

#[test]
fn custom_objective_has_no_summary() {
    let inst = SubmodularInstance::new(Objective::custom(Arc::new(Supermodular)));
    assert!(matches!(inst.summarize(&[0]), Err(Error::UnsupportedSummary(_))));
    assert_eq!(inst.value(&[0, 2]).unwrap(), 4.0);
    let g = inst.restrict_to_marginal(&[0]).unwrap();
    assert_eq!(g.value(&[1]).unwrap(), 3.0);
}

#[test]
fn builtins_are_monotone_submodular_exhaustively() {
    for kind in ObjectiveKind::ALL {
        for seed in 0..3 {
            let inst = generate_random_instance(kind, 7, 0.3, seed).unwrap();
            assert!(submodularity_check(&inst, 0, 0).unwrap().holds(), "{kind:?}");
            assert!(monotonicity_check(&inst, 0, 0).unwrap().holds(), "{kind:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summary_matches_direct_marginal(kind in 0usize..5, seed in any::<u64>(), smask in any::<u16>(), xmask in any::<u16>()) {
        let kind = ObjectiveKind::ALL[kind];
        let n = 12;
        let inst = generate_random_instance(kind, n, 0.25, seed).unwrap();
        let s: Vec<usize> = (0..n).filter(|i| smask >> i & 1 == 1).collect();
        let x: Vec<usize> = (0..n).filter(|i| xmask >> i & 1 == 1 && !s.contains(i)).collect();
        let summary = inst.summarize(&s).unwrap();
        let via = inst.eval_with_summary(&summary, &x).unwrap();
        let mut sx = s.clone();
        sx.extend(&x);
        let direct = inst.evaluate_uncounted(&sx).unwrap() - inst.evaluate_uncounted(&s).unwrap();
        if kind == ObjectiveKind::MaxCover {
            prop_assert_eq!(via, direct);
        } else {
            prop_assert!(rel_close(via, direct), "{} vs {}", via, direct);
        }
        let g = inst.restrict_to_marginal(&s).unwrap();
        prop_assert!(rel_close(g.evaluate_uncounted(&x).unwrap(), direct));
    }

    #[test]
    fn marginal_is_value_difference(kind in 0usize..5, seed in any::<u64>(), smask in any::<u16>(), x in 0usize..12) {
        let inst = generate_random_instance(ObjectiveKind::ALL[kind], 12, 0.3, seed).unwrap();
        let s: Vec<usize> = (0..12).filter(|i| smask >> i & 1 == 1).collect();
        let m = inst.marginal(x, &s).unwrap();
        let mut sx = s.clone();
        if !sx.contains(&x) {
            sx.push(x);
        }
        let d = inst.value(&sx).unwrap() - inst.value(&s).unwrap();
        prop_assert!(m >= 0.0);
        prop_assert!((m - d).abs() <= 1e-9 * d.abs().max(1.0));
    }

    #[test]
    fn submodular_on_random_triples(kind in 0usize..5, seed in any::<u64>()) {
        let inst = generate_random_instance(ObjectiveKind::ALL[kind], 40, 0.1, seed).unwrap();
        prop_assert!(submodularity_check(&inst, 200, seed).unwrap().holds());
        prop_assert!(monotonicity_check(&inst, 200, seed).unwrap().holds());
    }
}
