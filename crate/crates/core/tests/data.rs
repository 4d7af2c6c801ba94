use smcc_core::data::{generate_ba, generate_random_instance, GraphData, ObjectiveKind, SimilarityData};
use smcc_core::Objective;
use smcc_core::SubmodularInstance;

#[test]
fn empty_maxcover_counts_members() {
    let inst = generate_random_instance(ObjectiveKind::MaxCover, 25, 0.0, 3).unwrap();
    for len in 0..=25 {
        let s: Vec<usize> = (0..len).collect();
        assert_eq!(inst.evaluate_uncounted(&s).unwrap(), len as f64);
    }
}

#[test]
fn complete_maxcover_covers_all() {
    let inst = generate_random_instance(ObjectiveKind::MaxCover, 25, 1.0, 3).unwrap();
    assert_eq!(inst.evaluate_uncounted(&[7]).unwrap(), 25.0);
    assert_eq!(inst.evaluate_uncounted(&[0, 24]).unwrap(), 25.0);
    assert_eq!(inst.evaluate_uncounted(&[]).unwrap(), 0.0);
}

#[test]
fn random_instances_are_seed_deterministic() {
    for kind in ObjectiveKind::ALL {
        let a = generate_random_instance(kind, 40, 0.2, 17).unwrap();
        let b = generate_random_instance(kind, 40, 0.2, 17).unwrap();
        let c = generate_random_instance(kind, 40, 0.2, 18).unwrap();
        let sets: Vec<Vec<usize>> = vec![vec![0], vec![1, 5, 9], (0..40).step_by(3).collect()];
        let values = |i: &smcc_core::SubmodularInstance| -> Vec<f64> {
            sets.iter().map(|s| i.evaluate_uncounted(s).unwrap()).collect()
        };
        assert_eq!(values(&a), values(&b), "{kind:?}");
        assert_ne!(values(&a), values(&c), "{kind:?}");
    }
}

#[test]
fn generator_size_guard() {
    assert!(generate_random_instance(ObjectiveKind::Modular, (1 << 20) + 1, 0.0, 0).is_err());
}

#[test]
fn ba_is_deterministic() {
    assert_eq!(generate_ba(300, 4, 5).unwrap(), generate_ba(300, 4, 5).unwrap());
    assert_eq!(generate_ba(300, 4, 5).unwrap().edge_count(), 4 * 296);
}

#[test]
fn identity_similarity_counts_self() {
    let mut m = vec![0.0; 9];
    for i in 0..3 {
        m[i * 3 + i] = 1.0;
    }
    let (s, clamped) = SimilarityData::from_matrix(3, m).unwrap();
    assert_eq!(clamped, 0);
    let inst = SubmodularInstance::new(Objective::image_summ(s));
    assert_eq!(inst.evaluate_uncounted(&[0]).unwrap(), 1.0);
    assert_eq!(inst.evaluate_uncounted(&[0, 2]).unwrap(), 2.0);
}

#[test]
fn asymmetric_similarity_is_preserved() {
    let (s, _) = SimilarityData::from_matrix(2, vec![1.0, 0.3, 0.7, 1.0]).unwrap();
    assert_eq!(s.get(0, 1), 0.3);
    assert_eq!(s.get(1, 0), 0.7);
    assert!((s.asymmetry().0 - 0.4).abs() < 1e-12);
}

#[test]
fn self_loops_dropped_on_construction() {
    let (g, dropped) = GraphData::new(2, vec![(0, 0), (0, 1), (1, 1)], Some(vec![1.0, 2.0, 3.0])).unwrap();
    assert_eq!(dropped, 2);
    assert_eq!(g.edges, vec![(0, 1)]);
    assert_eq!(g.weights, Some(vec![2.0]));
}
