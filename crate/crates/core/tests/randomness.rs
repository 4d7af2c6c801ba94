use proptest::prelude::*;
use smcc_core::randomness::Permutation;
use smcc_core::RandomTape;

#[test]
fn same_address_same_permutation() {
    let t = RandomTape::new(42).child(3).child(1);
    assert_eq!(t.permutation(2, 50), t.permutation(2, 50));
    assert_eq!(RandomTape::new(42).child(3).child(1).permutation(2, 50), t.permutation(2, 50));
}

#[test]
fn permutations_are_bijections() {
    let p = RandomTape::new(7).permutation(1, 100);
    let mut seen = p.ranks().to_vec();
    seen.sort_unstable();
    assert_eq!(seen, (0..100).collect::<Vec<_>>());
    assert_eq!(p.induced_order(&(0..100).collect::<Vec<_>>()), p.order());
}

#[test]
fn rank_of_zero_is_uniform() {
    // chi-square with 4 degrees of freedom; 13.28 is the 1% critical value
    let tape = RandomTape::new(2024);
    let mut counts = [0usize; 5];
    let draws = 10_000;
    for j in 1..=draws {
        counts[tape.permutation(j, 5).rank(0)] += 1;
    }
    let expected = draws as f64 / 5.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 13.28, "chi2 = {chi2}, counts {counts:?}");
}

#[test]
fn split_subtapes_differ() {
    for seed in 0..100 {
        let tapes = RandomTape::new(seed).split(4);
        assert_eq!(tapes, RandomTape::new(seed).split(4));
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(tapes[i].permutation(1, 8), tapes[j].permutation(1, 8));
            }
        }
    }
}

#[test]
fn streams_depend_only_on_address() {
    use rand::Rng;
    let t = RandomTape::new(5);
    let a: Vec<u32> = (0..4).map(|_| t.stream(9).gen()).collect();
    let mut s = t.stream(9);
    let b: Vec<u32> = (0..4).map(|_| s.gen()).collect();
    assert_eq!(a[0], b[0]);
    assert_ne!(t.stream(9).gen::<u64>(), t.stream(10).gen::<u64>());
}

#[test]
fn subsequence_property_exhaustive() {
    let n = 6;
    for seed in 0..20 {
        let sigma = RandomTape::new(seed).permutation(1, n);
        for v in 0u32..1 << n {
            let set: Vec<usize> = (0..n).filter(|i| v >> i & 1 == 1).collect();
            for b in 0u32..1 << n {
                let extra: Vec<usize> = (0..n).filter(|i| b >> i & 1 == 1 && v >> i & 1 == 0).collect();
                let mut union = set.clone();
                union.extend(&extra);
                let filtered: Vec<usize> =
                    sigma.induced_order(&union).into_iter().filter(|x| set.contains(x)).collect();
                assert_eq!(sigma.induced_order(&set), filtered);
            }
        }
    }
}

proptest! {
    #[test]
    fn subsequence_property_sampled(seed in any::<u64>(), n in 1usize..200, picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..60)) {
        let sigma = RandomTape::new(seed).permutation(3, n);
        let ids: Vec<usize> = picks.iter().map(|i| i.index(n)).collect();
        let (set, extra) = ids.split_at(ids.len() / 2);
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let mut union = set.clone();
        union.extend(extra.iter().filter(|x| !set.contains(x)));
        union.sort_unstable();
        union.dedup();
        let filtered: Vec<usize> = sigma.induced_order(&union).into_iter().filter(|x| set.contains(x)).collect();
        prop_assert_eq!(sigma.induced_order(&set), filtered);
    }

    #[test]
    fn from_ranks_roundtrip(seed in any::<u64>(), n in 0usize..50) {
        let p = RandomTape::new(seed).permutation(1, n);
        prop_assert_eq!(Permutation::from_ranks(p.ranks().to_vec()).unwrap(), p.clone());
        for v in 0..n {
            prop_assert!(p.rank(v) < n);
        }
    }
}
