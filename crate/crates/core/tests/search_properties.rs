use leitmotif_core::learn::extent_function;
use leitmotif_core::{
    build_sparse, lama, pairwise_disjoint, pairwise_matrix, CandidateSource, CoreError, DistanceMeasure, LamaConfig,
    MultivariateTimeSeries, OverlapRule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series(seed: u64, d: usize, n: usize) -> MultivariateTimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..d)
        .map(|_| {
            let mut acc = 0.0;
            (0..n)
                .map(|_| {
                    acc += rng.random_range(-1.0..1.0);
                    acc
                })
                .collect()
        })
        .collect();
    MultivariateTimeSeries::from_dimensions(rows).unwrap()
}

fn measure(i: usize) -> DistanceMeasure {
    DistanceMeasure::ALL[i % DistanceMeasure::ALL.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn output_is_a_feasible_leitmotif(
        seed in any::<u64>(),
        d in 1usize..4,
        n in 40usize..160,
        l in 3usize..12,
        k in 2usize..5,
        m in 0usize..4,
        alpha in prop::sample::select(vec![0.25, 0.5, 1.0]),
    ) {
        let ts = series(seed, d, n);
        let f = 1 + seed as usize % d;
        let rule = OverlapRule::new(l, alpha).unwrap();
        let dm = pairwise_matrix(&ts, l, measure(m)).unwrap();
        match lama(&dm, &LamaConfig::new(k, f, rule)) {
            Ok(out) => {
                let motif = out.leitmotif;
                prop_assert_eq!(motif.offsets.len(), k);
                prop_assert!(motif.offsets.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(pairwise_disjoint(&motif.offsets, &rule));
                prop_assert!(motif.offsets.contains(&motif.query));
                prop_assert_eq!(motif.dims.len(), f);
                prop_assert!(motif.dims.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(*motif.dims.last().unwrap() < d);
                prop_assert_eq!(motif.recompute_extent(&dm), motif.extent);
                prop_assert_eq!(out.stats.queries, ts.num_windows(l));
            }
            Err(CoreError::NoLeitmotif) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn sparse_store_reproduces_dense_search(
        seed in any::<u64>(),
        d in 1usize..4,
        n in 40usize..200,
        l in 3usize..15,
        k in 2usize..5,
        m in 0usize..4,
        all_dims in any::<bool>(),
    ) {
        let ts = series(seed, d, n);
        let f = 1 + seed as usize % d;
        let source = if all_dims { CandidateSource::SelectedDimensions } else { CandidateSource::BestDimension };
        let cfg = LamaConfig::new(k, f, OverlapRule::with_window(l)).with_candidates(source);
        let dense = lama(&pairwise_matrix(&ts, l, measure(m)).unwrap(), &cfg);
        let store = build_sparse(&ts, l, measure(m), &cfg, usize::MAX).unwrap();
        prop_assert!(store.stored_bytes() <= store.peak_bytes());
        prop_assert_eq!(dense, store.search(cfg.pruning));
    }

    #[test]
    fn extent_function_is_non_decreasing(seed in any::<u64>(), d in 1usize..3, l in 4usize..10) {
        let ts = series(seed, d, 150);
        let dm = pairwise_matrix(&ts, l, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        let ef = extent_function(&dm, 6, d, OverlapRule::with_window(l)).unwrap();
        prop_assert_eq!(&ef.ks, &vec![2, 3, 4, 5, 6]);
        prop_assert!(ef.extents.windows(2).all(|w| w[0] <= w[1]));
        for (raw, e) in ef.raw.iter().zip(&ef.extents) {
            if let Some(r) = raw {
                prop_assert!(r <= e);
            }
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn results_and_counters_ignore_thread_count() {
    let ts = series(11, 3, 1500);
    let dm = pairwise_matrix(&ts, 25, DistanceMeasure::ZNormalizedEuclidean).unwrap();
    let cfg = LamaConfig::new(4, 2, OverlapRule::with_window(25));
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| lama(&dm, &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert!(one.stats.pruned > 0);
}
