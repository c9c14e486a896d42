mod common;

use common::{exhaustive_distance, table_for};
use landmark_core::eval::{
    balanced_k_median, clustering_distance, embed_kmeans_baseline, min_sum, BaselineParams,
};
use landmark_core::metric::{check_metric, CheckMode};
use landmark_core::sweep::{enumerate_thresholds, stop_bound_from, sweep, CandidateMode};
use landmark_core::{
    assign_remainder, build_landmark_table, cluster_min_sum, conceptual_cluster_min_sum,
    Clustering, DistanceSource, MetricMatrix, PointCloud, StabilityParams,
};
use proptest::prelude::*;

fn labels(n: usize, k: usize) -> impl Strategy<Value = Clustering> {
    proptest::collection::vec(0..k, n).prop_map(move |l| {
        let l: Vec<Option<usize>> = l.into_iter().map(Some).collect();
        Clustering::from_labels(&l, k).unwrap()
    })
}

fn partition_triple() -> impl Strategy<Value = (Clustering, Clustering, Clustering)> {
    (1usize..14, 1usize..=6, 1usize..=6, 1usize..=6)
        .prop_flat_map(|(n, a, b, c)| (labels(n, a), labels(n, b), labels(n, c)))
}

fn cloud(max_n: usize) -> impl Strategy<Value = PointCloud> {
    (1usize..=3, 2usize..=max_n).prop_flat_map(|(dim, n)| {
        proptest::collection::vec(-20i32..20, dim * n).prop_map(move |c| {
            PointCloud::new(dim, c.into_iter().map(|v| v as f64 * 0.5).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn clustering_distance_is_a_pseudometric((a, b, c) in partition_triple()) {
        let ab = clustering_distance(&a, &b).unwrap();
        let ba = clustering_distance(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(clustering_distance(&a, &a).unwrap(), 0.0);
        let ac = clustering_distance(&a, &c).unwrap();
        let bc = clustering_distance(&b, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, exhaustive_distance(&a, &b));
    }

    #[test]
    fn objectives_sandwich_on_euclidean_points(m in cloud(12), seed in any::<u64>()) {
        prop_assume!(check_metric(&m, CheckMode::Exhaustive).is_clean());
        let n = landmark_core::Metric::len(&m);
        let k = 1 + (seed as usize % n);
        let l: Vec<Option<usize>> = (0..n).map(|p| Some((p * 7 + seed as usize) % k)).collect();
        let c = Clustering::from_labels(&l, k).unwrap();
        let phi = min_sum(&c, &m).unwrap().value;
        let psi = balanced_k_median(&c, &m).unwrap().value;
        prop_assert!(psi / 2.0 <= phi && phi <= psi, "phi {} psi {}", phi, psi);
    }

    #[test]
    fn discrete_run_matches_continuous_definition(
        m in cloud(30),
        landmark_seed in any::<u64>(),
        k_pick in 1usize..6,
        threshold in 0.05f64..400.0,
    ) {
        let n = landmark_core::Metric::len(&m);
        let n_prime = 1 + (landmark_seed as usize % n);
        let landmarks = landmark_core::sample_landmarks(n, n_prime, landmark_seed).unwrap();
        let k = k_pick.min(n);
        let table = table_for(&m, &landmarks);
        let discrete = cluster_min_sum(&table, k, threshold).unwrap();
        let continuous = conceptual_cluster_min_sum(&m, &landmarks, k, threshold).unwrap();
        prop_assert_eq!(discrete.canonical(), continuous.canonical());
        prop_assert_eq!(discrete.unassigned(), continuous.unassigned());
    }

    #[test]
    fn remainder_assignment_covers_every_point(
        m in cloud(40),
        landmark_seed in any::<u64>(),
        threshold in 0.05f64..200.0,
    ) {
        let n = landmark_core::Metric::len(&m);
        let landmarks = landmark_core::sample_landmarks(n, 1 + landmark_seed as usize % n, landmark_seed).unwrap();
        let table = table_for(&m, &landmarks);
        let k = 2.min(n);
        let run = cluster_min_sum(&table, k, threshold).unwrap();
        let full = assign_remainder(&run, &table).unwrap();
        prop_assert!(full.unassigned().is_empty());
        // Clustered points never move.
        for p in 0..n {
            if let Some(l) = run.label_of(p) {
                prop_assert_eq!(full.label_of(p), Some(l));
            }
        }
    }
}

#[test]
fn sweep_issues_no_queries_and_reports_coverage() {
    let spec = landmark_core::gen::InstanceSpec::new(vec![60, 40, 20], 1.0, 12);
    let inst = landmark_core::gen::generate(&spec).unwrap();
    let n = inst.n();
    let source = DistanceSource::new(inst.metric.clone());
    let landmarks = landmark_core::gen::plant_landmarks(&inst, 2, 1).unwrap();
    let table = build_landmark_table(&source, &landmarks).unwrap();
    let before = source.queries_issued();
    let candidates = enumerate_thresholds(&table, n, CandidateMode::Exact).unwrap();
    let params: StabilityParams = inst.stability.unwrap();
    let result = sweep(&table, 3, &candidates, stop_bound_from(&params, n).unwrap()).unwrap();
    assert_eq!(source.queries_issued(), before);
    assert!(result
        .coverage
        .windows(2)
        .all(|w| w[0].threshold < w[1].threshold));
    assert_eq!(result.coverage.len(), result.runs_executed);
    assert!(result.clustering.unassigned().is_empty());
}

#[test]
fn geometric_sweep_warns() {
    let m = MetricMatrix::from_fn(6, |i, j| if i / 3 == j / 3 { 1.0 } else { 50.0 }).unwrap();
    let table = table_for(&m, &[0, 3]);
    let candidates =
        enumerate_thresholds(&table, 6, CandidateMode::Geometric { ratio: 0.5 }).unwrap();
    let result = sweep(&table, 2, &candidates, 1).unwrap();
    assert!(result
        .warnings
        .iter()
        .any(|w| matches!(w, landmark_core::Warning::GeometricCandidates { .. })));
}

#[test]
fn baseline_is_deterministic_under_seed() {
    let spec = landmark_core::gen::InstanceSpec::new(vec![40, 30, 20], 1.0, 3);
    let inst = landmark_core::gen::generate(&spec).unwrap();
    let params = BaselineParams {
        d_landmarks: 6,
        k: 3,
        seed: 11,
        max_iters: 100,
    };
    let a = embed_kmeans_baseline(&DistanceSource::new(inst.metric.clone()), &params).unwrap();
    let b = embed_kmeans_baseline(&DistanceSource::new(inst.metric.clone()), &params).unwrap();
    assert_eq!(a, b);
}
