mod common;

use common::table_for;
use landmark_core::eval::{classify_points, verify_structure};
use landmark_core::gen::{
    generate, generate_adversarial, plant_landmarks, AdversarialKind, InstanceSpec,
};
use landmark_core::metric::{check_metric, CheckMode};
use landmark_core::sweep::{enumerate_thresholds, sweep, CandidateMode};
use landmark_core::{cluster_min_sum, sample_landmarks, Error, Metric, StabilityParams, Warning};

#[test]
fn duplicate_points_terminate() {
    let inst = generate_adversarial(AdversarialKind::DuplicatePoints, 30, 3, 1).unwrap();
    let landmarks = sample_landmarks(30, 6, 1).unwrap();
    let table = table_for(&inst.metric, &landmarks);
    for threshold in [1e-3, 1.0, 1e3, 1e9] {
        let c = cluster_min_sum(&table, 3, threshold).unwrap();
        assert_eq!(c.k(), 3);
    }
}

#[test]
fn outlier_cluster_sweep_reports_instead_of_panicking() {
    for seed in 0..20 {
        let inst =
            generate_adversarial(AdversarialKind::SingleOutlierCluster, 60, 2, seed).unwrap();
        let landmarks = sample_landmarks(60, 1 + seed as usize % 6, seed).unwrap();
        let table = table_for(&inst.metric, &landmarks);
        let candidates = enumerate_thresholds(&table, 60, CandidateMode::Exact).unwrap();
        for stop in [0, 3, 30] {
            match sweep(&table, 2, &candidates, stop) {
                Ok(result) => {
                    let fewer = result
                        .warnings
                        .iter()
                        .any(|w| matches!(w, Warning::FewerClusters { .. }));
                    assert!(result.clustering.nonempty_count() == 2 || fewer);
                    assert!(result.clustering.unassigned().is_empty());
                }
                Err(e) => assert!(matches!(e, Error::SweepFailed(_)), "{e}"),
            }
        }
    }
}

#[test]
fn planted_plus_uniform_landmarks_still_cover_cores() {
    let inst = generate(&InstanceSpec::new(vec![50, 30, 20], 1.0, 8)).unwrap();
    let mut landmarks = plant_landmarks(&inst, 1, 0).unwrap();
    for l in sample_landmarks(inst.n(), 10, 3).unwrap() {
        if !landmarks.contains(&l) {
            landmarks.push(l);
        }
    }
    for core in &inst.cores {
        assert!(core.iter().any(|p| landmarks.contains(p)));
    }
}

#[test]
fn excess_bad_points_break_the_budget() {
    // Declared epsilon far below what the bad-point fraction needs.
    let mut spec = InstanceSpec::new(vec![40, 40], 1.0, 21);
    spec.bad_fraction = 0.5;
    let inst = generate(&spec).unwrap();
    let params = StabilityParams::new(1.0, 1e-4, 0.1).unwrap();
    let report = classify_points(&inst.metric, &inst.target, &params).unwrap();
    let outcome = verify_structure(&report, &inst.metric).unwrap();
    assert!(
        !outcome.part3.ok,
        "b_observed {} vs bound {}",
        report.b_observed, report.b_bound
    );
}

#[test]
fn generated_instances_are_metric_and_structured() {
    for seed in 0..10 {
        let mut spec = InstanceSpec::new(vec![25 + seed as usize, 15, 10], 2.0, seed);
        spec.bad_fraction = 0.04;
        spec.embed_dim = 1 + seed as usize % 3;
        let inst = generate(&spec).unwrap();
        assert!(check_metric(&inst.metric, CheckMode::Exhaustive).is_clean());
        let params = inst.stability.unwrap();
        let report = classify_points(&inst.metric, &inst.target, &params).unwrap();
        assert!(
            verify_structure(&report, &inst.metric).unwrap().all_ok(),
            "seed {seed}"
        );
        assert_eq!(inst.target.n(), inst.metric.len());
    }
}

#[test]
fn fewer_clusters_than_requested_warn() {
    let inst = generate_adversarial(AdversarialKind::DuplicatePoints, 6, 1, 0).unwrap();
    let table = table_for(&inst.metric, &[0]);
    let c = cluster_min_sum(&table, 4.min(inst.n()), 1.0).unwrap();
    assert!(c
        .warnings()
        .iter()
        .any(|w| matches!(w, Warning::FewerClusters { .. })));
}
