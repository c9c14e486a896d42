//! Objectives, clustering distance, exact optima and structural diagnostics.

mod baseline;
mod brute;
mod distance;
mod objective;
mod stability;
mod structure;

pub use baseline::{embed_kmeans_baseline, BaselineParams};
pub use brute::{brute_force_optimum, for_each_partition, DEFAULT_BRUTE_CAP};
pub use distance::{clustering_distance, matching_overlap};
pub use objective::{
    balanced_k_median, evaluate_objective, min_sum, ObjectiveKind, ObjectiveValue,
};
pub use stability::{verify_stability, StabilityCounterexample, StabilityVerdict};
pub use structure::{
    classify_points, verify_structure, PairWitness, PartCheck, PointWeights, StructureReport,
    VerifyOutcome,
};
