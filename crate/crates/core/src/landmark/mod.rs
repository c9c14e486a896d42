//! Landmark sampling, the landmark-pair table, and the min-sum ball-growing
//! clustering procedure.

mod conceptual;
mod minsum;
mod params;
mod remainder;
mod sample;
mod table;

pub use conceptual::conceptual_cluster_min_sum;
pub use minsum::{cluster_min_sum, run_min_sum, MinSumRun};
pub use params::{
    ceil_count, landmark_count_for, landmarks_for_coverage, threshold_from_opt, AlgorithmParams,
    StabilityParams,
};
pub use remainder::assign_remainder;
pub use sample::sample_landmarks;
pub use table::{build_landmark_table, LandmarkPair, LandmarkTable};
