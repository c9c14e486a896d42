//! Landmark-based clustering for approximation-stable instances in the
//! one-versus-all distance query model.
//!
//! The usual flow: wrap a metric in a [`DistanceSource`], sample landmarks,
//! build a [`LandmarkTable`] with one query per landmark, then either run
//! [`cluster_min_sum`] at a known threshold or [`sweep()`] over candidate
//! thresholds, and finally [`assign_remainder`].

pub mod clustering;
pub mod error;
pub mod eval;
pub mod gen;
pub mod landmark;
pub mod metric;
pub mod report;
pub mod sweep;

pub use clustering::{Clustering, Warning};
pub use error::{Error, Result};
pub use landmark::{
    assign_remainder, build_landmark_table, cluster_min_sum, conceptual_cluster_min_sum,
    landmark_count_for, run_min_sum, sample_landmarks, threshold_from_opt, AlgorithmParams,
    LandmarkTable, MinSumRun, StabilityParams,
};
pub use metric::{DistanceSource, Metric, MetricMatrix, PointCloud, PointId};
pub use sweep::{enumerate_thresholds, stop_bound_from, sweep, CandidateMode, SweepResult};

/// Version string embedded in every emitted artifact.
pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
