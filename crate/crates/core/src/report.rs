//! JSON artifacts. Every artifact records the tool version, the seed and the
//! parameters that produced it.

use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::Result;
use crate::eval::VerifyOutcome;
use crate::metric::PointId;
use crate::sweep::SweepResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: Option<u64>,
    pub parameters: serde_json::Value,
}

impl Provenance {
    pub fn new(seed: Option<u64>, parameters: &impl Serialize) -> Result<Self> {
        Ok(Self {
            tool_version: crate::TOOL_VERSION.to_string(),
            seed,
            parameters: serde_json::to_value(parameters)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringArtifact {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub clustering: Clustering,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub landmarks: Vec<PointId>,
    pub queries_issued: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepArtifact {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub stop_bound: usize,
    pub candidate_count: usize,
    pub landmarks: Vec<PointId>,
    pub queries_issued: u64,
    pub result: SweepResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    pub part1: bool,
    pub part2: bool,
    pub part3: bool,
}

impl From<&VerifyOutcome> for StructureFlags {
    fn from(v: &VerifyOutcome) -> Self {
        Self {
            part1: v.part1.ok,
            part2: v.part2.ok,
            part3: v.part3.ok,
        }
    }
}

/// Objective values and agreement of one clustering. Infinite objective
/// values are written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub phi: Option<f64>,
    pub psi: Option<f64>,
    pub dist_to_target: Option<f64>,
    pub b_observed: Option<usize>,
    pub structure: Option<StructureFlags>,
    pub queries_issued: Option<u64>,
}

/// `Some(v)` for finite `v`.
pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}
