use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::PointId;

/// Something worth surfacing to the user that does not stop a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// The run ended with fewer non-empty clusters than requested; the output
    /// was padded with empty clusters.
    FewerClusters { found: usize, requested: usize },
    /// Some points have infinite distance to every landmark in the embedding.
    InfiniteCoordinates { points: usize },
    /// Threshold candidates came from a geometric grid rather than exact
    /// enumeration, so the unknown-threshold guarantee does not apply.
    GeometricCandidates { ratio: f64 },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::FewerClusters { found, requested } => {
                write!(f, "found {found} non-empty clusters, {requested} requested")
            }
            Warning::InfiniteCoordinates { points } => {
                write!(f, "{points} points have infinite landmark coordinates")
            }
            Warning::GeometricCandidates { ratio } => {
                write!(
                    f,
                    "thresholds taken from a geometric grid with ratio {ratio}"
                )
            }
        }
    }
}

/// A partition of `0..n` into labeled clusters plus a set of unassigned points.
///
/// Cluster members are kept sorted. `seeds[i]` lists the landmarks whose balls
/// produced cluster `i`, when the clustering came from a landmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClustering")]
pub struct Clustering {
    n: usize,
    clusters: Vec<Vec<PointId>>,
    unassigned: Vec<PointId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    seeds: Vec<Vec<PointId>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<Warning>,
    #[serde(skip)]
    labels: Vec<Option<usize>>,
}

/// Serialized form; checked on the way in.
#[derive(Deserialize)]
struct RawClustering {
    n: usize,
    clusters: Vec<Vec<PointId>>,
    #[serde(default)]
    unassigned: Vec<PointId>,
    #[serde(default)]
    seeds: Vec<Vec<PointId>>,
    #[serde(default)]
    warnings: Vec<Warning>,
}

impl TryFrom<RawClustering> for Clustering {
    type Error = Error;

    fn try_from(raw: RawClustering) -> Result<Self> {
        let mut c = Self::new(raw.n, raw.clusters)?;
        if !raw.unassigned.is_empty() && raw.unassigned != c.unassigned {
            return Err(Error::data("unassigned list does not match the clusters"));
        }
        if !raw.seeds.is_empty() && raw.seeds.len() != c.clusters.len() {
            return Err(Error::data("seed list does not match cluster count"));
        }
        c.seeds = raw.seeds;
        c.warnings = raw.warnings;
        Ok(c)
    }
}

impl Clustering {
    /// Builds a clustering from disjoint clusters; points not listed are unassigned.
    pub fn new(n: usize, clusters: Vec<Vec<PointId>>) -> Result<Self> {
        let mut labels = vec![None; n];
        let mut clusters = clusters;
        for (c, members) in clusters.iter_mut().enumerate() {
            members.sort_unstable();
            for &p in members.iter() {
                let slot = labels
                    .get_mut(p)
                    .ok_or_else(|| Error::Domain(format!("point {p} out of range for n = {n}")))?;
                if slot.is_some() {
                    return Err(Error::Domain(format!("point {p} appears in two clusters")));
                }
                *slot = Some(c);
            }
        }
        let unassigned = (0..n).filter(|&p| labels[p].is_none()).collect();
        Ok(Self {
            n,
            clusters,
            unassigned,
            seeds: Vec::new(),
            warnings: Vec::new(),
            labels,
        })
    }

    /// Builds a clustering with `k` clusters from per-point labels.
    pub fn from_labels(labels: &[Option<usize>], k: usize) -> Result<Self> {
        let mut clusters = vec![Vec::new(); k];
        for (p, l) in labels.iter().enumerate() {
            if let Some(l) = *l {
                clusters
                    .get_mut(l)
                    .ok_or_else(|| Error::Domain(format!("label {l} out of range for k = {k}")))?
                    .push(p);
            }
        }
        Self::new(labels.len(), clusters)
    }

    pub(crate) fn with_seeds(mut self, seeds: Vec<Vec<PointId>>) -> Self {
        debug_assert_eq!(seeds.len(), self.clusters.len());
        self.seeds = seeds;
        self
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<Warning>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cluster slots, including empty ones.
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Vec<PointId>] {
        &self.clusters
    }

    pub fn unassigned(&self) -> &[PointId] {
        &self.unassigned
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn label_of(&self, p: PointId) -> Option<usize> {
        self.labels[p]
    }

    pub fn seeds(&self) -> &[Vec<PointId>] {
        &self.seeds
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn assigned_count(&self) -> usize {
        self.n - self.unassigned.len()
    }

    pub fn nonempty_count(&self) -> usize {
        self.clusters.iter().filter(|c| !c.is_empty()).count()
    }

    /// Non-empty clusters in canonical order, ignoring labels and empty slots.
    pub fn canonical(&self) -> Vec<Vec<PointId>> {
        let mut out: Vec<_> = self
            .clusters
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .collect();
        out.sort();
        out
    }

    /// True when both describe the same partition and the same unassigned set.
    pub fn same_partition(&self, other: &Self) -> bool {
        self.n == other.n
            && self.unassigned == other.unassigned
            && self.canonical() == other.canonical()
    }
}
