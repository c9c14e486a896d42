use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::metric::{Metric, PointId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// Sum of distances over unordered pairs inside each cluster.
    MinSum,
    /// Per cluster, its size times the distance sum to its best in-cluster median.
    BalancedKMedian,
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-sum" | "min_sum" => Ok(Self::MinSum),
            "balanced-k-median" | "balanced_k_median" | "k-median" => Ok(Self::BalancedKMedian),
            other => Err(Error::param(format!("unknown objective '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub kind: ObjectiveKind,
    pub value: f64,
    /// Median of each cluster for the balanced k-median objective; `None` for
    /// empty clusters and for min-sum.
    pub medians: Vec<Option<PointId>>,
}

fn check_size(c: &Clustering, m: &impl Metric) -> Result<()> {
    if c.n() != m.len() {
        return Err(Error::Domain(format!(
            "clustering over {} points, metric over {}",
            c.n(),
            m.len()
        )));
    }
    Ok(())
}

pub fn min_sum(c: &Clustering, m: &impl Metric) -> Result<ObjectiveValue> {
    check_size(c, m)?;
    let mut value = 0.0;
    for cluster in c.clusters() {
        for (a, &x) in cluster.iter().enumerate() {
            for &y in &cluster[a + 1..] {
                value += m.distance(x, y);
            }
        }
    }
    Ok(ObjectiveValue {
        kind: ObjectiveKind::MinSum,
        value,
        medians: vec![None; c.k()],
    })
}

/// Member minimizing the summed distance to the cluster (lowest index on ties),
/// with that sum.
pub(crate) fn median_of(cluster: &[PointId], m: &impl Metric) -> Option<(PointId, f64)> {
    let mut best: Option<(PointId, f64)> = None;
    for &y in cluster {
        let sum: f64 = cluster.iter().map(|&x| m.distance(x, y)).sum();
        if best.is_none_or(|(_, b)| sum < b) {
            best = Some((y, sum));
        }
    }
    best
}

pub fn balanced_k_median(c: &Clustering, m: &impl Metric) -> Result<ObjectiveValue> {
    check_size(c, m)?;
    let mut value = 0.0;
    let mut medians = Vec::with_capacity(c.k());
    for cluster in c.clusters() {
        match median_of(cluster, m) {
            Some((median, sum)) => {
                value += cluster.len() as f64 * sum;
                medians.push(Some(median));
            }
            None => medians.push(None),
        }
    }
    Ok(ObjectiveValue {
        kind: ObjectiveKind::BalancedKMedian,
        value,
        medians,
    })
}

pub fn evaluate_objective(
    kind: ObjectiveKind,
    c: &Clustering,
    m: &impl Metric,
) -> Result<ObjectiveValue> {
    match kind {
        ObjectiveKind::MinSum => min_sum(c, m),
        ObjectiveKind::BalancedKMedian => balanced_k_median(c, m),
    }
}
