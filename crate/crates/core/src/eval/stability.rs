use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::metric::{Metric, MetricMatrix};

use super::brute::{check_brute_size, for_each_partition, labeling_cost, Scratch};
use super::distance::clustering_distance;
use super::objective::ObjectiveKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCounterexample {
    pub clustering: Clustering,
    pub value: f64,
    pub distance_to_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub holds: bool,
    pub opt: f64,
    /// Clusterings with objective at most `(1 + alpha) * opt` must be this close.
    pub epsilon: f64,
    pub alpha: f64,
    pub clusterings_checked: u64,
    pub counterexample: Option<StabilityCounterexample>,
}

/// Exhaustively checks that every clustering into at most `k` clusters whose
/// objective is within a `1 + alpha` factor of optimal lies strictly closer
/// than `epsilon` to `target`.
pub fn verify_stability(
    m: &impl Metric,
    k: usize,
    alpha: f64,
    epsilon: f64,
    objective: ObjectiveKind,
    target: &Clustering,
    cap: usize,
) -> Result<StabilityVerdict> {
    let n = m.len();
    check_brute_size(n, k, cap)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::param(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if target.n() != n || !target.unassigned().is_empty() {
        return Err(Error::Domain(
            "target must partition every point of the metric".into(),
        ));
    }
    let matrix = MetricMatrix::from_metric(m);
    let mut scratch = Scratch::default();

    let mut opt = f64::INFINITY;
    for_each_partition(n, k, |labels| {
        opt = opt.min(labeling_cost(objective, &matrix, labels, k, &mut scratch));
    });
    let limit = (1.0 + alpha) * opt;

    let mut checked = 0u64;
    let mut counterexample = None;
    let mut failure: Option<Error> = None;
    for_each_partition(n, k, |labels| {
        checked += 1;
        if counterexample.is_some() || failure.is_some() {
            return;
        }
        let value = labeling_cost(objective, &matrix, labels, k, &mut scratch);
        if value > limit {
            return;
        }
        let opt_labels: Vec<Option<usize>> = labels.iter().copied().map(Some).collect();
        let result = Clustering::from_labels(&opt_labels, k)
            .and_then(|c| clustering_distance(&c, target).map(|d| (c, d)));
        match result {
            Ok((clustering, d)) if d >= epsilon => {
                counterexample = Some(StabilityCounterexample {
                    clustering,
                    value,
                    distance_to_target: d,
                });
            }
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(StabilityVerdict {
        holds: counterexample.is_none(),
        opt,
        epsilon,
        alpha,
        clusterings_checked: checked,
        counterexample,
    })
}
