//! Threshold search when the optimum objective value is unknown.
//!
//! The ball test compares `|B| * r` against the threshold, and only `n` ball
//! sizes and the landmark-point distances can occur, so the products of the
//! two are the only thresholds at which a run can change. The sweep tries
//! them in ascending order over one landmark table and stops at the first
//! run that clusters enough points.

use serde::{Deserialize, Serialize};

use crate::clustering::{Clustering, Warning};
use crate::error::{Error, Result};
use crate::landmark::{assign_remainder, ceil_count, run_min_sum, LandmarkTable, StabilityParams};

/// Refuse exact enumeration beyond this many products.
pub const MAX_EXACT_CANDIDATES: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CandidateMode {
    Exact,
    /// Grid `min * (1 + ratio)^j` from the smallest to the largest product.
    Geometric {
        ratio: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCandidates {
    values: Vec<f64>,
    mode: CandidateMode,
}

impl ThresholdCandidates {
    /// Wraps an explicit list; it is sorted and deduplicated, and non-positive
    /// or non-finite values are dropped.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.retain(|v| *v > 0.0 && v.is_finite());
        values.sort_by(f64::total_cmp);
        values.dedup();
        Self {
            values,
            mode: CandidateMode::Exact,
        }
    }

    /// Drops candidates above `max`.
    pub fn up_to(mut self, max: f64) -> Self {
        self.values.retain(|&v| v <= max);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mode(&self) -> CandidateMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn distinct_positive_distances(table: &LandmarkTable) -> Vec<f64> {
    let mut d: Vec<f64> = table
        .finite_pairs()
        .iter()
        .map(|p| p.distance)
        .filter(|&d| d > 0.0)
        .collect();
    // Pairs are already sorted by distance.
    d.dedup();
    d
}

/// Candidate thresholds `s * d` for ball sizes `s` in `1..=n` and finite
/// positive landmark-point distances `d`.
pub fn enumerate_thresholds(
    table: &LandmarkTable,
    n: usize,
    mode: CandidateMode,
) -> Result<ThresholdCandidates> {
    let distances = distinct_positive_distances(table);
    if distances.is_empty() || n == 0 {
        return Err(Error::data(
            "no finite positive landmark-point distance to build thresholds from",
        ));
    }
    match mode {
        CandidateMode::Exact => {
            let count = n.saturating_mul(distances.len());
            if count > MAX_EXACT_CANDIDATES {
                return Err(Error::param(format!(
                    "exact enumeration needs {count} candidates; use a geometric grid"
                )));
            }
            let mut values = Vec::with_capacity(count);
            for s in 1..=n {
                values.extend(distances.iter().map(|&d| s as f64 * d));
            }
            values.sort_unstable_by(f64::total_cmp);
            values.dedup();
            Ok(ThresholdCandidates { values, mode })
        }
        CandidateMode::Geometric { ratio } => {
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(Error::param(format!(
                    "grid ratio must be positive, got {ratio}"
                )));
            }
            let lo = distances[0];
            let hi = n as f64 * distances[distances.len() - 1];
            let steps = ceil_count((hi / lo).ln() / ratio.ln_1p()) as usize;
            let mut values: Vec<f64> = (0..=steps)
                .map(|j| (lo * (1.0 + ratio).powi(j as i32)).min(hi))
                .collect();
            if let Some(last) = values.last_mut() {
                *last = hi;
            }
            values.dedup();
            Ok(ThresholdCandidates { values, mode })
        }
    }
}

/// Number of bad points allowed, `ceil((2 + 120/alpha) * epsilon * n)`.
pub fn stop_bound_from(params: &StabilityParams, n: usize) -> Result<usize> {
    params.validate()?;
    let b = ceil_count((2.0 + 120.0 / params.alpha) * params.epsilon * n as f64);
    if b >= n as f64 {
        return Err(Error::param(format!(
            "stability parameters allow {b} bad points out of {n}"
        )));
    }
    Ok(b as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub threshold: f64,
    pub clustered: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub chosen_threshold: f64,
    /// Winning run after remainder assignment.
    pub clustering: Clustering,
    /// Distinct clustering runs performed.
    pub runs_executed: usize,
    /// Candidates at or below the chosen threshold, including those skipped
    /// because they provably replay an executed run.
    pub candidates_tried: usize,
    pub points_clustered_at_stop: usize,
    pub coverage: Vec<Coverage>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepFailure {
    pub required: usize,
    pub best_coverage: usize,
    pub best_threshold: f64,
    pub best: Clustering,
    pub runs_executed: usize,
    pub coverage: Vec<Coverage>,
}

/// Runs the clustering for ascending thresholds until one leaves at most
/// `stop_bound` points unclustered, then assigns the leftovers.
///
/// Issues no distance queries. A candidate is skipped only when the previous
/// run shows it would replay that run exactly.
pub fn sweep(
    table: &LandmarkTable,
    k: usize,
    candidates: &ThresholdCandidates,
    stop_bound: usize,
) -> Result<SweepResult> {
    let n = table.n();
    if stop_bound >= n {
        return Err(Error::param(format!(
            "stop bound {stop_bound} must be below n = {n}"
        )));
    }
    if candidates.is_empty() {
        return Err(Error::param("no threshold candidates"));
    }
    let required = n - stop_bound;
    let values = candidates.values();
    let mut coverage = Vec::new();
    let mut best: Option<(usize, f64, Clustering)> = None;
    let mut idx = 0;

    while idx < values.len() {
        let threshold = values[idx];
        let run = run_min_sum(table, k, threshold)?;
        let clustered = run.clustering.assigned_count();
        coverage.push(Coverage {
            threshold,
            clustered,
        });
        if clustered >= required {
            let mut warnings = run.clustering.warnings().to_vec();
            if let CandidateMode::Geometric { ratio } = candidates.mode() {
                warnings.push(Warning::GeometricCandidates { ratio });
            }
            let clustering = assign_remainder(&run.clustering, table)?;
            return Ok(SweepResult {
                chosen_threshold: threshold,
                clustering,
                runs_executed: coverage.len(),
                candidates_tried: idx + 1,
                points_clustered_at_stop: clustered,
                coverage,
                warnings,
            });
        }
        if best.as_ref().is_none_or(|(c, _, _)| clustered > *c) {
            best = Some((clustered, threshold, run.clustering));
        }
        idx = match run.min_fired_product {
            // No test fired, so no larger threshold changes anything.
            None => values.len(),
            Some(p) => (idx + 1).max(values.partition_point(|&v| v < p)),
        };
    }

    let (best_coverage, best_threshold, best) = best.expect("at least one run executed");
    Err(Error::SweepFailed(Box::new(SweepFailure {
        required,
        best_coverage,
        best_threshold,
        best,
        runs_executed: coverage.len(),
        coverage,
    })))
}
