use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Metric, MetricMatrix, PointId, INFINITY};
use crate::error::{Error, Result};

/// One reported alignment: `bit_score` of `a` searched against `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPair {
    pub a: PointId,
    pub b: PointId,
    pub bit_score: f64,
}

/// How to reconcile the two directions of an asymmetric score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetrizePolicy {
    /// Keep the smaller distance (larger bit score).
    #[default]
    MinDistance,
    /// Keep the larger distance (smaller bit score).
    MaxDistance,
    /// Average the two reported distances.
    Mean,
}

impl std::str::FromStr for SymmetrizePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-distance" | "min" => Ok(Self::MinDistance),
            "max-distance" | "max" => Ok(Self::MaxDistance),
            "mean" => Ok(Self::Mean),
            other => Err(Error::param(format!("unknown symmetrize policy '{other}'"))),
        }
    }
}

/// Converts bit scores into distances `1 / bit_score` over `n` points.
///
/// Unreported pairs get [`INFINITY`]; the diagonal is 0.
pub fn ingest_similarity(
    n: usize,
    pairs: &[SimilarityPair],
    policy: SymmetrizePolicy,
) -> Result<MetricMatrix> {
    let mut reported: HashMap<(PointId, PointId), Vec<f64>> = HashMap::new();
    for (row, p) in pairs.iter().enumerate() {
        if p.a >= n || p.b >= n {
            return Err(Error::Domain(format!(
                "pair {row} references point outside [0, {n})"
            )));
        }
        if !p.bit_score.is_finite() || p.bit_score <= 0.0 {
            return Err(Error::data(format!(
                "pair {row} ({}, {}) has non-positive bit score {}",
                p.a, p.b, p.bit_score
            )));
        }
        if p.a == p.b {
            continue;
        }
        let key = (p.a.min(p.b), p.a.max(p.b));
        reported.entry(key).or_default().push(1.0 / p.bit_score);
    }

    let mut entries = vec![INFINITY; n * n];
    for i in 0..n {
        entries[i * n + i] = 0.0;
    }
    for ((i, j), ds) in reported {
        let d = match policy {
            SymmetrizePolicy::MinDistance => ds.iter().copied().fold(INFINITY, f64::min),
            SymmetrizePolicy::MaxDistance => ds.iter().copied().fold(0.0, f64::max),
            SymmetrizePolicy::Mean => ds.iter().sum::<f64>() / ds.len() as f64,
        };
        if ds.iter().any(|&x| x != d) {
            log::debug!("pair ({i}, {j}): reconciled {ds:?} to {d} under {policy:?}");
        }
        entries[i * n + j] = d;
        entries[j * n + i] = d;
    }
    MetricMatrix::new(n, entries)
}

/// Emits the finite off-diagonal entries of `m` as pairs with `bit_score = 1 / d`.
pub fn matrix_to_pairs(m: &MetricMatrix) -> Vec<SimilarityPair> {
    let n = m.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = m.distance(i, j);
            if d.is_finite() && d > 0.0 {
                out.push(SimilarityPair {
                    a: i,
                    b: j,
                    bit_score: 1.0 / d,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(a: usize, b: usize, bit_score: f64) -> SimilarityPair {
        SimilarityPair { a, b, bit_score }
    }

    #[test]
    fn reciprocal_and_missing_pairs() {
        let m = ingest_similarity(3, &[pair(0, 1, 50.0)], SymmetrizePolicy::default()).unwrap();
        assert_eq!(m.distance(0, 1), 0.02);
        assert_eq!(m.distance(1, 0), 0.02);
        assert_eq!(m.distance(0, 2), INFINITY);
        assert_eq!(m.distance(2, 2), 0.0);
    }

    #[test]
    fn asymmetric_scores_follow_policy() {
        let pairs = [pair(0, 1, 50.0), pair(1, 0, 40.0)];
        // Oracle for the default: elementwise max of bit scores, then reciprocal.
        let expected = 1.0 / f64::max(50.0, 40.0);
        let m = ingest_similarity(2, &pairs, SymmetrizePolicy::MinDistance).unwrap();
        assert_eq!(m.distance(0, 1), expected);
        let m = ingest_similarity(2, &pairs, SymmetrizePolicy::MaxDistance).unwrap();
        assert_eq!(m.distance(0, 1), 1.0 / 40.0);
        let m = ingest_similarity(2, &pairs, SymmetrizePolicy::Mean).unwrap();
        assert_eq!(m.distance(0, 1), (0.02 + 0.025) / 2.0);
    }

    #[test]
    fn non_positive_scores_are_data_errors() {
        for bad in [0.0, -3.0, f64::NAN] {
            let err = ingest_similarity(2, &[pair(0, 1, bad)], SymmetrizePolicy::default());
            assert!(matches!(err, Err(Error::Data(_))));
        }
        assert!(matches!(
            ingest_similarity(2, &[pair(0, 5, 1.0)], SymmetrizePolicy::default()),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #[test]
        fn ingestion_is_idempotent(
            n in 2usize..8,
            raw in prop::collection::vec((0usize..8, 0usize..8, 0.001f64..1e4), 0..40),
        ) {
            let pairs: Vec<_> = raw
                .into_iter()
                .map(|(a, b, s)| pair(a % n, b % n, s))
                .collect();
            let m = ingest_similarity(n, &pairs, SymmetrizePolicy::default()).unwrap();
            let again = ingest_similarity(n, &matrix_to_pairs(&m), SymmetrizePolicy::default()).unwrap();
            for (x, y) in m.entries().iter().zip(again.entries()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
