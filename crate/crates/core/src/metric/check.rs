use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Metric, PointId};

/// Relative slack absorbing rounding in computed sums of Euclidean distances.
const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

/// A violation `d(i,k) > d(i,j) + d(j,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub i: PointId,
    pub j: PointId,
    pub k: PointId,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub triples_examined: u64,
    pub violations: Vec<Triple>,
}

impl MetricReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation_rate(&self) -> f64 {
        if self.triples_examined == 0 {
            0.0
        } else {
            self.violations.len() as f64 / self.triples_examined as f64
        }
    }
}

fn violation(m: &impl Metric, a: PointId, b: PointId, c: PointId) -> Option<Triple> {
    let (ab, bc, ac) = (m.distance(a, b), m.distance(b, c), m.distance(a, c));
    if !(ab.is_finite() && bc.is_finite() && ac.is_finite()) {
        return None;
    }
    // At most one side can exceed the sum of the other two.
    let exceeds = |long: f64, x: f64, y: f64| long > (x + y) * (1.0 + ROUNDING_SLACK);
    if exceeds(ac, ab, bc) {
        Some(Triple { i: a, j: b, k: c })
    } else if exceeds(ab, ac, bc) {
        Some(Triple { i: a, j: c, k: b })
    } else if exceeds(bc, ab, ac) {
        Some(Triple { i: b, j: a, k: c })
    } else {
        None
    }
}

/// Reports triangle-inequality violations among finite entries. Never fails.
pub fn check_metric(m: &impl Metric, mode: CheckMode) -> MetricReport {
    let n = m.len();
    let mut report = MetricReport::default();
    match mode {
        CheckMode::Exhaustive => {
            for a in 0..n {
                for b in (a + 1)..n {
                    for c in (b + 1)..n {
                        report.triples_examined += 1;
                        report.violations.extend(violation(m, a, b, c));
                    }
                }
            }
        }
        CheckMode::Sampled { triples, seed } => {
            if n < 3 {
                return report;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..triples {
                let a = rng.random_range(0..n);
                let mut b = rng.random_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let mut c = rng.random_range(0..n - 2);
                for taken in [a.min(b), a.max(b)] {
                    if c >= taken {
                        c += 1;
                    }
                }
                report.triples_examined += 1;
                report.violations.extend(violation(m, a, b, c));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{MetricMatrix, PointCloud, INFINITY};

    #[test]
    fn line_metric_is_clean() {
        let line = PointCloud::new(1, vec![0.0, 1.0, 2.0]).unwrap();
        let r = check_metric(&line, CheckMode::Exhaustive);
        assert_eq!(r.triples_examined, 1);
        assert!(r.is_clean());
    }

    #[test]
    fn constructed_violation_is_reported_once() {
        let m = MetricMatrix::new(3, vec![0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0]).unwrap();
        let r = check_metric(&m, CheckMode::Exhaustive);
        assert_eq!(r.violations, vec![Triple { i: 0, j: 1, k: 2 }]);
    }

    #[test]
    fn infinite_entries_are_skipped() {
        let m = MetricMatrix::new(
            3,
            vec![0.0, 1.0, INFINITY, 1.0, 0.0, 1.0, INFINITY, 1.0, 0.0],
        )
        .unwrap();
        assert!(check_metric(&m, CheckMode::Exhaustive).is_clean());
    }

    #[test]
    fn sampled_triples_are_distinct() {
        let m = MetricMatrix::new(3, vec![0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0]).unwrap();
        let r = check_metric(
            &m,
            CheckMode::Sampled {
                triples: 200,
                seed: 3,
            },
        );
        assert_eq!(r.triples_examined, 200);
        // With three points every sampled triple is the violating one.
        assert_eq!(r.violations.len(), 200);
    }
}
