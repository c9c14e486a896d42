use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::{Metric, PointId};
use crate::error::{Error, Result};

/// Counts one-versus-all queries and enforces an optional budget.
#[derive(Debug, Default)]
pub struct QueryLedger {
    issued: AtomicU64,
    budget: Option<u64>,
}

impl QueryLedger {
    pub fn new(budget: Option<u64>) -> Self {
        Self {
            issued: AtomicU64::new(0),
            budget,
        }
    }

    pub fn queries_issued(&self) -> u64 {
        self.issued.load(Ordering::SeqCst)
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// Reserves one query, failing without side effects when the budget is spent.
    fn acquire(&self) -> Result<()> {
        match self.budget {
            None => {
                self.issued.fetch_add(1, Ordering::SeqCst);
                Ok(())
            }
            Some(budget) => self
                .issued
                .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |q| {
                    (q < budget).then_some(q + 1)
                })
                .map(|_| ())
                .map_err(|issued| Error::BudgetExhausted { issued, budget }),
        }
    }
}

/// Answers one-versus-all distance queries against a metric the caller cannot
/// otherwise inspect. Every answered query is recorded in the ledger.
#[derive(Clone)]
pub struct DistanceSource {
    metric: Arc<dyn Metric + Send + Sync>,
    ledger: Arc<QueryLedger>,
}

impl std::fmt::Debug for DistanceSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistanceSource")
            .field("n", &self.metric.len())
            .field("ledger", &self.ledger)
            .finish()
    }
}

impl DistanceSource {
    pub fn new(metric: impl Metric + Send + Sync + 'static) -> Self {
        Self::from_arc(Arc::new(metric), None)
    }

    pub fn with_budget(metric: impl Metric + Send + Sync + 'static, budget: u64) -> Self {
        Self::from_arc(Arc::new(metric), Some(budget))
    }

    pub fn from_arc(metric: Arc<dyn Metric + Send + Sync>, budget: Option<u64>) -> Self {
        Self {
            metric,
            ledger: Arc::new(QueryLedger::new(budget)),
        }
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn queries_issued(&self) -> u64 {
        self.ledger.queries_issued()
    }

    /// Returns the distances from `s` to every point.
    pub fn query_one_vs_all(&self, s: PointId) -> Result<Vec<f64>> {
        let n = self.metric.len();
        if s >= n {
            return Err(Error::Domain(format!("point {s} out of range for n = {n}")));
        }
        self.ledger.acquire()?;
        let mut row = vec![0.0; n];
        self.metric.fill_row(s, &mut row);
        row[s] = 0.0;
        Ok(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::PointCloud;

    fn line(n: usize) -> PointCloud {
        PointCloud::new(1, (0..n).map(|i| i as f64).collect()).unwrap()
    }

    #[test]
    fn self_distance_is_zero_and_queries_repeat() {
        let src = DistanceSource::new(line(5));
        let a = src.query_one_vs_all(3).unwrap();
        let b = src.query_one_vs_all(3).unwrap();
        assert_eq!(a[3], 0.0);
        assert_eq!(a, b);
        assert_eq!(src.queries_issued(), 2);
    }

    #[test]
    fn budget_and_domain_errors() {
        let src = DistanceSource::with_budget(line(4), 2);
        assert!(matches!(src.query_one_vs_all(9), Err(Error::Domain(_))));
        assert_eq!(src.queries_issued(), 0);
        src.query_one_vs_all(0).unwrap();
        src.query_one_vs_all(1).unwrap();
        assert!(matches!(
            src.query_one_vs_all(2),
            Err(Error::BudgetExhausted {
                issued: 2,
                budget: 2
            })
        ));
        assert_eq!(src.queries_issued(), 2);
    }

    #[test]
    fn ledger_counts_exactly_under_concurrency() {
        let src = DistanceSource::with_budget(line(64), 1000);
        std::thread::scope(|scope| {
            for t in 0..8 {
                let src = &src;
                scope.spawn(move || {
                    for i in 0..150 {
                        let _ = src.query_one_vs_all((t * 7 + i) % 64);
                    }
                });
            }
        });
        assert_eq!(src.queries_issued(), 1000);
    }
}
