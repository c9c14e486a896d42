//! Hidden metrics, one-versus-all query accounting, and metric diagnostics.
//!
//! Distances are `f64`. Missing distances use [`INFINITY`], which orders above
//! every finite value under `f64::total_cmp` and compares as `+inf` everywhere.

mod check;
mod ingest;
pub mod io;
mod source;

pub use check::{check_metric, CheckMode, MetricReport, Triple};
pub use ingest::{ingest_similarity, matrix_to_pairs, SimilarityPair, SymmetrizePolicy};
pub use source::{DistanceSource, QueryLedger};

use crate::error::{Error, Result};

/// Dense index of a point in `[0, n)`.
pub type PointId = usize;

/// Sentinel for "no significant similarity".
pub const INFINITY: f64 = f64::INFINITY;

/// Read access to a symmetric distance function over `n` points.
pub trait Metric {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn distance(&self, i: PointId, j: PointId) -> f64;

    /// Writes row `i` into `out`, which must have length `self.len()`.
    fn fill_row(&self, i: PointId, out: &mut [f64]) {
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.distance(i, j);
        }
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn distance(&self, i: PointId, j: PointId) -> f64 {
        (**self).distance(i, j)
    }

    fn fill_row(&self, i: PointId, out: &mut [f64]) {
        (**self).fill_row(i, out)
    }
}

/// An explicit `n x n` distance matrix.
///
/// Construction validates symmetry, a zero diagonal and non-negative entries.
/// The triangle inequality is not enforced; see [`check_metric`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl MetricMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::data(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let d = entries[i * n + j];
                if d.is_nan() || d < 0.0 {
                    return Err(Error::data(format!("d({i},{j}) = {d} is not a distance")));
                }
                if i == j && d != 0.0 {
                    return Err(Error::data(format!("d({i},{i}) = {d}, expected 0")));
                }
                if j > i && entries[j * n + i].to_bits() != d.to_bits() {
                    return Err(Error::data(format!(
                        "asymmetric entries d({i},{j}) = {d}, d({j},{i}) = {}",
                        entries[j * n + i]
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from the upper triangle of `f`. The diagonal is forced to 0.
    pub fn from_fn(n: usize, mut f: impl FnMut(PointId, PointId) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self::new(n, entries)
    }

    /// Materializes any metric.
    pub fn from_metric(m: &impl Metric) -> Self {
        let n = m.len();
        let mut entries = vec![0.0; n * n];
        for (i, row) in entries.chunks_mut(n.max(1)).enumerate().take(n) {
            m.fill_row(i, row);
        }
        Self { n, entries }
    }

    pub fn row(&self, i: PointId) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

impl Metric for MetricMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn distance(&self, i: PointId, j: PointId) -> f64 {
        self.entries[i * self.n + j]
    }

    fn fill_row(&self, i: PointId, out: &mut [f64]) {
        out.copy_from_slice(self.row(i));
    }
}

/// Points in `R^dim` under the Euclidean norm. Distances are computed on demand,
/// so large instances never need a quadratic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("point dimension must be positive"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::data(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::data("point coordinates must be finite"));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: PointId) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

impl Metric for PointCloud {
    fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    fn distance(&self, i: PointId, j: PointId) -> f64 {
        euclidean(self.point(i), self.point(j))
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
