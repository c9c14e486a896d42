use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Largest total overlap `sum_i |C_i ∩ C'_sigma(i)|` over bijections between
/// the clusters of `a` and `b`, padding the smaller side with empty clusters.
pub fn matching_overlap(a: &Clustering, b: &Clustering) -> Result<usize> {
    if a.n() != b.n() || a.unassigned() != b.unassigned() {
        return Err(Error::Domain(
            "clusterings do not cover the same point set".into(),
        ));
    }
    let size = a.k().max(b.k());
    if size == 0 {
        return Ok(0);
    }
    let mut overlap = Matrix::new(size, size, 0i64);
    for (p, la) in a.labels().iter().enumerate() {
        if let (Some(i), Some(j)) = (*la, b.label_of(p)) {
            overlap[(i, j)] += 1;
        }
    }
    let (total, _) = kuhn_munkres(&overlap);
    Ok(total as usize)
}

/// Fraction of points on which two clusterings disagree under the best
/// matching of their clusters.
pub fn clustering_distance(a: &Clustering, b: &Clustering) -> Result<f64> {
    let n = a.n();
    if n == 0 {
        return Ok(0.0);
    }
    let assigned = a.assigned_count();
    let agree = matching_overlap(a, b)?;
    Ok((assigned - agree) as f64 / n as f64)
}
