use log::debug;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::{Clustering, Warning};
use crate::error::{Error, Result};
use crate::landmark::sample_landmarks;
use crate::metric::DistanceSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineParams {
    /// Number of landmarks, and so of one-versus-all queries and dimensions.
    pub d_landmarks: usize,
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
}

/// Embeds every point by its distances to `d_landmarks` sampled landmarks and
/// runs Lloyd's k-means in that space.
///
/// Points with an infinite coordinate are assigned using their finite
/// coordinates only and never move a centroid.
pub fn embed_kmeans_baseline(
    source: &DistanceSource,
    params: &BaselineParams,
) -> Result<Clustering> {
    let n = source.len();
    let BaselineParams {
        d_landmarks: d,
        k,
        seed,
        max_iters,
    } = *params;
    if k == 0 || k > n {
        return Err(Error::param(format!("k must lie in [1, {n}], got {k}")));
    }
    if d == 0 || d > n {
        return Err(Error::param(format!(
            "d_landmarks must lie in [1, {n}], got {d}"
        )));
    }
    if max_iters == 0 {
        return Err(Error::param("max_iters must be at least 1"));
    }

    let landmarks = sample_landmarks(n, d, seed)?;
    let mut coords = vec![0.0; n * d];
    for (j, &l) in landmarks.iter().enumerate() {
        let row = source.query_one_vs_all(l)?;
        for (p, &v) in row.iter().enumerate() {
            coords[p * d + j] = v;
        }
    }
    let point = |p: usize| &coords[p * d..(p + 1) * d];
    let finite: Vec<bool> = (0..n)
        .map(|p| point(p).iter().all(|v| v.is_finite()))
        .collect();
    let finite_points: Vec<usize> = (0..n).filter(|&p| finite[p]).collect();
    let infinite_count = n - finite_points.len();

    let mut warnings = Vec::new();
    if infinite_count > 0 {
        warnings.push(Warning::InfiniteCoordinates {
            points: infinite_count,
        });
    }
    if k == 1 {
        return Ok(Clustering::new(n, vec![(0..n).collect()])?.with_warnings(warnings));
    }
    if finite_points.len() < k {
        return Err(Error::data(format!(
            "only {} points have finite embeddings, need at least k = {k}",
            finite_points.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut centers: Vec<f64> = index::sample(&mut rng, finite_points.len(), k)
        .into_iter()
        .flat_map(|i| point(finite_points[i]).to_vec())
        .collect();

    let mut labels = vec![usize::MAX; n];
    for iter in 0..max_iters {
        let mut changed = false;
        for (p, label) in labels.iter_mut().enumerate() {
            let x = point(p);
            let mut best = (0, f64::INFINITY);
            for c in 0..k {
                let center = &centers[c * d..(c + 1) * d];
                let dist: f64 = x
                    .iter()
                    .zip(center)
                    .filter(|(v, _)| v.is_finite())
                    .map(|(v, m)| (v - m) * (v - m))
                    .sum();
                if dist < best.1 {
                    best = (c, dist);
                }
            }
            if *label != best.0 {
                *label = best.0;
                changed = true;
            }
        }
        if !changed {
            debug!("k-means converged after {iter} iterations");
            break;
        }
        let mut sums = vec![0.0; k * d];
        let mut counts = vec![0usize; k];
        for &p in &finite_points {
            let c = labels[p];
            counts[c] += 1;
            for (s, v) in sums[c * d..(c + 1) * d].iter_mut().zip(point(p)) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for j in 0..d {
                    centers[c * d + j] = sums[c * d + j] / counts[c] as f64;
                }
            }
        }
    }

    let labels: Vec<Option<usize>> = labels.into_iter().map(Some).collect();
    Ok(Clustering::from_labels(&labels, k)?.with_warnings(warnings))
}
