use crate::clustering::{Clustering, Warning};
use crate::error::{Error, Result};
use crate::metric::{Metric, PointId};

/// Continuous-radius reference for [`super::cluster_min_sum`].
///
/// Every round recomputes all balls from the metric. For each unclustered
/// landmark it finds the smallest radius `r` below the largest remaining
/// landmark-point distance at which `|B(r)| >= threshold / r`, takes the
/// landmark with the smallest such radius (larger ball, then lower index, on
/// ties), and removes the union of all balls of that radius meeting its ball.
/// When no ball qualifies the remaining points form one cluster.
///
/// Needs the whole metric, so it is meant for validation on small inputs.
pub fn conceptual_cluster_min_sum(
    metric: &impl Metric,
    landmarks: &[PointId],
    k: usize,
    threshold: f64,
) -> Result<Clustering> {
    let n = metric.len();
    if k == 0 || k > n {
        return Err(Error::param(format!("k = {k} must lie in [1, {n}]")));
    }
    if landmarks.is_empty() {
        return Err(Error::param("landmark set is empty"));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::param("threshold must be positive and finite"));
    }

    let mut clustered = vec![false; n];
    let mut clusters: Vec<Vec<PointId>> = Vec::new();
    let mut seeds: Vec<Vec<PointId>> = Vec::new();

    let ball = |l: PointId, r: f64, clustered: &[bool]| -> Vec<PointId> {
        (0..n)
            .filter(|&p| !clustered[p] && metric.distance(l, p) <= r)
            .collect()
    };

    while clusters.len() < k {
        let active: Vec<(usize, PointId)> = landmarks
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, l)| !clustered[l])
            .collect();
        let radii: Vec<Vec<f64>> = active
            .iter()
            .map(|&(_, l)| {
                let mut d: Vec<f64> = (0..n)
                    .filter(|&p| !clustered[p])
                    .map(|p| metric.distance(l, p))
                    .filter(|d| d.is_finite())
                    .collect();
                d.sort_by(f64::total_cmp);
                d
            })
            .collect();
        let Some(r_max) = radii
            .iter()
            .filter_map(|d| d.last().copied())
            .reduce(f64::max)
        else {
            clusters.push(take_rest(&mut clustered));
            seeds.push(Vec::new());
            break;
        };

        // (radius, ball size, landmark order index, landmark)
        let mut best: Option<(f64, usize, usize, PointId)> = None;
        for (&(order, l), d) in active.iter().zip(&radii) {
            let mut j = 0;
            while j < d.len() && d[j] < r_max {
                // Ball size is constant on [d[j], next distinct distance).
                let mut end = j;
                while end < d.len() && d[end] == d[j] {
                    end += 1;
                }
                let size = end;
                let upper = d.get(end).copied().unwrap_or(r_max).min(r_max);
                let r = d[j].max(threshold / size as f64);
                if r < upper {
                    let better = match best {
                        None => true,
                        Some((br, bs, bo, _)) => {
                            r < br || (r == br && (size > bs || (size == bs && order < bo)))
                        }
                    };
                    if better {
                        best = Some((r, size, order, l));
                    }
                    break;
                }
                j = end;
            }
        }

        let Some((radius, _, _, center)) = best else {
            clusters.push(take_rest(&mut clustered));
            seeds.push(Vec::new());
            break;
        };
        let core = ball(center, radius, &clustered);
        let mut cluster = Vec::new();
        let mut from = Vec::new();
        for &(_, l) in &active {
            let b = ball(l, radius, &clustered);
            if b.iter().any(|p| core.binary_search(p).is_ok()) {
                from.push(l);
                cluster.extend(b);
            }
        }
        cluster.sort_unstable();
        cluster.dedup();
        for &p in &cluster {
            clustered[p] = true;
        }
        clusters.push(cluster);
        seeds.push(from);
    }

    let found = clusters.iter().filter(|c| !c.is_empty()).count();
    let mut warnings = Vec::new();
    if found < k {
        warnings.push(Warning::FewerClusters {
            found,
            requested: k,
        });
    }
    clusters.resize(k, Vec::new());
    seeds.resize(k, Vec::new());
    Ok(Clustering::new(n, clusters)?
        .with_seeds(seeds)
        .with_warnings(warnings))
}

fn take_rest(clustered: &mut [bool]) -> Vec<PointId> {
    let rest: Vec<_> = (0..clustered.len()).filter(|&p| !clustered[p]).collect();
    for &p in &rest {
        clustered[p] = true;
    }
    rest
}
