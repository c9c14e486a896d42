#![allow(dead_code)]

use landmark_core::gen::InstanceSpec;
use landmark_core::{Clustering, LandmarkTable, Metric, PointId};
use rand::{Rng, RngCore};

/// Landmark table straight from the metric, without query accounting.
pub fn table_for(m: &impl Metric, landmarks: &[PointId]) -> LandmarkTable {
    let rows = landmarks
        .iter()
        .map(|&l| (0..m.len()).map(|p| m.distance(l, p)).collect())
        .collect();
    LandmarkTable::from_rows(m.len(), landmarks.to_vec(), rows).unwrap()
}

/// Random planted spec with `k` cores and roughly `total` core points.
pub fn planted_spec(
    rng: &mut impl RngCore,
    k: usize,
    total: usize,
    bad_max: f64,
    seed: u64,
) -> InstanceSpec {
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(1.0..4.0)).collect();
    let sum: f64 = weights.iter().sum();
    let sizes = weights
        .iter()
        .map(|w| ((w / sum) * total as f64).round().max(10.0) as usize)
        .collect();
    let mut spec = InstanceSpec::new(sizes, rng.random_range(0.5..5.0), seed);
    spec.embed_dim = rng.random_range(2..=3);
    spec.alpha = [0.5, 1.0, 2.0, 4.0][rng.random_range(0..4)];
    spec.bad_fraction = if bad_max > 0.0 {
        rng.random_range(0.0..bad_max)
    } else {
        0.0
    };
    spec
}

pub fn random_clustering(rng: &mut impl RngCore, n: usize, k: usize) -> Clustering {
    let labels: Vec<Option<usize>> = (0..n).map(|_| Some(rng.random_range(0..k))).collect();
    Clustering::from_labels(&labels, k).unwrap()
}

/// Minimum disagreement over all bijections between padded cluster lists.
pub fn exhaustive_distance(a: &Clustering, b: &Clustering) -> f64 {
    let size = a.k().max(b.k());
    let get = |c: &Clustering, i: usize| -> Vec<PointId> {
        c.clusters().get(i).cloned().unwrap_or_default()
    };
    let mut perm: Vec<usize> = (0..size).collect();
    let mut best = usize::MAX;
    permutations(&mut perm, 0, &mut |p| {
        let mut diff = 0;
        for (i, &j) in p.iter().enumerate() {
            let other = get(b, j);
            diff += get(a, i).iter().filter(|x| !other.contains(x)).count();
        }
        best = best.min(diff);
    });
    best as f64 / a.n() as f64
}

fn permutations(v: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == v.len() {
        f(v);
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permutations(v, start + 1, f);
        v.swap(start, i);
    }
}

/// `P(X >= x)` for `X ~ Binomial(trials, p)`.
pub fn binomial_upper_tail(trials: u64, p: f64, x: u64) -> f64 {
    let mut pmf = (1.0 - p).powi(trials as i32);
    let mut below = 0.0;
    for j in 0..x {
        below += pmf;
        pmf *= (trials - j) as f64 / (j + 1) as f64 * p / (1.0 - p);
    }
    (1.0 - below).max(0.0)
}
