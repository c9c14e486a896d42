use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::metric::{Metric, MetricMatrix};

use super::objective::{evaluate_objective, ObjectiveKind, ObjectiveValue};

/// Largest instance the exhaustive search accepts unless the caller raises it.
pub const DEFAULT_BRUTE_CAP: usize = 12;

/// Calls `f` with the label vector of every partition of `0..n` into at most
/// `max_blocks` blocks, as restricted growth strings in lexicographic order.
pub fn for_each_partition(n: usize, max_blocks: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 || max_blocks == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut labels = vec![0usize; n];
    // prefix_max[i] is the largest label among labels[..=i].
    let mut prefix_max = vec![0usize; n];
    loop {
        f(&labels);
        // Rightmost position that can still be incremented.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            let cap = prefix_max[i - 1] + 1;
            if labels[i] < cap && labels[i] + 1 < max_blocks {
                break;
            }
            i -= 1;
        }
        labels[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(labels[i]);
        for j in i + 1..n {
            labels[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// Reusable buffers for [`labeling_cost`].
#[derive(Default)]
pub(crate) struct Scratch {
    costs: Vec<f64>,
    sizes: Vec<usize>,
}

/// Objective value of a complete labeling with labels below `k`.
pub(crate) fn labeling_cost(
    kind: ObjectiveKind,
    m: &MetricMatrix,
    labels: &[usize],
    k: usize,
    scratch: &mut Scratch,
) -> f64 {
    let n = labels.len();
    match kind {
        ObjectiveKind::MinSum => {
            let mut total = 0.0;
            for x in 0..n {
                let row = m.row(x);
                for y in x + 1..n {
                    if labels[x] == labels[y] {
                        total += row[y];
                    }
                }
            }
            total
        }
        ObjectiveKind::BalancedKMedian => {
            let Scratch { costs, sizes } = scratch;
            costs.clear();
            costs.resize(k, f64::INFINITY);
            sizes.clear();
            sizes.resize(k, 0);
            for &l in labels {
                sizes[l] += 1;
            }
            for y in 0..n {
                let row = m.row(y);
                let ly = labels[y];
                let sum: f64 = (0..n).filter(|&x| labels[x] == ly).map(|x| row[x]).sum();
                if sum < costs[ly] {
                    costs[ly] = sum;
                }
            }
            (0..k)
                .filter(|&l| sizes[l] > 0)
                .map(|l| sizes[l] as f64 * costs[l])
                .sum()
        }
    }
}

pub(crate) fn check_brute_size(n: usize, k: usize, cap: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if n > cap {
        return Err(Error::param(format!(
            "exhaustive search refused: n = {n} exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

/// Exact optimum over every clustering into at most `k` clusters. The first
/// optimal labeling in restricted-growth order wins ties.
pub fn brute_force_optimum(
    m: &impl Metric,
    k: usize,
    kind: ObjectiveKind,
    cap: usize,
) -> Result<(Clustering, ObjectiveValue)> {
    let n = m.len();
    check_brute_size(n, k, cap)?;
    let matrix = MetricMatrix::from_metric(m);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut scratch = Scratch::default();
    for_each_partition(n, k, |labels| {
        let cost = labeling_cost(kind, &matrix, labels, k, &mut scratch);
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, labels.to_vec()));
        }
    });
    let (_, labels) = best.ok_or_else(|| Error::param("no clustering to enumerate"))?;
    let labels: Vec<Option<usize>> = labels.into_iter().map(Some).collect();
    let clustering = Clustering::from_labels(&labels, k)?;
    let value = evaluate_objective(kind, &clustering, &matrix)?;
    Ok((clustering, value))
}
