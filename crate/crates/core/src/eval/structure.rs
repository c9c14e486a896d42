use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::landmark::StabilityParams;
use crate::metric::{Metric, PointId};

use super::objective::median_of;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointWeights {
    /// Own cluster size times the distance to the own median.
    pub w: f64,
    /// Smallest size-scaled distance to another cluster's median; `None` when
    /// there is no other nonempty cluster.
    pub w2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub epsilon: f64,
    /// Balanced k-median value of the reference clustering.
    pub opt: f64,
    /// Average point weight, `opt / n`.
    pub avg_weight: f64,
    pub cluster_sizes: Vec<usize>,
    pub medians: Vec<Option<PointId>>,
    pub weights: Vec<PointWeights>,
    /// A point is good when `w <= good_weight_bound` and `w2 >= second_weight_bound`.
    pub good_weight_bound: f64,
    pub second_weight_bound: f64,
    pub good_sets: Vec<Vec<PointId>>,
    pub bad_points: Vec<PointId>,
    pub b_observed: usize,
    /// `(2 + 120/alpha) * epsilon * n`.
    pub b_bound: f64,
    /// Per-cluster diameter bound `alpha w / (60 epsilon |C_i|)`.
    pub diameter_bounds: Vec<f64>,
    /// Set when `k = 1`: `w2` is undefined and only the `w` test applies.
    pub w2_undefined: bool,
}

impl StructureReport {
    pub fn is_good(&self, p: PointId) -> bool {
        self.bad_points.binary_search(&p).is_err()
    }

    /// Separation bound between good sets `i` and `j`.
    pub fn separation_bound(&self, i: usize, j: usize) -> f64 {
        let min_size = self.cluster_sizes[i].min(self.cluster_sizes[j]);
        self.alpha * self.avg_weight / (5.0 * self.epsilon) / min_size as f64
    }
}

/// Splits the points into per-cluster good sets and bad points relative to
/// the reference clustering `c_star`.
pub fn classify_points(
    m: &impl Metric,
    c_star: &Clustering,
    params: &StabilityParams,
) -> Result<StructureReport> {
    params.validate()?;
    let n = m.len();
    if c_star.n() != n {
        return Err(Error::Domain(format!(
            "clustering over {} points, metric over {n}",
            c_star.n()
        )));
    }
    if !c_star.unassigned().is_empty() {
        return Err(Error::Domain(
            "reference clustering must assign every point".into(),
        ));
    }
    let k = c_star.k();
    let sizes: Vec<usize> = c_star.clusters().iter().map(Vec::len).collect();
    let medians: Vec<Option<PointId>> = c_star
        .clusters()
        .iter()
        .map(|c| median_of(c, m).map(|(p, _)| p))
        .collect();
    let nonempty = sizes.iter().filter(|&&s| s > 0).count();
    let w2_undefined = nonempty < 2;

    let mut weights = Vec::with_capacity(n);
    let mut opt = 0.0;
    for x in 0..n {
        let own = c_star.label_of(x).expect("all points assigned");
        let mut w = 0.0;
        let mut w2: Option<f64> = None;
        for (j, median) in medians.iter().enumerate() {
            let Some(c) = *median else { continue };
            let scaled = sizes[j] as f64 * m.distance(x, c);
            if j == own {
                w = scaled;
            } else if w2.is_none_or(|v| scaled < v) {
                w2 = Some(scaled);
            }
        }
        opt += w;
        weights.push(PointWeights { w, w2 });
    }

    let (alpha, epsilon) = (params.alpha, params.epsilon);
    let avg_weight = if n == 0 { 0.0 } else { opt / n as f64 };
    let good_weight_bound = alpha * avg_weight / (120.0 * epsilon);
    let second_weight_bound = alpha * avg_weight / (4.0 * epsilon);

    let mut good_sets = vec![Vec::new(); k];
    let mut bad_points = Vec::new();
    for (x, pw) in weights.iter().enumerate() {
        let good = pw.w <= good_weight_bound && pw.w2.is_none_or(|v| v >= second_weight_bound);
        if good {
            good_sets[c_star.label_of(x).expect("assigned")].push(x);
        } else {
            bad_points.push(x);
        }
    }
    let diameter_bounds = sizes
        .iter()
        .map(|&s| alpha * avg_weight / (60.0 * epsilon * s as f64))
        .collect();

    Ok(StructureReport {
        n,
        k,
        alpha,
        epsilon,
        opt,
        avg_weight,
        cluster_sizes: sizes,
        medians,
        weights,
        good_weight_bound,
        second_weight_bound,
        good_sets,
        b_observed: bad_points.len(),
        bad_points,
        b_bound: (2.0 + 120.0 / alpha) * epsilon * n as f64,
        diameter_bounds,
        w2_undefined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub x: PointId,
    pub y: PointId,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartCheck {
    pub ok: bool,
    /// First violating pair found, if any.
    pub witness: Option<PairWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    /// Good sets are tight: within-set distances respect the diameter bounds.
    pub part1: PartCheck,
    /// Good sets are far apart.
    pub part2: PartCheck,
    /// Bad points stay within budget.
    pub part3: PartCheck,
    pub b_observed: usize,
    pub b_bound: f64,
}

impl VerifyOutcome {
    pub fn all_ok(&self) -> bool {
        self.part1.ok && self.part2.ok && self.part3.ok
    }
}

fn check_pairs(
    pairs: impl Iterator<Item = (PointId, PointId, f64)>,
    m: &impl Metric,
    ok: impl Fn(f64, f64) -> bool,
) -> PartCheck {
    for (x, y, bound) in pairs {
        let distance = m.distance(x, y);
        if !ok(distance, bound) {
            return PartCheck {
                ok: false,
                witness: Some(PairWitness {
                    x,
                    y,
                    distance,
                    bound,
                }),
            };
        }
    }
    PartCheck {
        ok: true,
        witness: None,
    }
}

/// Exhaustively checks the three structural properties of a classification.
pub fn verify_structure(report: &StructureReport, m: &impl Metric) -> Result<VerifyOutcome> {
    if report.n != m.len() {
        return Err(Error::Domain(format!(
            "report over {} points, metric over {}",
            report.n,
            m.len()
        )));
    }
    let sets = &report.good_sets;

    let within = sets.iter().enumerate().flat_map(|(i, set)| {
        let bound = report.diameter_bounds[i];
        set.iter()
            .enumerate()
            .flat_map(move |(a, &x)| set[a + 1..].iter().map(move |&y| (x, y, bound)))
    });
    let part1 = check_pairs(within, m, |d, bound| d <= bound);

    let across = (0..sets.len()).flat_map(|i| {
        (i + 1..sets.len()).flat_map(move |j| {
            let bound = report.separation_bound(i, j);
            sets[i]
                .iter()
                .flat_map(move |&x| sets[j].iter().map(move |&y| (x, y, bound)))
        })
    });
    let part2 = check_pairs(across, m, |d, bound| d > bound);

    let part3 = PartCheck {
        ok: report.b_observed as f64 <= report.b_bound,
        witness: None,
    };
    Ok(VerifyOutcome {
        part1,
        part2,
        part3,
        b_observed: report.b_observed,
        b_bound: report.b_bound,
    })
}
