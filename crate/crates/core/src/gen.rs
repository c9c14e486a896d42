//! Synthetic instances with planted cores, plus adversarial inputs.
//!
//! Planted instances place `k` cores in Euclidean space. Core `i` holds `n_i`
//! points inside a ball whose diameter is `theta / |C_i|`, where `|C_i|` counts
//! the core plus the bad points that join it, so every core point has weight at
//! most `theta`. Centers are spread far enough apart that every core point has
//! second weight well above `30 theta`. The implied stability parameters set
//! `epsilon = alpha w / (120 theta)` (shaved by a relative `1e-9`), which makes
//! the good-weight bound just above `theta` and the ideal threshold `3 theta`.

use std::fs;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::eval::balanced_k_median;
use crate::landmark::StabilityParams;
use crate::metric::io::{parse_labels_csv, parse_matrix_csv, write_labels_csv, write_matrix_csv};
use crate::metric::{Metric, MetricMatrix, PointCloud, PointId};

const PLACEMENT_ATTEMPTS: usize = 10_000;
const PLACEMENT_RESTARTS: usize = 50;
const EPSILON_SHAVE: f64 = 1e-9;

fn default_separation() -> f64 {
    1.5
}

fn default_dim() -> usize {
    2
}

fn default_alpha() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub k: usize,
    /// Core sizes `n_1..n_k`.
    pub sizes: Vec<usize>,
    /// Product of cluster size and core diameter.
    pub theta: f64,
    /// Per-cluster replacement for `theta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_overrides: Option<Vec<f64>>,
    /// Multiple of the minimum center separation.
    #[serde(default = "default_separation")]
    pub separation_factor: f64,
    /// Bad points added, as a fraction of the total core size.
    #[serde(default)]
    pub bad_fraction: f64,
    #[serde(default = "default_dim")]
    pub embed_dim: usize,
    /// Declared `alpha` used to derive the implied `epsilon`.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Side of the cube centers are drawn from; derived from the separation
    /// when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_side: Option<f64>,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(sizes: Vec<usize>, theta: f64, seed: u64) -> Self {
        Self {
            k: sizes.len(),
            sizes,
            theta,
            theta_overrides: None,
            separation_factor: default_separation(),
            bad_fraction: 0.0,
            embed_dim: default_dim(),
            alpha: default_alpha(),
            delta: default_delta(),
            box_side: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.sizes.len() != self.k {
            return Err(Error::param(format!(
                "need k >= 1 sizes, got k = {} with {} sizes",
                self.k,
                self.sizes.len()
            )));
        }
        if self.sizes.contains(&0) {
            return Err(Error::param("core sizes must be positive"));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::param(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        if let Some(t) = &self.theta_overrides {
            if t.len() != self.k || t.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::param("theta overrides must be k positive values"));
            }
        }
        if !(self.separation_factor >= 1.0 && self.separation_factor.is_finite()) {
            return Err(Error::param("separation_factor must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.bad_fraction) {
            return Err(Error::param("bad_fraction must lie in [0, 1)"));
        }
        if self.embed_dim == 0 {
            return Err(Error::param("embed_dim must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::param("alpha must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param("delta must lie in (0, 1)"));
        }
        if let Some(side) = self.box_side {
            if !(side > 0.0 && side.is_finite()) {
                return Err(Error::param("box_side must be positive"));
            }
        }
        Ok(())
    }

    fn theta_of(&self, i: usize) -> f64 {
        self.theta_overrides.as_ref().map_or(self.theta, |t| t[i])
    }

    fn theta_max(&self) -> f64 {
        (0..self.k).map(|i| self.theta_of(i)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversarialKind {
    /// Every pair at distance 1.
    Uniform,
    /// A unit blob plus one tiny cluster far away.
    SingleOutlierCluster,
    /// `k` sites with every point an exact copy of its site.
    DuplicatePoints,
}

impl std::str::FromStr for AdversarialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "uniform" => Ok(Self::Uniform),
            "single_outlier_cluster" => Ok(Self::SingleOutlierCluster),
            "duplicate_points" => Ok(Self::DuplicatePoints),
            other => Err(Error::param(format!("unknown adversarial kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    Planted(InstanceSpec),
    Adversarial {
        family: AdversarialKind,
        n: usize,
        k: usize,
        seed: u64,
    },
    /// Loaded from a bundle without a recorded source.
    External,
}

/// Distances of a generated instance.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceMetric {
    Euclidean(PointCloud),
    Explicit(MetricMatrix),
}

impl Metric for InstanceMetric {
    fn len(&self) -> usize {
        match self {
            Self::Euclidean(p) => p.len(),
            Self::Explicit(m) => m.len(),
        }
    }

    fn distance(&self, i: PointId, j: PointId) -> f64 {
        match self {
            Self::Euclidean(p) => p.distance(i, j),
            Self::Explicit(m) => m.distance(i, j),
        }
    }

    fn fill_row(&self, i: PointId, out: &mut [f64]) {
        match self {
            Self::Euclidean(p) => p.fill_row(i, out),
            Self::Explicit(m) => m.fill_row(i, out),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub source: InstanceSource,
    pub metric: InstanceMetric,
    /// Target clustering; bad points join the cluster of the nearest core.
    pub target: Clustering,
    /// Planted core members per cluster.
    pub cores: Vec<Vec<PointId>>,
    pub bad_points: Vec<PointId>,
    /// Balanced k-median value of the target.
    pub opt: f64,
    /// Stability parameters implied by a planted spec.
    pub stability: Option<StabilityParams>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.metric.len()
    }

    pub fn k(&self) -> usize {
        self.target.k()
    }

    pub fn avg_weight(&self) -> f64 {
        self.opt / self.n() as f64
    }

    /// `alpha w / (40 epsilon)` for the implied parameters.
    pub fn ideal_threshold(&self) -> Option<f64> {
        self.stability.map(|p| p.ideal_threshold(self.avg_weight()))
    }

    pub fn matrix(&self) -> MetricMatrix {
        match &self.metric {
            InstanceMetric::Explicit(m) => m.clone(),
            InstanceMetric::Euclidean(p) => MetricMatrix::from_metric(p),
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point in the ball of radius `r` around `center`.
fn sample_in_ball(rng: &mut ChaCha8Rng, center: &[f64], r: f64) -> Vec<f64> {
    let dim = center.len();
    let dir = random_direction(rng, dim);
    let u: f64 = rng.random();
    let radius = r * u.powf(1.0 / dim as f64);
    center
        .iter()
        .zip(dir)
        .map(|(c, d)| c + radius * d)
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    crate::metric::euclidean(a, b)
}

fn place_centers(
    rng: &mut ChaCha8Rng,
    k: usize,
    dim: usize,
    side: f64,
    min_sep: &dyn Fn(usize, usize) -> f64,
) -> Result<Vec<Vec<f64>>> {
    for _ in 0..PLACEMENT_RESTARTS {
        let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
        'center: for i in 0..k {
            for _ in 0..PLACEMENT_ATTEMPTS {
                let c: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..=side)).collect();
                if centers
                    .iter()
                    .enumerate()
                    .all(|(j, o)| dist(&c, o) >= min_sep(i, j))
                {
                    centers.push(c);
                    continue 'center;
                }
            }
            break;
        }
        if centers.len() == k {
            return Ok(centers);
        }
    }
    Err(Error::param(format!(
        "could not separate {k} cores inside a box of side {side} in dimension {dim}; \
         try a higher embed_dim or a larger box"
    )))
}

/// Generates a planted instance.
pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    spec.validate()?;
    let k = spec.k;
    let dim = spec.embed_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let theta_max = spec.theta_max();

    // Separation uses core sizes; final cluster sizes are never smaller.
    let rho0: Vec<f64> = (0..k)
        .map(|i| spec.theta_of(i) / (2.0 * spec.sizes[i] as f64))
        .collect();
    let min_sep = |i: usize, j: usize| {
        let smaller = spec.sizes[i].min(spec.sizes[j]) as f64;
        spec.separation_factor * (30.0 * theta_max / smaller + rho0[i] + rho0[j])
    };
    let max_sep = (0..k)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| min_sep(i, j))
        .fold(0.0, f64::max);
    let side = spec
        .box_side
        .unwrap_or_else(|| 4.0 * max_sep.max(theta_max) * (k as f64).powf(1.0 / dim as f64));
    let centers = place_centers(&mut rng, k, dim, side, &min_sep)?;

    // Bad points are uniform in the bounding box of the core balls.
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for (c, r) in centers.iter().zip(&rho0) {
        for d in 0..dim {
            lo[d] = lo[d].min(c[d] - r);
            hi[d] = hi[d].max(c[d] + r);
        }
    }
    let core_total: usize = spec.sizes.iter().sum();
    let bad_count = (spec.bad_fraction * core_total as f64).floor() as usize;
    let mut bad: Vec<(Vec<f64>, usize)> = Vec::with_capacity(bad_count);
    let mut cluster_sizes = spec.sizes.clone();
    for _ in 0..bad_count {
        let p: Vec<f64> = (0..dim)
            .map(|d| {
                if hi[d] > lo[d] {
                    rng.random_range(lo[d]..hi[d])
                } else {
                    lo[d]
                }
            })
            .collect();
        let nearest = (0..k)
            .min_by(|&a, &b| dist(&p, &centers[a]).total_cmp(&dist(&p, &centers[b])))
            .expect("k >= 1");
        cluster_sizes[nearest] += 1;
        bad.push((p, nearest));
    }

    // Shave the radius so rounding cannot push a diameter over theta / |C_i|.
    let mut points: Vec<(Vec<f64>, usize, bool)> = Vec::with_capacity(core_total + bad_count);
    for i in 0..k {
        let rho = spec.theta_of(i) / (2.0 * cluster_sizes[i] as f64) * (1.0 - 1e-12);
        for _ in 0..spec.sizes[i] {
            points.push((sample_in_ball(&mut rng, &centers[i], rho), i, true));
        }
    }
    points.extend(bad.into_iter().map(|(p, c)| (p, c, false)));
    points.shuffle(&mut rng);

    let n = points.len();
    let mut coords = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    let mut cores = vec![Vec::new(); k];
    let mut bad_points = Vec::new();
    for (id, (p, c, is_core)) in points.into_iter().enumerate() {
        coords.extend(p);
        labels.push(Some(c));
        if is_core {
            cores[c].push(id);
        } else {
            bad_points.push(id);
        }
    }
    let cloud = PointCloud::new(dim, coords)?;
    let target = Clustering::from_labels(&labels, k)?;
    let opt = balanced_k_median(&target, &cloud)?.value;

    let w = opt / n as f64;
    let epsilon = spec.alpha * w * (1.0 - EPSILON_SHAVE) / (120.0 * theta_max);
    let stability = if epsilon > 0.0 && epsilon < 1.0 {
        Some(StabilityParams::new(spec.alpha, epsilon, spec.delta)?)
    } else {
        log::warn!("implied epsilon {epsilon} is outside (0, 1); no stability parameters");
        None
    };

    Ok(Instance {
        source: InstanceSource::Planted(spec.clone()),
        metric: InstanceMetric::Euclidean(cloud),
        target,
        cores,
        bad_points,
        opt,
        stability,
    })
}

fn contiguous_labels(n: usize, k: usize) -> Vec<Option<usize>> {
    (0..n).map(|p| Some(p * k / n)).collect()
}

/// Generates a degenerate instance for robustness tests.
pub fn generate_adversarial(
    kind: AdversarialKind,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<Instance> {
    if k == 0 || n < k {
        return Err(Error::param(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (metric, labels) = match kind {
        AdversarialKind::Uniform => {
            let m = MetricMatrix::from_fn(n, |_, _| 1.0)?;
            (InstanceMetric::Explicit(m), contiguous_labels(n, k))
        }
        AdversarialKind::SingleOutlierCluster => {
            if k >= 2 && n < k + 1 {
                return Err(Error::param("single_outlier_cluster needs n > k"));
            }
            let outliers = if k == 1 {
                (n / 10).max(1)
            } else {
                (n / 10).clamp(1, n - (k - 1))
            };
            let blob = n - outliers;
            let mut coords = Vec::with_capacity(2 * n);
            for _ in 0..blob {
                coords.extend(sample_in_ball(&mut rng, &[0.0, 0.0], 1.0));
            }
            for _ in 0..outliers {
                coords.extend(sample_in_ball(&mut rng, &[1000.0, 0.0], 0.01));
            }
            let labels: Vec<Option<usize>> = if k == 1 {
                vec![Some(0); n]
            } else {
                // Blob split into k - 1 vertical slabs, outliers last.
                let mut order: Vec<usize> = (0..blob).collect();
                order.sort_by(|&a, &b| coords[2 * a].total_cmp(&coords[2 * b]));
                let mut labels = vec![Some(k - 1); n];
                for (rank, &p) in order.iter().enumerate() {
                    labels[p] = Some(rank * (k - 1) / blob);
                }
                labels
            };
            (
                InstanceMetric::Euclidean(PointCloud::new(2, coords)?),
                labels,
            )
        }
        AdversarialKind::DuplicatePoints => {
            let mut coords = Vec::with_capacity(2 * n);
            let mut labels = Vec::with_capacity(n);
            for p in 0..n {
                let site = p % k;
                coords.extend([10.0 * site as f64, 0.0]);
                labels.push(Some(site));
            }
            (
                InstanceMetric::Euclidean(PointCloud::new(2, coords)?),
                labels,
            )
        }
    };
    let target = Clustering::from_labels(&labels, k)?;
    let opt = balanced_k_median(&target, &metric)?.value;
    Ok(Instance {
        source: InstanceSource::Adversarial {
            family: kind,
            n,
            k,
            seed,
        },
        metric,
        cores: target.clusters().to_vec(),
        target,
        bad_points: Vec::new(),
        opt,
        stability: None,
    })
}

/// Picks `per_core` members from every planted core.
pub fn plant_landmarks(inst: &Instance, per_core: usize, seed: u64) -> Result<Vec<PointId>> {
    if per_core == 0 {
        return Err(Error::param("per_core must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_core * inst.cores.len());
    for (i, core) in inst.cores.iter().enumerate() {
        if core.len() < per_core {
            return Err(Error::param(format!(
                "core {i} has {} points, fewer than per_core = {per_core}",
                core.len()
            )));
        }
        out.extend(
            index::sample(&mut rng, core.len(), per_core)
                .into_iter()
                .map(|j| core[j]),
        );
    }
    Ok(out)
}

pub const BUNDLE_MATRIX: &str = "matrix.csv";
pub const BUNDLE_LABELS: &str = "labels.csv";
pub const BUNDLE_SPEC: &str = "spec.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BundleManifest {
    source: InstanceSource,
    cores: Vec<Vec<PointId>>,
    bad_points: Vec<PointId>,
    opt: f64,
    stability: Option<StabilityParams>,
    tool_version: String,
}

/// Writes the matrix CSV, target labels CSV and spec JSON into `dir`.
pub fn write_bundle(inst: &Instance, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(BUNDLE_MATRIX), write_matrix_csv(&inst.matrix()))?;
    fs::write(dir.join(BUNDLE_LABELS), write_labels_csv(&inst.target))?;
    let manifest = BundleManifest {
        source: inst.source.clone(),
        cores: inst.cores.clone(),
        bad_points: inst.bad_points.clone(),
        opt: inst.opt,
        stability: inst.stability,
        tool_version: crate::TOOL_VERSION.to_string(),
    };
    fs::write(
        dir.join(BUNDLE_SPEC),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

/// Reads a bundle written by [`write_bundle`]. The spec file is optional.
pub fn read_bundle(dir: &Path) -> Result<Instance> {
    let matrix = parse_matrix_csv(&fs::read_to_string(dir.join(BUNDLE_MATRIX))?)?;
    let labels = parse_labels_csv(&fs::read_to_string(dir.join(BUNDLE_LABELS))?)?;
    if labels.n() != matrix.len() {
        return Err(Error::data(format!(
            "labels cover {} points, matrix has {}",
            labels.n(),
            matrix.len()
        )));
    }
    let spec_path = dir.join(BUNDLE_SPEC);
    let manifest: Option<BundleManifest> = if spec_path.exists() {
        Some(serde_json::from_str(&fs::read_to_string(spec_path)?)?)
    } else {
        None
    };
    let opt = balanced_k_median(&labels, &matrix)?.value;
    let (source, cores, bad_points, stability) = match manifest {
        Some(m) => (m.source, m.cores, m.bad_points, m.stability),
        None => (
            InstanceSource::External,
            labels.clusters().to_vec(),
            Vec::new(),
            None,
        ),
    };
    Ok(Instance {
        source,
        metric: InstanceMetric::Explicit(matrix),
        target: labels,
        cores,
        bad_points,
        opt,
        stability,
    })
}
