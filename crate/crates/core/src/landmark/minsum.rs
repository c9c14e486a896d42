use super::table::{LandmarkPair, LandmarkTable};
use crate::clustering::{Clustering, Warning};
use crate::error::{Error, Result};
use crate::metric::PointId;

/// A clustering run together with what the threshold sweep needs to know about it.
#[derive(Debug, Clone)]
pub struct MinSumRun {
    pub clustering: Clustering,
    /// Number of ball tests evaluated.
    pub tests_evaluated: usize,
    /// Smallest `|B| * r2` over tests that fired. Every threshold below this
    /// value (and not below the one used) replays this run exactly.
    pub min_fired_product: Option<f64>,
}

/// Grows balls around the landmarks in order of increasing landmark-point
/// distance and splits off a cluster whenever the largest active ball `B`
/// satisfies `|B| * r2 > threshold`, where `r2` is the next pending distance.
///
/// Points not clustered after `k` extractions stay unassigned; see
/// [`super::assign_remainder`]. If the pairs run out first, everything left
/// becomes one final cluster.
pub fn cluster_min_sum(table: &LandmarkTable, k: usize, threshold: f64) -> Result<Clustering> {
    run_min_sum(table, k, threshold).map(|run| run.clustering)
}

pub fn run_min_sum(table: &LandmarkTable, k: usize, threshold: f64) -> Result<MinSumRun> {
    let n = table.n();
    if k == 0 || k > n {
        return Err(Error::param(format!("k = {k} must lie in [1, {n}]")));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::param(format!(
            "threshold must be positive and finite, got {threshold}"
        )));
    }
    Ok(BallSweep::new(table).run(k, threshold))
}

struct BallSweep<'a> {
    landmarks: &'a [PointId],
    pairs: &'a [LandmarkPair],
    /// Next unconsumed pair.
    cursor: usize,
    clustered: Vec<bool>,
    /// Points ever inserted into each landmark's ball; filter by `clustered`.
    members: Vec<Vec<u32>>,
    /// Live ball sizes.
    size: Vec<usize>,
    /// Landmarks whose balls have received each point.
    containing: Vec<Vec<u32>>,
    landmark_mark: Vec<u32>,
    point_mark: Vec<u32>,
    generation: u32,
    /// Largest active ball, kept current across inserts.
    best: Option<usize>,
}

impl<'a> BallSweep<'a> {
    fn new(table: &'a LandmarkTable) -> Self {
        let n = table.n();
        let l = table.landmarks().len();
        Self {
            landmarks: table.landmarks(),
            pairs: table.finite_pairs(),
            cursor: 0,
            clustered: vec![false; n],
            members: vec![Vec::new(); l],
            size: vec![0; l],
            containing: vec![Vec::new(); n],
            landmark_mark: vec![0; l],
            point_mark: vec![0; n],
            generation: 0,
            best: None,
        }
        .with_best()
    }

    fn with_best(mut self) -> Self {
        self.best = self.scan_largest();
        self
    }

    fn landmark_active(&self, li: usize) -> bool {
        !self.clustered[self.landmarks[li]]
    }

    /// Moves the cursor to the next pair whose landmark and point are both
    /// unclustered. Skipped pairs can never become active again.
    fn advance(&mut self) -> bool {
        while let Some(p) = self.pairs.get(self.cursor) {
            if self.landmark_active(p.landmark as usize) && !self.clustered[p.point as usize] {
                return true;
            }
            self.cursor += 1;
        }
        false
    }

    fn insert(&mut self, li: u32, point: u32) {
        self.members[li as usize].push(point);
        self.size[li as usize] += 1;
        self.containing[point as usize].push(li);
        // Only this ball grew, so it either overtakes the leader or not.
        let li = li as usize;
        if let Some(b) = self.best {
            if self.size[li] > self.size[b] || (self.size[li] == self.size[b] && li < b) {
                self.best = Some(li);
            }
        }
    }

    /// Largest active ball, lowest landmark index on ties.
    fn scan_largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for li in 0..self.landmarks.len() {
            if self.landmark_active(li) && best.is_none_or(|b| self.size[li] > self.size[b]) {
                best = Some(li);
            }
        }
        best
    }

    /// Removes the union of all active balls meeting ball `center` and returns
    /// it with the landmarks of those balls.
    fn extract(&mut self, center: usize) -> (Vec<PointId>, Vec<PointId>) {
        self.generation += 1;
        let gen = self.generation;

        let mut overlapping = Vec::new();
        for &s in &self.members[center] {
            if self.clustered[s as usize] {
                continue;
            }
            for &li in &self.containing[s as usize] {
                let li = li as usize;
                if self.landmark_mark[li] != gen && self.landmark_active(li) {
                    self.landmark_mark[li] = gen;
                    overlapping.push(li);
                }
            }
        }
        overlapping.sort_unstable();

        let mut cluster = Vec::new();
        for &li in &overlapping {
            for &s in &self.members[li] {
                let s = s as usize;
                if !self.clustered[s] && self.point_mark[s] != gen {
                    self.point_mark[s] = gen;
                    cluster.push(s);
                }
            }
        }
        for &s in &cluster {
            self.clustered[s] = true;
            for &li in &self.containing[s] {
                self.size[li as usize] -= 1;
            }
        }
        self.best = self.scan_largest();
        let seeds = overlapping.iter().map(|&li| self.landmarks[li]).collect();
        (cluster, seeds)
    }

    fn take_rest(&mut self) -> Vec<PointId> {
        let rest: Vec<_> = (0..self.clustered.len())
            .filter(|&p| !self.clustered[p])
            .collect();
        for &p in &rest {
            self.clustered[p] = true;
        }
        rest
    }

    fn run(mut self, k: usize, threshold: f64) -> MinSumRun {
        let mut clusters = Vec::with_capacity(k);
        let mut seeds = Vec::with_capacity(k);
        let mut tests_evaluated = 0;
        let mut last_r2 = 0.0;
        let mut min_fired: Option<f64> = None;

        while clusters.len() < k {
            if !self.advance() {
                clusters.push(self.take_rest());
                seeds.push(Vec::new());
                break;
            }
            let current = self.pairs[self.cursor];
            self.cursor += 1;
            // Peek at the next active pair; none left means the stream is exhausted.
            if !self.advance() {
                clusters.push(self.take_rest());
                seeds.push(Vec::new());
                break;
            }
            let mut r2 = self.pairs[self.cursor].distance;
            self.insert(current.landmark, current.point);
            if current.distance == r2 {
                continue;
            }

            while clusters.len() < k {
                tests_evaluated += 1;
                debug_assert!(r2 >= last_r2, "look-ahead radius decreased");
                last_r2 = r2;
                let Some(best) = self.best else {
                    break;
                };
                let product = self.size[best] as f64 * r2;
                if product <= threshold {
                    break;
                }
                min_fired = Some(min_fired.map_or(product, |m: f64| m.min(product)));
                let (cluster, from) = self.extract(best);
                clusters.push(cluster);
                seeds.push(from);
                // Extraction can deactivate the pending pair; re-read r2.
                if !self.advance() {
                    break;
                }
                r2 = self.pairs[self.cursor].distance;
            }
        }

        let mut warnings = Vec::new();
        let found = clusters.iter().filter(|c| !c.is_empty()).count();
        if found < k {
            warnings.push(Warning::FewerClusters {
                found,
                requested: k,
            });
        }
        clusters.resize(k, Vec::new());
        seeds.resize(k, Vec::new());

        let clustering = Clustering::new(self.clustered.len(), clusters)
            .expect("extracted clusters are disjoint by construction")
            .with_seeds(seeds)
            .with_warnings(warnings);
        MinSumRun {
            clustering,
            tests_evaluated,
            min_fired_product: min_fired,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmark::assign_remainder;
    use crate::metric::{MetricMatrix, PointCloud};

    fn table_for(m: &MetricMatrix, landmarks: &[PointId]) -> LandmarkTable {
        let rows = landmarks.iter().map(|&l| m.row(l).to_vec()).collect();
        LandmarkTable::from_rows(m.row(0).len(), landmarks.to_vec(), rows).unwrap()
    }

    fn two_pairs() -> MetricMatrix {
        // {0,1} and {2,3}: intra-pair distance 1, inter-pair distance 100.
        MetricMatrix::from_fn(4, |i, j| if i / 2 == j / 2 { 1.0 } else { 100.0 }).unwrap()
    }

    #[test]
    fn separates_two_tight_pairs() {
        let m = two_pairs();
        let c = cluster_min_sum(&table_for(&m, &[0, 1, 2, 3]), 2, 3.0).unwrap();
        assert_eq!(c.clusters(), &[vec![0, 1], vec![2, 3]]);
        assert!(c.unassigned().is_empty());
        assert!(c.warnings().is_empty());
        assert_eq!(c.seeds()[0], vec![0, 1]);
    }

    #[test]
    fn single_cluster_when_threshold_never_fires() {
        let m = two_pairs();
        let c = cluster_min_sum(&table_for(&m, &[0, 1, 2, 3]), 1, 1e9).unwrap();
        assert_eq!(c.clusters(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn k_one_covers_everything_after_remainder() {
        let m = two_pairs();
        let t = table_for(&m, &[1, 3]);
        for threshold in [0.01, 0.5, 3.0, 150.0, 1e6] {
            let c = assign_remainder(&cluster_min_sum(&t, 1, threshold).unwrap(), &t).unwrap();
            assert_eq!(c.clusters(), &[vec![0, 1, 2, 3]], "T = {threshold}");
        }
    }

    #[test]
    fn extracts_small_diameter_cores_first() {
        // Three cores with size * diameter = 12 and one landmark in each.
        let sizes = [12usize, 6, 3];
        let centers = [0.0, 100.0, 200.0];
        let mut coords = Vec::new();
        let mut landmarks = Vec::new();
        for (c, &size) in sizes.iter().enumerate() {
            let diameter = 12.0 / size as f64;
            landmarks.push(coords.len());
            for i in 0..size {
                coords.push(centers[c] + diameter * i as f64 / (size - 1) as f64);
            }
        }
        let m = MetricMatrix::from_metric(&PointCloud::new(1, coords).unwrap());
        let t = table_for(&m, &landmarks);
        // Landmarks sit at the left end of each core, so core i fills its ball
        // at radius d_i = 12 / |C_i|. T = 18 fires on each full core before its
        // ball can reach a neighbouring core.
        let run = run_min_sum(&t, 3, 18.0).unwrap();
        let c = run.clustering;
        assert_eq!(c.clusters()[0], (0..12).collect::<Vec<_>>());
        assert_eq!(c.clusters()[1], (12..18).collect::<Vec<_>>());
        assert_eq!(c.clusters()[2], (18..21).collect::<Vec<_>>());
        assert!(run.tests_evaluated >= 3);
    }

    #[test]
    fn pads_and_warns_when_points_run_out() {
        // Duplicate points: every distance is zero.
        let m = MetricMatrix::from_fn(5, |_, _| 0.0).unwrap();
        let c = cluster_min_sum(&table_for(&m, &[0, 2]), 3, 1.0).unwrap();
        assert_eq!(c.k(), 3);
        assert_eq!(c.nonempty_count(), 1);
        assert_eq!(
            c.warnings(),
            &[Warning::FewerClusters {
                found: 1,
                requested: 3
            }]
        );
    }

    #[test]
    fn parameter_errors() {
        let m = two_pairs();
        let t = table_for(&m, &[0]);
        assert!(cluster_min_sum(&t, 0, 1.0).is_err());
        assert!(cluster_min_sum(&t, 5, 1.0).is_err());
        assert!(cluster_min_sum(&t, 2, 0.0).is_err());
        assert!(cluster_min_sum(&t, 2, f64::NAN).is_err());
    }
}
