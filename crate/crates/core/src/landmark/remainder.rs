use super::table::LandmarkTable;
use crate::clustering::Clustering;
use crate::error::{Error, Result};

/// Moves every unassigned point into the cluster of its nearest clustered
/// landmark (lowest landmark index on ties).
pub fn assign_remainder(c: &Clustering, table: &LandmarkTable) -> Result<Clustering> {
    if c.unassigned().is_empty() {
        return Ok(c.clone());
    }
    if c.n() != table.n() {
        return Err(Error::Domain(format!(
            "clustering over {} points, table over {}",
            c.n(),
            table.n()
        )));
    }
    let clustered: Vec<(usize, usize)> = table
        .landmarks()
        .iter()
        .enumerate()
        .filter_map(|(li, &l)| c.label_of(l).map(|label| (li, label)))
        .collect();
    if clustered.is_empty() {
        return Err(Error::Invariant(
            "no landmark belongs to a cluster; cannot assign remaining points".into(),
        ));
    }

    let mut clusters = c.clusters().to_vec();
    for &p in c.unassigned() {
        let mut best = clustered[0];
        let mut best_d = table.row(best.0)[p];
        for &(li, label) in &clustered[1..] {
            let d = table.row(li)[p];
            if d < best_d {
                best = (li, label);
                best_d = d;
            }
        }
        clusters[best.1].push(p);
    }
    let mut out = Clustering::new(c.n(), clusters)?.with_warnings(c.warnings().to_vec());
    if !c.seeds().is_empty() {
        out = out.with_seeds(c.seeds().to_vec());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Metric, MetricMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(m: &MetricMatrix, landmarks: &[usize]) -> LandmarkTable {
        let rows = landmarks.iter().map(|&l| m.row(l).to_vec()).collect();
        LandmarkTable::from_rows(m.len(), landmarks.to_vec(), rows).unwrap()
    }

    #[test]
    fn identity_when_nothing_unassigned() {
        let m = MetricMatrix::from_fn(3, |_, _| 1.0).unwrap();
        let c = Clustering::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(assign_remainder(&c, &table(&m, &[0])).unwrap(), c);
    }

    #[test]
    fn joins_nearest_landmark_cluster() {
        // Point 2 is 1 from landmark 0 (cluster A) and 5 from landmark 1 (cluster B).
        let m = MetricMatrix::new(3, vec![0.0, 6.0, 1.0, 6.0, 0.0, 5.0, 1.0, 5.0, 0.0]).unwrap();
        let c = Clustering::new(3, vec![vec![0], vec![1]]).unwrap();
        let out = assign_remainder(&c, &table(&m, &[0, 1])).unwrap();
        assert_eq!(out.clusters(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn errors_without_clustered_landmark() {
        let m = MetricMatrix::from_fn(3, |_, _| 1.0).unwrap();
        let c = Clustering::new(3, vec![vec![1]]).unwrap();
        assert!(matches!(
            assign_remainder(&c, &table(&m, &[0])),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn matches_brute_force_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 40;
        let m = MetricMatrix::from_fn(n, |_, _| rng.random_range(1..50) as f64).unwrap();
        let landmarks = [3usize, 8, 15, 22, 30, 31];
        // Three clusters holding five of the landmarks; 20 points left over.
        let clusters = vec![
            vec![3, 8, 0, 1, 2, 4],
            vec![15, 22, 5, 6, 7],
            vec![30, 9, 10, 11, 12, 13, 14, 16, 17],
        ];
        let c = Clustering::new(n, clusters).unwrap();
        assert_eq!(c.unassigned().len(), 20);
        let out = assign_remainder(&c, &table(&m, &landmarks)).unwrap();

        for &p in c.unassigned() {
            let mut best: Option<(f64, usize)> = None;
            for &l in &landmarks {
                let Some(label) = c.label_of(l) else { continue };
                let d = m.distance(l, p);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, label));
                }
            }
            assert_eq!(out.label_of(p), Some(best.unwrap().1), "point {p}");
        }
        assert!(out.unassigned().is_empty());
    }
}
