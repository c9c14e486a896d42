use crate::error::{Error, Result};
use crate::metric::{DistanceSource, PointId};

/// One landmark-point distance. `landmark` indexes [`LandmarkTable::landmarks`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandmarkPair {
    pub distance: f64,
    pub landmark: u32,
    pub point: u32,
}

/// Landmark rows and every landmark-point pair sorted by
/// `(distance, landmark index, point index)`. Infinite distances sort last.
#[derive(Debug, Clone)]
pub struct LandmarkTable {
    n: usize,
    landmarks: Vec<PointId>,
    rows: Vec<Vec<f64>>,
    pairs: Vec<LandmarkPair>,
    finite_len: usize,
}

impl LandmarkTable {
    /// Builds a table from rows already in hand. Issues no queries.
    pub fn from_rows(n: usize, landmarks: Vec<PointId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if landmarks.len() != rows.len() {
            return Err(Error::param("one row is required per landmark"));
        }
        validate_landmarks(n, &landmarks)?;

        let mut pairs = Vec::with_capacity(n * landmarks.len());
        for (li, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::data(format!(
                    "row for landmark {} has {} entries, expected {n}",
                    landmarks[li],
                    row.len()
                )));
            }
            for (p, &d) in row.iter().enumerate() {
                if d.is_nan() || d < 0.0 {
                    return Err(Error::data(format!(
                        "d({}, {p}) = {d} is not a distance",
                        landmarks[li]
                    )));
                }
                pairs.push(LandmarkPair {
                    // Folds -0.0 into 0.0 so bit order matches numeric order.
                    distance: d + 0.0,
                    landmark: li as u32,
                    point: p as u32,
                });
            }
        }
        // Non-negative doubles order like their bit patterns, so this is
        // (distance, landmark, point) order with infinity last.
        pairs.sort_unstable_by_key(|p| {
            ((p.distance.to_bits() as u128) << 64) | ((p.landmark as u128) << 32) | p.point as u128
        });
        let finite_len = pairs.partition_point(|p| p.distance.is_finite());
        Ok(Self {
            n,
            landmarks,
            rows,
            pairs,
            finite_len,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn landmarks(&self) -> &[PointId] {
        &self.landmarks
    }

    /// Distances from landmark number `li` to every point.
    pub fn row(&self, li: usize) -> &[f64] {
        &self.rows[li]
    }

    pub fn pairs(&self) -> &[LandmarkPair] {
        &self.pairs
    }

    /// Pairs with finite distance; these form a prefix of [`Self::pairs`].
    pub fn finite_pairs(&self) -> &[LandmarkPair] {
        &self.pairs[..self.finite_len]
    }
}

fn validate_landmarks(n: usize, landmarks: &[PointId]) -> Result<()> {
    if landmarks.is_empty() {
        return Err(Error::param("landmark set is empty"));
    }
    if n > u32::MAX as usize || landmarks.len() > u32::MAX as usize {
        return Err(Error::param("instance too large for the pair table"));
    }
    let mut seen = vec![false; n];
    for &l in landmarks {
        let slot = seen
            .get_mut(l)
            .ok_or_else(|| Error::Domain(format!("landmark {l} out of range for n = {n}")))?;
        if std::mem::replace(slot, true) {
            return Err(Error::param(format!("landmark {l} listed twice")));
        }
    }
    Ok(())
}

/// Queries every landmark once and sorts the resulting pairs.
pub fn build_landmark_table(
    source: &DistanceSource,
    landmarks: &[PointId],
) -> Result<LandmarkTable> {
    let n = source.len();
    validate_landmarks(n, landmarks)?;
    let rows = landmarks
        .iter()
        .map(|&l| source.query_one_vs_all(l))
        .collect::<Result<Vec<_>>>()?;
    LandmarkTable::from_rows(n, landmarks.to_vec(), rows)
}
