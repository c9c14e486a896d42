//! Text formats: distance-matrix CSV, similarity-pair TSV and label CSV.
//!
//! All parsers take untrusted text and return errors rather than panicking;
//! memory use is bounded by the size of the input.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Metric, MetricMatrix, PointId, SimilarityPair};
use crate::clustering::Clustering;
use crate::error::{Error, Result};

fn parse_distance(field: &str, line: usize) -> Result<f64> {
    let field = field.trim();
    let d: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("'{field}' is not a distance")))?;
    if d.is_nan() || d < 0.0 {
        return Err(Error::parse(line, format!("'{field}' is not a distance")));
    }
    Ok(d)
}

/// Parses `n` on the first line followed by `n` rows of `n` comma-separated values.
/// The literal `inf` marks a missing distance.
pub fn parse_matrix_csv(text: &str) -> Result<MetricMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::parse(first, format!("expected point count, got '{header}'")))?;
    n.checked_mul(n)
        .ok_or_else(|| Error::parse(first, "point count too large"))?;

    let mut entries = Vec::new();
    let mut rows = 0;
    for (line, row) in lines {
        if rows == n {
            return Err(Error::parse(line, format!("more than {n} rows")));
        }
        let before = entries.len();
        for field in row.split(',') {
            if entries.len() - before == n {
                return Err(Error::parse(line, format!("more than {n} values in row")));
            }
            entries.push(parse_distance(field, line)?);
        }
        if entries.len() - before != n {
            return Err(Error::parse(
                line,
                format!("expected {n} values, got {}", entries.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::parse(
            first,
            format!("expected {n} rows, got {rows}"),
        ));
    }
    MetricMatrix::new(n, entries)
}

pub fn write_matrix_csv(m: &MetricMatrix) -> String {
    let n = m.len();
    let mut out = String::with_capacity(n * n * 8 + 16);
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        for (j, d) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{d}");
        }
        out.push('\n');
    }
    out
}

/// Similarity pairs keyed by dense point indices, plus the original identifiers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairFile {
    pub ids: Vec<String>,
    pub pairs: Vec<SimilarityPair>,
}

impl PairFile {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Parses `id_a <TAB> id_b <TAB> bit_score` lines. A first line whose third
/// column is not numeric is taken as a header. Identifiers are assigned dense
/// indices in order of first appearance.
pub fn parse_pairs_tsv(text: &str) -> Result<PairFile> {
    let mut file = PairFile::default();
    let mut index: HashMap<String, PointId> = HashMap::new();
    let mut intern = |id: &str, file: &mut PairFile| -> PointId {
        *index.entry(id.to_owned()).or_insert_with(|| {
            file.ids.push(id.to_owned());
            file.ids.len() - 1
        })
    };
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(Error::parse(
                line,
                format!("expected 3 tab-separated columns, got {}", cols.len()),
            ));
        }
        let score = match cols[2].parse::<f64>() {
            Ok(s) => s,
            Err(_) if !seen_data => {
                seen_data = true;
                continue;
            }
            Err(_) => {
                return Err(Error::parse(
                    line,
                    format!("'{}' is not a bit score", cols[2]),
                ))
            }
        };
        seen_data = true;
        if cols[0].is_empty() || cols[1].is_empty() {
            return Err(Error::parse(line, "empty identifier"));
        }
        let a = intern(cols[0], &mut file);
        let b = intern(cols[1], &mut file);
        file.pairs.push(SimilarityPair {
            a,
            b,
            bit_score: score,
        });
    }
    Ok(file)
}

pub fn write_pairs_tsv(file: &PairFile) -> String {
    let mut out = String::from("id_a\tid_b\tbit_score\n");
    for p in &file.pairs {
        let _ = writeln!(out, "{}\t{}\t{}", file.ids[p.a], file.ids[p.b], p.bit_score);
    }
    out
}

const UNASSIGNED: &str = "unassigned";

/// Parses `point_id,cluster_label` lines into a clustering. An optional header
/// is recognized by a non-numeric first column. Every point in `[0, n)` must be
/// labeled exactly once; the label `unassigned` leaves a point unclustered.
///
/// Integer labels below `n` are used as cluster indices directly, so empty
/// clusters survive a round trip. Any other label set is numbered in sorted
/// order (numeric when all labels are integers).
pub fn parse_labels_csv(text: &str) -> Result<Clustering> {
    let mut labeled: Vec<(PointId, &str, usize)> = Vec::new();
    let mut first = true;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let (id, label) = raw
            .split_once(',')
            .ok_or_else(|| Error::parse(line, "expected 'point_id,cluster_label'"))?;
        let id = id.trim();
        let label = label.trim();
        match id.parse::<PointId>() {
            Ok(p) => labeled.push((p, label, line)),
            Err(_) if first => {}
            Err(_) => return Err(Error::parse(line, format!("'{id}' is not a point id"))),
        }
        first = false;
    }

    let n = labeled.len();
    let mut distinct: Vec<&str> = labeled
        .iter()
        .map(|&(_, l, _)| l)
        .filter(|&l| l != UNASSIGNED)
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    let numeric: Option<Vec<u64>> = distinct.iter().map(|l| l.parse::<u64>().ok()).collect();
    let (label_index, k): (HashMap<&str, usize>, usize) = match numeric {
        Some(values) if values.iter().all(|&v| v < n as u64) => {
            let k = values.iter().max().map_or(0, |&m| m as usize + 1);
            let map = distinct
                .iter()
                .zip(values)
                .map(|(&l, v)| (l, v as usize))
                .collect();
            (map, k)
        }
        Some(values) => {
            let mut order: Vec<(u64, &str)> =
                values.into_iter().zip(distinct.iter().copied()).collect();
            order.sort_unstable();
            let map = order
                .iter()
                .enumerate()
                .map(|(i, &(_, l))| (l, i))
                .collect();
            (map, order.len())
        }
        None => {
            let map = distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
            (map, distinct.len())
        }
    };

    let mut labels = vec![None; n];
    let mut seen = vec![false; n];
    for &(p, label, line) in &labeled {
        if p >= n {
            return Err(Error::parse(
                line,
                format!("point {p} out of range for {n} labeled points"),
            ));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::parse(line, format!("point {p} labeled twice")));
        }
        labels[p] = label_index.get(label).copied();
    }
    Clustering::from_labels(&labels, k)
}

pub fn write_labels_csv(c: &Clustering) -> String {
    let mut out = String::from("point_id,cluster_label\n");
    for (p, label) in c.labels().iter().enumerate() {
        match label {
            Some(l) => {
                let _ = writeln!(out, "{p},{l}");
            }
            None => {
                let _ = writeln!(out, "{p},{UNASSIGNED}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::INFINITY;

    #[test]
    fn matrix_round_trip_with_sentinel() {
        let m = MetricMatrix::new(
            3,
            vec![0.0, 0.1, INFINITY, 0.1, 0.0, 1e-300, INFINITY, 1e-300, 0.0],
        )
        .unwrap();
        let text = write_matrix_csv(&m);
        assert!(text.contains("inf"));
        assert_eq!(parse_matrix_csv(&text).unwrap(), m);
    }

    #[test]
    fn matrix_shape_errors() {
        for bad in [
            "",
            "x",
            "2\n0,1\n",
            "2\n0,1\n1,0\n0,0\n",
            "2\n0,1,2\n1,0\n",
            "2\n0,-1\n-1,0\n",
            "2\n0,nan\nnan,0\n",
        ] {
            assert!(parse_matrix_csv(bad).is_err(), "{bad:?}");
        }
        // Declared size far larger than the input must not allocate up front.
        assert!(parse_matrix_csv("4000000000\n0\n").is_err());
    }

    #[test]
    fn pairs_with_and_without_header() {
        let with = parse_pairs_tsv("query\ttarget\tbits\nP1\tP2\t50\nP2\tP3\t12.5\n").unwrap();
        let without = parse_pairs_tsv("P1\tP2\t50\nP2\tP3\t12.5\n").unwrap();
        assert_eq!(with, without);
        assert_eq!(with.ids, vec!["P1", "P2", "P3"]);
        assert_eq!(
            with.pairs[1],
            SimilarityPair {
                a: 1,
                b: 2,
                bit_score: 12.5
            }
        );
        assert!(parse_pairs_tsv("a\tb\t1\nc\td\tbits\n").is_err());
        assert!(parse_pairs_tsv("a\tb\n").is_err());
        assert_eq!(parse_pairs_tsv(&write_pairs_tsv(&with)).unwrap(), with);
    }

    #[test]
    fn labels_parse_and_validate() {
        let c = parse_labels_csv("point_id,cluster_label\n0,x\n2,y\n1,x\n").unwrap();
        assert_eq!(c.clusters(), &[vec![0, 1], vec![2]]);
        assert!(parse_labels_csv("0,a\n0,b\n").is_err());
        assert!(parse_labels_csv("0,a\n5,b\n").is_err());
        assert!(parse_labels_csv("0,a\nq,b\n").is_err());
        let back = parse_labels_csv(&write_labels_csv(&c)).unwrap();
        assert_eq!(back.clusters(), c.clusters());
    }

    #[test]
    fn label_numbering() {
        // Small integers index clusters directly, keeping empty ones.
        let c = parse_labels_csv("0,2\n1,0\n2,2\n").unwrap();
        assert_eq!(c.clusters(), &[vec![1], vec![], vec![0, 2]]);
        // Large integers are ranked numerically, not as strings.
        let c = parse_labels_csv("0,100\n1,9\n2,100\n").unwrap();
        assert_eq!(c.clusters(), &[vec![1], vec![0, 2]]);
        let c = parse_labels_csv("0,b\n1,a\n2,unassigned\n").unwrap();
        assert_eq!(c.clusters(), &[vec![1], vec![0]]);
        assert_eq!(c.unassigned(), &[2]);
    }

    #[test]
    fn partial_clustering_round_trips() {
        let c = Clustering::new(5, vec![vec![3], vec![], vec![0, 4]]).unwrap();
        assert_eq!(parse_labels_csv(&write_labels_csv(&c)).unwrap(), c);
    }
}
