//! Dense labelled distance matrices and their CSV form.
//!
//! CSV layout: the first record holds the labels, each following record one
//! row of integers. Lines starting with `#` are ignored on input.

use std::collections::HashSet;
use std::io::{Read, Write};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix has no labels")]
    Empty,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("expected {expected} rows, got {got}")]
    RowCount { expected: usize, got: usize },
    #[error("entry ({row},{col}) is not a nonnegative integer: {value:?}")]
    BadEntry { row: usize, col: usize, value: String },
    #[error("entry ({row},{col}) is negative")]
    Negative { row: usize, col: usize },
    #[error("diagonal entry ({0},{0}) is nonzero")]
    NonzeroDiagonal(usize),
    #[error("off-diagonal entry ({0},{1}) is zero")]
    ZeroOffDiagonal(usize, usize),
    #[error("asymmetric entries at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    Triangle { i: usize, j: usize, k: usize },
    #[error("csv: {0}")]
    Csv(String),
}

/// Symmetric matrix of nonnegative integer distances indexed by labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    /// Builds a matrix from rows and validates it as a metric on distinct
    /// points (see [`DistanceMatrix::validate`]).
    pub fn new(labels: Vec<String>, rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = labels.len();
        if rows.len() != n {
            return Err(MatrixError::RowCount {
                expected: n,
                got: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Ragged {
                    row: i,
                    got: row.len(),
                    expected: n,
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if x < 0 {
                    return Err(MatrixError::Negative { row: i, col: j });
                }
                let x = u32::try_from(x).map_err(|_| MatrixError::BadEntry {
                    row: i,
                    col: j,
                    value: x.to_string(),
                })?;
                entries.push(x);
            }
        }
        let m = DistanceMatrix { labels, entries };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts_unchecked(labels: Vec<String>, entries: Vec<u32>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), entries.len());
        DistanceMatrix { labels, entries }
    }

    /// Checks distinct labels, zero diagonal, positive symmetric off-diagonal
    /// entries and the triangle inequality.
    pub fn validate(&self) -> Result<(), MatrixError> {
        let n = self.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut seen = HashSet::with_capacity(n);
        for l in &self.labels {
            if !seen.insert(l.as_str()) {
                return Err(MatrixError::DuplicateLabel(l.clone()));
            }
        }
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(MatrixError::NonzeroDiagonal(i));
            }
            for j in i + 1..n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(MatrixError::Asymmetric(i, j));
                }
                if self.get(i, j) == 0 {
                    return Err(MatrixError::ZeroOffDiagonal(i, j));
                }
            }
        }
        for j in 0..n {
            for i in 0..n {
                let dij = u64::from(self.get(i, j));
                for k in 0..n {
                    if u64::from(self.get(i, k)) > dij + u64::from(self.get(j, k)) {
                        return Err(MatrixError::Triangle { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.labels.len() + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let n = self.labels.len();
        &self.entries[i * n..(i + 1) * n]
    }

    /// Sub-matrix on the given indices, in that order.
    pub fn restrict(&self, idx: &[usize]) -> DistanceMatrix {
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            entries.extend(idx.iter().map(|&j| self.get(i, j)));
        }
        DistanceMatrix { labels, entries }
    }

    /// Same matrix with rows and columns relabelled (positions unchanged).
    pub fn relabel(&self, labels: Vec<String>) -> DistanceMatrix {
        assert_eq!(labels.len(), self.len());
        DistanceMatrix {
            labels,
            entries: self.entries.clone(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), MatrixError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        let csv_err = |e: csv::Error| MatrixError::Csv(e.to_string());
        w.write_record(&self.labels).map_err(csv_err)?;
        for i in 0..self.len() {
            w.write_record(self.row(i).iter().map(u32::to_string))
                .map_err(csv_err)?;
        }
        w.flush().map_err(|e| MatrixError::Csv(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv write");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Parses and validates a matrix.
    pub fn read_csv<R: Read>(input: R) -> Result<DistanceMatrix, MatrixError> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut records = r.records();
        let header = match records.next() {
            Some(rec) => rec.map_err(|e| MatrixError::Csv(e.to_string()))?,
            None => return Err(MatrixError::Empty),
        };
        let labels: Vec<String> = header.iter().map(str::to_owned).collect();
        let mut rows = Vec::with_capacity(labels.len());
        for (i, rec) in records.enumerate() {
            let rec = rec.map_err(|e| MatrixError::Csv(e.to_string()))?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(j, s)| {
                    s.parse::<i64>().map_err(|_| MatrixError::BadEntry {
                        row: i,
                        col: j,
                        value: s.to_owned(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        DistanceMatrix::new(labels, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn validation_errors() {
        let ok = DistanceMatrix::new(labels(&["a", "b"]), vec![vec![0, 1], vec![1, 0]]);
        assert!(ok.is_ok());
        assert_eq!(
            DistanceMatrix::new(labels(&["a", "b"]), vec![vec![0, 1], vec![2, 0]]),
            Err(MatrixError::Asymmetric(0, 1))
        );
        assert_eq!(
            DistanceMatrix::new(labels(&["a", "b"]), vec![vec![1, 1], vec![1, 0]]),
            Err(MatrixError::NonzeroDiagonal(0))
        );
        assert_eq!(
            DistanceMatrix::new(labels(&["a", "b"]), vec![vec![0, -1], vec![-1, 0]]),
            Err(MatrixError::Negative { row: 0, col: 1 })
        );
        assert_eq!(
            DistanceMatrix::new(labels(&["a", "b"]), vec![vec![0, 0], vec![0, 0]]),
            Err(MatrixError::ZeroOffDiagonal(0, 1))
        );
        assert_eq!(
            DistanceMatrix::new(labels(&["a", "a"]), vec![vec![0, 1], vec![1, 0]]),
            Err(MatrixError::DuplicateLabel("a".into()))
        );
        let tri = DistanceMatrix::new(
            labels(&["a", "b", "c"]),
            vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]],
        );
        assert!(matches!(tri, Err(MatrixError::Triangle { .. })));
        assert!(matches!(
            DistanceMatrix::new(labels(&["a", "b"]), vec![vec![0, 1]]),
            Err(MatrixError::RowCount { .. })
        ));
    }

    #[test]
    fn csv_round_trip_with_quoted_labels() {
        let m = DistanceMatrix::new(
            labels(&["(0,0)", "(0,1)", "x"]),
            vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        )
        .unwrap();
        let text = m.to_csv_string();
        assert_eq!(text.lines().next(), Some("\"(0,0)\",\"(0,1)\",x"));
        let back = DistanceMatrix::read_csv(format!("# comment\n{text}").as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn csv_garbage_is_rejected() {
        assert!(matches!(
            DistanceMatrix::read_csv("a,b\n0,x\n1,0\n".as_bytes()),
            Err(MatrixError::BadEntry { .. })
        ));
        assert!(matches!(
            DistanceMatrix::read_csv("a,b\n0,1,2\n1,0\n".as_bytes()),
            Err(MatrixError::Ragged { .. })
        ));
        assert_eq!(
            DistanceMatrix::read_csv("".as_bytes()),
            Err(MatrixError::Empty)
        );
    }

    #[test]
    fn restrict_keeps_order() {
        let m = DistanceMatrix::new(
            labels(&["a", "b", "c"]),
            vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]],
        )
        .unwrap();
        let r = m.restrict(&[2, 0]);
        assert_eq!(r.labels(), &["c", "a"]);
        assert_eq!(r.get(0, 1), 2);
    }
}
