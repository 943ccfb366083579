//! Column-wise max normalization of the decision matrix.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::ingest::RatingMatrix;

/// Whether scores come from the raw ratings or the normalized matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataPath {
    Real,
    Normalized,
}

/// Read access shared by raw and normalized decision matrices.
pub trait CriteriaColumns {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn get(&self, row: usize, col: usize) -> f64;
    fn criteria(&self) -> &[String];
    fn row_ids(&self) -> &[String];
    fn path(&self) -> DataPath;
}

impl CriteriaColumns for RatingMatrix {
    fn rows(&self) -> usize {
        RatingMatrix::rows(self)
    }
    fn cols(&self) -> usize {
        RatingMatrix::cols(self)
    }
    fn get(&self, row: usize, col: usize) -> f64 {
        RatingMatrix::get(self, row, col)
    }
    fn criteria(&self) -> &[String] {
        RatingMatrix::criteria(self)
    }
    fn row_ids(&self) -> &[String] {
        RatingMatrix::row_ids(self)
    }
    fn path(&self) -> DataPath {
        DataPath::Real
    }
}

/// `r_ij = x_ij / max_i x_ij`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedMatrix {
    values: Vec<f64>,
    rows: usize,
    row_ids: Vec<String>,
    criteria: Vec<String>,
    column_max_used: Vec<f64>,
}

impl NormalizedMatrix {
    /// Source column maxima, i.e. the divisor applied to each column.
    pub fn column_max_used(&self) -> &[f64] {
        &self.column_max_used
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.criteria.len();
        &self.values[row * n..(row + 1) * n]
    }

    /// Writes the matrix as CSV with the given id header and column headers.
    pub fn write_csv<W: Write>(
        &self,
        writer: W,
        id_header: &str,
        column_headers: &[String],
    ) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec![id_header.to_string()];
        header.extend(column_headers.iter().cloned());
        wtr.write_record(&header)?;
        for (i, id) in self.row_ids.iter().enumerate() {
            let mut rec = vec![id.clone()];
            rec.extend(self.row(i).iter().map(|v| v.to_string()));
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

impl CriteriaColumns for NormalizedMatrix {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.criteria.len()
    }
    fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.criteria.len() + col]
    }
    fn criteria(&self) -> &[String] {
        &self.criteria
    }
    fn row_ids(&self) -> &[String] {
        &self.row_ids
    }
    fn path(&self) -> DataPath {
        DataPath::Normalized
    }
}

/// Divides every column by its maximum. A column whose maximum is zero maps to zeros.
pub fn normalize<M: CriteriaColumns + ?Sized>(m: &M) -> NormalizedMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let column_max_used: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| m.get(i, j)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mut values = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for (j, &max) in column_max_used.iter().enumerate() {
            let x = m.get(i, j);
            values.push(if max > 0.0 { x / max } else { 0.0 });
        }
    }
    NormalizedMatrix {
        values,
        rows,
        row_ids: m.row_ids().to_vec(),
        criteria: m.criteria().to_vec(),
        column_max_used,
    }
}

/// Per-criterion mean of any decision matrix.
pub fn means<M: CriteriaColumns + ?Sized>(m: &M) -> Vec<f64> {
    let n = m.rows() as f64;
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m.get(i, j)).sum::<f64>() / n)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_column_pair(a: &[f64], b: &[f64]) -> RatingMatrix {
        let rows = a.iter().zip(b).map(|(x, y)| vec![*x, *y]).collect::<Vec<_>>();
        let ids = (0..rows.len()).map(|i| format!("u{i}")).collect();
        RatingMatrix::from_rows(ids, vec!["a".into(), "b".into()], rows).unwrap()
    }

    fn col(n: &NormalizedMatrix, j: usize) -> Vec<f64> {
        (0..n.rows()).map(|i| n.get(i, j)).collect()
    }

    #[test]
    fn divides_by_column_max() {
        let m = single_column_pair(&[1.0, 2.0, 4.0], &[3.0, 3.0, 3.0]);
        let n = normalize(&m);
        assert_eq!(col(&n, 0), vec![0.25, 0.5, 1.0]);
        assert_eq!(col(&n, 1), vec![1.0, 1.0, 1.0]);
        assert_eq!(n.column_max_used(), &[4.0, 3.0]);
    }

    #[test]
    fn zero_column_guard() {
        let m = single_column_pair(&[0.0, 0.0], &[1.0, 2.0]);
        let n = normalize(&m);
        assert_eq!(col(&n, 0), vec![0.0, 0.0]);
        assert_eq!(col(&n, 1), vec![0.5, 1.0]);
    }

    #[test]
    fn idempotent() {
        let m = single_column_pair(&[0.3, 2.7, 1.1], &[3.9, 0.1, 0.0]);
        let once = normalize(&m);
        let twice = normalize(&once);
        assert_eq!(once.values, twice.values);
    }

    #[test]
    fn csv_dump() {
        let m = single_column_pair(&[1.0, 2.0], &[4.0, 2.0]);
        let mut out = Vec::new();
        normalize(&m)
            .write_csv(&mut out, "id", &["ca".to_string(), "cb".to_string()])
            .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "id,ca,cb\nu0,0.5,1\nu1,1,0.5\n");
    }
}
