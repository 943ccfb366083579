//! Weighted scoring of criteria, ranking, and MSE cross-validation.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::ConsistencyReport;
use crate::extent::WeightVector;
use crate::matrix::{CriteriaColumns, DataPath};

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("data has {data} criteria but {weights} weights were given")]
    DimensionMismatch { data: usize, weights: usize },
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("empty input")]
    EmptyInput,
    #[error("labels of the real and normalized score vectors differ")]
    LabelMismatch,
}

/// How a criterion column is reduced to one number before weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Mean,
    Sum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub labels: Vec<String>,
    pub scores: Vec<f64>,
    pub aggregation: Aggregation,
    pub path: DataPath,
}

/// `score_j = w_j * aggregate_i(data_ij)`.
pub fn score<M: CriteriaColumns + ?Sized>(
    data: &M,
    w: &WeightVector,
    aggregate: Aggregation,
) -> Result<ScoreVector, RankingError> {
    if data.cols() != w.len() {
        return Err(RankingError::DimensionMismatch {
            data: data.cols(),
            weights: w.len(),
        });
    }
    let rows = data.rows();
    let scores = (0..data.cols())
        .map(|j| {
            let total: f64 = (0..rows).map(|i| data.get(i, j)).sum();
            let agg = match aggregate {
                Aggregation::Mean => total / rows as f64,
                Aggregation::Sum => total,
            };
            w.weights[j] * agg
        })
        .collect();
    Ok(ScoreVector {
        labels: data.criteria().to_vec(),
        scores,
        aggregation: aggregate,
        path: data.path(),
    })
}

/// Row-by-row recomputation of [`score`]: accumulates `w_j * x_ij` per user and
/// reduces at the end. Used as the comparand for [`validate`].
pub fn recompute_scores<M: CriteriaColumns + ?Sized>(
    data: &M,
    weights: &[f64],
    aggregate: Aggregation,
) -> Result<Vec<f64>, RankingError> {
    if data.cols() != weights.len() {
        return Err(RankingError::DimensionMismatch {
            data: data.cols(),
            weights: weights.len(),
        });
    }
    let mut acc = vec![0.0; weights.len()];
    for i in 0..data.rows() {
        for (j, (a, w)) in acc.iter_mut().zip(weights).enumerate() {
            *a += w * data.get(i, j);
        }
    }
    if aggregate == Aggregation::Mean {
        let n = data.rows() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedScore {
    pub rank: usize,
    pub label: String,
    pub score: f64,
}

/// Descending score order, ties broken by ascending label.
fn by_score_desc(a: (&str, f64), b: (&str, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0))
}

pub fn rank(scores: &ScoreVector) -> Vec<RankedScore> {
    let mut idx: Vec<usize> = (0..scores.scores.len()).collect();
    idx.sort_by(|&a, &b| {
        by_score_desc(
            (&scores.labels[a], scores.scores[a]),
            (&scores.labels[b], scores.scores[b]),
        )
    });
    idx.into_iter()
        .enumerate()
        .map(|(pos, i)| RankedScore {
            rank: pos + 1,
            label: scores.labels[i].clone(),
            score: scores.scores[i],
        })
        .collect()
}

/// `(1/n) sum (f_i - y_i)^2`.
pub fn mse(f: &[f64], y: &[f64]) -> Result<f64, RankingError> {
    if f.len() != y.len() {
        return Err(RankingError::LengthMismatch(f.len(), y.len()));
    }
    if f.is_empty() {
        return Err(RankingError::EmptyInput);
    }
    Ok(f.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / f.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow {
    pub rank: usize,
    pub label: String,
    pub score_real: f64,
    pub score_normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub mse: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub rows: Vec<RankingRow>,
    pub consistency: ConsistencyReport,
    pub weights: WeightVector,
    pub aggregation: Aggregation,
    pub validation: Option<Validation>,
}

impl RankingReport {
    /// Orders criteria by the real-path score.
    pub fn assemble(
        real: &ScoreVector,
        normalized: &ScoreVector,
        consistency: ConsistencyReport,
        weights: WeightVector,
    ) -> Result<Self, RankingError> {
        if real.labels != normalized.labels {
            return Err(RankingError::LabelMismatch);
        }
        if real.scores.is_empty() {
            return Err(RankingError::EmptyInput);
        }
        let rows = rank(real)
            .into_iter()
            .map(|r| {
                let j = real.labels.iter().position(|l| *l == r.label).expect("label from real");
                RankingRow {
                    rank: r.rank,
                    label: r.label,
                    score_real: r.score,
                    score_normalized: normalized.scores[j],
                }
            })
            .collect();
        Ok(Self {
            rows,
            consistency,
            weights,
            aggregation: real.aggregation,
            validation: None,
        })
    }

    /// Real-path scores in criterion (weight-vector) order.
    pub fn real_scores(&self) -> Vec<f64> {
        let by_label: HashMap<&str, f64> = self
            .rows
            .iter()
            .map(|r| (r.label.as_str(), r.score_real))
            .collect();
        self.weights.labels.iter().map(|l| by_label[l.as_str()]).collect()
    }
}

/// Compares the report's real-path scores with an independently computed vector
/// (criterion order) and records the MSE against `tolerance`.
pub fn validate(
    report: &RankingReport,
    oracle_scores: &[f64],
    tolerance: f64,
) -> Result<Validation, RankingError> {
    let mse = mse(&report.real_scores(), oracle_scores)?;
    Ok(Validation {
        mse,
        tolerance,
        passed: mse <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::{check, ComparisonMatrix, ConsistencyMode};
    use crate::ingest::RatingMatrix;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn matrix(cols: &[&str], rows: Vec<Vec<f64>>) -> RatingMatrix {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        RatingMatrix::from_rows(ids, labels(cols), rows).unwrap()
    }

    fn weights(names: &[&str], w: &[f64]) -> WeightVector {
        WeightVector {
            labels: labels(names),
            weights: w.to_vec(),
            d_prime: w.to_vec(),
        }
    }

    fn sv(names: &[&str], s: &[f64]) -> ScoreVector {
        ScoreVector {
            labels: labels(names),
            scores: s.to_vec(),
            aggregation: Aggregation::Mean,
            path: DataPath::Real,
        }
    }

    #[test]
    fn uniform_weights_equal_means() {
        let names: Vec<String> = (0..10).map(|i| format!("c{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = matrix(&refs, vec![vec![2.0; 10], vec![2.0; 10]]);
        let s = score(&m, &WeightVector::uniform(names.clone()), Aggregation::Mean).unwrap();
        assert!(s.scores.iter().all(|x| (x - 0.2).abs() < 1e-15));
    }

    #[test]
    fn masking_weight() {
        let m = matrix(&["a", "b"], vec![vec![2.0, 4.0], vec![4.0, 4.0]]);
        let s = score(&m, &weights(&["a", "b"], &[1.0, 0.0]), Aggregation::Mean).unwrap();
        assert_eq!(s.scores, vec![3.0, 0.0]);
        let s = score(&m, &weights(&["a", "b"], &[1.0, 0.5]), Aggregation::Sum).unwrap();
        assert_eq!(s.scores, vec![6.0, 4.0]);
        assert_eq!(s.path, DataPath::Real);
    }

    #[test]
    fn dimension_mismatch() {
        let m = matrix(&["a", "b"], vec![vec![2.0, 4.0]]);
        let err = score(&m, &weights(&["a", "b", "c"], &[0.2, 0.3, 0.5]), Aggregation::Mean);
        assert_eq!(err, Err(RankingError::DimensionMismatch { data: 2, weights: 3 }));
    }

    #[test]
    fn ranking_order() {
        let r = rank(&sv(
            &["Parks/Picnic Spots", "Beaches", "Restaurants"],
            &[0.6361, 0.5670, 0.1065],
        ));
        assert_eq!(r.iter().map(|x| x.rank).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(r[0].label, "Parks/Picnic Spots");

        let r = rank(&sv(&["B", "A"], &[0.5, 0.5]));
        assert_eq!((r[0].label.as_str(), r[0].rank), ("A", 1));
        assert_eq!((r[1].label.as_str(), r[1].rank), ("B", 2));

        let r = rank(&sv(&["only"], &[0.0]));
        assert_eq!(r[0].rank, 1);
    }

    #[test]
    fn mse_values() {
        assert_eq!(mse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(mse(&[1.0, 2.0], &[0.0, 2.0]).unwrap(), 0.5);
        assert_eq!(mse(&[1.0], &[]), Err(RankingError::LengthMismatch(1, 0)));
        assert_eq!(mse(&[], &[]), Err(RankingError::EmptyInput));
    }

    fn report(names: &[&str], s: &[f64]) -> RankingReport {
        let c = check(&ComparisonMatrix::ones(names.len()), ConsistencyMode::standard()).unwrap();
        RankingReport::assemble(&sv(names, s), &sv(names, s), c, WeightVector::uniform(labels(names)))
            .unwrap()
    }

    #[test]
    fn validation() {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        let s: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let r = report(&names, &s);
        let v = validate(&r, &s, 1e-3).unwrap();
        assert_eq!(v.mse, 0.0);
        assert!(v.passed);

        let mut off = s.clone();
        off[3] += 0.01;
        let v = validate(&r, &off, 1e-3).unwrap();
        assert!((v.mse - 1e-5).abs() < 1e-15);
        assert!(v.passed);
    }

    #[test]
    fn validation_catches_wrong_weights() {
        let names = ["a", "b", "c"];
        let m = matrix(&names, vec![vec![3.0, 2.0, 1.0], vec![1.0, 2.0, 3.0]]);
        let w = weights(&names, &[0.5, 0.3, 0.2]);
        let real = score(&m, &w, Aggregation::Mean).unwrap();
        let c = check(&ComparisonMatrix::ones(3), ConsistencyMode::standard()).unwrap();
        let r = RankingReport::assemble(&real, &real, c, w).unwrap();
        let wrong = recompute_scores(&m, &[1.0, 0.3, 0.2], Aggregation::Mean).unwrap();
        let v = validate(&r, &wrong, 1e-3).unwrap();
        assert!(!v.passed);
        assert!((v.mse - (0.5f64 * 2.0).powi(2) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn report_rows_sorted_with_normalized_column() {
        let names = ["x", "y", "z"];
        let real = sv(&names, &[0.1, 0.3, 0.2]);
        let mut norm = sv(&names, &[0.9, 0.8, 0.7]);
        norm.path = DataPath::Normalized;
        let c = check(&ComparisonMatrix::ones(3), ConsistencyMode::standard()).unwrap();
        let r = RankingReport::assemble(&real, &norm, c, WeightVector::uniform(labels(&names))).unwrap();
        let got: Vec<_> = r.rows.iter().map(|x| (x.label.as_str(), x.score_normalized)).collect();
        assert_eq!(got, vec![("y", 0.8), ("z", 0.7), ("x", 0.9)]);
        assert_eq!(r.real_scores(), vec![0.1, 0.3, 0.2]);
    }

    #[test]
    fn recompute_matches_score() {
        let m = matrix(&["a", "b"], vec![vec![1.0, 3.5], vec![2.5, 0.5], vec![4.0, 0.0]]);
        let w = weights(&["a", "b"], &[0.3, 0.7]);
        let direct = score(&m, &w, Aggregation::Sum).unwrap();
        let again = recompute_scores(&m, &w.weights, Aggregation::Sum).unwrap();
        assert!(mse(&direct.scores, &again).unwrap() < 1e-24);
    }
}
