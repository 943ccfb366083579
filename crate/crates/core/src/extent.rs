//! Extent analysis: fuzzy synthetic extents, degrees of possibility and crisp weights.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::tfn::{FuzzyComparisonMatrix, Tfn};

#[derive(Debug, Error, PartialEq)]
pub enum ExtentError {
    #[error("every minimum degree of possibility is zero; weights cannot be normalized")]
    AllZeroDegrees,
    #[error("{labels} labels for {criteria} criteria")]
    LabelMismatch { labels: usize, criteria: usize },
    #[error("extent analysis needs at least 2 criteria, got {0}")]
    TooFewCriteria(usize),
}

/// Per-criterion synthetic extent `S_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticExtent(pub Vec<Tfn>);

impl SyntheticExtent {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `S_i = R_i (x) T^-1` with `R_i` the fuzzy row sum and `T` the grand total,
/// i.e. `(R_i.l / T.u, R_i.m / T.m, R_i.u / T.l)`.
pub fn synthetic_extents(f: &FuzzyComparisonMatrix) -> SyntheticExtent {
    let row_sums: Vec<Tfn> = (0..f.order())
        .map(|i| f.row(i).iter().copied().sum())
        .collect();
    let total: Tfn = row_sums.iter().copied().sum();
    SyntheticExtent(
        row_sums
            .into_iter()
            .map(|r| Tfn {
                l: r.l / total.u,
                m: r.m / total.m,
                u: r.u / total.l,
            })
            .collect(),
    )
}

/// Degree of possibility `V(M2 >= M1)`.
///
/// Branches are tested in order: `m2 >= m1` gives 1, `l1 >= u2` gives 0,
/// otherwise the height of the intersection of the two triangles.
pub fn possibility(m2: Tfn, m1: Tfn) -> f64 {
    if m2.m >= m1.m {
        1.0
    } else if m1.l >= m2.u {
        0.0
    } else {
        let denom = (m2.m - m2.u) - (m1.m - m1.l);
        debug_assert!(denom < 0.0, "branch (c) denominator {denom} must be negative");
        (m1.l - m2.u) / denom
    }
}

/// `d'(A_i) = min_{k != i} V(S_i >= S_k)`.
pub fn min_degree(i: usize, extents: &SyntheticExtent) -> f64 {
    extents
        .0
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &s_k)| possibility(extents.0[i], s_k))
        .fold(f64::INFINITY, f64::min)
}

/// Normalized criterion weights with their pre-normalization degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
    pub d_prime: Vec<f64>,
}

impl WeightVector {
    /// `1/n` for every criterion.
    pub fn uniform(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            weights: vec![1.0 / n as f64; n],
            d_prime: vec![1.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Largest minimum degree before normalization.
    pub fn max_degree(&self) -> f64 {
        self.d_prime.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Serialize)]
struct WeightRow<'a> {
    label: &'a str,
    weight: f64,
    d_prime: f64,
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(
            self.labels
                .iter()
                .zip(&self.weights)
                .zip(&self.d_prime)
                .map(|((label, &weight), &d_prime)| WeightRow {
                    label,
                    weight,
                    d_prime,
                }),
        )
    }
}

/// `W_i = d'(A_i) / sum_k d'(A_k)`.
///
/// The criterion with the largest modal value always has `d' = 1`, so
/// [`ExtentError::AllZeroDegrees`] only fires on malformed extents.
pub fn weights(extents: &SyntheticExtent, labels: &[String]) -> Result<WeightVector, ExtentError> {
    let n = extents.len();
    if labels.len() != n {
        return Err(ExtentError::LabelMismatch {
            labels: labels.len(),
            criteria: n,
        });
    }
    if n < 2 {
        return Err(ExtentError::TooFewCriteria(n));
    }
    let d_prime: Vec<f64> = (0..n).map(|i| min_degree(i, extents)).collect();
    let total: f64 = d_prime.iter().sum();
    if total <= 0.0 {
        return Err(ExtentError::AllZeroDegrees);
    }
    Ok(WeightVector {
        labels: labels.to_vec(),
        weights: d_prime.iter().map(|d| d / total).collect(),
        d_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consistency::ComparisonMatrix;
    use crate::tfn::{fuzzify, ScaleTable};

    fn tfn(l: f64, m: f64, u: f64) -> Tfn {
        Tfn::new(l, m, u).unwrap()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("c{i}")).collect()
    }

    fn ones(n: usize) -> FuzzyComparisonMatrix {
        fuzzify(&ComparisonMatrix::ones(n), &ScaleTable::default()).unwrap()
    }

    #[test]
    fn symmetric_extents() {
        let s = synthetic_extents(&ones(2));
        assert_eq!(s.0, vec![Tfn::crisp(0.5); 2]);
        let s = synthetic_extents(&ones(3));
        for e in &s.0 {
            assert!(e.max_abs_diff(&Tfn::crisp(1.0 / 3.0)) < 1e-15);
        }
    }

    #[test]
    fn two_by_two_extents() {
        // R_0 = (2.5, 3, 3.5), R_1 = (1.4, 1.5, 5/3), T = (3.9, 4.5, 31/6)
        let f = FuzzyComparisonMatrix::from_rows(vec![
            vec![Tfn::ONE, tfn(1.5, 2.0, 2.5)],
            vec![tfn(0.4, 0.5, 2.0 / 3.0), Tfn::ONE],
        ])
        .unwrap();
        let s = synthetic_extents(&f);
        let expected0 = tfn(2.5 / (31.0 / 6.0), 3.0 / 4.5, 3.5 / 3.9);
        assert!(s.0[0].max_abs_diff(&expected0) < 1e-15);
        assert!((s.0[0].l - 0.4839).abs() < 1e-4);
        assert!((s.0[0].m - 0.6667).abs() < 1e-4);
        assert!((s.0[0].u - 0.8974).abs() < 1e-4);
        let expected1 = tfn(1.4 / (31.0 / 6.0), 1.5 / 4.5, (5.0 / 3.0) / 3.9);
        assert!(s.0[1].max_abs_diff(&expected1) < 1e-15);
    }

    #[test]
    fn possibility_branches() {
        let a = tfn(1.0, 2.0, 3.0);
        assert_eq!(possibility(a, a), 1.0);
        assert_eq!(possibility(a, tfn(4.0, 5.0, 6.0)), 0.0);
        let v = possibility(tfn(1.0, 2.0, 3.5), tfn(2.0, 3.0, 4.0));
        assert!((v - 0.6).abs() < 1e-12);
        // touching supports fall into branch (b)
        assert_eq!(possibility(a, tfn(3.0, 4.0, 5.0)), 0.0);
        // crisp operands stay total
        assert_eq!(possibility(Tfn::crisp(1.0), Tfn::crisp(2.0)), 0.0);
        assert_eq!(possibility(Tfn::crisp(2.0), Tfn::crisp(1.0)), 1.0);
    }

    #[test]
    fn min_degrees() {
        let sym = SyntheticExtent(vec![Tfn::crisp(1.0 / 3.0); 3]);
        assert!((0..3).all(|i| min_degree(i, &sym) == 1.0));

        let overlap = SyntheticExtent(vec![tfn(2.0, 3.0, 4.0), tfn(1.0, 2.0, 3.5)]);
        assert_eq!(min_degree(0, &overlap), 1.0);
        assert!((min_degree(1, &overlap) - 0.6).abs() < 1e-12);

        let disjoint = SyntheticExtent(vec![tfn(5.0, 6.0, 7.0), tfn(1.0, 2.0, 3.0)]);
        assert_eq!(min_degree(1, &disjoint), 0.0);
    }

    #[test]
    fn weight_normalization() {
        let w = weights(&synthetic_extents(&ones(10)), &labels(10)).unwrap();
        assert!(w.weights.iter().all(|x| (x - 0.1).abs() < 1e-12));

        let overlap = SyntheticExtent(vec![tfn(2.0, 3.0, 4.0), tfn(1.0, 2.0, 3.5)]);
        let w = weights(&overlap, &labels(2)).unwrap();
        assert!((w.weights[0] - 0.625).abs() < 1e-12);
        assert!((w.weights[1] - 0.375).abs() < 1e-12);
        assert_eq!(w.max_degree(), 1.0);

        let single = SyntheticExtent(vec![
            tfn(5.0, 6.0, 7.0),
            tfn(1.0, 2.0, 3.0),
            tfn(0.5, 1.0, 1.5),
        ]);
        let w = weights(&single, &labels(3)).unwrap();
        assert_eq!(w.weights, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn weight_errors() {
        let s = SyntheticExtent(vec![Tfn::ONE; 3]);
        assert_eq!(
            weights(&s, &labels(2)),
            Err(ExtentError::LabelMismatch {
                labels: 2,
                criteria: 3
            })
        );
        assert_eq!(
            weights(&SyntheticExtent(vec![Tfn::ONE]), &labels(1)),
            Err(ExtentError::TooFewCriteria(1))
        );
    }

    #[test]
    fn top_modal_criterion_keeps_full_degree() {
        let s = SyntheticExtent(vec![tfn(0.1, 0.2, 0.3), tfn(0.1, 0.5, 0.9), tfn(0.0, 0.1, 0.2)]);
        assert_eq!(min_degree(1, &s), 1.0);
    }

    #[test]
    fn serializes_as_rows() {
        let w = WeightVector::uniform(labels(2));
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"[{"label":"c0","weight":0.5,"d_prime":1.0},{"label":"c1","weight":0.5,"d_prime":1.0}]"#
        );
    }
}
