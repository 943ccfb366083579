//! Pairwise comparison of criteria and the Saaty consistency gate.
//!
//! A [`ComparisonMatrix`] is derived from per-criterion statistics by a
//! [`DerivationRule`], its principal eigenvalue is estimated by power
//! iteration, and `CI = (t - n) / (n - 1)`, `CR = CI / IR` decide whether the
//! judgments are coherent enough (`CR <= 0.1`) to feed the fuzzy stage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the consistency ratio for an accepted matrix.
pub const CR_LIMIT: f64 = 0.1;
/// Random index used by the compatibility mode, independent of the order.
pub const PAPER_COMPAT_RANDOM_INDEX: f64 = 180.0;

const RECIPROCITY_TOL: f64 = 1e-12;
const POWER_ITER_TOL: f64 = 1e-12;
const POWER_ITER_CAP: usize = 10_000;
/// |CI| below this counts as zero when the random index is zero (orders 1 and 2).
const CI_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ConsistencyError {
    #[error("at least 2 criteria are required, got {0}")]
    TooFewCriteria(usize),
    #[error("non-finite criterion statistic at index {0}")]
    NonFiniteStatistic(usize),
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("diagonal entry {index} is {value}, expected 1")]
    Diagonal { index: usize, value: f64 },
    #[error("entries ({i},{j}) and ({j},{i}) are not reciprocal")]
    NotReciprocal { i: usize, j: usize },
    #[error("entry ({i},{j}) = {value} outside [1/9, 9]")]
    OutOfScale { i: usize, j: usize, value: f64 },
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("consistency index needs order >= 2, got {0}")]
    OrderTooSmall(usize),
    #[error("no random index tabulated for order {0}")]
    UnsupportedOrder(usize),
    #[error("random index is zero but consistency index is {0}")]
    ZeroRandomIndex(f64),
}

/// Reciprocal n x n matrix of Saaty intensities, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ComparisonMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ConsistencyError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(ConsistencyError::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        let m = Self { n, entries };
        m.validate()?;
        Ok(m)
    }

    /// The all-ones ("just equal") matrix of order `n`.
    pub fn ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![1.0; n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    fn validate(&self) -> Result<(), ConsistencyError> {
        let lo = 1.0 / 9.0 - RECIPROCITY_TOL;
        let hi = 9.0 + RECIPROCITY_TOL;
        for i in 0..self.n {
            let d = self.get(i, i);
            if d != 1.0 {
                return Err(ConsistencyError::Diagonal { index: i, value: d });
            }
            for j in 0..self.n {
                let v = self.get(i, j);
                if !(lo..=hi).contains(&v) {
                    return Err(ConsistencyError::OutOfScale { i, j, value: v });
                }
                if j > i && (v * self.get(j, i) - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(ConsistencyError::NotReciprocal { i, j });
                }
            }
        }
        Ok(())
    }

    fn set_pair(&mut self, i: usize, j: usize, intensity: f64) {
        let n = self.n;
        self.entries[i * n + j] = intensity;
        self.entries[j * n + i] = 1.0 / intensity;
    }
}

/// How pairwise intensities are derived from per-criterion statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivationRule {
    /// Linear binning of mean gaps onto 1..=9:
    /// `s = clamp(1 + round(8 (mu_i - mu_j) / (mu_max - mu_min)), 1, 9)`.
    #[default]
    MeanGap,
    /// Every entry is 1.
    Uniform,
    /// Intransitive fixture: criterion i beats i+1 (mod n) with intensity 9.
    /// Only useful for exercising the consistency gate.
    Cyclic,
}

/// Derives a comparison matrix from per-criterion means.
pub fn build_comparison(
    means: &[f64],
    rule: DerivationRule,
) -> Result<ComparisonMatrix, ConsistencyError> {
    let n = means.len();
    if n < 2 {
        return Err(ConsistencyError::TooFewCriteria(n));
    }
    if let Some(i) = means.iter().position(|m| !m.is_finite()) {
        return Err(ConsistencyError::NonFiniteStatistic(i));
    }
    let mut c = ComparisonMatrix::ones(n);
    match rule {
        DerivationRule::Uniform => {}
        DerivationRule::MeanGap => {
            let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = means.iter().copied().fold(f64::INFINITY, f64::min);
            let range = max - min;
            if range > 0.0 {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && means[i] > means[j] {
                            let s = (1.0 + (8.0 * (means[i] - means[j]) / range).round())
                                .clamp(1.0, 9.0);
                            c.set_pair(i, j, s);
                        }
                    }
                }
            }
        }
        DerivationRule::Cyclic => {
            if n == 2 {
                c.set_pair(0, 1, 9.0);
            } else {
                for i in 0..n {
                    c.set_pair(i, (i + 1) % n, 9.0);
                }
            }
        }
    }
    Ok(c)
}

/// Dominant eigenvalue of a positive matrix by power iteration from the all-ones vector.
///
/// Stops when successive Rayleigh quotients differ by less than 1e-12.
pub fn lambda_max(c: &ComparisonMatrix) -> Result<f64, ConsistencyError> {
    let n = c.order();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    for _ in 0..POWER_ITER_CAP {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = c.row(i).iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        // x is kept at unit length, so x.y is the Rayleigh quotient
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
        if (lambda - prev).abs() < POWER_ITER_TOL {
            return Ok(lambda);
        }
        prev = lambda;
    }
    Err(ConsistencyError::NoConvergence(POWER_ITER_CAP))
}

/// `CI = (t - n) / (n - 1)`.
pub fn consistency_index(lambda_max: f64, n: usize) -> Result<f64, ConsistencyError> {
    if n < 2 {
        return Err(ConsistencyError::OrderTooSmall(n));
    }
    Ok((lambda_max - n as f64) / (n as f64 - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrMode {
    /// Saaty's random-index table.
    #[default]
    Standard,
    /// Constant random index of 180 for any order.
    PaperCompat,
}

/// Random-index values for orders 1, 2, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomIndexTable(pub Vec<f64>);

impl Default for RandomIndexTable {
    fn default() -> Self {
        Self(vec![0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49])
    }
}

impl RandomIndexTable {
    pub fn lookup(&self, n: usize) -> Result<f64, ConsistencyError> {
        n.checked_sub(1)
            .and_then(|k| self.0.get(k))
            .copied()
            .ok_or(ConsistencyError::UnsupportedOrder(n))
    }
}

pub fn random_index(n: usize, mode: IrMode) -> Result<f64, ConsistencyError> {
    random_index_in(&RandomIndexTable::default(), n, mode)
}

pub fn random_index_in(
    table: &RandomIndexTable,
    n: usize,
    mode: IrMode,
) -> Result<f64, ConsistencyError> {
    match mode {
        IrMode::Standard => table.lookup(n),
        IrMode::PaperCompat => {
            if n == 0 {
                Err(ConsistencyError::UnsupportedOrder(n))
            } else {
                Ok(PAPER_COMPAT_RANDOM_INDEX)
            }
        }
    }
}

/// `CR = CI / IR`; a zero random index is only admissible for a zero CI.
pub fn consistency_ratio(ci: f64, ir: f64) -> Result<f64, ConsistencyError> {
    if ir == 0.0 {
        if ci.abs() <= CI_ZERO_TOL {
            Ok(0.0)
        } else {
            Err(ConsistencyError::ZeroRandomIndex(ci))
        }
    } else {
        Ok(ci / ir)
    }
}

/// Controls how [`check`] obtains `t` and `IR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConsistencyMode {
    pub ir: IrMode,
    /// Use `t = 1` instead of the computed principal eigenvalue.
    pub force_unit_lambda: bool,
}

impl ConsistencyMode {
    pub fn standard() -> Self {
        Self::default()
    }

    /// IR = 180 and t forced to 1.
    pub fn paper_compat() -> Self {
        Self {
            ir: IrMode::PaperCompat,
            force_unit_lambda: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub lambda_max: f64,
    pub n: usize,
    pub ci: f64,
    pub ir: f64,
    pub cr: f64,
    pub accepted: bool,
    pub warnings: Vec<String>,
}

pub fn check(c: &ComparisonMatrix, mode: ConsistencyMode) -> Result<ConsistencyReport, ConsistencyError> {
    check_with_table(c, mode, &RandomIndexTable::default())
}

pub fn check_with_table(
    c: &ComparisonMatrix,
    mode: ConsistencyMode,
    table: &RandomIndexTable,
) -> Result<ConsistencyReport, ConsistencyError> {
    let n = c.order();
    let mut warnings = Vec::new();
    let lambda = if mode.force_unit_lambda {
        warnings.push("lambda_max forced to 1 (compatibility mode)".to_string());
        1.0
    } else {
        lambda_max(c)?
    };
    let ci = consistency_index(lambda, n)?;
    let ir = random_index_in(table, n, mode.ir)?;
    let cr = consistency_ratio(ci, ir)?;
    if cr < 0.0 {
        warnings.push(format!("negative consistency ratio {cr}: outside the classical [0, inf) range"));
    }
    Ok(ConsistencyReport {
        lambda_max: lambda,
        n,
        ci,
        ir,
        cr,
        accepted: cr <= CR_LIMIT,
        warnings,
    })
}
